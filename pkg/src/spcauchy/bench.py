"""Stress harness: latent-step timing, robustness grids, hybrid error sweep.

Failures are data here, never exceptions: every cell produces a record whose
``failure_kind`` is one of ``nan``, ``inf``, ``error`` or ``none``.  Each
cell derives its own seed from (seed, d, rho, method), so results do not
depend on execution order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ReferenceDisagreement, SpCauchyError
from .klcore import KlMethod, evaluate_kl, kl_hybrid, rho_of_z
from .oracles import kl_reference
from .sphere import moebius_transform, sample_uniform_sphere
from .vmf import rho_match

__all__ = [
    "BenchConfig",
    "BenchRecord",
    "SweepPoint",
    "run_latent_step_bench",
    "run_robustness_grid",
    "run_error_sweep",
    "APPENDIX_GRID_DIMS",
    "APPENDIX_GRID_RHOS",
    "LATENT_SWEEP_DIMS",
]

# the stress grids used throughout the test battery
APPENDIX_GRID_DIMS = (2, 3, 4, 5, 8, 16, 32, 64, 128, 256, 512, 1024, 2048)
APPENDIX_GRID_RHOS = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.98, 0.99, 0.995)
LATENT_SWEEP_DIMS = (8, 16, 32, 64, 128, 256, 512, 1024, 2048)


@dataclass(frozen=True)
class BenchConfig:
    dims: tuple[int, ...] = LATENT_SWEEP_DIMS
    rhos: tuple[float, ...] = APPENDIX_GRID_RHOS
    batch: int = 128
    warmup_iters: int = 10
    measured_iters: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.warmup_iters < 0 or self.measured_iters < 1 or self.batch < 1:
            raise SpCauchyError("need warmup_iters >= 0, measured_iters >= 1, batch >= 1")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "rhos", tuple(float(r) for r in self.rhos))


@dataclass(frozen=True)
class BenchRecord:
    method: str
    d: int
    rho_or_kappa: float
    forward_seconds: float
    backward_or_grad_seconds: float
    total_seconds: float
    succeeded: bool
    failure_kind: str = "none"

    def __post_init__(self):
        if self.total_seconds < self.forward_seconds - 1e-12:
            raise SpCauchyError("total time cannot be below forward time")
        if self.succeeded != (self.failure_kind == "none"):
            raise SpCauchyError("succeeded flag must mirror failure_kind")


@dataclass(frozen=True)
class SweepPoint:
    d: int
    max_abs_kl_error: float
    argmax_z: float


def _method_name(method: KlMethod | str) -> str:
    return method.value if isinstance(method, KlMethod) else str(method)


def _cell_rng(seed: int, d: int, rho: float, method: str) -> np.random.Generator:
    tag = hash((int(seed), int(d), round(float(rho), 9), method)) & 0x7FFFFFFF
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(d), tag)))


def _classify(*values: float) -> str:
    arr = np.asarray(values, dtype=float)
    if np.isnan(arr).any():
        return "nan"
    if np.isinf(arr).any():
        return "inf"
    return "none"


# ---------------------------------------------------------------------------
# latent-layer step timing
# ---------------------------------------------------------------------------

_PROBE_ROWS = 8
_MATCH_KAPPA = 10.0  # fixed vMF concentration the sweep matches against


def _latent_forward(mu_raw, uniforms, d, rho, method):
    """One latent step: normalize means, warp uniforms, KL per batch row."""
    mus = mu_raw / np.linalg.norm(mu_raw, axis=1, keepdims=True)
    zs = moebius_transform(uniforms, mus, rho)
    kl_total = 0.0
    for _ in range(uniforms.shape[0]):
        kl_total += evaluate_kl(d, rho, method).value
    return float(zs.sum()) + kl_total


def run_latent_step_bench(config: BenchConfig, method: KlMethod | str) -> list[BenchRecord]:
    """Time a full latent-layer step per dimension in ``config.dims``.

    Concentration is matched to a fixed vMF kappa = 10 per dimension.  The
    forward phase draws batch mean directions, normalizes them, warps
    uniform samples and evaluates one KL per batch row; the "backward"
    phase is a fixed-cost central-difference gradient probe of the scalar
    loss with respect to two raw mean coordinates and rho, on a small
    probe subset of the batch (there is no autodiff in this repository,
    and the records label the phase accordingly).  NaN/Inf anywhere marks
    the cell as failed; warmup iterations are discarded.
    """
    name = _method_name(method)
    records = []
    for d in config.dims:
        rho = rho_match(d, _MATCH_KAPPA)
        rng = _cell_rng(config.seed, d, rho, name)
        fwd_time = 0.0
        bwd_time = 0.0
        kind = "none"
        try:
            for it in range(config.warmup_iters + config.measured_iters):
                measured = it >= config.warmup_iters
                t0 = time.perf_counter()
                mu_raw = rng.standard_normal((config.batch, d))
                uniforms = sample_uniform_sphere(d, rng, config.batch)
                loss = _latent_forward(mu_raw, uniforms, d, rho, method)
                t1 = time.perf_counter()

                sub_mu = mu_raw[:_PROBE_ROWS].copy()
                sub_u = uniforms[:_PROBE_ROWS]
                grads = []
                for coord in range(2):
                    h = 1e-6 * max(1.0, abs(sub_mu[0, coord]))
                    for sign in (1.0, -1.0):
                        sub_mu[0, coord] += sign * h
                        grads.append(_latent_forward(sub_mu, sub_u, d, rho, method))
                        sub_mu[0, coord] -= sign * h
                h = 1e-6 * (1.0 - rho)
                grads.append(_latent_forward(sub_mu, sub_u, d, rho + h, method))
                grads.append(_latent_forward(sub_mu, sub_u, d, rho - h, method))
                t2 = time.perf_counter()

                probe = np.diff(np.asarray(grads))
                kind = _classify(loss, *grads, *probe)
                if kind != "none":
                    break
                if measured:
                    fwd_time += t1 - t0
                    bwd_time += t2 - t1
        except SpCauchyError:
            kind = "error"
        fwd = fwd_time / config.measured_iters
        bwd = bwd_time / config.measured_iters
        records.append(
            BenchRecord(name, d, rho, fwd, bwd, fwd + bwd, kind == "none", kind)
        )
    return sorted(records, key=lambda r: (r.method, r.d, r.rho_or_kappa))


# ---------------------------------------------------------------------------
# robustness grid
# ---------------------------------------------------------------------------


def run_robustness_grid(
    dims=APPENDIX_GRID_DIMS,
    rhos=APPENDIX_GRID_RHOS,
    methods=(KlMethod.SERIES, KlMethod.QUADRATURE, KlMethod.COMBINED, KlMethod.HYBRID),
    seed: int = 0,
) -> list[BenchRecord]:
    """Evaluate each method on each (d, rho) cell; success = finite value,
    finite finite-difference concentration probe, and a finite sample.

    Precondition violations (for example an injected rho = 1.0 cell) are
    captured as ``failure_kind='error'`` records, not raised.
    """
    records = []
    for method in methods:
        name = _method_name(method)
        for d in dims:
            for rho in rhos:
                t0 = time.perf_counter()
                kind = "none"
                t1 = t0
                try:
                    value = evaluate_kl(d, rho, method).value
                    t1 = time.perf_counter()
                    h = 1e-6 * max(1.0 - rho, 1e-9)
                    hi = evaluate_kl(d, min(rho + h, 1.0 - 1e-15), method).value
                    lo_rho = max(rho - h, 0.0)
                    lo = evaluate_kl(d, lo_rho, method).value
                    probe = (hi - lo) / h
                    rng = _cell_rng(seed, d, rho, name)
                    north = np.zeros(d)
                    north[0] = 1.0
                    z_draw = moebius_transform(sample_uniform_sphere(d, rng), north, rho)
                    kind = _classify(value, probe, float(np.sum(z_draw)))
                except SpCauchyError:
                    kind = "error"
                t2 = time.perf_counter()
                records.append(
                    BenchRecord(
                        name, int(d), float(rho),
                        t1 - t0, t2 - t1, t2 - t0,
                        kind == "none", kind,
                    )
                )
    return sorted(records, key=lambda r: (r.method, r.d, r.rho_or_kappa))


# ---------------------------------------------------------------------------
# hybrid-rule error sweep
# ---------------------------------------------------------------------------


def _hybrid_abs_error(d: int, z: float) -> float:
    rho = rho_of_z(z)
    return abs(kl_reference(d, rho) - kl_hybrid(d, rho).value)


def _golden_max(f, lo: float, hi: float, iters: int = 40) -> tuple[float, float]:
    """Golden-section maximization of a unimodal-ish scalar function."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    e = a + inv_phi * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(iters):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + inv_phi * (b - a)
            fe = f(e)
    x = 0.5 * (a + b)
    return x, f(x)


def run_error_sweep(
    d_min: int = 2,
    d_max: int = 64,
    dense_points: int = 1000,
    z_max: float = 0.9999,
) -> list[SweepPoint]:
    """Per-dimension maxima of |reference - hybrid| KL error over z.

    Dense-grid scan followed by golden-section refinement around the grid
    argmax.  Cells where the reference flags a disagreement are excluded
    from the scan (and reported as NaN only if a whole dimension failed,
    which does not happen on this z range).
    """
    out = []
    zs = np.linspace(0.0, z_max, int(dense_points))
    for d in range(int(d_min), int(d_max) + 1):
        errs = np.empty_like(zs)
        for i, z in enumerate(zs):
            try:
                errs[i] = _hybrid_abs_error(d, float(z))
            except ReferenceDisagreement:
                errs[i] = np.nan
        idx = int(np.nanargmax(errs))
        lo = float(zs[max(idx - 1, 0)])
        hi = float(zs[min(idx + 1, len(zs) - 1)])
        z_star, err_star = _golden_max(lambda z: _hybrid_abs_error(d, z), lo, hi)
        if errs[idx] > err_star:
            z_star, err_star = float(zs[idx]), float(errs[idx])
        out.append(SweepPoint(d, float(err_star), float(z_star)))
    return out
