"""KL(spherical Cauchy || uniform) evaluators and their analytic scaffolding.

Everything is written in the reparameterized argument

    z = 4*rho/(1+rho)**2,        1 - z = ((1-rho)/(1+rho))**2,

in which the KL factors as ``KL = (d-1) * (H_d(z) - 0.5*log(1-z))`` where
``H_d = J_d + log(1-z)`` and ``J_d`` is a one-dimensional integral.  The
evaluators below are different routes to the same quantity:

* ``kl_series``       -- the exact power series, summed in log-space;
* ``kl_quadrature``   -- Gauss-Legendre evaluation of the integral form,
                         after an exact regime-dependent change of variables
                         that keeps the integrand resolvable in float64;
* ``kl_asymptotic_high_rho`` -- the O(1) high-concentration closed form;
* ``kl_combined``     -- quadrature for rho <= 0.9, else the asymptotic;
* ``j_closed_low_d`` / ``kl_closed_low_d`` -- elementary closed forms for
                         d in {2, 3, 4, 5};
* ``kl_midpoint`` / ``kl_laplace`` -- bracket-based closed-form surrogates;
* ``kl_hybrid``       -- closed forms for d <= 5, Laplace surrogate for d >= 6;
* ``dkl_drho``        -- the exact concentration derivative via the
                         differentiated integral.

``1 - z`` is always carried explicitly (never computed as ``1 - z_of_rho``)
so that nothing cancels as rho -> 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    InvalidConcentration,
    InvalidDimension,
    InvalidZ,
    NodeCountTooSmall,
    NonPositiveArgument,
    UnsupportedDimension,
)

__all__ = [
    "KlMethod",
    "KlResult",
    "Interval",
    "z_of_rho",
    "one_minus_z",
    "rho_of_z",
    "digamma",
    "bracket_width",
    "h_core",
    "j_core",
    "kl_series",
    "kl_quadrature",
    "kl_asymptotic_high_rho",
    "kl_combined",
    "kl_closed_low_d",
    "j_closed_low_d",
    "h_bracket",
    "kl_midpoint",
    "kl_laplace",
    "kl_hybrid",
    "kl_large_d_slope",
    "dkl_drho",
    "evaluate_kl",
    "combined_switch_jump",
]


class KlMethod(Enum):
    SERIES = "series"
    QUADRATURE = "quadrature"
    ASYMPTOTIC_HIGH_RHO = "asymptotic_high_rho"
    COMBINED = "combined"
    HYBRID = "hybrid"
    MIDPOINT = "midpoint"
    LAPLACE = "laplace"
    CLOSED_FORM_LOW_D = "closed_form_low_d"


@dataclass(frozen=True)
class KlResult:
    """A KL value in nats plus evaluation diagnostics."""

    value: float
    method: KlMethod
    terms_or_nodes: int
    converged: bool


@dataclass(frozen=True)
class Interval:
    """Analytic bracket [lo, hi] for the KL core H_d."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi + 1e-12:
            raise InvalidZ(f"bracket is inverted: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------


def _check_d(d) -> int:
    if isinstance(d, float) and not d.is_integer():
        raise InvalidDimension(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if d < 2:
        raise InvalidDimension(f"dimension must be >= 2, got {d}")
    return d


def _check_rho(rho) -> float:
    rho = float(rho)
    if not 0.0 <= rho < 1.0 or math.isnan(rho):
        raise InvalidConcentration(f"rho must lie in [0, 1), got {rho!r}")
    return rho


def _check_z(z) -> float:
    z = float(z)
    if not 0.0 <= z < 1.0 or math.isnan(z):
        raise InvalidZ(f"z must lie in [0, 1), got {z!r}")
    return z


# ---------------------------------------------------------------------------
# the z parameterization
# ---------------------------------------------------------------------------


def z_of_rho(rho: float) -> float:
    """Map rho in [0, 1) to z = 4*rho/(1+rho)^2 in [0, 1)."""
    rho = _check_rho(rho)
    return 4.0 * rho / (1.0 + rho) ** 2


def one_minus_z(rho: float) -> float:
    """Stable 1 - z(rho) = ((1-rho)/(1+rho))^2; never computed as 1 - z."""
    rho = _check_rho(rho)
    return ((1.0 - rho) / (1.0 + rho)) ** 2


def rho_of_z(z: float) -> float:
    """Inverse of ``z_of_rho`` on [0, 1); cancellation-free."""
    z = _check_z(z)
    return z / (1.0 + math.sqrt(1.0 - z)) ** 2


def _log_eps(rho: float) -> float:
    """log(1 - z(rho)) = 2*log((1-rho)/(1+rho)), stable for rho -> 1."""
    return 2.0 * (math.log1p(-rho) - math.log1p(rho))


# ---------------------------------------------------------------------------
# digamma: downward recurrence plus Bernoulli asymptotic tail
# ---------------------------------------------------------------------------

_BERNOULLI = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x: float) -> float:
    """Digamma psi(x) for x > 0, accurate to ~1e-15 on [0.5, 1e6]."""
    x = float(x)
    if not x > 0.0:
        raise NonPositiveArgument(f"digamma needs x > 0, got {x!r}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    s = math.log(x) - 0.5 * inv
    p = inv2
    for b in _BERNOULLI:
        s -= b * p
        p *= inv2
    return acc + s


def bracket_width(d: int) -> float:
    """w_d = psi(d-1) - psi((d-1)/2) - log 2, the constant bracket width."""
    d = _check_d(d)
    return digamma(d - 1.0) - digamma(0.5 * (d - 1.0)) - math.log(2.0)


# ---------------------------------------------------------------------------
# Gauss-Legendre machinery
# ---------------------------------------------------------------------------

_LEG_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _leggauss01(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]; computed once, then immutable."""
    got = _LEG_CACHE.get(n)
    if got is None:
        x, w = np.polynomial.legendre.leggauss(n)
        nodes = 0.5 * (x + 1.0)
        weights = 0.5 * w
        nodes.setflags(write=False)
        weights.setflags(write=False)
        got = (nodes, weights)
        _LEG_CACHE[n] = got
    return got


def _j_integrand_raw(d: int, z: float, eps: float, t: np.ndarray) -> np.ndarray:
    """Integrand t^(d-2)/(1-t) * [1 - ((1-z)/(1-zt))^delta] on [0, 1].

    The t -> 1 singularity is removable; for 1-t < 1e-8 the first-order
    limit branch delta*z*t^(d-2)/(1-zt) is substituted to avoid 0/0.
    """
    t = np.asarray(t, dtype=float)
    delta = 0.5 * (d - 1.0)
    one_minus_t = 1.0 - t
    one_minus_zt = one_minus_t + t * eps  # = 1 - z*t without cancellation
    out = np.empty_like(t)
    near = one_minus_t < 1e-8
    safe = ~near
    if np.any(safe):
        log_a = math.log(eps) - np.log(one_minus_zt[safe])
        bracket = -np.expm1(delta * log_a)
        out[safe] = t[safe] ** (d - 2) / one_minus_t[safe] * bracket
    if np.any(near):
        out[near] = delta * z * t[near] ** (d - 2) / one_minus_zt[near]
    return out


def _eps_tail_series(delta: float, eps: float, log_eps: float) -> float:
    """sum_{j>=0} eps^j/(delta+j), in vectorized chunks."""
    total = 0.0
    j0 = 0
    while True:
        j = np.arange(j0, j0 + 512, dtype=float)
        terms = np.exp(j * log_eps) / (delta + j)
        total += float(terms.sum())
        if terms[-1] < 1e-18 * total or j0 >= 400_000:
            return total
        j0 += 512


def _powsum_near_one(d: int, h: np.ndarray) -> np.ndarray:
    """(1 - (1-h)^(d-2))/h, stable as h -> 0 (limit d-2)."""
    m = d - 2
    out = np.full_like(h, float(m))
    big = h > 1e-280
    if np.any(big):
        hb = np.minimum(h[big], 1.0)
        with np.errstate(divide="ignore"):
            out[big] = -np.expm1(m * np.log1p(-hb)) / h[big]
    return out


def _h_layered(d: int, z: float, eps: float, log_eps: float, nodes: int) -> float:
    """H_d via the exact endpoint decomposition; the workhorse for z >= 0.25.

    Splitting off the 1/(1-t) part of the integrand and substituting
    (1-z)/(1-zt) = exp(-u) turns J_d into a log term, a digamma constant,
    a geometric tail series in eps = 1-z, and one smooth exponential-scale
    integral (K2) -- nothing left depends on resolving an eps-thin layer.
    """
    delta = 0.5 * (d - 1.0)
    big_u = -log_eps
    tail = _eps_tail_series(delta, eps, log_eps)
    lp = delta * log_eps
    eps_pow = math.exp(lp) if lp > -745.0 else 0.0
    if d == 2:
        k2 = 0.0
    elif d == 3:
        k2 = eps * big_u / z
    else:
        w_max = min((delta - 1.0) * big_u, 45.0)
        wn, ww = _leggauss01(nodes)
        w = wn * w_max
        u = w / (delta - 1.0)
        h = eps * np.expm1(u) / z
        p = _powsum_near_one(d, h)
        k2 = eps / (z * (delta - 1.0)) * w_max * float(ww @ (p * np.exp(-w)))
    return math.log(z) + (digamma(delta) - digamma(d - 1.0)) + eps_pow * tail + k2


def _h_small_z(d: int, z: float, eps: float, nodes: int) -> float:
    """H_d for z < 0.25.

    For d >= 3 the integrand mass sits in a 1/d layer at t -> 1, so we
    integrate in s = -(d-2)*log t which flattens it; d = 2 has no such
    layer and uses the raw integrand directly.
    """
    delta = 0.5 * (d - 1.0)
    if d == 2:
        t, w = _leggauss01(nodes)
        j = float(w @ _j_integrand_raw(d, z, eps, t))
    else:
        s_max = 45.0
        sn, sw = _leggauss01(nodes)
        s = sn * s_max
        m = d - 2
        t = np.exp(-s / m)
        one_minus_t = -np.expm1(-s / m)
        one_minus_zt = one_minus_t + t * eps
        bracket = -np.expm1(delta * (math.log(eps) - np.log(one_minus_zt)))
        j = s_max / m * float(sw @ (np.exp(-s) * t / one_minus_t * bracket))
    return j + math.log1p(-z)


def _h_exact(d: int, z: float, eps: float, log_eps: float, nodes: int) -> float:
    if z == 0.0:
        return 0.0
    if z >= 0.25:
        return _h_layered(d, z, eps, log_eps, nodes)
    return _h_small_z(d, z, eps, nodes)


def h_core(d: int, z: float, nodes: int = 64) -> float:
    """H_d(z) = J_d(z) + log(1-z), evaluated to near machine precision."""
    d = _check_d(d)
    z = _check_z(z)
    eps = 1.0 - z
    return _h_exact(d, z, eps, math.log(eps) if z > 0 else 0.0, nodes)


def j_core(d: int, z: float, nodes: int = 64) -> float:
    """The KL core integral J_d(z) itself."""
    d = _check_d(d)
    z = _check_z(z)
    if z == 0.0:
        return 0.0
    eps = 1.0 - z
    return _h_exact(d, z, eps, math.log(eps), nodes) - math.log(eps)


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

_SERIES_CHUNK = 4096


def kl_series(
    d: int,
    rho: float,
    rel_tol: float = 1e-14,
    max_terms: int = 100_000,
) -> KlResult:
    """KL via the exact power series in z(rho).

    Each term's logarithm is assembled from an incrementally updated
    log-Pochhammer/ factorial ratio, k*log z, and the log of the harmonic
    sum psi(d-1+k) - psi(d-1) = sum_{j<k} 1/(d-1+j); the prefactor
    (d-1)/2 * log(1-z) is folded in before exponentiation, so nothing
    overflows even when the prefactor underflows on its own.  Summation
    stops once a term both shrank and contributes less than ``rel_tol``
    relatively (terms first grow when d*z is large); ``converged`` is
    False if ``max_terms`` was exhausted.
    """
    d = _check_d(d)
    rho = _check_rho(rho)
    z = z_of_rho(rho)
    if z == 0.0:
        return KlResult(0.0, KlMethod.SERIES, 0, True)
    log_eps = _log_eps(rho)
    delta = 0.5 * (d - 1.0)
    m = float(d - 1)
    log_pref = delta * log_eps
    log_z = math.log(z)

    total = 0.0
    log_coef = 0.0
    harmonic = 0.0
    prev_term = math.inf
    k_done = 0
    converged = False
    while k_done < max_terms:
        n = min(_SERIES_CHUNK, max_terms - k_done)
        ks = np.arange(k_done + 1, k_done + n + 1, dtype=float)
        log_coef_chunk = log_coef + np.cumsum(np.log(delta + ks - 1.0) - np.log(ks) + log_z)
        harmonic_chunk = harmonic + np.cumsum(1.0 / (m + ks - 1.0))
        terms = np.exp(log_pref + log_coef_chunk + np.log(harmonic_chunk))
        running = total + np.cumsum(terms)
        shrinking = terms <= np.concatenate(([prev_term], terms[:-1]))
        negligible = terms < rel_tol * running
        stop = shrinking & negligible
        if stop.any():
            idx = int(np.argmax(stop))
            total = float(running[idx])
            k_done += idx + 1
            converged = True
            break
        total = float(running[-1])
        log_coef = float(log_coef_chunk[-1])
        harmonic = float(harmonic_chunk[-1])
        prev_term = float(terms[-1])
        k_done += n
    value = m * 0.5 * log_eps + m * total
    return KlResult(value, KlMethod.SERIES, k_done, converged)


def kl_quadrature(d: int, rho: float, nodes: int = 64) -> KlResult:
    """KL via Gauss-Legendre quadrature of the integral representation.

    The raw integrand develops boundary layers of width (1-z)/d near t = 1,
    so the quadrature is applied after an exact regime split: a layered
    endpoint decomposition for z >= 0.25 and a log-substituted form for
    small z (see ``h_core``).  The removable t = 1 singularity of the raw
    integrand is guarded at 1-t < 1e-8 by its analytic limit branch.
    """
    d = _check_d(d)
    rho = _check_rho(rho)
    if nodes < 8:
        raise NodeCountTooSmall(f"need at least 8 quadrature nodes, got {nodes}")
    z = z_of_rho(rho)
    if z == 0.0:
        return KlResult(0.0, KlMethod.QUADRATURE, int(nodes), True)
    eps = one_minus_z(rho)
    log_eps = _log_eps(rho)
    h = _h_exact(d, z, eps, log_eps, int(nodes))
    value = (d - 1.0) * (h - 0.5 * log_eps)
    return KlResult(value, KlMethod.QUADRATURE, int(nodes), True)


def kl_asymptotic_high_rho(d: int, rho: float) -> KlResult:
    """First-order high-concentration closed form, O(1) cost.

    Intended for rho > 0.9; the error vanishes as rho -> 1 at fixed d.
    """
    d = _check_d(d)
    rho = _check_rho(rho)
    value = (d - 1.0) * (
        math.log1p(rho) - math.log1p(-rho) + digamma(0.5 * (d - 1.0)) - digamma(d - 1.0)
    )
    return KlResult(value, KlMethod.ASYMPTOTIC_HIGH_RHO, 0, True)


def kl_combined(d: int, rho: float, nodes: int = 64) -> KlResult:
    """Quadrature for rho <= 0.9 (inclusive), the asymptotic form above it.

    The two branches do not agree exactly at the switch; see
    ``combined_switch_jump`` for the diagnosed jump size.
    """
    d = _check_d(d)
    rho = _check_rho(rho)
    if rho <= 0.9:
        return kl_quadrature(d, rho, nodes)
    return kl_asymptotic_high_rho(d, rho)


def combined_switch_jump(d: int, nodes: int = 64) -> float:
    """Value jump of the combined rule at its rho = 0.9 switch point."""
    return kl_asymptotic_high_rho(d, 0.9).value - kl_quadrature(d, 0.9, nodes).value


def _j_closed_series(d: int, z: float) -> float:
    """Short exact series for J_d at tiny z; avoids the 0/0 closed forms."""
    if z == 0.0:
        return 0.0
    delta = 0.5 * (d - 1.0)
    m = float(d - 1)
    pref = (1.0 - z) ** delta
    coef = 1.0
    harmonic = 0.0
    zk = 1.0
    s = 0.0
    for k in range(1, 48):
        coef *= (delta + k - 1.0) / k
        harmonic += 1.0 / (m + k - 1.0)
        zk *= z
        term = coef * zk * harmonic
        s += term
        if term < 1e-18 * s:
            break
    return pref * s


def j_closed_low_d(d: int, z: float) -> float:
    """Elementary closed forms of the KL core for d in {2, 3, 4, 5}.

    Written against a = sqrt(1-z) with the identities (1-a)(1+a) = z and
    (1-a)^2 = z^2/(1+a)^2 so that J_2 and J_4 stay cancellation-free; J_5
    still loses digits at small z (its 2/z^2 terms cancel), so below
    z = 0.02 all four switch to a short exact series around z = 0
    (continuous, J_d(0) = 0).
    """
    d = _check_d(d)
    if d not in (2, 3, 4, 5):
        raise UnsupportedDimension(f"closed forms exist only for d in 2..5, got {d}")
    z = _check_z(z)
    if z < 0.02:
        return _j_closed_series(d, z)
    a = math.sqrt(1.0 - z)
    if d == 2:
        return 2.0 * math.log1p(z / (2.0 * a * (1.0 + a)))
    if d == 3:
        return -1.0 - math.log1p(-z) / z
    if d == 4:
        return 2.0 * math.log1p(z / (2.0 * a * (1.0 + a))) + z * z / (2.0 * (1.0 + a) ** 4)
    return 2.0 / z**2 - 2.0 / z - 5.0 / 6.0 + (2.0 - 3.0 * z) / z**3 * math.log1p(-z)


def kl_closed_low_d(d: int, rho: float) -> KlResult:
    """Exact KL from the closed forms, d in {2, 3, 4, 5} only."""
    d = _check_d(d)
    rho = _check_rho(rho)
    if d not in (2, 3, 4, 5):
        raise UnsupportedDimension(f"closed forms exist only for d in 2..5, got {d}")
    if rho == 0.0:
        return KlResult(0.0, KlMethod.CLOSED_FORM_LOW_D, 0, True)
    z = z_of_rho(rho)
    value = (d - 1.0) * (0.5 * _log_eps(rho) + j_closed_low_d(d, z))
    return KlResult(value, KlMethod.CLOSED_FORM_LOW_D, 0, True)


def h_bracket(d: int, z: float) -> Interval:
    """Analytic envelopes L_d(z) <= H_d(z) <= U(z) with constant width w_d.

    The upper envelope is exact at z = 0 and the lower one as z -> 1.
    """
    d = _check_d(d)
    z = _check_z(z)
    lo = digamma(0.5 * (d - 1.0)) - digamma(d - 1.0) + math.log(2.0 - z)
    hi = math.log1p(-0.5 * z)
    return Interval(lo, hi)


def kl_midpoint(d: int, rho: float) -> KlResult:
    """Bracket-midpoint surrogate; absolute KL error at most (d-1)*w_d/2.

    Being the midpoint, it sits below the true value at z = 0 (where the
    upper envelope is exact): at rho = 0 it returns -(d-1)*w_d/2, not 0.
    """
    d = _check_d(d)
    rho = _check_rho(rho)
    z = z_of_rho(rho)
    h_mid = math.log(2.0 - z) + 0.5 * (
        digamma(0.5 * (d - 1.0)) - digamma(d - 1.0) - math.log(2.0)
    )
    value = (d - 1.0) * (h_mid - 0.5 * _log_eps(rho))
    return KlResult(value, KlMethod.MIDPOINT, 0, True)


def kl_laplace(d: int, rho: float) -> KlResult:
    """Laplace surrogate H = U(z) - w_d*(z/(2-z))^2; stays inside the bracket.

    Its interpolation weight 4(1-z)/(2-z)^2 lies in [0, 1], and at fixed z
    the H error decays like (d-1)^-2.
    """
    d = _check_d(d)
    rho = _check_rho(rho)
    z = z_of_rho(rho)
    h_lap = math.log1p(-0.5 * z) - bracket_width(d) * (z / (2.0 - z)) ** 2
    value = (d - 1.0) * (h_lap - 0.5 * _log_eps(rho))
    return KlResult(value, KlMethod.LAPLACE, 0, True)


def kl_hybrid(d: int, rho: float) -> KlResult:
    """Exact closed forms for d <= 5, Laplace surrogate for d >= 6."""
    d = _check_d(d)
    rho = _check_rho(rho)
    if d <= 5:
        inner = kl_closed_low_d(d, rho)
        return KlResult(inner.value, KlMethod.HYBRID, 0, True)
    inner = kl_laplace(d, rho)
    return KlResult(inner.value, KlMethod.HYBRID, 0, True)


def kl_large_d_slope(rho: float) -> float:
    """lim_{d->inf} KL/(d-1) = log((1+rho^2)/(1-rho^2)) at fixed rho."""
    rho = _check_rho(rho)
    return math.log1p(rho * rho) - math.log1p(-rho * rho)


# ---------------------------------------------------------------------------
# exact derivative in rho
# ---------------------------------------------------------------------------


def _jprime(d: int, z: float, eps: float, nodes: int) -> float:
    """J_d'(z) = delta*(1-z)^(delta-1) * int_0^1 t^(2delta-1) (1-zt)^-(delta+1) dt.

    Uses the same two regimes as ``h_core``: the exponential substitution
    1 - zt = eps*e^u (rescaled by w = delta*u) for z >= 0.25, and the
    mass-flattening s = -(2delta-1)*log t for small z.
    """
    delta = 0.5 * (d - 1.0)
    if z == 0.0:
        return 0.5
    if z >= 0.25:
        w_max = min(delta * (-math.log(eps)), 45.0)
        wn, ww = _leggauss01(nodes)
        w = wn * w_max
        u = w / delta
        h = np.minimum(eps * np.expm1(u) / z, 1.0)
        expo = 2.0 * delta - 1.0
        if expo == 0.0:  # d == 2: t^0 == 1 even where h -> 1
            integrand = np.exp(-w)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                log_t = np.log1p(-h)
                integrand = np.where(h >= 1.0, 0.0, np.exp(expo * log_t - w))
        return w_max / (z * eps) * float(ww @ integrand)
    if d == 2:
        # delta = 1/2: the integral is elementary
        return (1.0 / eps - 1.0 / math.sqrt(eps)) / z
    expo = 2.0 * delta - 1.0
    s_max = 45.0
    sn, sw = _leggauss01(nodes)
    s = sn * s_max
    t = np.exp(-s / expo)
    one_minus_zt = -np.expm1(-s / expo) + t * eps
    integrand = t * np.exp(-s - (delta + 1.0) * np.log(one_minus_zt))
    integral = s_max / expo * float(sw @ integrand)
    return delta * math.exp((delta - 1.0) * math.log(eps)) * integral


def dkl_drho(d: int, rho: float, nodes: int = 64) -> float:
    """d KL / d rho for rho in (0, 1), via the differentiated integral.

    Chain rule through z(rho) with dz/drho = 4(1-rho)/(1+rho)^3 plus the
    explicit log term's derivative -2/(1-rho^2).
    """
    d = _check_d(d)
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise InvalidConcentration(f"dkl_drho needs rho strictly inside (0, 1), got {rho!r}")
    z = z_of_rho(rho)
    eps = one_minus_z(rho)
    dz_drho = 4.0 * (1.0 - rho) / (1.0 + rho) ** 3
    jp = _jprime(d, z, eps, int(nodes))
    return (d - 1.0) * (jp * dz_drho - 2.0 / ((1.0 - rho) * (1.0 + rho)))


# ---------------------------------------------------------------------------
# dispatch and diagnostics
# ---------------------------------------------------------------------------

_METHOD_ALIASES = {
    "series": KlMethod.SERIES,
    "quadrature": KlMethod.QUADRATURE,
    "asymptotic": KlMethod.ASYMPTOTIC_HIGH_RHO,
    "asymptotic_high_rho": KlMethod.ASYMPTOTIC_HIGH_RHO,
    "combined": KlMethod.COMBINED,
    "hybrid": KlMethod.HYBRID,
    "midpoint": KlMethod.MIDPOINT,
    "laplace": KlMethod.LAPLACE,
    "closed": KlMethod.CLOSED_FORM_LOW_D,
    "closed_form_low_d": KlMethod.CLOSED_FORM_LOW_D,
}


def evaluate_kl(
    d: int,
    rho: float,
    method: KlMethod | str = KlMethod.COMBINED,
    *,
    nodes: int = 64,
    rel_tol: float = 1e-14,
    max_terms: int = 100_000,
) -> KlResult:
    """Evaluate the KL with the named method; accepts enum or string names."""
    if isinstance(method, str):
        try:
            method = _METHOD_ALIASES[method.lower()]
        except KeyError:
            valid = ", ".join(sorted(set(_METHOD_ALIASES)))
            raise InvalidZ(f"unknown KL method {method!r}; expected one of: {valid}") from None
    if method is KlMethod.SERIES:
        return kl_series(d, rho, rel_tol=rel_tol, max_terms=max_terms)
    if method is KlMethod.QUADRATURE:
        return kl_quadrature(d, rho, nodes=nodes)
    if method is KlMethod.ASYMPTOTIC_HIGH_RHO:
        return kl_asymptotic_high_rho(d, rho)
    if method is KlMethod.COMBINED:
        return kl_combined(d, rho, nodes=nodes)
    if method is KlMethod.HYBRID:
        return kl_hybrid(d, rho)
    if method is KlMethod.MIDPOINT:
        return kl_midpoint(d, rho)
    if method is KlMethod.LAPLACE:
        return kl_laplace(d, rho)
    return kl_closed_low_d(d, rho)


def series_term_magnitudes(d: int, rho: float, k_max: int) -> np.ndarray:
    """First ``k_max`` series term magnitudes, for convergence diagnostics."""
    d = _check_d(d)
    rho = _check_rho(rho)
    z = z_of_rho(rho)
    if z == 0.0:
        return np.zeros(k_max)
    log_eps = _log_eps(rho)
    delta = 0.5 * (d - 1.0)
    ks = np.arange(1, k_max + 1, dtype=float)
    log_coef = np.cumsum(np.log(delta + ks - 1.0) - np.log(ks) + math.log(z))
    harmonic = np.cumsum(1.0 / (d - 1.0 + ks - 1.0))
    return np.exp(delta * log_eps + log_coef + np.log(harmonic))
