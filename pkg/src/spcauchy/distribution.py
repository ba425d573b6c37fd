"""The spherical Cauchy distribution on S^(d-1).

The density is taken with respect to the *uniform probability measure* on
the sphere, not surface measure:

    f(x | mu, rho) = ((1 - rho^2) / ||x - rho*mu||^2)^(d-1)
                   = (1 - rho^2)^(d-1) / (1 + rho^2 - 2*rho*<mu, x>)^(d-1),

so the density is identically 1 (log-density 0) at rho = 0 and the KL against
the uniform prior needs no sphere-area constants anywhere.  Sampling is fully
reparameterized: a uniform draw pushed through the Moebius transformation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._integrate import adaptive_simpson
from .errors import (
    AtPole,
    DimensionMismatch,
    InvalidConcentration,
    InvalidDimension,
    SpCauchyError,
)
from .sphere import moebius_transform, normalize, sample_uniform_sphere

__all__ = [
    "SpCauchy",
    "log_density",
    "sample",
    "marginal_cos_density",
    "marginal_cos_cdf",
    "stereographic_project",
]


@dataclass(frozen=True)
class SpCauchy:
    """Parameters (mu, rho): mode direction and concentration in [0, 1).

    ``mu`` is normalized on construction; rho = 1 is rejected.
    """

    mu: np.ndarray
    rho: float

    def __post_init__(self):
        mu = normalize(self.mu)
        rho = float(self.rho)
        if not 0.0 <= rho < 1.0 or math.isnan(rho):
            raise InvalidConcentration(f"rho must lie in [0, 1), got {self.rho!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "rho", rho)

    @property
    def d(self) -> int:
        return int(self.mu.shape[0])


def log_density(dist: SpCauchy, x) -> float | np.ndarray:
    """Log-density w.r.t. the uniform measure at point(s) x on the sphere.

    Computed as (d-1)*[log1p(-rho^2) - log1p(rho^2 - 2*rho*<mu, x>)], with
    the inner product clamped into [-1, 1] to absorb rounding of normalized
    inputs.  Accepts shape (d,) or (n, d); returns a float or an (n,) array.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != dist.d:
        raise DimensionMismatch(f"x has dimension {x.shape[-1]}, distribution has {dist.d}")
    rho = dist.rho
    cos = np.clip(x @ dist.mu, -1.0, 1.0)
    out = (dist.d - 1.0) * (math.log1p(-rho * rho) - np.log1p(rho * rho - 2.0 * rho * cos))
    return float(out) if out.ndim == 0 else out


def sample(dist: SpCauchy, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """Reparameterized draw(s): uniform sample warped by the Moebius map.

    Deterministic given the generator state; shape (d,) or (n, d).
    """
    u = sample_uniform_sphere(dist.d, rng, n)
    return moebius_transform(u, dist.mu, dist.rho)


# ---------------------------------------------------------------------------
# the cosine marginal t = <mu, x>
# ---------------------------------------------------------------------------


def _check_marginal_args(d, rho):
    if int(d) != d or d < 2:
        raise InvalidDimension(f"dimension must be an integer >= 2, got {d!r}")
    rho = float(rho)
    if not 0.0 <= rho < 1.0 or math.isnan(rho):
        raise InvalidConcentration(f"rho must lie in [0, 1), got {rho!r}")
    return int(d), rho


def _theta_log_weight(d: int, rho: float, theta):
    """Log of the theta-density sin(theta)^(d-2) * f(cos theta), unnormalized."""
    cos = np.cos(theta)
    out = (d - 1.0) * (math.log1p(-rho * rho) - np.log1p(rho * rho - 2.0 * rho * cos))
    if d > 2:
        out = out + (d - 2.0) * np.log(np.sin(theta))
    return out


_NORM_CACHE: dict[tuple[int, float], float] = {}


def _marginal_norm(d: int, rho: float) -> float:
    """Normalizer of the t-marginal, integrated in theta = arccos(t).

    The substitution removes the (1-t^2)^(-1/2) endpoint singularity that
    appears at d = 2.
    """
    key = (d, rho)
    got = _NORM_CACHE.get(key)
    if got is None:

        def f(theta):
            if d > 2 and (theta <= 0.0 or theta >= math.pi):
                return 0.0
            return float(np.exp(_theta_log_weight(d, rho, theta)))

        got = adaptive_simpson(f, 0.0, math.pi, 1e-12)
        _NORM_CACHE[key] = got
    return got


def marginal_cos_density(d: int, rho: float, t) -> float | np.ndarray:
    """Density of t = <mu, x> under the spherical Cauchy law, on [-1, 1].

    Proportional to (1-t^2)^((d-3)/2) * (1-rho^2)^(d-1)/(1+rho^2-2*rho*t)^(d-1)
    and normalized numerically.  For d = 2 the endpoint singularity is
    integrable; the density itself diverges at |t| = 1.
    """
    d, rho = _check_marginal_args(d, rho)
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise SpCauchyError("marginal argument t must lie in [-1, 1]")
    z = _marginal_norm(d, rho)
    logg = (d - 1.0) * (math.log1p(-rho * rho) - np.log1p(rho * rho - 2.0 * rho * t))
    if d != 3:
        # log(1-t^2) split as log1p(-t) + log1p(t) keeps precision at |t| -> 1
        with np.errstate(divide="ignore"):
            logg = logg + 0.5 * (d - 3.0) * (np.log1p(-t) + np.log1p(t))
    out = np.exp(logg) / z
    return float(out) if out.ndim == 0 else out


_CDF_PANELS = 8192
_CDF_CACHE: dict[tuple[int, float], tuple[np.ndarray, np.ndarray]] = {}


def _cdf_table(d: int, rho: float) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative theta-mass table on a fine grid, via per-panel Gauss rules."""
    key = (d, rho)
    got = _CDF_CACHE.get(key)
    if got is None:
        gx, gw = np.polynomial.legendre.leggauss(8)
        edges = np.linspace(0.0, math.pi, _CDF_PANELS + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        theta = mid[:, None] + half[:, None] * gx[None, :]
        with np.errstate(divide="ignore"):
            vals = np.exp(_theta_log_weight(d, rho, theta))
        panel_mass = half * (vals @ gw)
        cum = np.concatenate(([0.0], np.cumsum(panel_mass)))
        got = (edges, cum / cum[-1])
        _CDF_CACHE[key] = got
    return got


def marginal_cos_cdf(d: int, rho: float, t) -> float | np.ndarray:
    """CDF of t = <mu, x>; vectorized, suitable for goodness-of-fit tests."""
    d, rho = _check_marginal_args(d, rho)
    t = np.asarray(t, dtype=float)
    edges, cum = _cdf_table(d, rho)
    theta = np.arccos(np.clip(t, -1.0, 1.0))
    out = 1.0 - np.interp(theta, edges, cum)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# stereographic projection
# ---------------------------------------------------------------------------


def _tangent_basis(pole: np.ndarray) -> np.ndarray:
    """Columns: an orthonormal basis of pole-perp, fixed deterministically.

    Householder reflection mapping e_1 to the pole; its images of e_2..e_d
    span the tangent hyperplane.  The identity is used when pole ~ e_1.
    """
    d = pole.shape[0]
    e1 = np.zeros(d)
    e1[0] = 1.0
    u = pole - e1
    nu = np.linalg.norm(u)
    if nu < 1e-12:
        return np.eye(d)[:, 1:]
    h = np.eye(d) - 2.0 * np.outer(u, u) / (nu * nu)
    return h[:, 1:]


def stereographic_project(x, pole) -> np.ndarray:
    """Project x from the pole onto the equatorial hyperplane, as coordinates
    in a deterministic orthonormal tangent basis (length d-1).

    The antipode of the pole maps to the origin and the equator to the unit
    sphere of the plane.  Under this map, a spherical Cauchy sample at
    rho = 0 (uniform) lands on a multivariate Student-t law with d-1 degrees
    of freedom, radial density proportional to r^(d-2) (1+r^2)^-(d-1).
    """
    x = np.asarray(x, dtype=float)
    pole = normalize(pole)
    if x.shape[-1] != pole.shape[0]:
        raise DimensionMismatch(f"x has dimension {x.shape[-1]}, pole has {pole.shape[0]}")
    cos = x @ pole
    # ||x - pole||^2 = 2*(1 - cos), so this is the ||x - pole|| > 1e-10 gate
    if np.any(np.asarray(1.0 - cos) <= 5e-21):
        raise AtPole("stereographic projection is undefined at the pole")
    if x.ndim > 1:
        planar = (x - np.multiply.outer(cos, pole)) / (1.0 - cos)[:, None]
    else:
        planar = (x - cos * pole) / (1.0 - cos)
    return planar @ _tangent_basis(pole)
