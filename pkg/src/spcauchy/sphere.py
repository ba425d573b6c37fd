"""Unit-sphere primitives: normalization, uniform sampling, the Moebius
transformation, and great-circle interpolation.

Points on S^(d-1) are plain float64 numpy arrays of length d >= 2.  Batched
variants accept arrays of shape (n, d) and operate row-wise.  All functions
are pure; random state is caller-owned (pass a ``numpy.random.Generator``).
"""

from __future__ import annotations

import numpy as np

from .errors import (
    AntipodalEndpoints,
    DimensionMismatch,
    InvalidConcentration,
    InvalidDimension,
    SpCauchyError,
    ZeroVector,
)

__all__ = [
    "normalize",
    "sample_uniform_sphere",
    "moebius_transform",
    "geodesic_interpolate",
]

_UNDERFLOW_NORM = 1e-300
_RESAMPLE_CAP = 16


def normalize(v) -> np.ndarray:
    """Return v/||v|| as a float64 array; length must be >= 2.

    Raises ``ZeroVector`` if ||v|| underflows (<= 1e-300).
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] < 2:
        raise InvalidDimension(f"expected a vector of length >= 2, got shape {v.shape}")
    n = float(np.linalg.norm(v))
    if not n > _UNDERFLOW_NORM:
        raise ZeroVector("cannot normalize a (numerically) zero vector")
    return v / n


def sample_uniform_sphere(d: int, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """Uniform draw(s) on S^(d-1): normalized standard Gaussians.

    Returns shape (d,) for ``n=None`` and (n, d) otherwise.  Rows whose
    Gaussian norm underflows are redrawn, at most 16 times.
    """
    if int(d) != d or d < 2:
        raise InvalidDimension(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    single = n is None
    count = 1 if single else int(n)
    x = rng.standard_normal((count, d))
    norms = np.linalg.norm(x, axis=1)
    for _ in range(_RESAMPLE_CAP):
        bad = norms <= _UNDERFLOW_NORM
        if not bad.any():
            break
        x[bad] = rng.standard_normal((int(bad.sum()), d))
        norms[bad] = np.linalg.norm(x[bad], axis=1)
    if (norms <= _UNDERFLOW_NORM).any():
        raise ZeroVector("Gaussian norm underflowed repeatedly; giving up after 16 redraws")
    out = x / norms[:, None]
    return out[0] if single else out


def moebius_transform(x, mu, rho: float) -> np.ndarray:
    """Warp point(s) x on S^(d-1) by the Moebius map with parameters (mu, rho).

        Y = (1 - rho^2) * (x + rho*mu) / (1 + 2*rho*<x, mu> + rho^2) + rho*mu

    Pushes the uniform distribution forward to the spherical Cauchy law with
    mode mu and concentration rho; rho = 0 is the identity (returned
    bit-exactly).  Output rows are defensively renormalized, keeping the
    norm within 1e-12 of 1 against the slow drift of the raw formula near
    rho -> 1.  Accepts x of shape (d,) or (n, d); mu may be a single
    direction or one row per x row.
    """
    x = np.asarray(x, dtype=float)
    mu = np.asarray(mu, dtype=float)
    rho = float(rho)
    if not 0.0 <= rho < 1.0 or np.isnan(rho):
        raise InvalidConcentration(f"rho must lie in [0, 1), got {rho!r}")
    if mu.shape != x.shape and not (mu.ndim == 1 and x.shape[-1] == mu.shape[0]):
        raise DimensionMismatch(f"x has shape {x.shape}, mu has shape {mu.shape}")
    if rho == 0.0:
        return x.copy()
    cos = np.sum(x * mu, axis=-1) if mu.ndim == x.ndim else x @ mu
    denom = 1.0 + 2.0 * rho * cos + rho * rho
    y = (1.0 - rho * rho) * (x + rho * mu) / (denom[..., None] if x.ndim > 1 else denom) + rho * mu
    norms = np.linalg.norm(y, axis=-1, keepdims=x.ndim > 1)
    return y / norms


def geodesic_interpolate(a, b, t: float) -> np.ndarray:
    """Spherical linear interpolation between unit vectors a and b.

    Constant angular speed along the great circle: the angle from a to the
    result is t times the angle from a to b.  Endpoints must not be
    antipodal (the geodesic would not be unique).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"endpoint shapes differ: {a.shape} vs {b.shape}")
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise SpCauchyError(f"interpolation parameter must lie in [0, 1], got {t!r}")
    if np.linalg.norm(a + b) <= 1e-8:
        raise AntipodalEndpoints("no unique great circle through antipodal points")
    omega = np.arccos(np.clip(a @ b, -1.0, 1.0))
    if omega < 1e-9:
        y = (1.0 - t) * a + t * b
    else:
        s = np.sin(omega)
        y = (np.sin((1.0 - t) * omega) * a + np.sin(t * omega) * b) / s
    return y / np.linalg.norm(y)
