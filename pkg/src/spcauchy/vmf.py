"""Concentration matching against the von Mises-Fisher family.

Only the *unnormalized* vMF log-density kappa*cos(theta) appears here: the
curvature comparison is normalization-free, which is what keeps Bessel
functions out of this repository entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConcentration, InvalidDimension, InvalidKappa

__all__ = ["MatchedPair", "kappa_of_rho", "rho_match", "curvature_report", "CurvatureReport"]


@dataclass(frozen=True)
class MatchedPair:
    """A (d, rho, kappa) triple related by the local curvature match."""

    d: int
    rho: float
    kappa: float


@dataclass(frozen=True)
class CurvatureReport:
    """Fitted quadratic curvature coefficients near the mode."""

    c_vmf: float
    c_spc: float
    rel_diff: float


def _check_d(d) -> int:
    if int(d) != d or d < 2:
        raise InvalidDimension(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def kappa_of_rho(d: int, rho: float) -> float:
    """kappa(rho) = 2*(d-1)*rho/(1-rho)^2, the curvature-matching map.

    Strictly increasing in rho and divergent as rho -> 1.
    """
    d = _check_d(d)
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise InvalidConcentration(f"matching needs rho strictly inside (0, 1), got {rho!r}")
    return 2.0 * (d - 1.0) * rho / (1.0 - rho) ** 2


def rho_match(d: int, kappa: float) -> float:
    """Inverse of ``kappa_of_rho``: rho with matching local curvature.

    Algebraically (m + kappa - sqrt(m^2 + 2*m*kappa))/kappa with m = d-1;
    evaluated in the conjugate form kappa/(m + kappa + sqrt(m^2 + 2*m*kappa))
    which is exact for every kappa > 0 (the textbook form cancels
    catastrophically when kappa << m, and its small-kappa series limit
    kappa/(2m) is only first-order accurate).
    """
    d = _check_d(d)
    kappa = float(kappa)
    if not kappa > 0.0 or math.isinf(kappa) or math.isnan(kappa):
        raise InvalidKappa(f"kappa must be a positive finite number, got {kappa!r}")
    m = d - 1.0
    return kappa / (m + kappa + math.sqrt(m * m + 2.0 * m * kappa))


def matched_pair(d: int, *, rho: float | None = None, kappa: float | None = None) -> MatchedPair:
    """Complete a matched (d, rho, kappa) triple from either parameter."""
    if (rho is None) == (kappa is None):
        raise InvalidKappa("provide exactly one of rho or kappa")
    if rho is None:
        rho = rho_match(d, kappa)
    else:
        kappa = kappa_of_rho(d, rho)
    return MatchedPair(int(d), float(rho), float(kappa))


def curvature_report(
    d: int,
    rho: float,
    theta_max: float = 0.01,
    n_points: int = 20,
) -> CurvatureReport:
    """Fit -c*theta^2/2 to both unnormalized log-densities near the mode.

    The vMF side is kappa(rho)*cos(theta) and the spherical Cauchy side
    -(d-1)*log(1 + rho^2 - 2*rho*cos(theta)), each shifted to 0 at
    theta = 0 and least-squares fitted on a uniform grid over
    (0, theta_max].  Both coefficients converge to kappa(rho) as
    theta_max -> 0; the relative difference decays like theta_max^2.
    """
    d = _check_d(d)
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise InvalidConcentration(f"curvature fit needs rho in (0, 1), got {rho!r}")
    if theta_max <= 0.0 or n_points < 2:
        raise InvalidKappa("need theta_max > 0 and at least two grid points")
    theta = np.linspace(0.0, float(theta_max), int(n_points) + 1)[1:]
    kappa = kappa_of_rho(d, rho)
    one_minus_cos = 2.0 * np.sin(0.5 * theta) ** 2
    g_vmf = -kappa * one_minus_cos
    g_spc = -(d - 1.0) * np.log1p(2.0 * rho * one_minus_cos / (1.0 - rho) ** 2)
    t2 = theta * theta
    denom = float(t2 @ t2)
    c_vmf = -2.0 * float(g_vmf @ t2) / denom
    c_spc = -2.0 * float(g_spc @ t2) / denom
    return CurvatureReport(c_vmf, c_spc, abs(c_vmf - c_spc) / abs(c_vmf))
