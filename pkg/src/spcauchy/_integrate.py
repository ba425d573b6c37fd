"""Shared adaptive Simpson core.

Private module so that both :mod:`spcauchy.oracles` (public wrapper) and
:mod:`spcauchy.distribution` (marginal normalization) can use it without an
import cycle.
"""

from __future__ import annotations

from .errors import MaxDepthExceeded


def adaptive_simpson(f, a: float, b: float, abs_tol: float, max_depth: int = 50) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``abs_tol``.

    Classic recursive Simpson with Richardson correction; the tolerance is
    halved on each split so the final error estimate is conservative on
    smooth integrands.
    """
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise MaxDepthExceeded(f"adaptive Simpson exhausted its depth budget on [{a}, {b}]")
    return _simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _simpson_rec(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )
