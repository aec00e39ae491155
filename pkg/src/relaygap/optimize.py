"""Scalar search helpers: golden-section for unimodal functions, bisection for monotone crossings."""

from __future__ import annotations

import math
from typing import Callable, Tuple

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_min(f: Callable[[float], float], a: float, b: float,
                       tol: float = 1e-8) -> Tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` where ``x`` is within ``tol`` of the minimizer.
    Function evaluations are reused, one new evaluation per step.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQ * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = f(d)
    # best of the evaluated interior points
    return (c, yc) if yc < yd else (d, yd)


def golden_section_max(f: Callable[[float], float], a: float, b: float,
                       tol: float = 1e-8) -> Tuple[float, float]:
    x, y = golden_section_min(lambda t: -f(t), a, b, tol)
    return x, -y


def bisect_increasing(g: Callable[[float], float], lo: float, hi: float,
                      tol: float, max_iter: int = 200) -> Tuple[float, float]:
    """Bracket the sign change of a nondecreasing ``g`` with ``g(lo) <= 0 <= g(hi)``.

    Returns the final bracket ``(lo, hi)`` with ``hi - lo <= tol`` (or after ``max_iter`` halvings).
    """
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return lo, hi
