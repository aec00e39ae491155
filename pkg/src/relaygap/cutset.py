"""Cut-set upper bounds for the correlated-noise relay channel.

Two cuts bound any achievable rate, with ``rho_x`` the correlation between the
source and relay inputs:

* multiple-access cut   ½log₂(1 + h_sd² + h_rd² + 2 rho_x h_sd h_rd)
* broadcast cut         ½log₂(1 + (1 - rho_x²) K),
  K = (h_sd² + h_sr² - 2 rho_z h_sd h_sr) / (1 - rho_z²)

The relaxed bound evaluates each cut at its own best ``rho_x`` (1 and 0); the
exact bound maximizes the minimum of the two over ``rho_x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelParams, DomainError, one_minus_rho_sq
from .optimize import bisect_increasing

__all__ = [
    "CutsetResult",
    "broadcast_snr",
    "relaxed_cutset",
    "exact_cutset",
    "cutset",
]

_HALF_INV_LN2 = 0.5 / math.log(2.0)


def _half_log2_1p(x: float) -> float:
    if x == math.inf:
        return math.inf
    return math.log1p(x) * _HALF_INV_LN2


@dataclass(frozen=True)
class CutsetResult:
    r_ub1: float
    r_ub2: float
    relaxed_bound: float
    exact_bound: float
    rho_x_star: float


def broadcast_snr(p: ChannelParams) -> float:
    """Effective SNR ``K`` of the broadcast cut at ``rho_x = 0``.

    Written as ``h_sr² + (h_sd - rho_z h_sr)² / (1 - rho_z²)``, which equals the
    textbook form but is free of cancellation. At ``|rho_z| = 1`` it is +inf
    unless ``h_sd = rho_z h_sr``; there the 0/0 term takes its limit 0.
    """
    resid = p.h_sd - p.rho_z * p.h_sr
    if abs(p.rho_z) == 1.0:
        return p.h_sr ** 2 if resid == 0.0 else math.inf
    return p.h_sr ** 2 + resid ** 2 / one_minus_rho_sq(p.rho_z)


def relaxed_cutset(p: ChannelParams) -> tuple[float, float]:
    """Return ``(R_UB1, R_UB2)`` in bits; R_UB2 is +inf at ``|rho_z| = 1`` unless degenerate."""
    r_ub1 = _half_log2_1p((p.h_sd + p.h_rd) ** 2)
    r_ub2 = _half_log2_1p(broadcast_snr(p))
    return r_ub1, r_ub2


def exact_cutset(p: ChannelParams, tol: float = 1e-10) -> CutsetResult:
    """Max over ``rho_x`` in [0, 1] of the minimum of the two cuts.

    The multiple-access cut is nondecreasing in ``rho_x`` and the broadcast cut
    nonincreasing, so the optimum is at ``rho_x = 0`` or at their crossing, which
    is bracketed by bisection to width ``tol``.
    """
    if abs(p.rho_z) >= 1.0:
        raise DomainError("exact cut-set bound requires |rho_z| < 1")
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")

    k = broadcast_snr(p)
    direct = p.h_sd ** 2 + p.h_rd ** 2
    cross = 2.0 * p.h_sd * p.h_rd

    def mac_snr(rho_x):
        return direct + rho_x * cross

    def bc_snr(rho_x):
        return (1.0 - rho_x) * (1.0 + rho_x) * k

    if cross == 0.0 or mac_snr(0.0) >= bc_snr(0.0):
        rho_x = 0.0
    else:
        lo, hi = bisect_increasing(lambda r: mac_snr(r) - bc_snr(r), 0.0, 1.0, tol)
        # the min is the MAC cut at lo and the broadcast cut at hi; keep the larger
        rho_x = lo if mac_snr(lo) >= bc_snr(hi) else hi

    r_ub1, r_ub2 = relaxed_cutset(p)
    exact = _half_log2_1p(min(mac_snr(rho_x), bc_snr(rho_x)))
    return CutsetResult(
        r_ub1=r_ub1,
        r_ub2=r_ub2,
        relaxed_bound=min(r_ub1, r_ub2),
        exact_bound=exact,
        rho_x_star=rho_x,
    )


def cutset(p: ChannelParams) -> float:
    """Relaxed cut-set bound ``min(R_UB1, R_UB2)``, the reference used for gap certification."""
    return min(relaxed_cutset(p))
