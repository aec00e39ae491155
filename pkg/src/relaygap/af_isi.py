"""Single-tap amplify-and-forward as an ISI channel with colored noise.

The relay sends ``X_R[i] = alpha (h_sr X[i-1] + Z_R[i-1])``, so the destination sees

    Y[i] = h_sd X[i] + alpha h_rd h_sr X[i-1] + Z[i] + alpha h_rd Z_R[i-1]

with channel power spectrum ``|H(w)|² = a_sig + b_sig cos w`` and noise PSD
``N(w) = a_noise + b_noise cos w``. The AF rate is the water-filling capacity
of this channel under unit average power.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import ChannelParams, DomainError
from .cutset import cutset

__all__ = [
    "SingularChannelError",
    "IsiChannel",
    "SpectrumGrid",
    "WaterFillingSolution",
    "max_alpha",
    "build_isi",
    "grid_omegas",
    "allocation_rate",
    "waterfill",
    "flat_rate_closed_form",
    "af_rate",
    "af_gap_divergence",
]

logger = logging.getLogger(__name__)

_HALF_INV_LN2 = 0.5 / math.log(2.0)
_TINY_GAIN = 1e-300


class SingularChannelError(DomainError):
    """|H(w)|² vanishes on the frequency grid, so N/|H|² is unbounded."""


@dataclass(frozen=True)
class IsiChannel:
    alpha: float
    a_sig: float
    b_sig: float
    a_noise: float
    b_noise: float

    def signal_psd(self, omega):
        return self.a_sig + self.b_sig * np.cos(omega)

    def noise_psd(self, omega):
        return self.a_noise + self.b_noise * np.cos(omega)


@dataclass(frozen=True)
class SpectrumGrid:
    """Samples of a 2π-periodic function at ``w_k = 2π(k + offset)/n_points``."""

    n_points: int
    values: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        if self.n_points < 64 or self.n_points % 2:
            raise DomainError(f"n_points must be even and >= 64, got {self.n_points}")
        if len(self.values) != self.n_points:
            raise DomainError("values length does not match n_points")

    @property
    def omegas(self) -> np.ndarray:
        return grid_omegas(self.n_points, self.offset)

    def mean(self) -> float:
        return float(np.mean(self.values))


@dataclass(frozen=True)
class WaterFillingSolution:
    lambda_: float
    power: SpectrumGrid
    rate_bits: float
    power_used: float
    noise_to_gain: SpectrumGrid


def max_alpha(h_sr: float) -> float:
    """Largest relay gain meeting the unit relay power constraint."""
    return 1.0 / math.sqrt(1.0 + h_sr ** 2)


def build_isi(p: ChannelParams, alpha: Optional[float] = None) -> IsiChannel:
    a_max = max_alpha(p.h_sr)
    if alpha is None:
        alpha = a_max
    elif not 0.0 <= alpha <= a_max:
        raise DomainError(f"alpha must lie in [0, {a_max!r}], got {alpha!r}")
    tap = alpha * p.h_rd * p.h_sr
    return IsiChannel(
        alpha=alpha,
        a_sig=p.h_sd ** 2 + tap ** 2,
        b_sig=2.0 * tap * p.h_sd,
        a_noise=1.0 + (alpha * p.h_rd) ** 2,
        b_noise=2.0 * p.rho_z * alpha * p.h_rd,
    )


def grid_omegas(n_points: int, offset: float = 0.0) -> np.ndarray:
    return 2.0 * np.pi * (np.arange(n_points) + offset) / n_points


def _noise_to_gain(ch: IsiChannel, n_points: int) -> SpectrumGrid:
    offset = 0.0
    noise = ch.noise_psd(grid_omegas(n_points))
    if np.any(noise <= 0.0):
        # noise PSD touches zero only at w = pi (|rho_z| = 1, alpha h_rd = 1); step off it
        offset = 0.5
        noise = ch.noise_psd(grid_omegas(n_points, offset))
    gain = ch.signal_psd(grid_omegas(n_points, offset))
    if np.any(gain < _TINY_GAIN):
        k = int(np.argmin(gain))
        raise SingularChannelError(
            f"|H(w)|^2 = {gain[k]:.3g} at grid point {k}; perturb h_sd slightly to avoid the spectral zero"
        )
    return SpectrumGrid(n_points, noise / gain, offset)


def allocation_rate(noise_to_gain: np.ndarray, power: np.ndarray) -> float:
    """Grid average of ½log₂(1 + S |H|²/N); the periodic trapezoid rule on a uniform grid."""
    return float(np.mean(np.log1p(power / noise_to_gain))) * _HALF_INV_LN2


def waterfill(ch: IsiChannel, n_points: int = 4096, tol: float = 1e-9,
              power: float = 1.0) -> WaterFillingSolution:
    """Water-filling ``S(w) = (lambda - N/|H|²)^+`` with grid-average power ``power``.

    The water level is bisected until the average power lies in
    ``[power - tol, power]``.
    """
    if tol <= 0 or power <= 0:
        raise DomainError("tol and power must be positive")
    g_grid = _noise_to_gain(ch, n_points)
    g = g_grid.values

    def used(level):
        return float(np.mean(np.maximum(level - g, 0.0)))

    g_min = float(g.min())
    lo = g_min
    hi = min(power + float(g.mean()), g_min + n_points * power)
    level = lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        p_mid = used(mid)
        if p_mid > power:
            hi = mid
        else:
            lo = mid
            level = mid
            if power - p_mid <= tol:
                break
        if hi - lo <= 4.0 * np.finfo(float).eps * hi:
            logger.warning("water level bisection hit float resolution at lambda=%g", level)
            break

    alloc = np.maximum(level - g, 0.0)
    return WaterFillingSolution(
        lambda_=level,
        power=SpectrumGrid(n_points, alloc, g_grid.offset),
        rate_bits=allocation_rate(g, alloc),
        power_used=float(np.mean(alloc)),
        noise_to_gain=g_grid,
    )


def _log_mean(a: float, b: float) -> float:
    """(1/2π)∫ ln(a + b cos w) dw = ln((a + sqrt(a² - b²))/2) for a >= |b|."""
    b = abs(b)
    return math.log((a + math.sqrt((a - b) * (a + b))) / 2.0)


def flat_rate_closed_form(ch: IsiChannel) -> float:
    """AF rate with flat allocation S(w) = 1, in closed form."""
    big_a = ch.a_noise + ch.a_sig
    big_b = ch.b_noise + ch.b_sig
    if not big_a > abs(big_b):
        raise DomainError("N + |H|^2 has a spectral zero; flat-allocation closed form undefined")
    if not ch.a_noise >= abs(ch.b_noise):
        raise DomainError("noise PSD is negative somewhere")
    return (_log_mean(big_a, big_b) - _log_mean(ch.a_noise, ch.b_noise)) * _HALF_INV_LN2


def af_rate(p: ChannelParams, n_points: int = 4096, flat: bool = False,
            alpha: Optional[float] = None) -> float:
    ch = build_isi(p, alpha)
    if flat:
        return flat_rate_closed_form(ch)
    return waterfill(ch, n_points).rate_bits


def af_gap_divergence(h_sd: float, h_sr: float, h_rd_seq: Sequence[float], rho_z: float,
                      n_points: int = 4096) -> list[float]:
    """Relaxed cut-set minus water-filled AF rate for each relay-destination gain."""
    seq = [float(h) for h in h_rd_seq]
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise DomainError("h_rd_seq must be strictly increasing")
    gaps = []
    for h_rd in seq:
        p = ChannelParams(h_sd, h_sr, h_rd, rho_z)
        gaps.append(cutset(p) - af_rate(p, n_points))
    return gaps
