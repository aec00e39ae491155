"""Achievable rates: noisy network coding, compress-and-forward, decode-and-forward.

All rates are in bits per channel use with independent unit-power Gaussian
inputs at source and relay. The relay quantizes ``Ŷ_R = Y_R + e`` with
``e ~ N(0, q)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .channel import ChannelParams, DomainError, one_minus_rho_sq
from .cutset import cutset

__all__ = [
    "HALF_LOG2_3",
    "QuantizerOrigin",
    "QuantizerChoice",
    "NncRates",
    "GapReport",
    "q_star",
    "manual_quantizer",
    "nnc_rates",
    "nnc_gap_bound",
    "cf_quantizer",
    "cf_rate",
    "df_rate",
    "gap_report",
]

#: Constant gap of the correlation-aware NNC scheme, ½log₂3 ≈ 0.7925 bits.
HALF_LOG2_3 = 0.5 * math.log2(3.0)

_HALF_INV_LN2 = 0.5 / math.log(2.0)


def _half_log2_1p(x):
    return math.log1p(x) * _HALF_INV_LN2


class QuantizerOrigin(enum.Enum):
    STAR = "star"
    CF_CONSTRAINT = "cf_constraint"
    MANUAL = "manual"


@dataclass(frozen=True)
class QuantizerChoice:
    """Quantization noise variance ``q`` and how it was chosen.

    ``q = 0`` is representable (the CF quantizer reaches it at ``|rho_z| = 1``)
    but rejected by the rate formulas.
    """

    q: float
    origin: QuantizerOrigin

    def __post_init__(self):
        if not (math.isfinite(self.q) and self.q >= 0.0):
            raise DomainError(f"quantizer variance must be finite and >= 0, got {self.q!r}")


@dataclass(frozen=True)
class NncRates:
    r1: float
    r2: float
    rate: float
    q_used: QuantizerChoice


@dataclass(frozen=True)
class GapReport:
    params: ChannelParams
    cutset: float
    nnc: float
    cf: Optional[float]
    df: float
    gap_nnc: float
    gap_cf: Optional[float]
    gap_df: float


def _require_open_rho(p: ChannelParams, what: str):
    if abs(p.rho_z) >= 1.0:
        raise DomainError(f"{what} requires |rho_z| < 1, got {p.rho_z!r}")


def q_star(p: ChannelParams) -> QuantizerChoice:
    """Correlation-aware quantizer ``q* = 2(1 - rho_z²)``."""
    _require_open_rho(p, "q*")
    return QuantizerChoice(2.0 * one_minus_rho_sq(p.rho_z), QuantizerOrigin.STAR)


def manual_quantizer(q: float) -> QuantizerChoice:
    return QuantizerChoice(q, QuantizerOrigin.MANUAL)


def nnc_rates(p: ChannelParams, q: QuantizerChoice) -> NncRates:
    """The two NNC rate terms and their (zero-clamped) minimum.

    r1 = ½log₂(1 + h_sd² + h_rd²) - ½log₂(1 + (1 - rho_z²)/q)
    r2 = ½log₂(1 + (q + (q+1) h_sd² + h_sr² - 2 rho_z h_sd h_sr)/(1 - rho_z²))
         - ½log₂(1 + q/(1 - rho_z²))

    Each difference of logs is evaluated as a single ``log1p``. ``r1`` may be
    negative and is reported raw.
    """
    _require_open_rho(p, "NNC rates")
    if q.q <= 0.0:
        raise DomainError(f"NNC rates require q > 0, got {q.q!r}")
    s = one_minus_rho_sq(p.rho_z)
    qq = q.q
    r1 = _half_log2_1p((qq * (p.h_sd ** 2 + p.h_rd ** 2) - s) / (qq + s))
    bracket = p.h_sd ** 2 + p.h_sr ** 2 - 2.0 * p.rho_z * p.h_sd * p.h_sr
    r2 = _half_log2_1p((qq * p.h_sd ** 2 + bracket) / (qq + s))
    return NncRates(r1=r1, r2=r2, rate=max(0.0, min(r1, r2)), q_used=q)


def nnc_gap_bound(p: ChannelParams, q: QuantizerChoice) -> float:
    """Analytic bound on (relaxed cut-set) - NNC rate for quantizer ``q``.

    The first term falls with ``q`` and the second rises; they meet at ``q*``,
    where both equal ½log₂3.
    """
    _require_open_rho(p, "NNC gap bound")
    if q.q <= 0.0:
        raise DomainError(f"NNC gap bound requires q > 0, got {q.q!r}")
    s = one_minus_rho_sq(p.rho_z)
    return max(_half_log2_1p(s / q.q) + 0.5, _half_log2_1p(q.q / s))


def cf_quantizer(p: ChannelParams) -> QuantizerChoice:
    """Smallest quantizer variance whose description fits the relay-destination link."""
    if p.h_rd <= 0.0:
        raise DomainError("CF quantizer undefined for h_rd = 0")
    s = one_minus_rho_sq(p.rho_z)
    q_c = (s * (1.0 + p.h_sd ** 2) + (p.h_sr - p.rho_z * p.h_sd) ** 2) / p.h_rd ** 2
    return QuantizerChoice(q_c, QuantizerOrigin.CF_CONSTRAINT)


def cf_rate(p: ChannelParams) -> float:
    """Compress-and-forward rate ½log₂(1 + h_sd² + (h_sr - rho_z h_sd)² / (1 - rho_z² + q_c)).

    At ``|rho_z| = 1`` with ``h_sr = rho_z h_sd`` the relay term is 0/0 and is
    taken as its limit, 0.
    """
    q_c = cf_quantizer(p).q
    denom = one_minus_rho_sq(p.rho_z) + q_c
    resid = (p.h_sr - p.rho_z * p.h_sd) ** 2
    relay_term = 0.0 if denom == 0.0 else resid / denom
    return _half_log2_1p(p.h_sd ** 2 + relay_term)


def df_rate(p: ChannelParams) -> float:
    """Decode-and-forward rate; the relay is bypassed when it would not help. Independent of rho_z."""
    direct = _half_log2_1p(p.h_sd ** 2)
    relayed = min(_half_log2_1p(p.h_sr ** 2), _half_log2_1p(p.h_sd ** 2 + p.h_rd ** 2))
    return max(direct, relayed)


def gap_report(p: ChannelParams, epsilon: float = 1e-6) -> GapReport:
    """Bounds, rates and gaps for one channel, against the relaxed cut-set bound.

    NNC is evaluated at ``q*``. The CF columns are ``None`` when ``h_rd = 0``.
    """
    if abs(p.rho_z) > 1.0 - epsilon:
        raise DomainError(f"|rho_z| must be <= 1 - {epsilon:g}, got {p.rho_z!r}")
    bound = cutset(p)
    nnc = nnc_rates(p, q_star(p)).rate
    cf = cf_rate(p) if p.h_rd > 0.0 else None
    df = df_rate(p)
    return GapReport(
        params=p,
        cutset=bound,
        nnc=nnc,
        cf=cf,
        df=df,
        gap_nnc=bound - nnc,
        gap_cf=None if cf is None else bound - cf,
        gap_df=bound - df,
    )
