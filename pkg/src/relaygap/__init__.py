"""Capacity bounds and relaying rates for the Gaussian relay channel with correlated noises."""

from .channel import ChannelParams, DomainError, params_from_db, sample_noise_pair
from .cutset import CutsetResult, exact_cutset, relaxed_cutset
from .rates import (
    HALF_LOG2_3,
    GapReport,
    NncRates,
    QuantizerChoice,
    QuantizerOrigin,
    cf_quantizer,
    cf_rate,
    df_rate,
    gap_report,
    manual_quantizer,
    nnc_gap_bound,
    nnc_rates,
    q_star,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "DomainError",
    "params_from_db",
    "sample_noise_pair",
    "CutsetResult",
    "exact_cutset",
    "relaxed_cutset",
    "HALF_LOG2_3",
    "GapReport",
    "NncRates",
    "QuantizerChoice",
    "QuantizerOrigin",
    "cf_quantizer",
    "cf_rate",
    "df_rate",
    "gap_report",
    "manual_quantizer",
    "nnc_gap_bound",
    "nnc_rates",
    "q_star",
]
