"""Three-node Gaussian relay channel with correlated relay/destination noise.

    Y_R = h_sr X + Z_R
    Y   = h_sd X + h_rd X_R + Z

Source power, relay power and both noise variances are normalized to one, so a
channel is fully described by three nonnegative amplitude gains and the noise
correlation ``rho_z = E[Z_R Z]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "ChannelParams",
    "NoiseSample",
    "params_from_db",
    "db_from_amplitude",
    "one_minus_rho_sq",
    "sample_noise_pair",
]


class DomainError(ValueError):
    """Raised when a quantity is requested outside the region where it is finite."""


@dataclass(frozen=True)
class ChannelParams:
    h_sd: float
    h_sr: float
    h_rd: float
    rho_z: float

    def __post_init__(self):
        for name in ("h_sd", "h_sr", "h_rd", "rho_z"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ("h_sd", "h_sr", "h_rd"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be nonnegative, got {getattr(self, name)!r}")
        if not -1.0 <= self.rho_z <= 1.0:
            raise DomainError(f"rho_z must lie in [-1, 1], got {self.rho_z!r}")

    def with_rho(self, rho_z: float) -> "ChannelParams":
        return ChannelParams(self.h_sd, self.h_sr, self.h_rd, rho_z)

    def with_gains(self, h_sd=None, h_sr=None, h_rd=None) -> "ChannelParams":
        return ChannelParams(
            self.h_sd if h_sd is None else h_sd,
            self.h_sr if h_sr is None else h_sr,
            self.h_rd if h_rd is None else h_rd,
            self.rho_z,
        )


@dataclass(frozen=True)
class NoiseSample:
    """Joint draws of the relay noise ``z_r`` and destination noise ``z`` (equal-length arrays)."""

    z_r: np.ndarray
    z: np.ndarray


def params_from_db(h_sd_db: float, h_sr_db: float, h_rd_db: float, rho_z: float) -> ChannelParams:
    """Build a channel from squared-gain (power) values in dB.

    A value of 20 dB means h**2 = 100, i.e. amplitude h = 10.
    """
    values = (h_sd_db, h_sr_db, h_rd_db, rho_z)
    if not all(math.isfinite(v) for v in values):
        raise DomainError(f"non-finite input in {values!r}")
    return ChannelParams(
        10.0 ** (h_sd_db / 20.0),
        10.0 ** (h_sr_db / 20.0),
        10.0 ** (h_rd_db / 20.0),
        rho_z,
    )


def db_from_amplitude(h: float) -> float:
    """Inverse of the gain conversion in :func:`params_from_db`."""
    return 20.0 * math.log10(h)


def one_minus_rho_sq(rho: float) -> float:
    # factored form keeps relative accuracy as |rho| -> 1
    return (1.0 - rho) * (1.0 + rho)


def sample_noise_pair(rho_z: float, count: int, seed: int) -> NoiseSample:
    """Draw ``count`` i.i.d. pairs (Z_R, Z) with unit variances and correlation ``rho_z``.

    Uses the Cholesky form ``z_r = u1``, ``z = rho_z*u1 + sqrt(1 - rho_z**2)*u2``
    so that ``rho_z = +-1`` gives ``z == +-z_r`` exactly.
    """
    if not -1.0 <= rho_z <= 1.0:
        raise DomainError(f"rho_z must lie in [-1, 1], got {rho_z!r}")
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((2, count))
    z_r = u[0]
    if abs(rho_z) == 1.0:
        z = rho_z * z_r
    else:
        z = rho_z * z_r + math.sqrt(one_minus_rho_sq(rho_z)) * u[1]
    return NoiseSample(z_r=z_r, z=z)
