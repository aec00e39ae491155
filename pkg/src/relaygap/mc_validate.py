"""Cross-checks of the closed-form rates through Gaussian mutual information.

Everything here is jointly Gaussian, so each rate is a determinant identity on
the covariance of ``(X, X_R, Y, Y_R, Ŷ_R)``. The covariance comes either from
exact linear algebra (no sampling) or from simulated channel uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .channel import ChannelParams, DomainError, sample_noise_pair
from .rates import QuantizerChoice, cf_quantizer, q_star

__all__ = [
    "X", "XR", "Y", "YR", "YHAT", "LABELS",
    "SingularCovarianceError",
    "EmpiricalCov",
    "MiRates",
    "analytic_joint_cov",
    "simulate_joint",
    "gaussian_mi_from_cov",
    "mi_rates",
    "conditional_variance_check",
]

X, XR, Y, YR, YHAT = range(5)
LABELS = ("X", "X_R", "Y", "Y_R", "Yhat_R")

_CHUNK = 1_000_000
_LOG_TINY = math.log(1e-300)


class SingularCovarianceError(DomainError):
    pass


@dataclass(frozen=True)
class EmpiricalCov:
    """Covariance of the joint vector; ``n_samples`` is None for the exact matrix."""

    dim: int
    matrix: np.ndarray
    n_samples: Optional[int] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.dim, self.dim):
            raise DomainError(f"expected a {self.dim}x{self.dim} matrix, got {m.shape}")
        scale = max(1.0, float(np.abs(m).max()))
        if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * scale):
            raise DomainError("covariance matrix is not symmetric")
        if np.any(np.diag(m) < 0):
            raise DomainError("covariance matrix has a negative variance")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class MiRates:
    r1: float
    r2: float
    r_ub1: float
    r_ub2: float
    r_cf: Optional[float]


def _mixing_matrix(p: ChannelParams) -> np.ndarray:
    # rows: X, X_R, Y, Y_R, Yhat_R in terms of latents (X, X_R, Z_R, Z, e)
    return np.array([
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [p.h_sd, p.h_rd, 0.0, 1.0, 0.0],
        [p.h_sr, 0.0, 1.0, 0.0, 0.0],
        [p.h_sr, 0.0, 1.0, 0.0, 1.0],
    ])


def analytic_joint_cov(p: ChannelParams, q: QuantizerChoice, rho_x: float = 0.0) -> EmpiricalCov:
    """Exact covariance of ``(X, X_R, Y, Y_R, Ŷ_R)`` with input correlation ``rho_x``."""
    latent = np.zeros((5, 5))
    latent[:2, :2] = [[1.0, rho_x], [rho_x, 1.0]]
    latent[2:4, 2:4] = [[1.0, p.rho_z], [p.rho_z, 1.0]]
    latent[4, 4] = q.q
    a = _mixing_matrix(p)
    cov = a @ latent @ a.T
    return EmpiricalCov(5, 0.5 * (cov + cov.T))


def simulate_joint(p: ChannelParams, q: QuantizerChoice, n: int, seed: int,
                   rho_x: float = 0.0) -> EmpiricalCov:
    """Sample covariance of ``n`` simulated channel uses.

    Samples are generated in chunks, each with its own child seed, and the
    chunk statistics are merged in order, so results depend only on ``seed``.
    """
    if n < 10_000:
        raise DomainError(f"need at least 1e4 samples, got {n}")
    a = _mixing_matrix(p)
    n_chunks = -(-n // _CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)

    count = 0
    mean = np.zeros(5)
    m2 = np.zeros((5, 5))
    for i, child in enumerate(children):
        m = min(_CHUNK, n - i * _CHUNK)
        noise_seed, signal_seed = child.spawn(2)
        noise = sample_noise_pair(p.rho_z, m, noise_seed)
        u = np.random.default_rng(signal_seed).standard_normal((3, m))
        x = u[0]
        x_r = rho_x * u[0] + math.sqrt(max(0.0, 1.0 - rho_x ** 2)) * u[1]
        latents = np.stack([x, x_r, noise.z_r, noise.z, math.sqrt(q.q) * u[2]])
        data = a @ latents

        # Chan et al. pairwise update of mean and scatter
        c_mean = data.mean(axis=1)
        centered = data - c_mean[:, None]
        c_m2 = centered @ centered.T
        delta = c_mean - mean
        total = count + m
        m2 += c_m2 + np.outer(delta, delta) * (count * m / total)
        mean += delta * (m / total)
        count = total

    cov = m2 / (count - 1)
    return EmpiricalCov(5, 0.5 * (cov + cov.T), n_samples=count)


def _logdet(cov: np.ndarray, idx: list[int], ridge: float) -> float:
    if not idx:
        return 0.0
    sub = cov[np.ix_(idx, idx)]
    sign, logdet = np.linalg.slogdet(sub)
    if sign <= 0 or logdet < _LOG_TINY:
        # ridge only on rank-deficient minors; a blanket ridge biases well-posed ones
        sign, logdet = np.linalg.slogdet(sub + ridge * np.eye(len(idx)))
    if sign <= 0 or logdet < _LOG_TINY:
        raise SingularCovarianceError(f"singular principal minor on indices {idx}")
    return float(logdet)


def gaussian_mi_from_cov(cov: EmpiricalCov, set_a: Iterable[int], set_b: Iterable[int],
                         set_cond: Iterable[int] = (), ridge: float = 1e-12) -> float:
    """Conditional mutual information ``I(A; B | C)`` in bits for jointly Gaussian variables.

    I = ½log₂( det Σ_AC det Σ_BC / (det Σ_C det Σ_ABC) ), with det Σ_∅ = 1.
    """
    a, b, c = list(set_a), list(set_b), list(set_cond)
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise DomainError("index sets must be disjoint")
    m = cov.matrix
    nats = 0.5 * (_logdet(m, a + c, ridge) + _logdet(m, b + c, ridge)
                  - _logdet(m, c, ridge) - _logdet(m, a + b + c, ridge))
    return max(0.0, nats / math.log(2.0))


def _rates_from(cov_q: EmpiricalCov, cov_full: EmpiricalCov,
                cov_qc: Optional[EmpiricalCov]) -> MiRates:
    mi = gaussian_mi_from_cov
    r1 = mi(cov_q, [X, XR], [Y]) - mi(cov_q, [YR], [YHAT], [X, XR, Y])
    r2 = mi(cov_q, [X], [Y, YHAT], [XR])
    # rho_x = 1 makes X_R a copy of X, so I(X, X_R; Y) = I(X; Y)
    r_ub1 = mi(cov_full, [X], [Y])
    r_ub2 = mi(cov_q, [X], [Y, YR], [XR])
    r_cf = None if cov_qc is None else mi(cov_qc, [X], [YHAT, Y], [XR])
    return MiRates(r1, r2, r_ub1, r_ub2, r_cf)


def mi_rates(p: ChannelParams, q: Optional[QuantizerChoice] = None,
             n: Optional[int] = None, seed: int = 0) -> MiRates:
    """R1, R2, R_UB1, R_UB2 and R_CF rebuilt from covariance determinants.

    ``q`` defaults to q*. With ``n=None`` the exact covariances are used;
    otherwise each covariance is estimated from ``n`` samples with seeds
    ``seed``, ``seed + 1`` and ``seed + 2``.
    """
    q = q_star(p) if q is None else q
    q_c = cf_quantizer(p) if p.h_rd > 0.0 else None
    if n is None:
        cov_q = analytic_joint_cov(p, q)
        cov_full = analytic_joint_cov(p, q, rho_x=1.0)
        cov_qc = None if q_c is None else analytic_joint_cov(p, q_c)
    else:
        cov_q = simulate_joint(p, q, n, seed)
        cov_full = simulate_joint(p, q, n, seed + 1, rho_x=1.0)
        cov_qc = None if q_c is None else simulate_joint(p, q_c, n, seed + 2)
    return _rates_from(cov_q, cov_full, cov_qc)


def conditional_variance_check(p: ChannelParams, n: int, seed: int) -> tuple[float, float]:
    """Analytic and empirical residual variance of ``h_sr X + Z_R`` given ``h_sd X + Z``."""
    if n < 100_000:
        raise DomainError(f"need at least 1e5 samples, got {n}")
    analytic = ((1.0 - p.rho_z ** 2 + p.h_sr ** 2 + p.h_sd ** 2 - 2.0 * p.rho_z * p.h_sr * p.h_sd)
                / (1.0 + p.h_sd ** 2))
    noise_seed, signal_seed = np.random.SeedSequence(seed).spawn(2)
    noise = sample_noise_pair(p.rho_z, n, noise_seed)
    x = np.random.default_rng(signal_seed).standard_normal(n)
    relay_obs = p.h_sr * x + noise.z_r
    dest_obs = p.h_sd * x + noise.z
    c = np.cov(relay_obs, dest_obs)
    empirical = c[0, 0] - c[0, 1] ** 2 / c[1, 1]
    return float(analytic), float(empirical)
