"""BPSK over first-order Gauss-Markov noise: sampling and log-likelihoods.

Noise recursion: N_1 = sigma*Z_1, N_i = rho*N_{i-1} + sqrt(1-rho^2)*sigma*Z_i
with i.i.d. standard normal Z, so the process is stationary with
Cov(N_i, N_j) = sigma^2 * rho^|i-j|. All likelihoods are true log-densities
(the Jacobian constants of the chain factorization are included).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ChannelModel:
    sigma: float
    rho: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not -1 < self.rho < 1:
            raise ValueError(f"rho must be in (-1, 1), got {self.rho}")


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    """Noise std for unit-energy BPSK: Es = R*Eb, N0 = 2*sigma^2."""
    if not 0 < rate <= 1:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample_noise(n: int, model: ChannelModel, rng) -> np.ndarray:
    """Draw n samples of the Gauss-Markov process from a seeded generator."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = _as_rng(rng).standard_normal(n)
    w = model.sigma * math.sqrt(1.0 - model.rho ** 2) * z
    w[0] = model.sigma * z[0]
    # AR(1) filter: N_i = rho*N_{i-1} + w_i
    return lfilter([1.0], [1.0, -model.rho], w)


def modulate(x) -> np.ndarray:
    """BPSK: bit 0 -> +1, bit 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(x, dtype=np.float64)


def transmit(x, model: ChannelModel, rng, noise=None) -> np.ndarray:
    """Modulated codeword plus channel noise.

    `noise` overrides the sampled noise vector (test hook for noiseless
    or scripted realizations).
    """
    s = modulate(x)
    if noise is None:
        noise = sample_noise(len(s), model, rng)
    return s + np.asarray(noise, dtype=np.float64)


def loglik_chain(y, x, model: ChannelModel) -> float:
    """Exact log f(y | x) under the full Gauss-Markov covariance.

    Uses the chain factorization of the noise residual z = y - (1-2x):
    z_1 ~ N(0, sigma^2), z_i | z_{i-1} ~ N(rho*z_{i-1}, (1-rho^2)*sigma^2).
    """
    y = np.asarray(y, dtype=np.float64)
    z = y - modulate(x)
    if z.shape != y.shape or y.ndim != 1 or len(y) < 1:
        raise ValueError("y and x must be equal-length 1-D sequences")
    s2 = model.sigma ** 2
    ll = -0.5 * (LOG_2PI + math.log(s2)) - z[0] * z[0] / (2.0 * s2)
    m = len(z)
    if m > 1:
        v = s2 * (1.0 - model.rho ** 2)
        d = z[1:] - model.rho * z[:-1]
        ll += -0.5 * (m - 1) * (LOG_2PI + math.log(v)) - float(d @ d) / (2.0 * v)
    return float(ll)


def loglik_block(y_blk, x_blk, model: ChannelModel) -> float:
    """Log-density of one block under the stationary within-block marginal.

    Stationarity makes the chain started inside the block exact, so this
    is loglik_chain evaluated on the block in isolation (covariance
    sigma^2 * rho^|u-v|).
    """
    return loglik_chain(y_blk, x_blk, model)
