"""Per-round differential-privacy accounting for the digital and analog uplinks.

Digital: the worst-case privacy loss is sampled by Monte Carlo and ``delta``
is the fraction of samples whose magnitude exceeds ``epsilon``. Analog: the
loss is Gaussian with mean ``x = 2 m A^2 ell^2 / N0`` and variance ``2x``, so
the in-budget probability has a closed form ``T(x)`` in terms of ``erf``.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import erf

from .errors import ConfigurationError, InfeasibleError
from .quantizer import log_phi, log_phi_complement
from .rng import as_generator
from .search import bisect_level

PAPER = "paper"
CORRECTED = "corrected"
MODES = (PAPER, CORRECTED)


@dataclass(frozen=True)
class PrivacyBudget:
    epsilon: float = 5.0
    delta: float = 0.01

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ConfigurationError("must be positive", key="epsilon")
        if not 0 <= self.delta < 1:
            raise ConfigurationError("must lie in [0, 1)", key="delta")


@dataclass(frozen=True)
class LossSampleSet:
    samples: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples.size < 1:
            raise ValueError("need at least one sample")
        if np.any(self.samples < 0):
            raise ValueError("loss magnitudes are nonnegative")

    def exceedance(self, epsilon):
        return DeltaEstimate.from_indicator(self.samples > epsilon)


class DeltaEstimate(NamedTuple):
    delta: float
    stderr: float
    n_mc: int

    @classmethod
    def from_indicator(cls, hits):
        n = hits.size
        d = float(np.count_nonzero(hits)) / n
        return cls(d, math.sqrt(d * (1.0 - d) / n), n)


def digital_loss_cap(m, ell, qspec):
    """Upper bound ``m ln(phi(ell) / phi(-ell))``; equals ``m a ell`` for the sigmoid."""
    return float(m * (log_phi(ell, qspec) - log_phi(-ell, qspec)))


def _branch_loss(x, lp, lq, lp_c, lq_c):
    # sum_i ln[(p e^x + 1 - p) / (q e^x + 1 - q)], evaluated in log space
    num = np.logaddexp(lp + x, lp_c)
    den = np.logaddexp(lq + x, lq_c)
    return np.sum(num - den, axis=-1)


def digital_loss_from_noise(z, a_gain, k_devices, n0, ell, qspec):
    """Worst-case loss magnitude for each row of a noise matrix ``z`` ``(n, m)``.

    Both extremes ``+-A(K-1)`` of the other devices' aggregate are evaluated
    and the larger absolute sum is kept.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    lp, lp_c = log_phi(ell, qspec), log_phi_complement(ell, qspec)
    lq, lq_c = log_phi(-ell, qspec), log_phi_complement(-ell, qspec)
    offset = a_gain * (k_devices - 1)
    scale = 2.0 * a_gain / n0
    plus = _branch_loss(scale * (z + offset), lp, lq, lp_c, lq_c)
    minus = _branch_loss(scale * (z - offset), lp, lq, lp_c, lq_c)
    return np.maximum(np.abs(plus), np.abs(minus))


def digital_noise(n_samples, m, n0, rng):
    """Noise matrix ``z ~ N(0, N0)`` of shape ``(n_samples, m)`` for common random numbers."""
    return as_generator(rng).normal(0.0, math.sqrt(n0), (int(n_samples), int(m)))


def digital_loss_samples(a_gain, k_devices, m, n0, ell, qspec, n_samples, rng, seed=None):
    z = digital_noise(n_samples, m, n0, rng)
    samples = digital_loss_from_noise(z, a_gain, k_devices, n0, ell, qspec)
    meta = dict(A=a_gain, K=k_devices, m=m, N0=n0, ell=ell, a=qspec.a, n_samples=int(n_samples), seed=seed)
    return LossSampleSet(samples, meta)


def digital_loss_sample(a_gain, k_devices, m, n0, ell, qspec, rng):
    """One draw of the worst-case digital loss magnitude."""
    z = digital_noise(1, m, n0, rng)
    return float(digital_loss_from_noise(z, a_gain, k_devices, n0, ell, qspec)[0])


def estimate_delta_digital(a_gain, k_devices, m, n0, ell, qspec, budget, n_mc=100_000, rng=None, noise=None):
    """Fraction of worst-case loss samples above ``epsilon``.

    Pass ``noise`` (an ``(n_mc, m)`` matrix from :func:`digital_noise`) to
    reuse one realization across calls.
    """
    if noise is None:
        if n_mc < 1:
            raise ConfigurationError("need at least one draw", key="n_mc")
        noise = digital_noise(n_mc, m, n0, rng)
    losses = digital_loss_from_noise(noise, a_gain, k_devices, n0, ell, qspec)
    return DeltaEstimate.from_indicator(losses > budget.epsilon)


def analog_T(x, epsilon, mode=PAPER):
    """``erf((eps - x) / (2 sqrt x)) - erf((-eps - x) / (2 sqrt x))``.

    ``mode="corrected"`` halves it, giving ``Pr(|L| <= eps)`` for
    ``L ~ N(x, 2x)``; the unhalved form tends to 2 as ``x -> 0``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("analog_T is defined for x > 0")
    r = 2.0 * np.sqrt(x)
    t = erf((epsilon - x) / r) - erf((-epsilon - x) / r)
    if mode == CORRECTED:
        t = 0.5 * t
    return float(t) if t.ndim == 0 else t


X_MIN = 1e-12


def analog_T_inverse(p, epsilon, mode=PAPER, tol=1e-10):
    """``x`` with ``|T(x) - p| <= tol``; ``T`` is decreasing in ``x``."""
    t_max = analog_T(X_MIN, epsilon, mode)
    if not 0 < p < t_max:
        raise InfeasibleError(f"p={p} outside the attained range (0, {t_max}) of T in {mode} mode")
    hi = 1.0
    while analog_T(hi, epsilon, mode) > p:
        hi *= 2.0
        if hi > 1e300:
            raise InfeasibleError(f"no bracket found for p={p}")
    return bisect_level(lambda x: analog_T(x, epsilon, mode), p, X_MIN, hi, ftol=tol, xtol=0.0, max_iter=2000)


def analog_loss_mean(a_gain, m, n0, ell):
    """Mean ``2 m A^2 ell^2 / N0`` of the worst-case analog loss (variance is twice this)."""
    return 2.0 * m * a_gain**2 * ell**2 / n0


def analog_delta_mc(a_gain, m, n0, ell, epsilon, n_mc=100_000, rng=None):
    """Monte Carlo ``Pr(|L| > eps)`` for ``L = sum_i (2 z_i A D + (A D)^2) / (2 N0)``, ``D = 2 ell``."""
    z = as_generator(rng).normal(0.0, math.sqrt(n0), (int(n_mc), int(m)))
    ad = a_gain * 2.0 * ell
    loss = np.sum(2.0 * z * ad + ad**2, axis=1) / (2.0 * n0)
    return DeltaEstimate.from_indicator(np.abs(loss) > epsilon)
