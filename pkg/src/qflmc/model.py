"""Bayesian linear regression with a standard normal prior.

The likelihood is ``v = theta^T u + w`` with ``w ~ N(0, 1)`` and
``theta ~ N(0, I_m)``; the data are split across ``K`` devices, each of which
owns a local cost carrying ``1/K`` of the prior.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import ConfigurationError
from .rng import as_generator

THETA_STAR = (0.418, -0.289, 0.3982, 0.8231, 0.5251)


def even_partition(n_total, K):
    """Split ``n_total`` items over ``K`` devices as evenly as possible."""
    base, extra = divmod(int(n_total), int(K))
    return tuple(base + (1 if k < extra else 0) for k in range(K))


@dataclass(frozen=True)
class ModelSpec:
    m: int = 5
    theta_star: tuple = THETA_STAR
    n_total: int = 1200
    K: int = 20
    partition_sizes: tuple = None

    def __post_init__(self):
        theta = tuple(float(t) for t in self.theta_star)
        object.__setattr__(self, "theta_star", theta)
        if self.partition_sizes is None and self.K >= 1:
            object.__setattr__(self, "partition_sizes", even_partition(self.n_total, self.K))
        elif self.partition_sizes is not None:
            object.__setattr__(self, "partition_sizes", tuple(int(p) for p in self.partition_sizes))
        self.validate()

    def validate(self):
        if self.m < 1:
            raise ConfigurationError("dimension must be >= 1", key="m")
        if self.K < 1:
            raise ConfigurationError("device count must be >= 1", key="K")
        if self.n_total < 0:
            raise ConfigurationError("sample count must be >= 0", key="n_total")
        if len(self.theta_star) != self.m:
            raise ConfigurationError(
                f"length {len(self.theta_star)} does not match m={self.m}", key="theta_star"
            )
        sizes = self.partition_sizes
        if len(sizes) != self.K or any(p < 0 for p in sizes) or sum(sizes) != self.n_total:
            raise ConfigurationError(
                f"{sizes} must have K={self.K} nonnegative entries summing to {self.n_total}",
                key="partition_sizes",
            )


@dataclass(frozen=True)
class Dataset:
    """Inputs are stored column-wise (``m x N``); ``ownership[n]`` is 0-based."""

    inputs: np.ndarray
    labels: np.ndarray
    ownership: np.ndarray
    K: int

    def __post_init__(self):
        if self.inputs.ndim != 2 or self.inputs.shape[1] != self.labels.shape[0]:
            raise ConfigurationError("inputs must be m x N with N labels", key="inputs")
        if self.ownership.shape != self.labels.shape:
            raise ConfigurationError("one owner per column required", key="ownership")
        if self.ownership.size and (self.ownership.min() < 0 or self.ownership.max() >= self.K):
            raise ConfigurationError("owner index out of range", key="ownership")

    @property
    def m(self):
        return self.inputs.shape[0]

    @property
    def n(self):
        return self.inputs.shape[1]

    def device(self, k):
        """Return ``(U_k, v_k)`` for device ``k``."""
        if not 0 <= k < self.K:
            raise ConfigurationError(f"device index {k} not in [0, {self.K})", key="device")
        mask = self.ownership == k
        return self.inputs[:, mask], self.labels[mask]


@dataclass(frozen=True)
class GaussianDist:
    mean: np.ndarray
    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (self.mean.size, self.mean.size):
            raise ValueError("covariance shape does not match mean")
        if not np.allclose(cov, cov.T, atol=1e-12, rtol=0):
            raise ValueError("covariance is not symmetric")
        if np.linalg.eigvalsh(cov).min() <= 0:
            raise ValueError("covariance is not positive definite")

    @classmethod
    def standard(cls, m):
        return cls(np.zeros(m), np.eye(m))

    def sample(self, rng, size=None):
        return as_generator(rng).multivariate_normal(self.mean, self.cov, size=size, method="cholesky")


@dataclass(frozen=True)
class GradientBound:
    ell: float = 30.0

    def __post_init__(self):
        if not self.ell > 0:
            raise ConfigurationError("gradient bound must be positive", key="ell")


def generate_dataset(spec, rng):
    """Draw ``u_n ~ N(0, I_m)`` and ``v_n = theta*^T u_n + N(0, 1)``.

    Columns are assigned to devices in contiguous blocks of ``partition_sizes``.
    """
    spec.validate()
    rng = as_generator(rng)
    U = rng.standard_normal((spec.m, spec.n_total))
    v = np.asarray(spec.theta_star) @ U + rng.standard_normal(spec.n_total)
    owners = np.repeat(np.arange(spec.K), spec.partition_sizes)
    return Dataset(U, v, owners, spec.K)


def exact_posterior(data):
    """Closed-form posterior ``N((UU^T + I)^-1 U v, (UU^T + I)^-1)``."""
    U, v = data.inputs, data.labels
    precision = U @ U.T + np.eye(data.m)
    factor = linalg.cho_factor(precision, lower=True)
    mean = linalg.cho_solve(factor, U @ v)
    cov = linalg.cho_solve(factor, np.eye(data.m))
    # symmetrize away round-off from the triangular solves
    return GaussianDist(mean, 0.5 * (cov + cov.T))


def local_cost(theta, data, device, K):
    """Local cost ``-log p(D_k|theta) - (1/K) log p(theta)`` up to constants."""
    U, v = data.device(device)
    theta = np.asarray(theta, dtype=float)
    r = theta @ U - v
    return 0.5 * r @ r + 0.5 * theta @ theta / K


def local_gradient(theta, data, device, K):
    U, v = data.device(device)
    theta = np.asarray(theta, dtype=float)
    return U @ (theta @ U - v) + theta / K


def global_gradient(theta, data):
    theta = np.asarray(theta, dtype=float)
    U, v = data.inputs, data.labels
    return U @ (theta @ U - v) + theta


def device_statistics(data):
    """Per-device Gram matrices ``U_k U_k^T`` (K, m, m) and ``U_k v_k`` (K, m).

    ``local_gradient(theta, data, k, K) == grams[k] @ theta - moments[k] + theta / K``.
    """
    m, K = data.m, data.K
    grams = np.zeros((K, m, m))
    moments = np.zeros((K, m))
    for k in range(K):
        U, v = data.device(k)
        grams[k] = U @ U.T
        moments[k] = U @ v
    return grams, moments


def clip_gradient(g, bound):
    """Entrywise ``min(1, ell/|g_i|) * g_i``."""
    ell = bound.ell if isinstance(bound, GradientBound) else float(bound)
    return np.clip(np.asarray(g, dtype=float), -ell, ell)
