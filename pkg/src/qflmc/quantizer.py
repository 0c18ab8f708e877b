"""One-bit stochastic quantization of gradient entries."""

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import ConfigurationError
from .rng import as_generator


class Family(str, enum.Enum):
    SIGMOID = "sigmoid"


@dataclass(frozen=True)
class QuantizerSpec:
    a: float = 0.05
    family: Family = Family.SIGMOID

    def __post_init__(self):
        try:
            object.__setattr__(self, "family", Family(self.family))
        except ValueError:
            raise ConfigurationError(f"unknown family {self.family!r}", key="family") from None
        if not self.a > 0:
            raise ConfigurationError("sharpness must be positive", key="a")


def phi(x, spec):
    """Probability of emitting +1, ``1 / (1 + exp(-a x))`` for the sigmoid family."""
    if spec.family is Family.SIGMOID:
        return expit(spec.a * np.asarray(x, dtype=float))
    raise NotImplementedError(spec.family)


def log_phi(x, spec):
    """``log phi(x)``, accurate where ``phi`` underflows."""
    if spec.family is Family.SIGMOID:
        return -np.logaddexp(0.0, -spec.a * np.asarray(x, dtype=float))
    raise NotImplementedError(spec.family)


def quantize_with_uniforms(g, uniforms, spec):
    """Deterministic core of :func:`quantize`: ``+1`` where ``u < phi(g)``."""
    return np.where(np.asarray(uniforms) < phi(g, spec), 1.0, -1.0)


def quantize(g, spec, rng):
    """Map each entry to ``+1`` w.p. ``phi(g_i)`` and ``-1`` otherwise.

    Consumes exactly one uniform per entry, in C order.
    """
    g = np.asarray(g, dtype=float)
    u = as_generator(rng).random(g.shape)
    return quantize_with_uniforms(g, u, spec)


def log_phi_complement(x, spec):
    """``log(1 - phi(x))``; for the sigmoid this is ``log phi(-x)``."""
    if spec.family is Family.SIGMOID:
        return log_phi(-np.asarray(x, dtype=float), spec)
    raise NotImplementedError(spec.family)
