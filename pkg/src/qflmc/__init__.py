"""Quantized federated Langevin Monte Carlo over a noisy multiple-access channel."""

__version__ = "0.1.0"

from .channel import ChannelConfig, check_power_constraint, server_update, transmit_analog, transmit_digital
from .errors import ConfigurationError, ContractViolation, DivergenceError, InfeasibleError
from .harness import (
    ChainResult,
    ExperimentConfig,
    Scheme,
    Sweep,
    SweepResult,
    compute_mse,
    run_chain,
    run_replications,
    run_sweep,
    solve_gain,
)
from .model import (
    Dataset,
    GaussianDist,
    GradientBound,
    ModelSpec,
    clip_gradient,
    exact_posterior,
    generate_dataset,
    local_gradient,
)
from .power import (
    PowerSolverConfig,
    analog_power_cap,
    digital_power_cap,
    lmc_noise_cap,
    solve_analog_gain,
    solve_digital_gain,
)
from .privacy import (
    PrivacyBudget,
    analog_delta_mc,
    analog_T,
    analog_T_inverse,
    digital_loss_sample,
    estimate_delta_digital,
)
from .quantizer import QuantizerSpec, phi, quantize
