# %% [markdown]
# # Per-round privacy accounting
#
# Digital: the worst-case loss is bounded by `m a ell` whatever the SNR.
# Analog: the loss is Gaussian, so the in-budget probability is an erf
# expression whose inverse sets the DP power cap.

# %%
import numpy as np

from qflmc.privacy import (
    PrivacyBudget,
    analog_delta_mc,
    analog_loss_mean,
    analog_T,
    analog_T_inverse,
    digital_loss_cap,
    digital_loss_samples,
    estimate_delta_digital,
)
from qflmc.quantizer import QuantizerSpec

q = QuantizerSpec(0.05)
print("digital cap m*a*ell =", digital_loss_cap(5, 30.0, q))
rng = np.random.default_rng(0)
for A in (0.01, 0.0643, 0.5, 5.0):
    s = digital_loss_samples(A, 20, 5, 1.0, 30.0, q, 100_000, rng).samples
    d = estimate_delta_digital(A, 20, 5, 1.0, 30.0, q, PrivacyBudget(5.0, 0.01), 100_000, rng)
    print(f"A={A:<7} max loss={s.max():.3f}  delta_hat(eps=5)={d.delta:.4f}")

# %% [markdown]
# `T` as printed tends to 2 for small `x`; halving it gives the exact Gaussian
# probability, which the Monte Carlo estimate confirms.

# %%
for A in (0.005, 0.01, 0.02):
    x = analog_loss_mean(A, 5, 1.0, 30.0)
    mc = analog_delta_mc(A, 5, 1.0, 30.0, 5.0, 200_000, rng)
    print(f"A={A}: x={x:.3f}  1-T_corrected={1 - analog_T(x, 5.0, 'corrected'):.4f}  MC={mc.delta:.4f}")

for mode in ("paper", "corrected"):
    print(mode, "T^-1(0.99), eps=5:", analog_T_inverse(0.99, 5.0, mode))
