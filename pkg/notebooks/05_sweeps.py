# %% [markdown]
# # MSE sweeps over SNR, privacy level and quantizer sharpness
#
# Small replication counts keep this quick; the CLI runs the same sweeps at
# scale (`qflmc sweep-snr --grid ... --replications 200`).

# %%
import os
import sys

from qflmc.channel import ChannelConfig
from qflmc.harness import ExperimentConfig, Sweep, run_sweep
from qflmc.report import format_csv

reps = int(os.environ.get("QFLMC_REPS", "20"))

snr = run_sweep(ExperimentConfig(replications=reps, sweep=Sweep("snr_db", (10.0, 17.5, 25.0))),
                schemes=["digital", "analog", "centralized_lmc"])
sys.stdout.write(format_csv(snr))

# %%
eps = run_sweep(
    ExperimentConfig(replications=reps, channel=ChannelConfig.from_snr_db(25.0), sweep=Sweep("epsilon", (1.0, 5.0, 15.0))),
    schemes=["digital", "analog"],
)
sys.stdout.write(format_csv(eps))

# %%
quant = run_sweep(ExperimentConfig(scheme="digital", replications=reps, sweep=Sweep("a", (0.01, 0.05, 0.2))))
sys.stdout.write(format_csv(quant))
