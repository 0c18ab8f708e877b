# %% [markdown]
# # Bayesian linear regression and centralized Langevin Monte Carlo
#
# Generate the synthetic regression data, compute the closed-form posterior and
# check that an exact LMC chain settles around its mean.

# %%
import numpy as np

from qflmc.harness import ExperimentConfig, batch_means_stderr, run_chain
from qflmc.model import ModelSpec, exact_posterior, generate_dataset

spec = ModelSpec()  # m=5, N=1200, K=20 devices with 60 points each
data = generate_dataset(spec, np.random.default_rng(0))
post = exact_posterior(data)
print("theta*        ", np.round(spec.theta_star, 4))
print("posterior mean", np.round(post.mean, 4))
print("trace(cov)    ", np.trace(post.cov))

# %% [markdown]
# A long chain with a small step: the post-burn-in average should sit within a
# few batch-means standard errors of the posterior mean.

# %%
cfg = ExperimentConfig(scheme="centralized_lmc", eta=1e-3, s_total=5000, s_burnin=1000)
res = run_chain(cfg, data, post, None, np.random.default_rng(1))
se = batch_means_stderr(res.samples)
print("z-scores", np.round((res.samples.mean(axis=0) - post.mean) / se, 2))
print("MSE     ", res.mse)
