#!/usr/bin/env python3
"""Fit the per-user GP surrogate on environment observations and look at its
predictions, uncertainty, and the likelihood-ascent hyperparameter updates.
"""

import numpy as np

from semalloc import calibrate_default, mean_quality, sample_quality_pair
from semalloc.gp import GPState, InputScaler, log_marginal_likelihood

rng = np.random.default_rng(3)
model = calibrate_default("bdd100k-like")
gp = GPState(InputScaler(model.cr_min, model.cr_max), capacity=20)

print("feeding 20 observations (cr, snr sampled across the operating range):")
for _ in range(20):
    eps = rng.uniform(model.cr_min, model.cr_max)
    snr = rng.uniform(5.0, 28.0)
    _, y = sample_quality_pair(snr, eps, model, rng)
    gp.observe(eps, snr, y)

print("\nposterior vs ground truth at snr = 15 dB:")
print("    cr | predicted (+/- std) | true mean")
for eps in (0.05, 0.10, 0.15, 0.20, 0.30):
    post = gp.predict(eps, 15.0)
    truth = mean_quality(15.0, eps, model)
    print(f"  {eps:.2f} | {post.mean:9.2f} (+/- {np.sqrt(post.variance):4.2f}) "
          f"| {truth:9.2f} dB")

def centered_window(state):
    inputs, targets = state.window.arrays()
    scaled = state.scaler.scale(inputs[:, 0], inputs[:, 1])
    from semalloc.gp import ObservationWindow
    return ObservationWindow.from_arrays(scaled, targets - targets.mean())


print(f"\nlog marginal likelihood before updates: "
      f"{log_marginal_likelihood(centered_window(gp), gp.params):.3f}")
for step in range(5):
    gp.update()
print(f"after 5 update calls (5 ascent steps each): "
      f"{log_marginal_likelihood(centered_window(gp), gp.params):.3f}")
print(f"hyperparameters: psi1 {gp.params.psi1:.3f}, psi2 {gp.params.psi2:.3f}, "
      f"observation noise {gp.params.sigma_obs:.3f} dB")
print("\nupdates never decrease the likelihood: the step size backs off on")
print("any decrease and keeps the old parameters if nothing helps.")
