"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with the measured values. The end-to-end criteria run the
full default experiment (4 users, 900 slots) once and share the results.
"""

import dataclasses
import math
import time

import numpy as np
import pytest

from semalloc.acquisition import (confidence_to_beta, sample_candidates,
                                  score_candidates, select_cr)
from semalloc.config import default_config
from semalloc.gp import GPHyperParams, ObservationWindow, PosteriorSolver, \
    log_marginal_likelihood, mll_gradient
from semalloc.harness import (records_to_csv_lines, run_simulation, sweep,
                              _config_with_n_users)
from semalloc.rates import allocate_rates
from tests.test_acquisition import phi, seeded_gp, single_user_config
from tests.test_gp import dense_posterior, random_params, random_window
from tests.test_rates import solve_rates_numerically

ALL_POLICIES = ("proposed", "psnr_max", "latency_min", "psnr_feasible")


def report(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def bench():
    """Full default benchmark, shared across the end-to-end criteria."""
    cfg = default_config()
    t0 = time.perf_counter()
    out = {tag: run_simulation(cfg, tag)[1] for tag in ALL_POLICIES}
    return cfg, out, time.perf_counter() - t0


def test_gp_posterior_matches_dense_reference():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        p = random_params(rng)
        inputs, targets = random_window(rng)
        w = ObservationWindow.from_arrays(inputs, targets)
        solver = PosteriorSolver(w, p)
        v_star = rng.uniform(-0.2, 1.2, 2)
        mean, var = solver.mean_var(np.array([v_star]))
        mean_ref, var_ref = dense_posterior(inputs, targets, p, v_star)
        worst = max(worst,
                    abs(mean[0] - mean_ref) / max(1.0, abs(mean_ref)),
                    abs(var[0] - max(var_ref, 0.0)) / max(1.0, abs(var_ref)))
    elapsed = time.perf_counter() - t0
    report("gp-posterior-dense-reference",
           worst < 1e-10 and elapsed < 1.0,
           f"max rel err {worst:.2e}, {elapsed:.2f}s")


def test_gp_gradient_matches_finite_differences():
    rng = np.random.default_rng(99)
    h = 1e-5
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        p = random_params(rng)
        inputs, targets = random_window(rng)
        targets = targets - targets.mean()
        w = ObservationWindow.from_arrays(inputs, targets)
        grad = mll_gradient(w, p)
        for idx, name in enumerate(("psi1", "psi2", "sigma_obs")):
            plus = GPHyperParams(**{**p.__dict__, name: getattr(p, name) + h})
            minus = GPHyperParams(**{**p.__dict__, name: getattr(p, name) - h})
            fd = (log_marginal_likelihood(w, plus)
                  - log_marginal_likelihood(w, minus)) / (2 * h)
            worst = max(worst, abs(grad[idx] - fd) / max(abs(fd), 1e-6))
    elapsed = time.perf_counter() - t0
    report("gp-gradient-finite-differences",
           worst < 1e-5 and elapsed < 1.0,
           f"max rel err {worst:.2e}, {elapsed:.2f}s")


def test_allocator_matches_convex_solver():
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    worst_rate = 0.0
    worst_budget = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        eps = rng.uniform(0.05, 0.9, n)
        dims = rng.integers(10, 5000, n)
        total = rng.uniform(0.5, 5.0)
        alloc = allocate_rates(eps, dims, total)
        numeric = solve_rates_numerically(eps * dims, total)
        worst_rate = max(worst_rate,
                         float(np.max(np.abs(np.array(alloc.rates) - numeric) / numeric)))
        worst_budget = max(worst_budget, abs(sum(alloc.rates) - total) / total)
    elapsed = time.perf_counter() - t0
    report("allocator-convex-solver",
           worst_rate < 1e-6 and worst_budget < 1e-9 and elapsed < 5.0,
           f"max rate rel err {worst_rate:.2e}, budget err {worst_budget:.2e}, {elapsed:.2f}s")


def test_latency_anchors():
    hi = allocate_rates([0.3] * 4, [786432] * 4, 400e6, bits_per_symbol=64)
    lo = allocate_rates([1.0 / 30.0] * 4, [786432] * 4, 400e6, bits_per_symbol=64)
    hi_ms = hi.avg_latency * 1000
    lo_ms = lo.avg_latency * 1000
    ratio = hi.avg_latency / lo.avg_latency
    ok = (abs(hi_ms - 150.99) <= 0.01 and abs(lo_ms - 16.78) <= 0.01
          and abs(ratio - 9.0) <= 0.01)
    report("latency-anchors", ok,
           f"max-cr {hi_ms:.4f} ms, min-cr {lo_ms:.4f} ms, ratio {ratio:.4f}")


def test_constraint_transform_equivalence():
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    mismatches = 0
    checked = 0
    for _ in range(1000):
        mu = rng.uniform(-10, 50)
        sigma = rng.uniform(1e-3, 5)
        q = rng.uniform(-10, 50)
        c = rng.uniform(0.01, 0.99)
        prob = 1.0 - phi((q - mu) / sigma)
        if abs(prob - c) <= 1e-7:
            continue
        checked += 1
        det = mu - confidence_to_beta(c) * sigma >= q
        if det != (prob >= c):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    report("constraint-transform-equivalence",
           mismatches == 0 and checked > 900 and elapsed < 1.0,
           f"{checked} informative tuples, {mismatches} mismatches, {elapsed:.2f}s")


def test_acquisition_tracks_grid_argmax():
    rng = np.random.default_rng(5150)
    cfg = single_user_config()
    gp = seeded_gp(cfg, rng)
    user = cfg.users[0]
    t0 = time.perf_counter()
    grid = np.linspace(user.cr_min, user.cr_max, 10000)[:, None]
    gobj, gslack = score_candidates([gp], [15.0], cfg, grid)
    feas = gslack[:, 0] >= 0
    grid_best = gobj[feas].max()
    gaps = np.array([
        grid_best - select_cr([gp], [15.0], cfg,
                              np.random.default_rng(seed), m=10000).best_surrogate_objective
        for seed in range(50)
    ])
    p99 = float(np.percentile(gaps, 99))
    spread = float(gobj.max() - gobj.min())
    # holdout seed outside the measurement set must land within the measured
    # tolerance (grid resolution slack covers the gap's sign wobble)
    holdout = grid_best - select_cr([gp], [15.0], cfg, np.random.default_rng(10_000),
                                    m=10000).best_surrogate_objective
    elapsed = time.perf_counter() - t0
    ok = (np.mean(gaps <= p99 + 1e-12) >= 0.98
          and p99 <= 0.02 * spread
          and holdout <= max(3 * abs(p99), 1e-5 * spread)
          and elapsed < 30.0)
    report("acquisition-grid-argmax", ok,
           f"p99 gap {p99:.3e}, holdout gap {holdout:.3e}, objective spread {spread:.3f}, {elapsed:.1f}s")


def test_end_to_end_statistical_reproduction(bench):
    cfg, out, elapsed = bench
    prop, pmax, lmin = out["proposed"], out["psnr_max"], out["latency_min"]
    feas = out["psnr_feasible"]

    sat_ok = (prop.avg_satisfaction_pct >= 95.0
              and min(prop.satisfaction_pct) >= 90.0)
    lat_ok = prop.avg_latency_ms <= 0.60 * pmax.avg_latency_ms
    obj_ok = all(prop.total_objective > out[t].total_objective
                 for t in ("psnr_max", "latency_min", "psnr_feasible"))
    lmin_ok = lmin.avg_satisfaction_pct < 80.0
    time_ok = elapsed < 300.0

    detail = (f"sat avg {prop.avg_satisfaction_pct:.2f}% (min user "
              f"{min(prop.satisfaction_pct):.2f}%), latency {prop.avg_latency_ms:.1f} "
              f"vs max-cr {pmax.avg_latency_ms:.1f} ms "
              f"({100 * prop.avg_latency_ms / pmax.avg_latency_ms:.0f}%), "
              f"objectives p/m/l/f {prop.total_objective:.2f}/"
              f"{pmax.total_objective:.2f}/{lmin.total_objective:.2f}/"
              f"{feas.total_objective:.2f}, min-cr sat {lmin.avg_satisfaction_pct:.2f}%, "
              f"{elapsed:.0f}s")
    report("end-to-end-reproduction",
           sat_ok and lat_ok and obj_ok and lmin_ok and time_ok, detail)


def test_alpha_sweep_direction():
    cfg = default_config()
    values = [5.0, 25.0, 50.0, 250.0, 500.0]
    results = sweep(cfg, "alpha", values)
    lats = [s.avg_latency_ms for _, s in results]
    psnrs = [s.avg_psnr_db for _, s in results]
    lat_mono = all(b <= a - 1.0 for a, b in zip(lats, lats[1:]))
    psnr_mono = all(b <= a + 1e-9 for a, b in zip(psnrs, psnrs[1:]))
    report("alpha-sweep-direction", lat_mono and psnr_mono,
           "latency " + "/".join(f"{v:.1f}" for v in lats)
           + " ms, psnr " + "/".join(f"{v:.2f}" for v in psnrs) + " dB")


def test_scalability(bench):
    cfg, out, _ = bench
    base_sat = out["proposed"].avg_satisfaction_pct
    results = sweep(cfg, "n_users", [8, 12])
    sats = {n: s.avg_satisfaction_pct for (n, s) in results}
    sat_ok = all(abs(sats[n] - base_sat) <= 3.0 for n in (8, 12))

    probe = dataclasses.replace(_config_with_n_users(cfg, 20), slots=60)
    _, s20 = run_simulation(probe, "proposed")
    timing_ok = s20.inference_ms_mean < 50.0
    report("scalability", sat_ok and timing_ok,
           f"sat N=4/8/12: {base_sat:.2f}/{sats[8]:.2f}/{sats[12]:.2f}%, "
           f"N=20 inference {s20.inference_ms_mean:.1f} ms/slot")


def test_determinism_byte_identical():
    cfg = dataclasses.replace(default_config(), slots=150)
    lines = [records_to_csv_lines(run_simulation(cfg, "proposed")[0])
             for _ in range(2)]
    ok = lines[0] == lines[1]
    report("determinism", ok, f"{len(lines[0])} csv lines compared")
