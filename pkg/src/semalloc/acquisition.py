"""Constrained Monte-Carlo acquisition for the joint compression-ratio pick.

Each user's probabilistic quality constraint P(Q >= q_min_eff) >= c is turned
into the deterministic surrogate constraint mu - beta * sigma >= q_min_eff
with beta the standard-normal quantile of c. Candidates are scored by the
sum of posterior means minus the closed-form latency penalty; the feasible
candidate with the best score wins, ties broken by lowest index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .gp import GPState
from .rates import latency_penalty_batch
from .types import SystemConfig


class EmptyCandidateSet(ValueError):
    """Acquisition invoked with zero Monte-Carlo samples."""


@dataclass(frozen=True)
class AcquisitionResult:
    cr: tuple[float, ...]
    feasible: bool
    evaluated: int
    best_surrogate_objective: float


def confidence_to_beta(c: float) -> float:
    """Standard-normal quantile of the confidence level."""
    if not (0 < c < 1):
        raise ValueError("confidence must lie in (0, 1)")
    return float(ndtri(c))


def constraint_satisfied(post, q_min_eff: float, beta: float) -> bool:
    """Deterministic form of the probabilistic quality constraint."""
    if post.variance < 0:
        raise ValueError("posterior variance must be nonnegative")
    return post.mean - beta * np.sqrt(post.variance) >= q_min_eff


def sample_candidates(cr_lo, cr_hi, m: int, rng: np.random.Generator) -> np.ndarray:
    """(m, n_users) candidate matrix, each entry uniform on its user's range."""
    if m < 1:
        raise ValueError("need at least one candidate")
    cr_lo = np.asarray(cr_lo, dtype=float)
    cr_hi = np.asarray(cr_hi, dtype=float)
    return rng.uniform(cr_lo, cr_hi, size=(m, len(cr_lo)))


def score_candidates(gps: list[GPState], snr_db, cfg: SystemConfig,
                     eps_matrix: np.ndarray):
    """Surrogate objective and per-user constraint slack for each candidate.

    Returns (objective (M,), slack (M, N)); slack_n = mu_n - beta_n sigma_n
    - q_min_eff_n. One factorization per user, reused for all candidates.
    """
    eps_matrix = np.asarray(eps_matrix, dtype=float)
    m = eps_matrix.shape[0]
    n = len(cfg.users)
    mu = np.empty((m, n))
    slack = np.empty((m, n))
    for i, (gp, profile) in enumerate(zip(gps, cfg.users)):
        solver = gp.solver()
        star = gp.scaler.scale(eps_matrix[:, i], snr_db[i])
        mean, var = solver.mean_var_cr_slice(star[:, 0], float(star[0, 1]))
        beta = confidence_to_beta(profile.confidence)
        mu[:, i] = mean
        slack[:, i] = mean - beta * np.sqrt(var) - profile.q_min_eff
    dims = [u.source_dim for u in cfg.users]
    penalty = latency_penalty_batch(eps_matrix, dims, cfg.total_rate,
                                    cfg.bits_per_symbol, cfg.alpha)
    return mu.sum(axis=1) - penalty, slack


def select_cr(gps: list[GPState], snr_db, cfg: SystemConfig,
              rng: np.random.Generator, m: int | None = None) -> AcquisitionResult:
    """Pick the joint CR vector maximizing the surrogate objective over M
    uniform candidates, subject to every user's constraint slack.

    When no candidate is feasible the least-violating one (maximum of the
    minimum slack) is returned with feasible=False, keeping the controller
    total.
    """
    m = cfg.mc_samples if m is None else m
    if m == 0:
        raise EmptyCandidateSet("mc_samples must be at least 1")
    cr_lo = np.array([u.cr_min for u in cfg.users])
    cr_hi = np.array([u.cr_max for u in cfg.users])
    candidates = sample_candidates(cr_lo, cr_hi, m, rng)
    objective, slack = score_candidates(gps, snr_db, cfg, candidates)
    feasible_mask = np.all(slack >= 0.0, axis=1)
    if feasible_mask.any():
        masked = np.where(feasible_mask, objective, -np.inf)
        idx = int(np.argmax(masked))
        feasible = True
    else:
        idx = int(np.argmax(slack.min(axis=1)))
        feasible = False
    return AcquisitionResult(cr=tuple(candidates[idx].tolist()), feasible=feasible,
                             evaluated=m, best_surrogate_objective=float(objective[idx]))
