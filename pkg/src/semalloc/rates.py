"""Closed-form transmission-rate allocation and the latency terms built on it.

For fixed compression ratios the rate subproblem (minimize the average
transmission time under a total-rate budget) is convex with an exact
solution: each user's rate is proportional to the square root of its
transmitted feature dimension, and the budget is tight at the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import feature_length

# Guards the square root in degenerate configs; unreachable under valid cr_min.
_EPS_FLOOR = 1e-9


@dataclass(frozen=True)
class RateAllocation:
    rates: tuple[float, ...]
    latencies: tuple[float, ...]
    avg_latency: float


def _sqrt_loads(eps, source_dims) -> np.ndarray:
    eps = np.maximum(np.asarray(eps, dtype=float), _EPS_FLOOR)
    dims = np.asarray(source_dims, dtype=float)
    return np.sqrt(eps * dims)


def allocate_rates(eps, source_dims, total_rate: float,
                   bits_per_symbol: int = 64) -> RateAllocation:
    """Optimal split of the rate budget for the given per-user ratios.

    Rates use the continuous load eps * L_s; latencies use the ceiled symbol
    count actually transmitted.
    """
    eps = np.asarray(eps, dtype=float)
    source_dims = np.asarray(source_dims, dtype=int)
    if eps.shape != source_dims.shape or eps.ndim != 1:
        raise ValueError("eps and source_dims must be equal-length vectors")
    if np.any(eps <= 0):
        raise ValueError("all compression ratios must be positive")
    if np.any(source_dims < 1):
        raise ValueError("source dimensions must be positive integers")
    if total_rate <= 0:
        raise ValueError("total_rate must be positive")
    roots = _sqrt_loads(eps, source_dims)
    rates = total_rate * roots / roots.sum()
    symbols = np.array([feature_length(e, int(d)) for e, d in zip(eps, source_dims)])
    latencies = bits_per_symbol * symbols / rates
    return RateAllocation(rates=tuple(rates.tolist()),
                          latencies=tuple(latencies.tolist()),
                          avg_latency=float(latencies.mean()))


def latency_term(eps, source_dims, total_rate: float, bits_per_symbol: int,
                 n_users: int, alpha: float) -> float:
    """Objective latency penalty after substituting the optimal rates:
    alpha * (B / (N R)) * (sum_n sqrt(eps_n L_n))^2, continuous loads."""
    if total_rate <= 0:
        raise ValueError("total_rate must be positive")
    eps = np.asarray(eps, dtype=float)
    if np.any(eps <= 0):
        raise ValueError("all compression ratios must be positive")
    roots = _sqrt_loads(eps, source_dims)
    return float(alpha * bits_per_symbol / (n_users * total_rate) * roots.sum() ** 2)


def latency_penalty_batch(eps_matrix: np.ndarray, source_dims, total_rate: float,
                          bits_per_symbol: int, alpha: float) -> np.ndarray:
    """latency_term evaluated for every row of an (M, N) candidate matrix."""
    eps_matrix = np.asarray(eps_matrix, dtype=float)
    dims = np.asarray(source_dims, dtype=float)
    roots = np.sqrt(np.maximum(eps_matrix, _EPS_FLOOR) * dims)
    n_users = eps_matrix.shape[1]
    return alpha * bits_per_symbol / (n_users * total_rate) * roots.sum(axis=1) ** 2
