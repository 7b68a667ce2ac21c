"""Shared domain types and unit conventions.

Conventions used everywhere: rates in bits/second, latency in seconds
(formatted as ms only at output edges), SNR in dB at module boundaries,
reconstruction quality (PSNR) in dB. The slot duration is 1 s, so a total
rate of 400e6 bit/s equals the 400 Mb per slot budget. Each complex feature
symbol costs ``bits_per_symbol`` bits (64 = two 32-bit components).

All types here are frozen value objects; per-user sequences are tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .channel import ChannelParams, Trajectory
from .environment import QualityModel


@dataclass(frozen=True)
class UserProfile:
    user_id: int
    source_dim: int
    cr_min: float
    cr_max: float
    q_min: float
    confidence: float
    safety_margin: float
    trajectory: Trajectory
    quality_model: QualityModel

    def __post_init__(self):
        if self.source_dim < 1:
            raise ValueError("source_dim must be a positive integer")
        if not (0 < self.cr_min < self.cr_max <= 1):
            raise ValueError("require 0 < cr_min < cr_max <= 1")
        if not (0 < self.confidence < 1):
            raise ValueError("confidence must lie in (0, 1)")
        if self.safety_margin < 0:
            raise ValueError("safety_margin must be nonnegative")

    @property
    def q_min_eff(self) -> float:
        """Quality floor enforced during optimization (constraint + margin)."""
        return self.q_min + self.safety_margin


@dataclass(frozen=True)
class SystemConfig:
    users: tuple[UserProfile, ...]
    total_rate: float = 400e6
    bits_per_symbol: int = 64
    alpha: float = 200.0
    window_size: int = 20
    update_interval: int = 20
    mc_samples: int = 10000
    learning_rate: float = 0.05
    slots: int = 900
    seed: int = 0
    channel: ChannelParams = field(default_factory=ChannelParams)
    # Median unit-fade SNR target for the per-user noise calibration. 20 dB
    # keeps the operating range inside the quality model's trained [0, 30] dB
    # while leaving the exponential fading tail rare enough that deep-fade
    # quality outliers do not dominate the GP windows.
    snr_median_db: float = 20.0

    def __post_init__(self):
        if not self.users:
            raise ValueError("config needs at least one user")
        if self.total_rate <= 0:
            raise ValueError("total_rate must be positive")
        if self.bits_per_symbol < 1:
            raise ValueError("bits_per_symbol must be a positive integer")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.window_size < 2:
            raise ValueError("window_size must be at least 2")
        if self.update_interval < 1:
            raise ValueError("update_interval must be at least 1")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be at least 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.slots < 0:
            raise ValueError("slots must be nonnegative")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")
        ids = [u.user_id for u in self.users]
        if len(set(ids)) != len(ids):
            raise ValueError("user_id values must be unique")

    @property
    def n_users(self) -> int:
        return len(self.users)


@dataclass(frozen=True)
class SlotDecision:
    """One slot's controller output, all per-user tuples."""

    cr: tuple[float, ...]
    rate: tuple[float, ...]
    feature_len: tuple[int, ...]
    predicted_quality_mean: tuple[float, ...]
    latency: tuple[float, ...]


@dataclass(frozen=True)
class SlotRecord:
    """Full log of one slot (per-user tuples plus the slot objective)."""

    slot: int
    snr_db: tuple[float, ...]
    decision: SlotDecision
    true_quality: tuple[float, ...]
    oracle_quality: tuple[float, ...]
    satisfied: tuple[bool, ...]
    objective: float


def feature_length(eps: float, source_dim: int) -> int:
    """Number of complex feature symbols transmitted at compression ratio eps
    (smallest integer at or above eps * source_dim)."""
    if not (0 < eps <= 1):
        raise ValueError("eps must lie in (0, 1]")
    if source_dim < 1:
        raise ValueError("source_dim must be a positive integer")
    # Snap guard: keeps exact integer products exact when eps * source_dim
    # lands one float ulp above the integer.
    return max(1, math.ceil(eps * source_dim - 1e-9))


def objective_value(true_quality, latency, alpha: float, n_users: int) -> float:
    """Aggregate quality-latency utility: sum_n (Q_n - alpha * T_n / N).

    Latency in seconds; alpha calibrated for seconds.
    """
    true_quality = list(true_quality)
    latency = list(latency)
    if len(true_quality) != len(latency):
        raise ValueError("quality and latency sequences must have equal length")
    return float(sum(q - alpha * t / n_users for q, t in zip(true_quality, latency)))
