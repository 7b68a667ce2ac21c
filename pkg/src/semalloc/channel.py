"""Block-fading uplink channel: rectangular user trajectories around a fixed
edge server, free-space path loss, and exponential (Rayleigh-power) fading.

All randomness flows through caller-owned numpy Generators; one draw per user
per slot (block fading). SNR crosses module boundaries in dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LIGHT_SPEED = 3.0e8

# Fading draws below this are clamped so snr_db stays finite.
_XI_FLOOR = 1e-300


@dataclass(frozen=True)
class Trajectory:
    """Rectangular loop walked at constant speed, one lap per ``period`` slots.

    The loop starts at the (center_x - length/2, center_y - width/2) corner
    and proceeds along the +x edge first; the start corner is fixed so that
    seeded runs are reproducible.
    """

    length: float
    width: float
    height: float
    period: int
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.length <= 0 or self.width <= 0:
            raise ValueError("trajectory length and width must be positive")
        if self.height < 0:
            raise ValueError("trajectory height must be nonnegative")
        if self.period < 4:
            raise ValueError("trajectory period must be at least 4 slots")

    @property
    def perimeter(self) -> float:
        return 2.0 * (self.length + self.width)


@dataclass(frozen=True)
class ChannelParams:
    antenna_gain: float = 4.11
    carrier_freq: float = 2.4e9
    pathloss_exp: float = 3.0
    noise_power: float = 1.0
    es_position: tuple[float, float, float] = (0.0, 0.0, 20.0)
    # "power": h_bar * xi is the effective power gain (default reading);
    # "amplitude": h_bar * xi is an amplitude, squared before the SNR.
    fade_mode: str = "power"

    def __post_init__(self):
        if self.carrier_freq <= 0:
            raise ValueError("carrier_freq must be positive")
        if self.pathloss_exp < 0:
            raise ValueError("pathloss_exp must be nonnegative")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")
        if self.fade_mode not in ("power", "amplitude"):
            raise ValueError(f"unknown fade_mode {self.fade_mode!r}")


def user_position(t: int, traj: Trajectory) -> np.ndarray:
    """3D position (meters) after t slots, arc-length parameterized."""
    if t < 0:
        raise ValueError("slot index must be nonnegative")
    cx, cy = traj.center
    x0 = cx - traj.length / 2.0
    y0 = cy - traj.width / 2.0
    s = (t % traj.period) / traj.period * traj.perimeter
    L, W = traj.length, traj.width
    if s < L:  # +x edge
        x, y = x0 + s, y0
    elif s < L + W:  # +y edge
        x, y = x0 + L, y0 + (s - L)
    elif s < 2 * L + W:  # -x edge
        x, y = x0 + L - (s - L - W), y0 + W
    else:  # -y edge
        x, y = x0, y0 + W - (s - 2 * L - W)
    return np.array([x, y, traj.height])


def distance_to_es(position: np.ndarray, params: ChannelParams) -> float:
    return float(np.linalg.norm(np.asarray(position, dtype=float) - np.asarray(params.es_position)))


def max_distance_bound(traj: Trajectory, params: ChannelParams) -> float:
    """Half-diagonal of the loop plus center/height offset; every trajectory
    point stays within this distance of the edge server."""
    half_diag = math.hypot(traj.length / 2.0, traj.width / 2.0)
    ex, ey, ez = params.es_position
    center_offset = math.sqrt(
        (traj.center[0] - ex) ** 2 + (traj.center[1] - ey) ** 2 + (traj.height - ez) ** 2
    )
    return half_diag + center_offset


def path_loss_gain(d: float, params: ChannelParams) -> float:
    """Average channel gain at distance d (free-space power law)."""
    if d <= 0:
        raise ValueError("distance must be positive")
    return params.antenna_gain * (LIGHT_SPEED / (4.0 * math.pi * params.carrier_freq * d)) ** params.pathloss_exp


def sample_snr(h_bar: float, params: ChannelParams, rng: np.random.Generator,
               xi: float | None = None) -> tuple[float, float]:
    """One block-fading SNR draw; returns (snr_linear, snr_db).

    ``xi`` overrides the Exp(1) fade draw (test hook).
    """
    if h_bar <= 0:
        raise ValueError("h_bar must be positive")
    if xi is None:
        xi = float(rng.exponential(1.0))
    xi = max(xi, _XI_FLOOR)
    if params.fade_mode == "power":
        gain = h_bar * xi
    else:
        gain = (h_bar * xi) ** 2
    snr_linear = gain / params.noise_power
    return snr_linear, 10.0 * math.log10(snr_linear)


def trajectory_distances(traj: Trajectory, params: ChannelParams) -> np.ndarray:
    """Distances to the edge server at every slot of one full loop."""
    return np.array([distance_to_es(user_position(t, traj), params) for t in range(traj.period)])


def calibrate_noise_power(traj: Trajectory, params: ChannelParams,
                          target_median_snr_db: float = 15.0) -> float:
    """Noise power sigma^2 such that the unit-fade (xi = 1) SNR at the
    trajectory's median distance equals the target.

    Keeps the operating SNR inside the quality model's trained range.
    """
    d_med = float(np.median(trajectory_distances(traj, params)))
    h_bar = path_loss_gain(d_med, params)
    if params.fade_mode == "amplitude":
        h_bar = h_bar ** 2
    return h_bar / 10.0 ** (target_median_snr_db / 10.0)


class UserChannel:
    """Per-user channel state: trajectory plus calibrated params and an owned
    fading stream (independent across users)."""

    def __init__(self, traj: Trajectory, params: ChannelParams, rng: np.random.Generator):
        self.traj = traj
        self.params = params
        self._rng = rng
        self._max_d = max_distance_bound(traj, params)

    def sample_slot(self, t: int) -> tuple[float, float]:
        """(snr_linear, snr_db) for slot t."""
        d = distance_to_es(user_position(t, self.traj), self.params)
        assert d <= self._max_d + 1e-9
        h_bar = path_loss_gain(d, self.params)
        return sample_snr(h_bar, self.params, self._rng)
