"""The proposed BO controller and the three fixed benchmark policies.

Every policy implements decide(t, snr_db) -> per-user CR vector and
observe(t, cr, snr_db, oracle_quality). Only the proposed controller keeps
state: per-user GP windows fed with the transmitter-side oracle predictions
(the server never sees true quality), updated every ``update_interval``
slots. The DRL benchmark from the source comparison is deliberately absent.
"""

from __future__ import annotations

import time

import numpy as np

from .acquisition import confidence_to_beta, select_cr
from .environment import mean_quality
from .gp import GPHyperParams, GPState, InputScaler
from .types import SystemConfig

POLICY_TAGS = ("proposed", "psnr_max", "latency_min", "psnr_feasible")

_BISECT_RESOLUTION = 1e-4


class PsnrMaxPolicy:
    """Always transmit at the highest compression ratio."""

    tag = "psnr_max"

    def __init__(self, cfg: SystemConfig):
        self._cr = np.array([u.cr_max for u in cfg.users])

    def decide(self, t, snr_db):
        return self._cr.copy()

    def observe(self, t, cr, snr_db, oracle_quality):
        pass


class LatencyMinPolicy:
    """Always transmit at the lowest compression ratio."""

    tag = "latency_min"

    def __init__(self, cfg: SystemConfig):
        self._cr = np.array([u.cr_min for u in cfg.users])

    def decide(self, t, snr_db):
        return self._cr.copy()

    def observe(self, t, cr, snr_db, oracle_quality):
        pass


def feasible_cr(snr_db: float, profile, resolution: float = _BISECT_RESOLUTION) -> float:
    """Lowest CR whose oracle mean prediction clears the effective quality
    floor at this SNR, by bisection; cr_max when nothing clears it."""
    model = profile.quality_model
    target = profile.q_min_eff
    lo, hi = profile.cr_min, profile.cr_max
    if mean_quality(snr_db, lo, model) >= target:
        return lo
    if mean_quality(snr_db, hi, model) < target:
        return hi
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if mean_quality(snr_db, mid, model) >= target:
            hi = mid
        else:
            lo = mid
    return hi


class PsnrFeasiblePolicy:
    """Per-user greedy search for the lowest oracle-feasible CR."""

    tag = "psnr_feasible"

    def __init__(self, cfg: SystemConfig):
        self._users = cfg.users

    def decide(self, t, snr_db):
        return np.array([feasible_cr(g, u) for g, u in zip(snr_db, self._users)])

    def observe(self, t, cr, snr_db, oracle_quality):
        pass


class ProposedPolicy:
    """Constrained-BO controller: GP surrogates per user plus the joint
    Monte-Carlo acquisition, with a quality-safe cr_max bootstrap until each
    window holds enough observations.

    The bootstrap also re-triggers per user when the surrogate has judged
    even cr_max infeasible for a sustained stretch. Without that, a window
    drained of high-CR observations makes the flat extrapolation pin the
    user below its quality floor everywhere, and the max-slack fallback
    never re-samples high CR to disprove it.
    """

    tag = "proposed"

    # Consecutive slots with cr_max predicted infeasible before re-seeding,
    # and the number of forced cr_max slots per re-seed.
    stall_limit = 10
    reseed_slots = 3

    def __init__(self, cfg: SystemConfig, rng: np.random.Generator):
        self.cfg = cfg
        self._rng = rng
        self._gps = [
            GPState(InputScaler(u.cr_min, u.cr_max), capacity=cfg.window_size,
                    params=GPHyperParams(eta=cfg.learning_rate))
            for u in cfg.users
        ]
        self._cr_max = np.array([u.cr_max for u in cfg.users])
        self._beta = np.array([confidence_to_beta(u.confidence) for u in cfg.users])
        self._q_eff = np.array([u.q_min_eff for u in cfg.users])
        self._stalled = np.zeros(len(cfg.users), dtype=int)
        self._forced = np.zeros(len(cfg.users), dtype=int)
        self.update_seconds: list[float] = []
        self.last_feasible: bool = True
        self.last_predicted = np.full(len(cfg.users), np.nan)

    @property
    def gp_states(self) -> list[GPState]:
        return self._gps

    def _track_stalls(self, snr_db):
        """Count consecutive slots where a user's own cr_max fails its
        surrogate constraint; schedule a re-seed when the streak is long."""
        for i, (gp, u) in enumerate(zip(self._gps, self.cfg.users)):
            post = gp.predict(u.cr_max, snr_db[i])
            slack = post.mean - self._beta[i] * np.sqrt(post.variance) - self._q_eff[i]
            self._stalled[i] = self._stalled[i] + 1 if slack < 0 else 0
            if self._stalled[i] >= self.stall_limit and self._forced[i] == 0:
                self._forced[i] = self.reseed_slots
                self._stalled[i] = 0

    def decide(self, t, snr_db):
        if not all(gp.ready for gp in self._gps):
            self.last_feasible = True
            self.last_predicted = np.full(len(self._gps), np.nan)
            return self._cr_max.copy()
        self._track_stalls(snr_db)
        result = select_cr(self._gps, snr_db, self.cfg, self._rng)
        self.last_feasible = result.feasible
        cr = np.array(result.cr)
        forced = self._forced > 0
        cr[forced] = self._cr_max[forced]
        self._forced[forced] -= 1
        self.last_predicted = np.array([
            gp.predict(cr[i], snr_db[i]).mean for i, gp in enumerate(self._gps)
        ])
        return cr

    def observe(self, t, cr, snr_db, oracle_quality):
        for gp, e, g, y in zip(self._gps, cr, snr_db, oracle_quality):
            gp.observe(float(e), float(g), float(y))
        if t >= self.cfg.update_interval and t % self.cfg.update_interval == 0:
            t0 = time.perf_counter()
            for gp in self._gps:
                if len(gp.window) >= 2:
                    gp.update()
            self.update_seconds.append(time.perf_counter() - t0)

    def snapshot(self) -> list[dict]:
        return [gp.snapshot() for gp in self._gps]


def make_policy(tag: str, cfg: SystemConfig, rng: np.random.Generator | None = None):
    if tag == "proposed":
        if rng is None:
            raise ValueError("the proposed policy needs a random stream")
        return ProposedPolicy(cfg, rng)
    if tag == "psnr_max":
        return PsnrMaxPolicy(cfg)
    if tag == "latency_min":
        return LatencyMinPolicy(cfg)
    if tag == "psnr_feasible":
        return PsnrFeasiblePolicy(cfg)
    raise ValueError(f"unknown policy tag {tag!r}; expected one of {POLICY_TAGS}")
