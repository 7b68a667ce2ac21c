"""Per-user Gaussian-process surrogate over (compression ratio, SNR).

Polynomial kernel k(v, v') = psi1 * (v . v' + psi2) on affinely normalized
inputs, sliding-window data management, posterior prediction through an SPD
factorization (never an explicit inverse), and gradient-ascent updates of
(psi1, psi2, sigma_obs) on the log marginal likelihood.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

SIGMA_FLOOR = 1e-3  # dB; keeps K + sigma^2 I invertible and models residual content variability
SNR_NORM_RANGE_DB = (0.0, 30.0)  # quality models are trained on this SNR range
COLD_START_MIN_OBS = 3  # below this the controller falls back to cr_max

_PSI1_FLOOR = 1e-6
_ASCENT_STEPS = 5
_MAX_BACKTRACKS = 10


class EmptyWindowError(ValueError):
    """Posterior requested with no observations; callers must use the prior."""


class SingularCovarianceError(RuntimeError):
    """K + sigma^2 I failed to factorize (sigma below a workable floor)."""


@dataclass(frozen=True)
class GPHyperParams:
    psi1: float = 1.0
    psi2: float = 1.0
    sigma_obs: float = 0.5
    eta: float = 0.05

    def __post_init__(self):
        if self.psi1 <= 0:
            raise ValueError("psi1 must be positive")
        if self.psi2 < 0:
            raise ValueError("psi2 must be nonnegative")
        if self.sigma_obs <= 0:
            raise ValueError("sigma_obs must be positive")
        if self.eta <= 0:
            raise ValueError("eta must be positive")


@dataclass(frozen=True)
class Posterior:
    mean: float
    variance: float


@dataclass(frozen=True)
class InputScaler:
    """Map of raw (cr, snr_db) onto the unit box the kernel sees.

    The polynomial kernel is scale sensitive; normalizing keeps psi1/psi2
    well conditioned. SNR is scaled affinely over the trained range. The CR
    coordinate additionally passes through a saturating warp (monotone,
    fixed endpoints): reconstruction quality gains taper off sharply with
    CR, and a plain affine coordinate leaves curvature the linear kernel
    systematically over-estimates at low CR, right where the feasibility
    boundary sits. cr_warp = 0 recovers the affine map. The constants are
    part of the GP state and appear in snapshots.
    """

    cr_min: float
    cr_max: float
    snr_lo: float = SNR_NORM_RANGE_DB[0]
    snr_hi: float = SNR_NORM_RANGE_DB[1]
    cr_warp: float = 4.0

    def scale(self, eps, snr_db) -> np.ndarray:
        e, g = np.broadcast_arrays(np.asarray(eps, dtype=float),
                                   np.asarray(snr_db, dtype=float))
        v = np.empty(e.shape + (2,))
        u = (e - self.cr_min) / (self.cr_max - self.cr_min)
        if self.cr_warp > 0:
            k = self.cr_warp
            u = (1.0 - np.exp(-k * u)) / (1.0 - math.exp(-k))
        v[..., 0] = u
        v[..., 1] = (g - self.snr_lo) / (self.snr_hi - self.snr_lo)
        return v


class ObservationWindow:
    """FIFO window of (input pair, observed quality), oldest evicted first."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._entries: deque[tuple[np.ndarray, float]] = deque(maxlen=capacity)

    def append(self, v, y: float):
        v = np.asarray(v, dtype=float).reshape(2)
        self._entries.append((v, float(y)))

    def __len__(self):
        return len(self._entries)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self._entries:
            return np.zeros((0, 2)), np.zeros(0)
        inputs = np.stack([v for v, _ in self._entries])
        targets = np.array([y for _, y in self._entries])
        return inputs, targets

    @classmethod
    def from_arrays(cls, inputs, targets, capacity: int | None = None) -> "ObservationWindow":
        inputs = np.asarray(inputs, dtype=float)
        targets = np.asarray(targets, dtype=float)
        w = cls(capacity or max(1, len(targets)))
        for v, y in zip(inputs, targets):
            w.append(v, y)
        return w


def kernel(v, v_prime, params: GPHyperParams) -> float:
    """Polynomial kernel psi1 * (v . v' + psi2) on already-normalized inputs."""
    v = np.asarray(v, dtype=float)
    v_prime = np.asarray(v_prime, dtype=float)
    return float(params.psi1 * (v @ v_prime + params.psi2))


def gram_matrix(inputs, params: GPHyperParams) -> np.ndarray:
    """Kernel matrix over a (t, 2) input stack; bit-symmetric by mirroring the
    upper triangle."""
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2 or inputs.shape[0] == 0:
        raise ValueError("inputs must be a nonempty (t, 2) stack")
    g = inputs @ inputs.T
    upper = np.triu(g)
    g = upper + upper.T - np.diag(np.diag(g))
    return params.psi1 * (g + params.psi2)


def cross_kernel(inputs, stars, params: GPHyperParams) -> np.ndarray:
    """(t, m) kernel block between window inputs and query points."""
    inputs = np.asarray(inputs, dtype=float)
    stars = np.asarray(stars, dtype=float)
    ks = inputs @ stars.T
    ks += params.psi2
    ks *= params.psi1
    return ks


def _factorize(window: ObservationWindow, params: GPHyperParams):
    inputs, targets = window.arrays()
    sigma = gram_matrix(inputs, params) + params.sigma_obs ** 2 * np.eye(len(targets))
    try:
        cho = cho_factor(sigma, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularCovarianceError(str(exc)) from exc
    return inputs, targets, sigma, cho


class PosteriorSolver:
    """Factor-once posterior evaluator: one O(t^3) factorization, then each
    query costs O(t) for the mean and O(t^2) for the variance."""

    def __init__(self, window: ObservationWindow, params: GPHyperParams,
                 mean_offset: float = 0.0):
        if len(window) == 0:
            raise EmptyWindowError("posterior requires at least one observation")
        self.params = params
        self.mean_offset = mean_offset
        self._inputs, targets, _, self._cho = _factorize(window, params)
        self._lower = np.tril(self._cho[0])
        self._alpha = cho_solve(self._cho, targets)

    def mean_var(self, stars, clip_negative: bool = True) -> tuple[np.ndarray, np.ndarray]:
        stars = np.asarray(stars, dtype=float)
        squeeze = stars.ndim == 1
        stars = np.atleast_2d(stars)
        ks = cross_kernel(self._inputs, stars, self.params)
        mean = ks.T @ self._alpha + self.mean_offset
        kss = self.params.psi1 * ((stars * stars).sum(axis=1) + self.params.psi2)
        # k*' S^-1 k* = ||L^-1 k*||^2 with S = L L'.
        z = solve_triangular(self._lower, ks, lower=True, check_finite=False)
        var = kss - (z * z).sum(axis=0)
        if clip_negative:
            var = np.maximum(var, 0.0)
        if squeeze:
            return float(mean[0]), float(var[0])
        return mean, var

    def mean_var_cr_slice(self, eps_hat: np.ndarray, snr_hat: float,
                          clip_negative: bool = True) -> tuple[np.ndarray, np.ndarray]:
        """Posterior over a batch of candidates that differ only in the CR
        coordinate (one slot's acquisition sweep).

        With the polynomial kernel, k* is affine in eps_hat, so the whole
        batch reduces to two triangular solves; results equal mean_var on the
        stacked inputs to machine precision.
        """
        eps_hat = np.asarray(eps_hat, dtype=float)
        psi1, psi2 = self.params.psi1, self.params.psi2
        p = psi1 * self._inputs[:, 0]
        q = psi1 * (self._inputs[:, 1] * snr_hat + psi2)
        mean = eps_hat * (p @ self._alpha) + (q @ self._alpha + self.mean_offset)
        zp = solve_triangular(self._lower, p, lower=True, check_finite=False)
        zq = solve_triangular(self._lower, q, lower=True, check_finite=False)
        kss = psi1 * (eps_hat ** 2 + snr_hat ** 2 + psi2)
        var = kss - (eps_hat ** 2 * (zp @ zp) + 2.0 * eps_hat * (zp @ zq) + zq @ zq)
        if clip_negative:
            var = np.maximum(var, 0.0)
        return mean, var


def posterior(window: ObservationWindow, params: GPHyperParams, v_star) -> Posterior:
    """Posterior mean/variance at one query point (variance clamped at 0)."""
    mean, var = PosteriorSolver(window, params).mean_var(v_star)
    return Posterior(mean=mean, variance=var)


def log_marginal_likelihood(window: ObservationWindow, params: GPHyperParams) -> float:
    """-1/2 y' S^-1 y - 1/2 log|S| - (t/2) log 2pi with S = K + sigma^2 I."""
    if len(window) == 0:
        raise EmptyWindowError("log marginal likelihood requires observations")
    _, targets, _, cho = _factorize(window, params)
    alpha = cho_solve(cho, targets)
    log_det = 2.0 * np.sum(np.log(np.diag(cho[0])))
    t = len(targets)
    return float(-0.5 * targets @ alpha - 0.5 * log_det - 0.5 * t * math.log(2.0 * math.pi))


def mll_gradient(window: ObservationWindow, params: GPHyperParams) -> np.ndarray:
    """Gradient of the log marginal likelihood over (psi1, psi2, sigma_obs):
    d/dtheta = 1/2 y' S^-1 (dS/dtheta) S^-1 y - 1/2 tr(S^-1 dS/dtheta)."""
    if len(window) == 0:
        raise EmptyWindowError("gradient requires observations")
    inputs, targets, _, cho = _factorize(window, params)
    t = len(targets)
    alpha = cho_solve(cho, targets)
    sigma_inv = cho_solve(cho, np.eye(t))

    k = gram_matrix(inputs, params)
    d_psi1 = k / params.psi1
    d_psi2 = params.psi1 * np.ones((t, t))
    d_sigma = 2.0 * params.sigma_obs * np.eye(t)

    grad = np.empty(3)
    for i, d in enumerate((d_psi1, d_psi2, d_sigma)):
        grad[i] = 0.5 * alpha @ (d @ alpha) - 0.5 * np.trace(sigma_inv @ d)
    return grad


def _project(psi1: float, psi2: float, sigma: float) -> tuple[float, float, float]:
    return max(psi1, _PSI1_FLOOR), max(psi2, 0.0), max(sigma, SIGMA_FLOOR)


# Per-step cap on the log-space move; keeps one ascent pass from jumping more
# than a factor e^2.5 even when the window has just turned over.
_MAX_LOG_STEP = 0.5


def _ascend(window: ObservationWindow, params: GPHyperParams, eta: float,
            n_steps: int) -> GPHyperParams:
    """Gradient ascent with the positive scale parameters (psi1, sigma_obs)
    stepped in log space.

    Plain-space steps are badly scale-asymmetric for these parameters: the
    noise estimate inflates multiplicatively after an outlier-laden window
    but would deflate only additively once the outliers slide out. The chain
    rule dL/dlog(theta) = theta * dL/dtheta keeps the gradient operation's
    plain-space contract intact.
    """
    cur = params
    for _ in range(n_steps):
        g = mll_gradient(window, cur)
        log_step1 = np.clip(eta * cur.psi1 * g[0], -_MAX_LOG_STEP, _MAX_LOG_STEP)
        log_step3 = np.clip(eta * cur.sigma_obs * g[2], -_MAX_LOG_STEP, _MAX_LOG_STEP)
        psi1, psi2, sigma = _project(cur.psi1 * math.exp(log_step1),
                                     cur.psi2 + eta * g[1],
                                     cur.sigma_obs * math.exp(log_step3))
        cur = replace(cur, psi1=psi1, psi2=psi2, sigma_obs=sigma)
    return cur


def update_hyperparams(window: ObservationWindow, params: GPHyperParams,
                       n_steps: int = _ASCENT_STEPS,
                       max_backtracks: int = _MAX_BACKTRACKS) -> GPHyperParams:
    """A few projected gradient-ascent steps on the log marginal likelihood.

    The step size backs off (halving, up to max_backtracks times) until the
    likelihood does not decrease; on persistent decrease the old parameters
    are returned unchanged, so the update never loses likelihood.
    """
    if len(window) < 2:
        raise ValueError("hyperparameter update needs at least 2 observations")
    base = log_marginal_likelihood(window, params)
    eta = params.eta
    for _ in range(max_backtracks + 1):
        candidate = _ascend(window, params, eta, n_steps)
        try:
            if log_marginal_likelihood(window, candidate) >= base - 1e-8:
                return candidate
        except SingularCovarianceError:
            pass
        eta *= 0.5
    return params


class GPState:
    """Mutable per-user surrogate state: raw-unit window, normalization
    constants, and current hyperparameters.

    Single writer (the per-slot loop); solver snapshots are read-only.
    """

    def __init__(self, scaler: InputScaler, capacity: int,
                 params: GPHyperParams | None = None):
        self.scaler = scaler
        self.window = ObservationWindow(capacity)  # raw (cr, snr_db) pairs
        self.params = params or GPHyperParams()
        self._solver: PosteriorSolver | None = None

    def observe(self, eps: float, snr_db: float, y: float):
        self.window.append(np.array([eps, snr_db]), y)
        self._solver = None

    def _normalized_window(self) -> tuple[ObservationWindow, float]:
        """Scaled inputs plus targets centered on the window mean.

        Centering keeps the zero-mean prior honest: without it, any growth in
        the fitted observation noise shrinks predictions toward 0 dB, far
        below every observed quality. The window mean is added back to
        posterior means.
        """
        inputs, targets = self.window.arrays()
        scaled = self.scaler.scale(inputs[:, 0], inputs[:, 1])
        offset = float(targets.mean()) if len(targets) else 0.0
        return ObservationWindow.from_arrays(scaled, targets - offset, self.window.capacity), offset

    def solver(self) -> PosteriorSolver:
        # Rebuilt only when the window or hyperparameters change.
        if self._solver is None:
            window, offset = self._normalized_window()
            self._solver = PosteriorSolver(window, self.params, mean_offset=offset)
        return self._solver

    def predict(self, eps: float, snr_db: float) -> Posterior:
        mean, var = self.solver().mean_var(self.scaler.scale(eps, snr_db))
        return Posterior(mean=mean, variance=var)

    def update(self) -> GPHyperParams:
        window, _ = self._normalized_window()
        self.params = update_hyperparams(window, self.params)
        self._solver = None
        return self.params

    @property
    def ready(self) -> bool:
        return len(self.window) >= COLD_START_MIN_OBS

    def snapshot(self) -> dict:
        inputs, targets = self.window.arrays()
        return {
            "psi1": self.params.psi1,
            "psi2": self.params.psi2,
            "sigma_obs": self.params.sigma_obs,
            "eta": self.params.eta,
            "target_mean": float(targets.mean()) if len(targets) else 0.0,
            "scaler": {"cr_min": self.scaler.cr_min, "cr_max": self.scaler.cr_max,
                       "snr_lo": self.scaler.snr_lo, "snr_hi": self.scaler.snr_hi},
            "window": [{"cr": float(v[0]), "snr_db": float(v[1]), "y": float(y)}
                       for v, y in zip(inputs, targets)],
        }
