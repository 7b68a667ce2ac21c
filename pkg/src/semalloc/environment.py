"""Synthetic reconstruction-quality environment.

Stands in for the neural codec plus its transmitter-side quality predictor:
a calibrated mean surface Q(snr_db, cr) that is logistic in SNR and
exponentially saturating in compression ratio, plus per-slot content noise
and a bounded-error oracle prediction. Controllers observe only quality
values; they never read the model parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

DATA_FILE = "quality_models.json"
DATASET_TAGS = ("bdd100k-like", "mtdt-like", "ubs-like", "ubm-like")


@dataclass(frozen=True)
class QualityModel:
    """Parameters of one dataset-flavoured quality surface.

    q_floor is the asymptote as SNR -> -inf; q_ceil_min_cr / q_ceil_max_cr
    are the high-SNR plateaus at the lowest and highest compression ratio.
    """

    q_floor: float
    q_ceil_min_cr: float
    q_ceil_max_cr: float
    snr_mid: float
    snr_slope: float
    cr_sat: float
    content_noise_std: float = 0.6
    oracle_error_bound: float = 1.0
    cr_min: float = 1.0 / 30.0
    cr_max: float = 3.0 / 10.0

    def __post_init__(self):
        if not (self.q_floor < self.q_ceil_min_cr <= self.q_ceil_max_cr):
            raise ValueError("require q_floor < q_ceil_min_cr <= q_ceil_max_cr")
        if self.snr_slope <= 0 or self.cr_sat <= 0:
            raise ValueError("snr_slope and cr_sat must be positive")
        if self.content_noise_std < 0 or self.oracle_error_bound < 0:
            raise ValueError("noise magnitudes must be nonnegative")
        if not (0 < self.cr_min < self.cr_max <= 1):
            raise ValueError("require 0 < cr_min < cr_max <= 1")


def _check_cr(eps, model: QualityModel):
    eps = np.asarray(eps, dtype=float)
    if np.any(eps < model.cr_min - 1e-12) or np.any(eps > model.cr_max + 1e-12):
        raise ValueError(f"cr outside [{model.cr_min}, {model.cr_max}]")
    return eps


def quality_ceiling(eps, model: QualityModel):
    """High-SNR plateau as a function of cr: exponential saturation normalized
    to hit q_ceil_min_cr at cr_min and q_ceil_max_cr at cr_max exactly."""
    eps = _check_cr(eps, model)
    u = (eps - model.cr_min) / (model.cr_max - model.cr_min)
    k = model.cr_sat
    decay = (np.exp(-k * u) - np.exp(-k)) / (1.0 - np.exp(-k))
    return model.q_ceil_max_cr - (model.q_ceil_max_cr - model.q_ceil_min_cr) * decay


def mean_quality(snr_db, eps, model: QualityModel):
    """Noise-free quality surface, strictly increasing in both arguments."""
    snr_db = np.asarray(snr_db, dtype=float)
    s = 1.0 / (1.0 + np.exp(-model.snr_slope * (snr_db - model.snr_mid)))
    q = model.q_floor + (quality_ceiling(eps, model) - model.q_floor) * s
    return float(q) if q.ndim == 0 else q


def true_quality(snr_db, eps, model: QualityModel, rng: np.random.Generator):
    """Per-slot quality: mean surface plus Gaussian content noise."""
    noise = rng.normal(0.0, model.content_noise_std) if model.content_noise_std > 0 else 0.0
    return mean_quality(snr_db, eps, model) + noise


def oracle_predict(snr_db, eps, model: QualityModel, rng: np.random.Generator,
                   true_q: float | None = None):
    """Transmitter-side quality prediction: the slot's true quality plus an
    error uniform on [-bound, +bound].

    The oracle conditions on the actual transmitted content, so when the
    caller already drew the slot's true quality it must pass it as
    ``true_q``; otherwise a fresh content realization is drawn here.
    """
    if true_q is None:
        true_q = true_quality(snr_db, eps, model, rng)
    b = model.oracle_error_bound
    err = rng.uniform(-b, b) if b > 0 else 0.0
    return true_q + err


def sample_quality_pair(snr_db, eps, model: QualityModel,
                        rng: np.random.Generator) -> tuple[float, float]:
    """One slot's (true_quality, oracle_prediction), sharing the content draw."""
    q = true_quality(snr_db, eps, model, rng)
    return q, oracle_predict(snr_db, eps, model, rng, true_q=q)


def _load_models() -> dict:
    text = resources.files("semalloc").joinpath(f"data/{DATA_FILE}").read_text()
    payload = json.loads(text)
    if payload.get("schema_version") != 1:
        raise ValueError("unsupported quality-model data schema")
    return payload["models"]


def calibrate_default(dataset_tag: str, *, content_noise_std: float | None = None,
                      oracle_error_bound: float | None = None) -> QualityModel:
    """Committed calibration constants for one of the four dataset flavours.

    Regenerate the data file with tools/fit_quality_calibration.py.
    """
    models = _load_models()
    if dataset_tag not in models:
        raise KeyError(f"unknown dataset tag {dataset_tag!r}; expected one of {DATASET_TAGS}")
    fields = dict(models[dataset_tag])
    if content_noise_std is not None:
        fields["content_noise_std"] = content_noise_std
    if oracle_error_bound is not None:
        fields["oracle_error_bound"] = oracle_error_bound
    return QualityModel(**fields)
