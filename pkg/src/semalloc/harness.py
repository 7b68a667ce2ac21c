"""Simulation driver: the outer per-slot loop, metric aggregation, sweeps,
and versioned CSV/JSON persistence.

Per slot: sample each user's SNR, let the policy pick compression ratios,
allocate rates in closed form, draw true and oracle quality from the
environment, feed the oracle values back to the policy, and log everything.
Given (seed, config, policy) every output byte is reproducible except the
wall-clock timing fields.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import channel as ch
from .environment import sample_quality_pair
from .policies import ProposedPolicy, make_policy
from .rates import allocate_rates
from .types import SlotDecision, SlotRecord, SystemConfig, feature_length, objective_value

SCHEMA_VERSION = 1
RECORDS_HEADER = "t,user,snr_db,cr,rate_bps,latency_ms,q_true_db,q_oracle_db,satisfied,objective"

# Stream labels keep the per-purpose generators independent of each other.
_ENV_STREAM = 101
_POLICY_STREAM = 202


@dataclass(frozen=True)
class RunSummary:
    policy: str
    n_slots: int
    user_ids: tuple[int, ...]
    satisfaction_pct: tuple[float, ...]
    mean_psnr_db: tuple[float, ...]
    mean_latency_ms: tuple[float, ...]
    avg_satisfaction_pct: float
    avg_psnr_db: float
    avg_latency_ms: float
    total_objective: float
    inference_ms_mean: float | None = None
    inference_ms_std: float | None = None
    update_ms_mean: float | None = None
    update_ms_std: float | None = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _env_rng(seed: int, user_id: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, _ENV_STREAM, user_id)))


def _policy_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, _POLICY_STREAM)))


def build_user_channels(cfg: SystemConfig) -> list[ch.UserChannel]:
    """Per-user channels with noise power calibrated so the median-distance
    unit-fade SNR hits the configured target; fading streams keyed off
    seed XOR user_id."""
    channels = []
    for u in cfg.users:
        noise = ch.calibrate_noise_power(u.trajectory, cfg.channel, cfg.snr_median_db)
        params = dataclasses.replace(cfg.channel, noise_power=noise)
        rng = np.random.default_rng(cfg.seed ^ u.user_id)
        channels.append(ch.UserChannel(u.trajectory, params, rng))
    return channels


def _empty_summary(cfg: SystemConfig, policy_tag: str) -> RunSummary:
    n = cfg.n_users
    # No slots means no opportunities to violate; count that as full satisfaction.
    return RunSummary(
        policy=policy_tag, n_slots=0, user_ids=tuple(u.user_id for u in cfg.users),
        satisfaction_pct=(100.0,) * n, mean_psnr_db=(0.0,) * n,
        mean_latency_ms=(0.0,) * n, avg_satisfaction_pct=100.0,
        avg_psnr_db=0.0, avg_latency_ms=0.0, total_objective=0.0,
    )


def compute_metrics(records: list[SlotRecord], policy_tag: str = "unknown") -> RunSummary:
    """Aggregate slot records: per-user satisfaction percentage, mean PSNR,
    mean latency, and the slot objective averaged over slots."""
    if not records:
        raise ValueError("compute_metrics needs at least one record")
    n = len(records[0].snr_db)
    sat = np.array([r.satisfied for r in records], dtype=float)
    psnr = np.array([r.true_quality for r in records])
    lat = np.array([r.decision.latency for r in records])
    objective = float(np.mean([r.objective for r in records]))
    sat_pct = 100.0 * sat.mean(axis=0)
    mean_psnr = psnr.mean(axis=0)
    mean_lat_ms = 1000.0 * lat.mean(axis=0)
    return RunSummary(
        policy=policy_tag, n_slots=len(records), user_ids=tuple(range(1, n + 1)),
        satisfaction_pct=tuple(sat_pct.tolist()), mean_psnr_db=tuple(mean_psnr.tolist()),
        mean_latency_ms=tuple(mean_lat_ms.tolist()),
        avg_satisfaction_pct=float(sat_pct.mean()), avg_psnr_db=float(mean_psnr.mean()),
        avg_latency_ms=float(mean_lat_ms.mean()), total_objective=objective,
    )


def run_simulation(cfg: SystemConfig, policy_tag: str) -> tuple[list[SlotRecord], RunSummary]:
    """Run the full slot loop for one policy; returns records and summary."""
    channels = build_user_channels(cfg)
    env_rngs = [_env_rng(cfg.seed, u.user_id) for u in cfg.users]
    policy = make_policy(policy_tag, cfg, _policy_rng(cfg.seed))
    dims = [u.source_dim for u in cfg.users]
    q_min = np.array([u.q_min for u in cfg.users])

    records: list[SlotRecord] = []
    inference_s: list[float] = []
    for t in range(cfg.slots):
        snr_db = np.array([chan.sample_slot(t)[1] for chan in channels])

        t0 = time.perf_counter()
        cr = np.clip(policy.decide(t, snr_db),
                     [u.cr_min for u in cfg.users], [u.cr_max for u in cfg.users])
        inference_s.append(time.perf_counter() - t0)

        alloc = allocate_rates(cr, dims, cfg.total_rate, cfg.bits_per_symbol)
        pairs = [sample_quality_pair(g, e, u.quality_model, rng)
                 for g, e, u, rng in zip(snr_db, cr, cfg.users, env_rngs)]
        q_true = np.array([p[0] for p in pairs])
        q_oracle = np.array([p[1] for p in pairs])

        policy.observe(t, cr, snr_db, q_oracle)

        predicted = getattr(policy, "last_predicted", np.full(cfg.n_users, np.nan))
        decision = SlotDecision(
            cr=tuple(cr.tolist()), rate=alloc.rates,
            feature_len=tuple(feature_length(e, d) for e, d in zip(cr, dims)),
            predicted_quality_mean=tuple(np.asarray(predicted).tolist()),
            latency=alloc.latencies,
        )
        records.append(SlotRecord(
            slot=t, snr_db=tuple(snr_db.tolist()), decision=decision,
            true_quality=tuple(q_true.tolist()), oracle_quality=tuple(q_oracle.tolist()),
            satisfied=tuple(bool(q >= qm) for q, qm in zip(q_true, q_min)),
            objective=objective_value(q_true, alloc.latencies, cfg.alpha, cfg.n_users),
        ))

    if not records:
        return [], _empty_summary(cfg, policy_tag)

    summary = compute_metrics(records, policy_tag)
    summary = dataclasses.replace(
        summary,
        user_ids=tuple(u.user_id for u in cfg.users),
        inference_ms_mean=float(np.mean(inference_s) * 1000.0),
        inference_ms_std=float(np.std(inference_s) * 1000.0),
    )
    if isinstance(policy, ProposedPolicy) and policy.update_seconds:
        summary = dataclasses.replace(
            summary,
            update_ms_mean=float(np.mean(policy.update_seconds) * 1000.0),
            update_ms_std=float(np.std(policy.update_seconds) * 1000.0),
        )
    return records, summary


# --- sweeps ---------------------------------------------------------------

SWEEP_PARAMS = ("alpha", "q_min_vector", "n_users")


def _config_with_alpha(cfg: SystemConfig, alpha: float) -> SystemConfig:
    return dataclasses.replace(cfg, alpha=float(alpha))


def _config_with_q_min(cfg: SystemConfig, q_min_vector) -> SystemConfig:
    q = [float(v) for v in q_min_vector]
    if len(q) != cfg.n_users:
        raise ValueError(f"q_min_vector needs {cfg.n_users} entries, got {len(q)}")
    users = tuple(dataclasses.replace(u, q_min=v) for u, v in zip(cfg.users, q))
    return dataclasses.replace(cfg, users=users)


def _config_with_n_users(cfg: SystemConfig, n: int) -> SystemConfig:
    n = int(n)
    if n < 1:
        raise ValueError("n_users must be positive")
    base = cfg.users
    users = tuple(dataclasses.replace(base[i % len(base)], user_id=i + 1) for i in range(n))
    return dataclasses.replace(cfg, users=users)


def sweep(cfg: SystemConfig, parameter: str, values,
          policy_tag: str = "proposed") -> list[tuple[object, RunSummary]]:
    """One run per value with the shared base seed; users cycle from the base
    profile set for the n_users sweep."""
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    if parameter not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {parameter!r}; expected one of {SWEEP_PARAMS}")
    build = {"alpha": _config_with_alpha, "q_min_vector": _config_with_q_min,
             "n_users": _config_with_n_users}[parameter]
    out = []
    for v in values:
        _, summary = run_simulation(build(cfg, v), policy_tag)
        out.append((v, summary))
    return out


# --- persistence ----------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def records_to_csv_lines(records: list[SlotRecord]) -> list[str]:
    lines = [f"# schema_version={SCHEMA_VERSION}", RECORDS_HEADER]
    for r in records:
        for i in range(len(r.snr_db)):
            lines.append(",".join([
                str(r.slot), str(i + 1), _fmt(r.snr_db[i]), _fmt(r.decision.cr[i]),
                _fmt(r.decision.rate[i]), _fmt(r.decision.latency[i] * 1000.0),
                _fmt(r.true_quality[i]), _fmt(r.oracle_quality[i]),
                str(int(r.satisfied[i])), _fmt(r.objective),
            ]))
    return lines


def read_records_csv(path) -> list[dict]:
    """Parse a records.csv back into per-(slot, user) rows of typed values."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("# schema_version="):
        raise ValueError(f"{path}: missing schema_version header")
    if int(lines[0].split("=", 1)[1]) != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported schema version")
    if lines[1] != RECORDS_HEADER:
        raise ValueError(f"{path}: unexpected column header")
    cols = RECORDS_HEADER.split(",")
    rows = []
    for line in lines[2:]:
        parts = line.split(",")
        row = dict(zip(cols, parts))
        rows.append({
            "t": int(row["t"]), "user": int(row["user"]),
            "snr_db": float(row["snr_db"]), "cr": float(row["cr"]),
            "rate_bps": float(row["rate_bps"]), "latency_ms": float(row["latency_ms"]),
            "q_true_db": float(row["q_true_db"]), "q_oracle_db": float(row["q_oracle_db"]),
            "satisfied": bool(int(row["satisfied"])), "objective": float(row["objective"]),
        })
    return rows


def config_to_dict(cfg: SystemConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["channel"]["es_position"] = list(d["channel"]["es_position"])
    for u in d["users"]:
        u["trajectory"]["center"] = list(u["trajectory"]["center"])
    return d


def write_outputs(records: list[SlotRecord], summary: RunSummary, out_dir,
                  cfg: SystemConfig | None = None) -> dict[str, Path]:
    """records.csv plus summary.json (with config echo), both schema versioned."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        records_path = out_dir / "records.csv"
        records_path.write_text("\n".join(records_to_csv_lines(records)) + "\n")
        summary_path = out_dir / "summary.json"
        payload = {
            "schema_version": SCHEMA_VERSION,
            "policy": summary.policy,
            "seed": cfg.seed if cfg is not None else None,
            "summary": summary.to_dict(),
            "config": config_to_dict(cfg) if cfg is not None else None,
        }
        summary_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing outputs under {out_dir}: {exc}") from exc
    return {"records": records_path, "summary": summary_path}


def validate_summary_payload(payload: dict, schema: dict, path: str = "$") -> list[str]:
    """Structural check of a summary.json payload against the committed
    schema file (supports the object/number/string/array subset it uses)."""
    problems = []
    kind = schema.get("type")
    if kind == "object":
        if not isinstance(payload, dict):
            return [f"{path}: expected object"]
        for key in schema.get("required", []):
            if key not in payload:
                problems.append(f"{path}.{key}: missing required key")
        for key, sub in schema.get("properties", {}).items():
            if key in payload and payload[key] is not None:
                problems.extend(validate_summary_payload(payload[key], sub, f"{path}.{key}"))
    elif kind == "array":
        if not isinstance(payload, list):
            return [f"{path}: expected array"]
        item_schema = schema.get("items")
        if item_schema:
            for i, item in enumerate(payload):
                problems.extend(validate_summary_payload(item, item_schema, f"{path}[{i}]"))
    elif kind == "number":
        if not isinstance(payload, (int, float)) or isinstance(payload, bool):
            problems.append(f"{path}: expected number")
    elif kind == "integer":
        if not isinstance(payload, int) or isinstance(payload, bool):
            problems.append(f"{path}: expected integer")
    elif kind == "string":
        if not isinstance(payload, str):
            problems.append(f"{path}: expected string")
    return problems
