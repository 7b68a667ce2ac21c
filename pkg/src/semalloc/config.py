"""Configuration schema: INI-style text files with one [system] section and
one [user <id>] section per user.

Numeric values accept plain floats, scientific notation, or simple fractions
("1/30"). Missing keys fall back to the defaults below; the default
experiment is the four-user setup (quality floors 33/33/26/26 dB, four
dataset flavours, rectangular trajectories around the edge server).

Example::

    [system]
    schema_version = 1
    total_rate_bps = 400e6
    alpha = 200
    slots = 900
    seed = 7

    [user 1]
    dataset = bdd100k-like
    q_min_db = 33
    traj_length_m = 100
    traj_width_m = 50
    traj_height_m = 0
"""

from __future__ import annotations

import configparser
import dataclasses
from pathlib import Path

from .channel import ChannelParams, Trajectory
from .environment import calibrate_default
from .harness import SCHEMA_VERSION
from .types import SystemConfig, UserProfile

CR_MIN_DEFAULT = 1.0 / 30.0
CR_MAX_DEFAULT = 3.0 / 10.0
SOURCE_DIM_DEFAULT = 786432  # 3 x 512 x 512 real-valued frame

# The four-user default experiment: (dataset, q_min_db, traj length/width/height).
DEFAULT_USERS = (
    ("bdd100k-like", 33.0, 100.0, 50.0, 0.0),
    ("mtdt-like", 33.0, 100.0, 100.0, 50.0),
    ("ubs-like", 26.0, 100.0, 150.0, 20.0),
    ("ubm-like", 26.0, 100.0, 150.0, 30.0),
)
DEFAULT_PERIOD = 900
DEFAULT_CONFIDENCE = 0.95
DEFAULT_SAFETY_MARGIN = 1.0


class ConfigError(ValueError):
    """Malformed or inconsistent configuration (CLI exit code 2)."""


def _parse_number(raw: str) -> float:
    raw = raw.strip()
    if "/" in raw:
        num, den = raw.split("/", 1)
        return float(num) / float(den)
    return float(raw)


def default_user(index: int, *, q_min: float | None = None, period: int = DEFAULT_PERIOD,
                 content_noise_std: float | None = None,
                 oracle_error_bound: float | None = None) -> UserProfile:
    dataset, q_min_default, length, width, height = DEFAULT_USERS[index % len(DEFAULT_USERS)]
    model = calibrate_default(dataset, content_noise_std=content_noise_std,
                              oracle_error_bound=oracle_error_bound)
    return UserProfile(
        user_id=index + 1, source_dim=SOURCE_DIM_DEFAULT,
        cr_min=CR_MIN_DEFAULT, cr_max=CR_MAX_DEFAULT,
        q_min=q_min if q_min is not None else q_min_default,
        confidence=DEFAULT_CONFIDENCE, safety_margin=DEFAULT_SAFETY_MARGIN,
        trajectory=Trajectory(length=length, width=width, height=height, period=period),
        quality_model=model,
    )


def default_config(n_users: int = 4, **overrides) -> SystemConfig:
    users = tuple(default_user(i) for i in range(n_users))
    return SystemConfig(users=users, **overrides)


def _user_from_section(sec, user_id: int) -> UserProfile:
    get = sec.get
    dataset = get("dataset", DEFAULT_USERS[(user_id - 1) % len(DEFAULT_USERS)][0])
    cr_min = _parse_number(get("cr_min", str(CR_MIN_DEFAULT)))
    cr_max = _parse_number(get("cr_max", str(CR_MAX_DEFAULT)))
    noise = get("content_noise_std_db")
    bound = get("oracle_error_bound_db")
    model = calibrate_default(
        dataset,
        content_noise_std=_parse_number(noise) if noise is not None else None,
        oracle_error_bound=_parse_number(bound) if bound is not None else None,
    )
    defaults = DEFAULT_USERS[(user_id - 1) % len(DEFAULT_USERS)]
    traj = Trajectory(
        length=_parse_number(get("traj_length_m", str(defaults[2]))),
        width=_parse_number(get("traj_width_m", str(defaults[3]))),
        height=_parse_number(get("traj_height_m", str(defaults[4]))),
        period=int(_parse_number(get("traj_period_slots", str(DEFAULT_PERIOD)))),
        center=(_parse_number(get("traj_center_x_m", "0")),
                _parse_number(get("traj_center_y_m", "0"))),
    )
    return UserProfile(
        user_id=user_id,
        source_dim=int(_parse_number(get("source_dim", str(SOURCE_DIM_DEFAULT)))),
        cr_min=cr_min, cr_max=cr_max,
        q_min=_parse_number(get("q_min_db", str(defaults[1]))),
        confidence=_parse_number(get("confidence", str(DEFAULT_CONFIDENCE))),
        safety_margin=_parse_number(get("safety_margin_db", str(DEFAULT_SAFETY_MARGIN))),
        trajectory=traj, quality_model=model,
    )


def load_config(path) -> SystemConfig:
    """Parse a config file; raises ConfigError on any problem."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    try:
        system = parser["system"] if parser.has_section("system") else {}
        declared = system.get("schema_version")
        if declared is not None and int(declared) != SCHEMA_VERSION:
            raise ConfigError(f"{path}: unsupported schema_version {declared}")

        user_sections = sorted(
            (s for s in parser.sections() if s.startswith("user")),
            key=lambda s: int(s.split()[1]),
        )
        if user_sections:
            users = tuple(_user_from_section(parser[s], int(s.split()[1])) for s in user_sections)
        else:
            users = tuple(default_user(i) for i in range(4))

        channel = ChannelParams(
            antenna_gain=_parse_number(system.get("antenna_gain", "4.11")),
            carrier_freq=_parse_number(system.get("carrier_freq_hz", "2.4e9")),
            pathloss_exp=_parse_number(system.get("pathloss_exp", "3")),
            fade_mode=system.get("fade_mode", "power"),
        )
        return SystemConfig(
            users=users,
            total_rate=_parse_number(system.get("total_rate_bps", "400e6")),
            bits_per_symbol=int(_parse_number(system.get("bits_per_symbol", "64"))),
            alpha=_parse_number(system.get("alpha", "200")),
            window_size=int(_parse_number(system.get("window_size", "20"))),
            update_interval=int(_parse_number(system.get("update_interval", "20"))),
            mc_samples=int(_parse_number(system.get("mc_samples", "10000"))),
            learning_rate=_parse_number(system.get("learning_rate", "0.05")),
            slots=int(_parse_number(system.get("slots", "900"))),
            seed=int(_parse_number(system.get("seed", "0"))),
            channel=channel,
            snr_median_db=_parse_number(system.get("snr_median_db", "20")),
        )
    except ConfigError:
        raise
    except (KeyError, ValueError, IndexError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def format_config(cfg: SystemConfig) -> str:
    """Serialize a SystemConfig back into the documented file format."""
    lines = [
        "[system]",
        f"schema_version = {SCHEMA_VERSION}",
        f"total_rate_bps = {cfg.total_rate!r}",
        f"bits_per_symbol = {cfg.bits_per_symbol}",
        f"alpha = {cfg.alpha!r}",
        f"window_size = {cfg.window_size}",
        f"update_interval = {cfg.update_interval}",
        f"mc_samples = {cfg.mc_samples}",
        f"learning_rate = {cfg.learning_rate!r}",
        f"slots = {cfg.slots}",
        f"seed = {cfg.seed}",
        f"snr_median_db = {cfg.snr_median_db!r}",
        f"antenna_gain = {cfg.channel.antenna_gain!r}",
        f"carrier_freq_hz = {cfg.channel.carrier_freq!r}",
        f"pathloss_exp = {cfg.channel.pathloss_exp!r}",
        f"fade_mode = {cfg.channel.fade_mode}",
    ]
    tags = _dataset_tags(cfg)
    for u, tag in zip(cfg.users, tags):
        lines += [
            "",
            f"[user {u.user_id}]",
            f"dataset = {tag}",
            f"source_dim = {u.source_dim}",
            f"cr_min = {u.cr_min!r}",
            f"cr_max = {u.cr_max!r}",
            f"q_min_db = {u.q_min!r}",
            f"confidence = {u.confidence!r}",
            f"safety_margin_db = {u.safety_margin!r}",
            f"content_noise_std_db = {u.quality_model.content_noise_std!r}",
            f"oracle_error_bound_db = {u.quality_model.oracle_error_bound!r}",
            f"traj_length_m = {u.trajectory.length!r}",
            f"traj_width_m = {u.trajectory.width!r}",
            f"traj_height_m = {u.trajectory.height!r}",
            f"traj_period_slots = {u.trajectory.period}",
            f"traj_center_x_m = {u.trajectory.center[0]!r}",
            f"traj_center_y_m = {u.trajectory.center[1]!r}",
        ]
    return "\n".join(lines) + "\n"


def _dataset_tags(cfg: SystemConfig) -> list[str]:
    from .environment import _load_models

    models = _load_models()
    tags = []
    for u in cfg.users:
        found = None
        for tag, fields in models.items():
            probe = dataclasses.asdict(u.quality_model)
            if all(abs(fields[k] - probe[k]) < 1e-12 for k in
                   ("q_floor", "q_ceil_min_cr", "q_ceil_max_cr", "snr_mid", "snr_slope", "cr_sat")):
                found = tag
                break
        tags.append(found or "bdd100k-like")
    return tags
