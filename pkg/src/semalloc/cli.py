"""Command-line front end.

Subcommands:
  simulate  one policy, one run; writes records.csv + summary.json
  bench     all policies on the same config; adds comparison.csv
  sweep     one parameter swept over a value list; writes sweep table CSV

Exit codes: 0 success, 2 configuration error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import ConfigError, default_config, load_config
from .harness import SCHEMA_VERSION, RunSummary, run_simulation, sweep, write_outputs
from .policies import POLICY_TAGS

_ABSENT_BENCHMARKS = ("drl_sac",)  # needs a deep-RL stack; not implemented here


def _build_config(args) -> "SystemConfig":
    cfg = load_config(args.config) if args.config else default_config()
    replacements = {}
    if args.seed is not None:
        replacements["seed"] = args.seed
    if args.slots is not None:
        replacements["slots"] = args.slots
    if replacements:
        try:
            cfg = dataclasses.replace(cfg, **replacements)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return cfg


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="config file (defaults to the 4-user setup)")
    p.add_argument("--seed", type=int, metavar="U64", help="override the config seed")
    p.add_argument("--slots", type=int, metavar="N", help="override the number of slots")
    p.add_argument("--out", metavar="DIR", help="output directory")


def _print_summary(s: RunSummary):
    print(f"policy={s.policy} slots={s.n_slots}")
    for i, uid in enumerate(s.user_ids):
        print(f"  user {uid}: satisfaction {s.satisfaction_pct[i]:6.2f}%  "
              f"psnr {s.mean_psnr_db[i]:6.2f} dB  latency {s.mean_latency_ms[i]:7.2f} ms")
    print(f"  avg: satisfaction {s.avg_satisfaction_pct:6.2f}%  psnr {s.avg_psnr_db:6.2f} dB  "
          f"latency {s.avg_latency_ms:7.2f} ms  objective {s.total_objective:8.2f}")
    if s.inference_ms_mean is not None:
        print(f"  inference {s.inference_ms_mean:.3f} +/- {s.inference_ms_std:.3f} ms/slot", end="")
        if s.update_ms_mean is not None:
            print(f", gp update {s.update_ms_mean:.3f} +/- {s.update_ms_std:.3f} ms", end="")
        print()


def _cmd_simulate(args) -> int:
    cfg = _build_config(args)
    records, summary = run_simulation(cfg, args.policy)
    _print_summary(summary)
    if args.out:
        paths = write_outputs(records, summary, args.out, cfg)
        print(f"wrote {paths['records']} and {paths['summary']}")
    return 0


def _comparison_lines(summaries: list[RunSummary]) -> list[str]:
    lines = [f"# schema_version={SCHEMA_VERSION}",
             "policy,status,scope,satisfaction_pct,psnr_db,latency_ms,objective"]
    for s in summaries:
        for i, uid in enumerate(s.user_ids):
            lines.append(f"{s.policy},implemented,user{uid},{s.satisfaction_pct[i]!r},"
                         f"{s.mean_psnr_db[i]!r},{s.mean_latency_ms[i]!r},")
        lines.append(f"{s.policy},implemented,avg,{s.avg_satisfaction_pct!r},"
                     f"{s.avg_psnr_db!r},{s.avg_latency_ms!r},{s.total_objective!r}")
    for tag in _ABSENT_BENCHMARKS:
        lines.append(f"{tag},absent,,,,,")
    return lines


def _cmd_bench(args) -> int:
    cfg = _build_config(args)
    summaries = []
    for tag in POLICY_TAGS:
        records, summary = run_simulation(cfg, tag)
        summaries.append(summary)
        _print_summary(summary)
        if args.out:
            write_outputs(records, summary, Path(args.out) / tag, cfg)
    if args.out:
        path = Path(args.out) / "comparison.csv"
        path.write_text("\n".join(_comparison_lines(summaries)) + "\n")
        print(f"wrote {path}")
    return 0


def _parse_sweep_values(parameter: str, raw: str):
    groups = [g for g in raw.split(";") if g.strip()]
    if parameter == "q_min_vector":
        return [[float(x) for x in g.split(",")] for g in groups]
    values = [float(x) for g in groups for x in g.split(",")]
    if parameter == "n_users":
        return [int(v) for v in values]
    return values


def _sweep_lines(parameter: str, results) -> list[str]:
    lines = [f"# schema_version={SCHEMA_VERSION}",
             "param,value,n_users,slots,satisfaction_pct_avg,psnr_db_avg,latency_ms_avg,"
             "objective,inference_ms_mean,inference_ms_std,update_ms_mean,update_ms_std"]
    for value, s in results:
        tag = "|".join(repr(float(v)) for v in value) if isinstance(value, list) else repr(value)
        opt = ",".join("" if v is None else repr(v) for v in
                       (s.inference_ms_mean, s.inference_ms_std, s.update_ms_mean, s.update_ms_std))
        lines.append(f"{parameter},{tag},{len(s.user_ids)},{s.n_slots},"
                     f"{s.avg_satisfaction_pct!r},{s.avg_psnr_db!r},{s.avg_latency_ms!r},"
                     f"{s.total_objective!r},{opt}")
    return lines


def _cmd_sweep(args) -> int:
    cfg = _build_config(args)
    values = _parse_sweep_values(args.param, args.values)
    results = sweep(cfg, args.param, values, policy_tag=args.policy)
    for value, s in results:
        print(f"{args.param}={value}: satisfaction {s.avg_satisfaction_pct:.2f}%  "
              f"psnr {s.avg_psnr_db:.2f} dB  latency {s.avg_latency_ms:.2f} ms  "
              f"objective {s.total_objective:.2f}")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"sweep_{args.param}.csv"
        path.write_text("\n".join(_sweep_lines(args.param, results)) + "\n")
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semalloc",
                                     description="Multi-user semantic-communication resource allocation simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one policy")
    _add_common(p_sim)
    p_sim.add_argument("--policy", choices=POLICY_TAGS, default="proposed", metavar="TAG")
    p_sim.set_defaults(func=_cmd_simulate)

    p_bench = sub.add_parser("bench", help="run all policies and emit a comparison table")
    _add_common(p_bench)
    p_bench.set_defaults(func=_cmd_bench)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter over a value list")
    _add_common(p_sweep)
    p_sweep.add_argument("--param", choices=("alpha", "q_min_vector", "n_users"), required=True)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated values; semicolon-separated vectors for q_min_vector")
    p_sweep.add_argument("--policy", choices=POLICY_TAGS, default="proposed", metavar="TAG")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
