"""Command-line front end: single runs, sweeps, M search, floors, figures.

Powers are taken in dBW on the command line and converted once to watts.
Every subcommand accepts ``--config FILE`` pointing at a flat ``key = value``
text file whose keys are the long option names (hyphens or underscores);
explicit command-line flags override file values, which override built-in
defaults. The default seed is fixed so bare invocations reproduce exactly;
pass ``--seed random`` for fresh entropy.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import secrets
import sys
from pathlib import Path
from typing import Sequence

from .analytic import grid_powered_outage
from .channel import ConfigurationError, SystemParams, dbw_to_watts
from .engine import simulate
from .policies import POLICY_IDS
from .sweep import (
    SweepSpec,
    optimize_m,
    run_sweep,
    write_csv,
    write_gnuplot,
    write_json_lines,
)

DEFAULT_SEED = 20260801
DEFAULT_RATE_GRID = tuple(0.25 * k for k in range(1, 13))   # 0.25 .. 3.0
OUTPUT_DIR_ENV = "EHRELAY_OUTPUT_DIR"

_FORMATS = ("csv", "json-lines", "gnuplot")


def _parse_seed(text: str) -> int:
    if text == "random":
        return secrets.randbits(63)
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative or 'random'")
    return value


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> tuple[int, ...]:
    """Comma list (1,2,3) or inclusive range (1:6) of integers."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _policy_list(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


_SCENARIO_OPTIONS: dict[str, tuple] = {
    # name -> (converter, default, help)
    "n_relays": (_int_list, (10,), "relay count N (comma list sweeps it)"),
    "m": (_int_list, (2,), "decode-set cap M (comma list or lo:hi sweeps it)"),
    "eta": (float, 0.7, "energy harvesting efficiency in [0, 1]"),
    "rate": (float, 1.0, "end-to-end rate target R (bits/s/Hz)"),
    "ps_dbw": (float, 10.0, "source power in dBW"),
    "pr_dbw": (float, 10.0, "fixed relay power in dBW (no-CSIT forwarding)"),
    "noise": (float, 1.0, "noise power sigma^2 (W)"),
    "slot": (float, 1.0, "slot duration T (s)"),
    "distance": (float, 1.0, "source-relay distance d (m)"),
    "alpha": (float, 2.0, "path loss exponent"),
}


def _add_scenario_options(parser: argparse.ArgumentParser) -> None:
    for name, (conv, _default, help_text) in _SCENARIO_OPTIONS.items():
        flag = "--" + name.replace("_", "-")
        parser.add_argument(flag, type=conv, default=None, help=help_text)


def _add_run_options(
    parser: argparse.ArgumentParser, single_run: bool = False
) -> None:
    parser.add_argument("--slots", type=int, default=None, help="slots per run")
    parser.add_argument("--seed", type=_parse_seed, default=None,
                        help="integer seed or 'random'")
    parser.add_argument("--threads", type=int, default=None,
                        help="parallel worker processes for sweeps")
    parser.add_argument("--replications", type=int, default=None,
                        help="independent runs per sweep point")
    parser.add_argument("--output", default=None, help="output file (default stdout)")
    parser.add_argument("--format", choices=_FORMATS, default=None,
                        help="sweep output format")
    parser.add_argument("--config", default=None,
                        help="flat key = value file; flags override it")
    if single_run:
        parser.add_argument("--warmup", type=int, default=None,
                            help="initial slots excluded from the counts")
        parser.add_argument("--trace", default=None,
                            help="write a per-slot JSON-lines trace to this file")


_RUN_DEFAULTS = {
    "slots": 1_000_000,
    "seed": DEFAULT_SEED,
    "warmup": 0,
    "threads": 1,
    "replications": 4,
    "output": None,
    "format": "csv",
    "trace": None,
    "rate_grid": None,
}


def _read_config(path: str) -> dict[str, str]:
    text = Path(path).read_text(encoding="utf-8")
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_CONFIG_CONVERTERS = {
    **{name: conv for name, (conv, _d, _h) in _SCENARIO_OPTIONS.items()},
    "policy": _policy_list,
    "rate_grid": _float_list,
    "slots": int,
    "seed": _parse_seed,
    "warmup": int,
    "threads": int,
    "replications": int,
    "output": str,
    "format": str,
    "trace": str,
}


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Layer built-in defaults, config-file values, then explicit flags."""
    merged = dict(_RUN_DEFAULTS)
    merged.update({name: default for name, (_c, default, _h) in _SCENARIO_OPTIONS.items()})
    if getattr(args, "config", None):
        for key, raw in _read_config(args.config).items():
            if key not in _CONFIG_CONVERTERS:
                raise ConfigurationError(f"unknown config key {key!r}")
            try:
                merged[key] = _CONFIG_CONVERTERS[key](raw)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise ConfigurationError(f"config key {key!r}: {exc}") from None
    for key, value in vars(args).items():
        if value is not None or key not in merged:
            merged.setdefault(key, None)
            if value is not None:
                merged[key] = value
    for key, value in merged.items():
        setattr(args, key, value)
    if args.format not in _FORMATS:
        raise ConfigurationError(f"format must be one of {_FORMATS}, got {args.format!r}")
    return args


def _single(name: str, values: tuple) -> int:
    if len(values) != 1:
        raise ConfigurationError(
            f"--{name} must be a single value here, got {list(values)}"
        )
    return values[0]


def _build_params(args: argparse.Namespace, n_relays: int, m: int) -> SystemParams:
    return SystemParams(
        n_relays=n_relays,
        source_power=dbw_to_watts(args.ps_dbw),
        noise_power=args.noise,
        harvest_efficiency=args.eta,
        rate_target=args.rate,
        slot_duration=args.slot,
        fixed_relay_power=dbw_to_watts(args.pr_dbw),
        decode_set_cap=m,
        distance=args.distance,
        path_loss_exp=args.alpha,
    )


def _open_output(args: argparse.Namespace):
    if args.output:
        return open(args.output, "w", encoding="utf-8", newline="\n")
    return None


def _emit_points(points, args: argparse.Namespace) -> None:
    writer = {"csv": write_csv, "json-lines": write_json_lines, "gnuplot": write_gnuplot}[
        args.format
    ]
    handle = _open_output(args)
    try:
        writer(points, handle or sys.stdout)
    finally:
        if handle:
            handle.close()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_simulate(args: argparse.Namespace) -> int:
    params = _build_params(args, _single("n-relays", args.n_relays), _single("m", args.m))
    trace_handle = None
    if args.trace:
        trace_handle = open(args.trace, "w", encoding="utf-8", newline="\n")
    try:
        result = simulate(
            params, args.policy, args.slots, args.seed,
            warmup=args.warmup, trace=trace_handle,
        )
    finally:
        if trace_handle:
            trace_handle.close()
    payload = json.dumps(dataclasses.asdict(result), indent=2)
    handle = _open_output(args)
    if handle:
        with handle:
            handle.write(payload + "\n")
    else:
        print(payload)
    return 0


def _sweep_spec(args: argparse.Namespace) -> SweepSpec:
    axes = []
    if args.rate_grid:
        axes.append(("rate_target", tuple(args.rate_grid)))
    if len(args.n_relays) > 1:
        axes.append(("n_relays", tuple(args.n_relays)))
    if len(args.m) > 1:
        axes.append(("decode_set_cap", tuple(args.m)))
    if len(axes) != 1:
        raise ConfigurationError(
            "sweep needs exactly one axis: --rate-grid, a --n-relays list, or an --m list"
        )
    axis, values = axes[0]
    n = args.n_relays[0] if axis != "n_relays" else max(args.n_relays)
    m = args.m[0] if axis != "decode_set_cap" else max(args.m)
    base = _build_params(args, n, min(m, n))
    return SweepSpec(
        base_params=base,
        policy_ids=tuple(args.policy),
        axis=axis,
        axis_values=values,
        slots_per_point=args.slots,
        base_seed=args.seed,
        replications=args.replications,
    )


def _cmd_sweep(args: argparse.Namespace) -> int:
    points = run_sweep(_sweep_spec(args), threads=args.threads)
    _emit_points(points, args)
    return 0


def _cmd_optimize_m(args: argparse.Namespace) -> int:
    params = _build_params(args, _single("n-relays", args.n_relays), 1)
    result = optimize_m(
        params, args.m, args.rate, args.slots, args.seed,
        policy_id=args.policy, threads=args.threads,
    )
    payload = {
        "policy": args.policy,
        "rate_target": args.rate,
        "m_star": result.m_star,
        "outage_prob": result.outage_prob,
        "profile": [
            {"m": m, "outage_prob": p, "ci95": ci} for m, p, ci in result.profile
        ],
    }
    text = json.dumps(payload, indent=2)
    handle = _open_output(args)
    if handle:
        with handle:
            handle.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_floor(args: argparse.Namespace) -> int:
    floor = grid_powered_outage(
        args.rate,
        dbw_to_watts(args.ps_dbw),
        dbw_to_watts(args.pr_dbw),
        args.noise,
        args.n,
    )
    print(f"single_relay {floor.single_relay:.5f}")
    print(f"n_relay_floor {floor.n_relay_floor:.5f}")
    return 0


def _figure_specs(number: int, args: argparse.Namespace) -> list[SweepSpec]:
    grid = tuple(args.rate_grid) if args.rate_grid else DEFAULT_RATE_GRID
    common = dict(
        axis="rate_target",
        axis_values=grid,
        slots_per_point=args.slots,
        base_seed=args.seed,
        replications=args.replications,
    )

    def params(n: int, eta: float, m: int = 1) -> SystemParams:
        return SystemParams(
            n_relays=n,
            source_power=dbw_to_watts(args.ps_dbw),
            noise_power=args.noise,
            harvest_efficiency=eta,
            slot_duration=args.slot,
            fixed_relay_power=dbw_to_watts(args.pr_dbw),
            decode_set_cap=m,
        )

    if number == 2:
        return [
            SweepSpec(base_params=params(n, 0.7), policy_ids=("srs-ncsi",), **common)
            for n in (1, 3, 5, 7, 10)
        ]
    if number == 3:
        return [
            SweepSpec(
                base_params=params(10, 0.1),
                policy_ids=("srs-ncsi", "srs-best-energy", "srs-best-decoding"),
                **common,
            )
        ]
    if number == 4:
        return [
            SweepSpec(base_params=params(10, 0.1, m), policy_ids=("mrs-acsi",), **common)
            for m in range(1, 7)
        ]
    if number == 5:
        specs = [
            SweepSpec(base_params=params(10, 0.1, m), policy_ids=("mrs-acsi",), **common)
            for m in (2, 3)
        ]
        specs.append(
            SweepSpec(
                base_params=params(10, 0.1),
                policy_ids=("srs-best-energy-csit", "srs-best-decoding-csit"),
                **common,
            )
        )
        return specs
    if number == 6:
        specs = [
            SweepSpec(base_params=params(10, 0.1, m), policy_ids=("mrs-acsi",), **common)
            for m in (2, 3)
        ]
        specs.append(
            SweepSpec(
                base_params=params(10, 0.1, 5), policy_ids=("mrs-best-energy",), **common
            )
        )
        return specs
    raise ConfigurationError(f"no preset for figure {number}; choose 2-6")


def _cmd_figure(args: argparse.Namespace) -> int:
    out_dir = Path(args.output or os.environ.get(OUTPUT_DIR_ENV, "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    points = []
    for spec in _figure_specs(args.number, args):
        points.extend(run_sweep(spec, threads=args.threads))
    csv_path = out_dir / f"figure{args.number}.csv"
    dat_path = out_dir / f"figure{args.number}.dat"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as handle:
        write_csv(points, handle)
    with open(dat_path, "w", encoding="utf-8", newline="\n") as handle:
        write_gnuplot(points, handle)
    print(f"wrote {csv_path} and {dat_path} ({len(points)} points)")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehrelay",
        description="Outage-probability simulator for wireless-powered relay selection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="one seeded run, JSON result")
    p_sim.add_argument("--policy", required=True, choices=POLICY_IDS)
    _add_scenario_options(p_sim)
    _add_run_options(p_sim, single_run=True)
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="sweep one axis for one or more policies")
    p_sweep.add_argument("--policy", required=True, type=_policy_list,
                         help="comma-separated policy ids")
    p_sweep.add_argument("--rate-grid", type=_float_list, default=None,
                         help="comma-separated rate targets (sweep axis)")
    _add_scenario_options(p_sweep)
    _add_run_options(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_opt = sub.add_parser("optimize-m", help="search the decode-set cap M")
    p_opt.add_argument("--policy", default="mrs-acsi", choices=("mrs-acsi", "mrs-best-energy"))
    _add_scenario_options(p_opt)
    _add_run_options(p_opt)
    p_opt.set_defaults(func=_cmd_optimize_m)

    p_floor = sub.add_parser("floor", help="closed-form grid-powered outage")
    p_floor.add_argument("--rate", type=float, default=1.0)
    p_floor.add_argument("--ps-dbw", type=float, default=10.0)
    p_floor.add_argument("--pr-dbw", type=float, default=10.0)
    p_floor.add_argument("--noise", type=float, default=1.0)
    p_floor.add_argument("--n", type=int, default=1, help="available decoders")
    p_floor.set_defaults(func=_cmd_floor, _skip_resolve=True)

    p_fig = sub.add_parser("figure", help="preset sweep reproducing one experiment")
    p_fig.add_argument("number", type=int, choices=(2, 3, 4, 5, 6))
    p_fig.add_argument("--rate-grid", type=_float_list, default=None)
    _add_scenario_options(p_fig)
    _add_run_options(p_fig)
    p_fig.set_defaults(func=_cmd_figure)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if not getattr(args, "_skip_resolve", False):
            args = _resolve(args)
        return args.func(args)
    except ConfigurationError as exc:
        print(f"ehrelay: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ehrelay: i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
