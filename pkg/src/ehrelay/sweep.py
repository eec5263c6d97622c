"""Seeded parameter sweeps, the optimal decode-set-size search, and output.

A sweep runs a list of policies over one axis (rate target, relay count or
decode-set cap), with a fixed number of replications per point. Replication
seeds are derived from ``(base_seed, point_index, rep_index)`` only — never
from the policy — so every policy sees identical channel realizations at a
given point (common random numbers), which sharpens curve comparisons.
Execution order and worker count never change the results: tasks are merged
by index, not by completion order.

Writers emit the same per-point record as CSV (fixed header, UTF-8, LF),
JSON lines, or gnuplot-ready whitespace-delimited blocks (one block per
policy/parameter combination, separated by double blank lines for use with
gnuplot's ``index``).
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence, TextIO

import numpy as np

from .channel import ConfigurationError, SystemParams
from .engine import SimResult, simulate
from .policies import get_policy

__all__ = [
    "AXES",
    "SweepSpec",
    "CurvePoint",
    "MSearchResult",
    "derive_seed",
    "run_sweep",
    "optimize_m",
    "write_csv",
    "write_gnuplot",
    "write_json_lines",
    "read_curve_csv",
    "CSV_HEADER",
]

AXES = ("rate_target", "n_relays", "decode_set_cap")

CSV_HEADER = [
    "policy",
    "axis",
    "axis_value",
    "N",
    "M",
    "eta",
    "R",
    "slots",
    "replications",
    "outage_prob",
    "ci95",
    "cause_first_hop_frac",
    "cause_energy_frac",
    "cause_second_hop_frac",
    "base_seed",
]

_Z95 = 1.959963984540054


def derive_seed(base_seed: int, point_index: int, rep_index: int) -> int:
    """Deterministic child seed for one (sweep point, replication) pair."""
    ss = np.random.SeedSequence((base_seed, point_index, rep_index))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: which policies, which axis, and how much sampling."""

    base_params: SystemParams
    policy_ids: tuple[str, ...]
    axis: str
    axis_values: tuple[float, ...] | tuple[int, ...]
    slots_per_point: int = 1_000_000
    base_seed: int = 20260801
    replications: int = 4

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ConfigurationError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.policy_ids:
            raise ConfigurationError("policy_ids must not be empty")
        for pid in self.policy_ids:
            policy = get_policy(pid)
            if self.axis == "decode_set_cap" and not policy.two_phase:
                raise ConfigurationError(
                    f"decode_set_cap axis is meaningless for single-relay policy {pid!r}"
                )
        if not self.axis_values:
            raise ConfigurationError("axis_values must not be empty")
        if any(b <= a for a, b in zip(self.axis_values, self.axis_values[1:])):
            raise ConfigurationError("axis_values must be strictly increasing")
        if self.slots_per_point < 1:
            raise ConfigurationError("slots_per_point must be >= 1")
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        if self.base_seed < 0:
            raise ConfigurationError("base_seed must be >= 0")
        # Fail on out-of-range axis values before any simulation work.
        for value in self.axis_values:
            self.params_at(value)

    def params_at(self, axis_value: float | int) -> SystemParams:
        """Scenario parameters for one point on the axis."""
        if self.axis == "rate_target":
            return replace(self.base_params, rate_target=float(axis_value))
        if self.axis == "n_relays":
            n = int(axis_value)
            # Keep M meaningful when the relay count drops below it.
            m = min(self.base_params.decode_set_cap, n)
            return replace(self.base_params, n_relays=n, decode_set_cap=m)
        return replace(self.base_params, decode_set_cap=int(axis_value))


@dataclass(frozen=True)
class CurvePoint:
    """Aggregated outage estimate for one (policy, axis value) pair."""

    policy_id: str
    axis: str
    axis_value: float | int
    n_relays: int
    decode_set_cap: int
    harvest_efficiency: float
    rate_target: float
    slots: int
    replications: int
    outage_prob: float
    ci95_halfwidth: float
    cause_first_hop_frac: float
    cause_energy_frac: float
    cause_second_hop_frac: float
    base_seed: int
    rep_seeds: tuple[int, ...] = ()


def _run_task(task: tuple[int, SystemParams, str, int, int]) -> tuple[int, SimResult]:
    index, params, policy_id, slots, seed = task
    return index, simulate(params, policy_id, slots, seed)


def _run_all(
    tasks: list[tuple[int, SystemParams, str, int, int]], threads: int
) -> list[SimResult]:
    results: list[SimResult | None] = [None] * len(tasks)
    if threads <= 1 or len(tasks) <= 1:
        for task in tasks:
            index, result = _run_task(task)
            results[index] = result
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for index, result in pool.map(_run_task, tasks):
                results[index] = result
    return results  # type: ignore[return-value]


def _aggregate(
    spec: SweepSpec,
    policy_id: str,
    axis_value: float | int,
    params: SystemParams,
    reps: Sequence[SimResult],
) -> CurvePoint:
    packets = sum(r.packets for r in reps)
    outages = sum(r.outages for r in reps)
    first = sum(r.cause_first_hop for r in reps)
    energy = sum(r.cause_energy for r in reps)
    second = sum(r.cause_second_hop for r in reps)
    p = outages / packets if packets else 0.0
    ci = _Z95 * math.sqrt(p * (1.0 - p) / packets) if packets else 0.0
    return CurvePoint(
        policy_id=policy_id,
        axis=spec.axis,
        axis_value=axis_value,
        n_relays=params.n_relays,
        decode_set_cap=params.decode_set_cap,
        harvest_efficiency=params.harvest_efficiency,
        rate_target=params.rate_target,
        slots=spec.slots_per_point,
        replications=spec.replications,
        outage_prob=p,
        ci95_halfwidth=ci,
        cause_first_hop_frac=first / packets if packets else 0.0,
        cause_energy_frac=energy / packets if packets else 0.0,
        cause_second_hop_frac=second / packets if packets else 0.0,
        base_seed=spec.base_seed,
        rep_seeds=tuple(r.seed for r in reps),
    )


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[CurvePoint]:
    """Run every (policy, axis value) point and return them in spec order."""
    tasks = []
    layout = []   # (policy_id, axis_value, params, first_task_index)
    for pid in spec.policy_ids:
        for point_index, value in enumerate(spec.axis_values):
            params = spec.params_at(value)
            layout.append((pid, value, params, len(tasks)))
            for rep in range(spec.replications):
                seed = derive_seed(spec.base_seed, point_index, rep)
                tasks.append((len(tasks), params, pid, spec.slots_per_point, seed))
    results = _run_all(tasks, threads)
    points = []
    for pid, value, params, start in layout:
        reps = results[start : start + spec.replications]
        points.append(_aggregate(spec, pid, value, params, reps))
    return points


@dataclass(frozen=True)
class MSearchResult:
    """Outcome of the optimal decode-set-size search."""

    m_star: int
    outage_prob: float
    profile: tuple[tuple[int, float, float], ...]   # (M, outage_prob, ci95)


def optimize_m(
    params: SystemParams,
    m_range: Sequence[int],
    rate_target: float,
    slots: int,
    seed: int,
    policy_id: str = "mrs-acsi",
    threads: int = 1,
) -> MSearchResult:
    """Find the decode-set cap minimizing simulated outage at one rate target.

    Every candidate M runs on the same seed (common random numbers), so the
    comparison sees identical channels. Candidates whose outage lies within
    one 95% CI half-width of the minimum are treated as tied and the
    smallest such M wins.
    """
    if not m_range:
        raise ConfigurationError("m_range must not be empty")
    ms = sorted(set(int(m) for m in m_range))
    if ms[0] < 1 or ms[-1] > params.n_relays:
        raise ConfigurationError(
            f"m_range must lie within [1, {params.n_relays}], got {ms}"
        )
    if not get_policy(policy_id).two_phase:
        raise ConfigurationError(f"optimize_m needs a two-phase policy, got {policy_id!r}")
    tasks = []
    for index, m in enumerate(ms):
        point = replace(params, decode_set_cap=m, rate_target=rate_target)
        tasks.append((index, point, policy_id, slots, seed))
    results = _run_all(tasks, threads)
    profile = tuple(
        (m, r.outage_prob, r.ci95_halfwidth) for m, r in zip(ms, results)
    )
    best_m, best_p, best_ci = min(profile, key=lambda row: (row[1], row[0]))
    for m, p, _ in profile:
        if p <= best_p + best_ci:
            return MSearchResult(m_star=m, outage_prob=p, profile=profile)
    return MSearchResult(m_star=best_m, outage_prob=best_p, profile=profile)


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------

def _row_values(point: CurvePoint) -> list:
    return [
        point.policy_id,
        point.axis,
        point.axis_value,
        point.n_relays,
        point.decode_set_cap,
        point.harvest_efficiency,
        point.rate_target,
        point.slots,
        point.replications,
        point.outage_prob,
        point.ci95_halfwidth,
        point.cause_first_hop_frac,
        point.cause_energy_frac,
        point.cause_second_hop_frac,
        point.base_seed,
    ]


def write_csv(points: Iterable[CurvePoint], stream: TextIO) -> None:
    """Write curve points as CSV with the mandatory header row."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for point in points:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in _row_values(point)])


def read_curve_csv(stream: TextIO) -> list[CurvePoint]:
    """Parse a CSV produced by :func:`write_csv` back into curve points.

    Replication seeds are not serialized (they are re-derivable from the
    base seed), so parsed points carry an empty ``rep_seeds``.
    """
    reader = csv.reader(stream)
    header = next(reader)
    if header != CSV_HEADER:
        raise ConfigurationError(f"unexpected CSV header {header!r}")
    points = []
    for row in reader:
        if not row:
            continue
        rec = dict(zip(CSV_HEADER, row))
        axis = rec["axis"]
        axis_value: float | int = (
            float(rec["axis_value"]) if axis == "rate_target" else int(rec["axis_value"])
        )
        points.append(
            CurvePoint(
                policy_id=rec["policy"],
                axis=axis,
                axis_value=axis_value,
                n_relays=int(rec["N"]),
                decode_set_cap=int(rec["M"]),
                harvest_efficiency=float(rec["eta"]),
                rate_target=float(rec["R"]),
                slots=int(rec["slots"]),
                replications=int(rec["replications"]),
                outage_prob=float(rec["outage_prob"]),
                ci95_halfwidth=float(rec["ci95"]),
                cause_first_hop_frac=float(rec["cause_first_hop_frac"]),
                cause_energy_frac=float(rec["cause_energy_frac"]),
                cause_second_hop_frac=float(rec["cause_second_hop_frac"]),
                base_seed=int(rec["base_seed"]),
            )
        )
    return points


def write_json_lines(points: Iterable[CurvePoint], stream: TextIO) -> None:
    """Write one JSON object per curve point (same fields as the CSV)."""
    for point in points:
        stream.write(json.dumps(dict(zip(CSV_HEADER, _row_values(point)))) + "\n")


def write_gnuplot(points: Sequence[CurvePoint], stream: TextIO) -> None:
    """Write gnuplot-ready data blocks: axis_value, outage, ci95 columns.

    Rows are grouped into one block per (policy, N, M, eta) combination,
    with blocks separated by two blank lines (gnuplot ``index`` convention).
    """
    groups: dict[tuple, list[CurvePoint]] = {}
    for point in points:
        key = (
            point.policy_id,
            point.n_relays,
            point.decode_set_cap,
            point.harvest_efficiency,
        )
        groups.setdefault(key, []).append(point)
    first = True
    for (pid, n, m, eta), rows in groups.items():
        if not first:
            stream.write("\n\n")
        first = False
        stream.write(f"# policy={pid} N={n} M={m} eta={eta!r}\n")
        stream.write(f"# {rows[0].axis} outage_prob ci95\n")
        for point in rows:
            stream.write(
                f"{point.axis_value} {point.outage_prob!r} {point.ci95_halfwidth!r}\n"
            )
