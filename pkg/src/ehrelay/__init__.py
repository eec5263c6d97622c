"""Monte Carlo simulator for relay selection in RF energy-harvesting networks.

A single source feeds one of N wireless-powered relays each slot; the relay
forwards to the destination in the next slot. The package provides the
per-slot channel physics, five relay-selection policies (with and without
transmit-side channel knowledge), a pipelined slot engine with energy-queue
accounting, closed-form grid-powered outage references, and a seeded sweep
harness with CSV/gnuplot/JSON-lines output.
"""

from .analytic import OutageFloor, grid_powered_outage
from .channel import (
    ConfigurationError,
    SlotDraw,
    SystemParams,
    dbw_to_watts,
    draw_gain_matrix,
    draw_gains,
    draw_slot,
    harvested_energy,
    link_rate,
    required_forward_power,
)
from .engine import (
    EnergyLedger,
    LedgerError,
    LedgerReport,
    PendingForward,
    SimResult,
    audit_energy,
    simulate,
)
from .policies import (
    POLICIES,
    POLICY_IDS,
    TWO_PHASE_POLICY_IDS,
    DecodeDecision,
    ForwardDecision,
    Policy,
    RelayState,
    get_policy,
)
from .sweep import (
    CurvePoint,
    MSearchResult,
    SweepSpec,
    derive_seed,
    optimize_m,
    read_curve_csv,
    run_sweep,
    write_csv,
    write_gnuplot,
    write_json_lines,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "SystemParams",
    "SlotDraw",
    "dbw_to_watts",
    "draw_gains",
    "draw_gain_matrix",
    "draw_slot",
    "link_rate",
    "harvested_energy",
    "required_forward_power",
    "RelayState",
    "DecodeDecision",
    "ForwardDecision",
    "Policy",
    "POLICIES",
    "POLICY_IDS",
    "TWO_PHASE_POLICY_IDS",
    "get_policy",
    "PendingForward",
    "SimResult",
    "EnergyLedger",
    "LedgerReport",
    "LedgerError",
    "simulate",
    "audit_energy",
    "OutageFloor",
    "grid_powered_outage",
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
    "__version__",
]
