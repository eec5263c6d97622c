"""Relay-selection policies behind a common two-phase interface.

Every policy is a pair of pure functions over immutable snapshots:

* ``decode(gains_sr, states, params)`` runs in slot t and picks which
  available relays listen to the source (the decode set); everyone else
  available harvests.
* ``forward(decode_set, gains_rd, states, params)`` runs in slot t+1, when
  the relay-destination gains are finally known, and picks the single
  transmitter out of the decode set (or declares that none is feasible).

Selection metrics that rank by achievable rate are implemented as gain
comparisons: the rate is strictly increasing in the channel power gain, so
argmin/argmax over rates equals argmin/argmax over gains and the decode
test R_si >= R is ``gain >= params.decode_gain_threshold``. All indicator
tests are non-strict (>=), and ties always break toward the lowest relay
index so that runs are deterministic.

Policy identifiers (stable strings used by the engine, CLI and CSV output):
``srs-ncsi``, ``srs-best-energy``, ``srs-best-decoding``,
``srs-best-energy-csit``, ``srs-best-decoding-csit``, ``mrs-acsi``,
``mrs-best-energy``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .channel import ConfigurationError, SystemParams

__all__ = [
    "RelayState",
    "DecodeDecision",
    "ForwardDecision",
    "Policy",
    "POLICIES",
    "POLICY_IDS",
    "TWO_PHASE_POLICY_IDS",
    "get_policy",
    "srs_ncsi_decode",
    "srs_best_energy_decode",
    "srs_best_decoding_decode",
    "srs_best_energy_csit_decode",
    "mrs_acsi_decode",
    "mrs_best_energy_decode",
    "fixed_power_forward",
    "mrs_acsi_forward",
    "mrs_best_energy_forward",
]


@dataclass(slots=True)
class RelayState:
    """Per-relay battery level and availability for the current slot.

    ``available`` is False exactly when the relay is busy transmitting to
    the destination this slot, which excludes it from both decoding and
    harvesting.
    """

    stored_energy: float = 0.0   # E^st (J), never negative
    available: bool = True


@dataclass(slots=True)
class DecodeDecision:
    """Outcome of the decode phase of one slot.

    ``decode_set`` is ordered by selection priority (a singleton for the
    single-relay policies, up to M members for the two-phase ones).
    ``harvest_set`` holds every other available relay. ``n_decodable``
    counts the available relays that could decode the source at all,
    regardless of energy; the engine uses it to tell a first-hop outage
    (nobody could decode) from an energy outage (decoders existed but none
    was selectable).
    """

    decode_set: list[int] = field(default_factory=list)
    harvest_set: list[int] = field(default_factory=list)
    n_decodable: int = 0


@dataclass(slots=True)
class ForwardDecision:
    """Outcome of the forward phase: who transmits, at what power."""

    relay: int | None
    transmit_power: float   # W; fixed P_r without CSIT, P_id with CSIT
    energy_spent: float     # J; transmit_power * T whenever a relay transmits
    success: bool


def _harvest_complement(states: Sequence[RelayState], chosen: list[int]) -> list[int]:
    """Available relays that are not in the decode set."""
    return [i for i, st in enumerate(states) if st.available and i not in chosen]


# ---------------------------------------------------------------------------
# Decode-phase rules (slot t)
# ---------------------------------------------------------------------------

def srs_ncsi_decode(
    gains_sr: Sequence[float], states: Sequence[RelayState], params: SystemParams
) -> DecodeDecision:
    """Single relay selection without forward CSI.

    Out of the available relays that can decode (R_si >= R) and can afford
    the fixed forwarding power (E/T >= P_r), pick the one with the minimum
    source-relay rate. Decoding on the weakest qualifying channel leaves the
    strong channels free to harvest.
    """
    threshold = params.decode_gain_threshold
    need = params.fixed_relay_power * params.slot_duration
    n_decodable = 0
    best = -1
    best_gain = math.inf
    for i, st in enumerate(states):
        if not st.available:
            continue
        g = gains_sr[i]
        if g >= threshold:
            n_decodable += 1
            if st.stored_energy >= need and g < best_gain:
                best = i
                best_gain = g
    chosen = [] if best < 0 else [best]
    return DecodeDecision(chosen, _harvest_complement(states, chosen), n_decodable)


def srs_best_energy_decode(
    gains_sr: Sequence[float], states: Sequence[RelayState], params: SystemParams
) -> DecodeDecision:
    """Benchmark: pick the decoder with the largest residual energy.

    Maximizes (E - P_r T)+ over available decoders; relays that cannot cover
    the fixed power at all (E/T < P_r) are not selectable, so an all-infeasible
    slot yields an empty decode set.
    """
    threshold = params.decode_gain_threshold
    need = params.fixed_relay_power * params.slot_duration
    n_decodable = 0
    best = -1
    best_residual = -math.inf
    for i, st in enumerate(states):
        if not st.available:
            continue
        if gains_sr[i] >= threshold:
            n_decodable += 1
            residual = st.stored_energy - need
            if residual >= 0.0 and residual > best_residual:
                best = i
                best_residual = residual
    chosen = [] if best < 0 else [best]
    return DecodeDecision(chosen, _harvest_complement(states, chosen), n_decodable)


def srs_best_decoding_decode(
    gains_sr: Sequence[float], states: Sequence[RelayState], params: SystemParams
) -> DecodeDecision:
    """Benchmark: pick the energy-feasible decoder with the best channel.

    Maximizes R_si over available relays with R_si >= R, restricted to those
    with E/T >= P_r so that transmit energy is never spent on a relay that
    cannot forward.
    """
    threshold = params.decode_gain_threshold
    need = params.fixed_relay_power * params.slot_duration
    n_decodable = 0
    best = -1
    best_gain = -math.inf
    for i, st in enumerate(states):
        if not st.available:
            continue
        g = gains_sr[i]
        if g >= threshold:
            n_decodable += 1
            if st.stored_energy >= need and g > best_gain:
                best = i
                best_gain = g
    chosen = [] if best < 0 else [best]
    return DecodeDecision(chosen, _harvest_complement(states, chosen), n_decodable)


def srs_best_energy_csit_decode(
    gains_sr: Sequence[float], states: Sequence[RelayState], params: SystemParams
) -> DecodeDecision:
    """CSIT variant of best-energy: maximize raw stored energy.

    The forwarding power P_id is only known one slot later, so there is no
    energy threshold here; a selected relay may well turn out infeasible at
    forward time, and it still gave up harvesting this slot.
    """
    threshold = params.decode_gain_threshold
    n_decodable = 0
    best = -1
    best_energy = -math.inf
    for i, st in enumerate(states):
        if not st.available:
            continue
        if gains_sr[i] >= threshold:
            n_decodable += 1
            if st.stored_energy > best_energy:
                best = i
                best_energy = st.stored_energy
    chosen = [] if best < 0 else [best]
    return DecodeDecision(chosen, _harvest_complement(states, chosen), n_decodable)


def mrs_acsi_decode(
    gains_sr: Sequence[float], states: Sequence[RelayState], params: SystemParams
) -> DecodeDecision:
    """Two-phase selection, phase one: reserve the weakest decoders.

    Out of the available relays with R_si >= R, the min(M, count) with the
    smallest source-relay gains are dedicated to decoding; the strong
    channels keep harvesting at full rate. No energy condition applies in
    this phase.
    """
    threshold = params.decode_gain_threshold
    candidates = []
    for i, st in enumerate(states):
        if st.available and gains_sr[i] >= threshold:
            candidates.append((gains_sr[i], i))
    candidates.sort()
    chosen = [i for _, i in candidates[: params.decode_set_cap]]
    return DecodeDecision(chosen, _harvest_complement(states, chosen), len(candidates))


def mrs_best_energy_decode(
    gains_sr: Sequence[float], states: Sequence[RelayState], params: SystemParams
) -> DecodeDecision:
    """Two-phase benchmark, phase one: reserve the fullest batteries.

    Same shape as :func:`mrs_acsi_decode` but ranks decoders by stored
    energy (largest first) instead of channel weakness.
    """
    threshold = params.decode_gain_threshold
    candidates = []
    for i, st in enumerate(states):
        if st.available and gains_sr[i] >= threshold:
            candidates.append((-st.stored_energy, i))
    candidates.sort()
    chosen = [i for _, i in candidates[: params.decode_set_cap]]
    return DecodeDecision(chosen, _harvest_complement(states, chosen), len(candidates))


# ---------------------------------------------------------------------------
# Forward-phase rules (slot t+1)
# ---------------------------------------------------------------------------

def fixed_power_forward(
    decode_set: Sequence[int],
    gains_rd: Sequence[float],
    states: Sequence[RelayState],
    params: SystemParams,
) -> ForwardDecision:
    """Forward at the fixed power P_r, blind to the channel.

    Used by the single-relay no-CSIT policies: the selected relay always
    transmits (its battery was checked at decode time and cannot have
    drained since), so the full P_r T is spent even when the draw turns out
    too weak and the hop fails.
    """
    if not decode_set:
        return ForwardDecision(None, 0.0, 0.0, False)
    relay = decode_set[0]
    success = gains_rd[relay] >= params.forward_gain_threshold
    return ForwardDecision(
        relay,
        params.fixed_relay_power,
        params.fixed_relay_power * params.slot_duration,
        success,
    )


def mrs_acsi_forward(
    decode_set: Sequence[int],
    gains_rd: Sequence[float],
    states: Sequence[RelayState],
    params: SystemParams,
) -> ForwardDecision:
    """Phase two with CSIT: transmit at minimum sufficient power.

    Each decode-set member's required power P_id is computed from its now
    known relay-destination gain; among the members whose battery covers
    their own P_id, the cheapest transmitter wins. Transmission at P_id
    achieves the rate target by construction, so a transmission never fails;
    the only failure mode is that nobody is feasible. Also serves as the
    forward rule of the single-relay CSIT benchmarks (singleton decode set).
    """
    t = params.slot_duration
    numerator = params.power_numerator   # P_id = numerator / gain
    best = -1
    best_power = math.inf
    for i in decode_set:
        g = gains_rd[i]
        if numerator <= 0.0:
            p = 0.0
        elif g <= 0.0:
            continue   # unusable link, infinite required power
        else:
            p = numerator / g
        if states[i].stored_energy >= p * t and p < best_power:
            best = i
            best_power = p
    if best < 0:
        return ForwardDecision(None, 0.0, 0.0, False)
    return ForwardDecision(best, best_power, best_power * t, True)


def mrs_best_energy_forward(
    decode_set: Sequence[int],
    gains_rd: Sequence[float],
    states: Sequence[RelayState],
    params: SystemParams,
) -> ForwardDecision:
    """Phase two of the two-phase benchmark: keep the most energy in reserve.

    Among feasible decode-set members (E/T >= P_id), pick the one whose
    battery minus the transmission cost stays largest.
    """
    t = params.slot_duration
    numerator = params.power_numerator
    best = -1
    best_power = math.inf
    best_residual = -math.inf
    for i in decode_set:
        g = gains_rd[i]
        if numerator <= 0.0:
            p = 0.0
        elif g <= 0.0:
            continue
        else:
            p = numerator / g
        cost = p * t
        if states[i].stored_energy >= cost:
            residual = states[i].stored_energy - cost
            if residual > best_residual:
                best = i
                best_power = p
                best_residual = residual
    if best < 0:
        return ForwardDecision(None, 0.0, 0.0, False)
    return ForwardDecision(best, best_power, best_power * t, True)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

DecodeRule = Callable[
    [Sequence[float], Sequence[RelayState], SystemParams], DecodeDecision
]
ForwardRule = Callable[
    [Sequence[int], Sequence[float], Sequence[RelayState], SystemParams], ForwardDecision
]


@dataclass(frozen=True)
class Policy:
    """A named decode/forward rule pair."""

    policy_id: str
    decode: DecodeRule
    forward: ForwardRule
    two_phase: bool   # True when decode_set_cap (M) shapes the decode set


POLICIES: dict[str, Policy] = {
    p.policy_id: p
    for p in (
        Policy("srs-ncsi", srs_ncsi_decode, fixed_power_forward, False),
        Policy("srs-best-energy", srs_best_energy_decode, fixed_power_forward, False),
        Policy("srs-best-decoding", srs_best_decoding_decode, fixed_power_forward, False),
        # CSIT benchmarks reuse the min-power forward rule on their singleton set.
        Policy("srs-best-energy-csit", srs_best_energy_csit_decode, mrs_acsi_forward, False),
        Policy("srs-best-decoding-csit", srs_best_decoding_decode, mrs_acsi_forward, False),
        Policy("mrs-acsi", mrs_acsi_decode, mrs_acsi_forward, True),
        Policy("mrs-best-energy", mrs_best_energy_decode, mrs_best_energy_forward, True),
    )
}

POLICY_IDS: tuple[str, ...] = tuple(POLICIES)
TWO_PHASE_POLICY_IDS: tuple[str, ...] = tuple(
    p.policy_id for p in POLICIES.values() if p.two_phase
)


def get_policy(policy_id: str) -> Policy:
    """Look up a policy by its identifier; unknown ids are a configuration error."""
    try:
        return POLICIES[policy_id]
    except KeyError:
        known = ", ".join(POLICY_IDS)
        raise ConfigurationError(f"unknown policy {policy_id!r} (known: {known})") from None
