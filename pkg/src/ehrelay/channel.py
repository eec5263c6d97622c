"""Scenario parameters and per-slot channel physics.

Everything in this module is stateless: Rayleigh fading draws, half-duplex
link rates, harvested energy and the transmit power needed to hit a rate
target. Internal units are watts, joules, seconds and bits/s/Hz; dB values
are converted once at the CLI boundary via :func:`dbw_to_watts`.

A Rayleigh-faded amplitude with mean-one power means the channel power gain
|h|^2 is exponentially distributed with mean 1, which is what
:func:`draw_gains` produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

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
]


class ConfigurationError(ValueError):
    """A scenario parameter or CLI request violates the model's contracts."""


def dbw_to_watts(dbw: float) -> float:
    """Convert a power in dBW to linear watts (10 dBW -> 10 W)."""
    return 10.0 ** (dbw / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Constants describing one simulation scenario.

    Powers are linear watts. ``decode_set_cap`` is the maximum decode-set
    size and only matters for the two-phase policies; single-relay policies
    ignore it. The source-relay path-loss factor 1/d^alpha multiplies the
    fading gain before any rate or harvest computation; with the default
    d = 1 it is exactly 1.

    Derived per-scenario constants used on every slot are precomputed here:

    * ``snr_gap``: required received SNR 2^(2R) - 1 for the half-duplex rate,
    * ``decode_gain_threshold``: smallest source-relay power gain that still
      decodes (gain >= snr_gap sigma^2 / P_s iff link_rate >= R),
    * ``forward_gain_threshold``: smallest relay-destination gain that
      succeeds at the fixed power P_r,
    * ``power_numerator``: snr_gap sigma^2, the numerator of the CSIT
      transmit power P_id = power_numerator / gain.
    """

    n_relays: int
    source_power: float = 10.0        # P_s (W)
    noise_power: float = 1.0          # sigma^2 (W)
    harvest_efficiency: float = 0.7   # eta, fraction of RF power stored
    rate_target: float = 1.0          # R (bits/s/Hz), end-to-end target
    slot_duration: float = 1.0        # T (s)
    fixed_relay_power: float = 10.0   # P_r (W), no-CSIT forwarding power
    decode_set_cap: int = 1           # M, cap on the decode set
    distance: float = 1.0             # d (m), source-relay distance
    path_loss_exp: float = 2.0        # alpha

    path_loss_factor: float = field(init=False, repr=False, compare=False)
    snr_gap: float = field(init=False, repr=False, compare=False)
    decode_gain_threshold: float = field(init=False, repr=False, compare=False)
    forward_gain_threshold: float = field(init=False, repr=False, compare=False)
    power_numerator: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_relays < 1:
            raise ConfigurationError(f"n_relays must be >= 1, got {self.n_relays}")
        if self.source_power <= 0 or self.fixed_relay_power <= 0:
            raise ConfigurationError("powers must be positive")
        if self.noise_power <= 0:
            raise ConfigurationError("noise_power must be positive")
        if not 0.0 <= self.harvest_efficiency <= 1.0:
            raise ConfigurationError(
                f"harvest_efficiency must be in [0, 1], got {self.harvest_efficiency}"
            )
        if self.rate_target < 0:
            raise ConfigurationError("rate_target must be >= 0")
        if self.slot_duration <= 0:
            raise ConfigurationError("slot_duration must be positive")
        if not 1 <= self.decode_set_cap <= self.n_relays:
            raise ConfigurationError(
                f"decode_set_cap must be in [1, n_relays], got {self.decode_set_cap}"
            )
        if self.distance <= 0:
            raise ConfigurationError("distance must be positive")
        snr_gap = 2.0 ** (2.0 * self.rate_target) - 1.0
        object.__setattr__(self, "path_loss_factor", self.distance ** (-self.path_loss_exp))
        object.__setattr__(self, "snr_gap", snr_gap)
        object.__setattr__(
            self, "decode_gain_threshold", snr_gap * self.noise_power / self.source_power
        )
        object.__setattr__(
            self, "forward_gain_threshold", snr_gap * self.noise_power / self.fixed_relay_power
        )
        object.__setattr__(self, "power_numerator", snr_gap * self.noise_power)


@dataclass(frozen=True)
class SlotDraw:
    """One slot's channel power gains for every relay on both hops."""

    gain_sr: np.ndarray   # |h_si|^2, shape (N,)
    gain_rd: np.ndarray   # |h_id|^2, shape (N,)


def draw_gains(rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` i.i.d. channel power gains, exponential with mean 1.

    ``n = 0`` returns an empty vector. The stream is consumed
    deterministically, so equal seeds yield bit-identical vectors.
    """
    return rng.standard_exponential(n)


def draw_gain_matrix(rng: np.random.Generator, slots: int, n: int) -> np.ndarray:
    """Draw a (slots, n) block of unit-mean exponential power gains."""
    return rng.standard_exponential((slots, n))


def draw_slot(rng: np.random.Generator, n: int) -> SlotDraw:
    """Draw both hops' gains for one slot (source-relay first)."""
    return SlotDraw(gain_sr=draw_gains(rng, n), gain_rd=draw_gains(rng, n))


def link_rate(gain: float, power: float, noise: float) -> float:
    """Half-duplex achievable rate (1/2) log2(1 + gain * power / noise)."""
    return 0.5 * math.log2(1.0 + gain * power / noise)


def harvested_energy(gain: float, source_power: float, eta: float, slot: float) -> float:
    """Energy (J) a listening relay stores from one source broadcast slot."""
    return eta * source_power * gain * slot


def required_forward_power(gain_rd: float, rate_target: float, noise: float) -> float:
    """Transmit power (W) that achieves ``rate_target`` on a known channel.

    Inverts the half-duplex rate: P = (2^(2R) - 1) sigma^2 / gain. A zero
    gain with a positive rate target returns +inf (link unusable, never an
    error); a zero rate target needs no power at all.
    """
    numerator = (2.0 ** (2.0 * rate_target) - 1.0) * noise
    if numerator <= 0.0:
        return 0.0
    if gain_rd <= 0.0:
        return math.inf
    return numerator / gain_rd
