"""Closed-form outage references for the energy-unconstrained system.

When harvested energy is never the bottleneck, the network behaves like a
grid-powered decode-and-forward system and its outage probability has a
closed form under unit-mean exponential channel gains:

* a single fixed relay fails when either hop's gain falls below its
  threshold: P = 1 - exp(-lam_s) exp(-lam_r) with
  lam = (2^(2R) - 1) sigma^2 / P for the respective hop power;
* with n candidate decoders and single-relay selection, the first hop fails
  only when all n miss, giving the decode-diversity floor
  P = 1 - (1 - q^n) exp(-lam_r), q = 1 - exp(-lam_s).

The floor is the asymptote the simulator must approach once relays are
numerous or harvesting is generous; pass n = N - 1 to account for the one
relay that is busy forwarding while the others listen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ConfigurationError

__all__ = ["OutageFloor", "grid_powered_outage"]


@dataclass(frozen=True)
class OutageFloor:
    """Grid-powered outage probabilities: one fixed relay, and n-decoder selection."""

    single_relay: float
    n_relay_floor: float


def grid_powered_outage(
    rate_target: float,
    source_power: float,
    relay_power: float,
    noise_power: float,
    n_available: int,
) -> OutageFloor:
    """Evaluate both closed forms for the given scenario constants."""
    if source_power <= 0 or relay_power <= 0 or noise_power <= 0:
        raise ConfigurationError("powers and noise must be positive")
    if rate_target < 0:
        raise ConfigurationError("rate_target must be >= 0")
    if n_available < 1:
        raise ConfigurationError("n_available must be >= 1")
    snr_gap = 2.0 ** (2.0 * rate_target) - 1.0
    lam_s = snr_gap * noise_power / source_power
    lam_r = snr_gap * noise_power / relay_power
    q = -math.expm1(-lam_s)   # P(one relay fails to decode)
    single = -math.expm1(-(lam_s + lam_r))
    floor = 1.0 - (1.0 - q**n_available) * math.exp(-lam_r)
    return OutageFloor(single_relay=single, n_relay_floor=floor)
