"""Channel building blocks: fading draws, link rates, harvest, power control.

Walks through the per-slot physics one quantity at a time. Everything here
is deterministic given the seed, so the printed numbers are reproducible.
"""

import numpy as np

from ehrelay import (
    draw_gains,
    harvested_energy,
    link_rate,
    required_forward_power,
)

rng = np.random.default_rng(7)

# Rayleigh fading with mean-one power: the power gain |h|^2 is Exp(1).
gains = draw_gains(rng, 1_000_000)
print(f"mean power gain        : {gains.mean():.4f}   (expected 1.0)")
print(f"P(gain <= 0.3)         : {np.mean(gains <= 0.3):.4f}   (expected {1 - np.exp(-0.3):.4f})")

# Half-duplex achievable rate at 10 W source power over unit noise.
print("\ngain -> rate at P=10 W, sigma^2=1:")
for g in (0.1, 0.3, 1.0, 3.0):
    print(f"  |h|^2={g:<4} rate={link_rate(g, 10.0, 1.0):.3f} b/s/Hz")
print("  (gain 0.3 is exactly the R=1 decoding threshold)")

# Energy a listening relay banks from one broadcast slot, eta=0.7.
print("\nharvest per slot at eta=0.7, P_s=10 W:")
for g in (0.2, 1.0, 2.5):
    print(f"  |h|^2={g:<4} E_h={harvested_energy(g, 10.0, 0.7, 1.0):.2f} J")

# With transmit-side CSI the relay inverts the rate formula instead of
# blasting a fixed power: weak channels get expensive fast.
print("\nrequired transmit power for R=1 (P_id = 3 sigma^2 / gain):")
for g in (2.0, 1.0, 0.3, 0.05):
    print(f"  |h|^2={g:<4} P_id={required_forward_power(g, 1.0, 1.0):7.2f} W")
