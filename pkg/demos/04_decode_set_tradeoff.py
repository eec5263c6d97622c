"""The decode-set size tradeoff and the optimal-M search.

Reserving M relays for decoding buys transmit-side diversity one slot later
but starves harvesting now. At low rate targets energy is cheap and the
optimum sits at M=3; push the rate up and the required transmit powers
explode, the queues drain, and M=2 takes over. Below the crossover region
(R under about 1.2 at these parameters) energy stops binding entirely and
every M looks alike.
"""

from ehrelay import SystemParams, optimize_m

base = SystemParams(n_relays=10, harvest_efficiency=0.1)

print("mrs-acsi, N=10, eta=0.1, M searched over 1..6 (200k slots/point)\n")
for rate in (1.3, 1.5, 1.7, 2.0, 2.3):
    result = optimize_m(base, range(1, 7), rate, slots=200_000, seed=99)
    profile = "  ".join(f"M{m}:{p:.4f}" for m, p, _ in result.profile)
    print(f"R={rate:3.1f}  M*={result.m_star}   {profile}")

print("\nTies within one CI half-width resolve toward the smaller M, so the")
print("search never over-buys diversity the statistics cannot justify.")
