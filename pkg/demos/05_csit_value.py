"""What transmit-side CSI is worth, and why the two-phase scheme wins.

Three comparisons at N=10, eta=0.1, shared channel draws:

1. each single-relay benchmark with power allocation versus its blind
   fixed-power original (CSI slashes the energy bill),
2. the two-phase scheme (weakest decoders reserved, cheapest feasible
   transmitter chosen) versus those CSIT single-relay benchmarks,
3. the two-phase scheme versus the prior-art variant that reserves the
   fullest batteries and keeps the largest residual.
"""

from ehrelay import SystemParams, simulate

SLOTS = 100_000
SEED = 424


def outage(policy, rate, m=2):
    params = SystemParams(
        n_relays=10, harvest_efficiency=0.1, rate_target=rate, decode_set_cap=m
    )
    return simulate(params, policy, SLOTS, SEED).outage_prob


print("1) power allocation vs fixed power (same selection metric):")
for rate in (1.0, 1.5, 2.0):
    blind = outage("srs-best-energy", rate)
    csit = outage("srs-best-energy-csit", rate)
    print(f"   R={rate}: best-energy {blind:.4f} -> with CSIT {csit:.4f}")

print("\n2) two-phase mrs-acsi vs CSIT single-relay benchmarks:")
for rate in (1.5, 2.0, 2.5):
    mrs = min(outage("mrs-acsi", rate, m) for m in (2, 3))
    be = outage("srs-best-energy-csit", rate)
    bd = outage("srs-best-decoding-csit", rate)
    print(f"   R={rate}: mrs-acsi {mrs:.4f}  vs  best-energy {be:.4f}, best-decoding {bd:.4f}")

print("\n3) decode-set metric match-up (both two-phase, both with CSIT):")
for rate in (1.5, 2.0, 2.5):
    ours = min(outage("mrs-acsi", rate, m) for m in (2, 3))
    prior = outage("mrs-best-energy", rate, m=5)   # its own best M
    print(f"   R={rate}: weakest-decoders {ours:.4f}  vs  fullest-batteries {prior:.4f}")

print("\nReserving weak channels for decoding keeps the strong ones harvesting;")
print("reserving full batteries squanders exactly the slots that refill them.")
