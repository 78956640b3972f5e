"""Deterministic PRNG derivation.

All randomness flows through numpy's PCG64 generator seeded from integer
tuples via SeedSequence, so any chart, tutorial path or simulation can be
regenerated byte-identically from its seed in another process. Named
sub-streams are derived by appending small integers to the seed tuple;
the constants below keep unrelated consumers on disjoint streams.

Streams are stable for a fixed numpy version. numpy has kept PCG64 and
SeedSequence output frozen since 1.17, but regenerating artifacts across
a future numpy major version should be re-verified, not assumed.
"""

import numpy as np

# sub-stream namespaces
NS_CHART = 1
NS_PATH = 2
NS_COLOR = 3
NS_TUTORIAL = 4
NS_TRIAL = 5
NS_SIM = 6
NS_TRUTH = 7


def rng_from(seed, *key):
    """Generator for the sub-stream identified by (seed, *key)."""
    entropy = [int(seed), *(int(k) for k in key)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def derive_seed(seed, *key):
    """Collapse (seed, *key) into a fresh non-negative 63-bit seed."""
    entropy = [int(seed), *(int(k) for k in key)]
    state = np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0]
    return int(state >> np.uint64(1))
