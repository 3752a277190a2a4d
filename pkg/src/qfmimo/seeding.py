"""Deterministic random-stream derivation.

Every Monte Carlo unit of work (a network draw, one destination's rate
estimate, one oracle run) owns a generator derived from an explicit integer
key path.  Results are therefore independent of evaluation order and of how
many workers a sweep uses.
"""

from __future__ import annotations

import numpy as np


def seed_sequence(*keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(k) for k in keys])


def derive_rng(*keys: int) -> np.random.Generator:
    """Generator for the stream identified by the integer key path."""
    return np.random.default_rng(seed_sequence(*keys))


def derive_seed(*keys: int) -> int:
    """Stable 64-bit seed for the stream identified by the key path."""
    return int(seed_sequence(*keys).generate_state(1, np.uint64)[0])
