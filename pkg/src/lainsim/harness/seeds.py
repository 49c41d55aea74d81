"""Master-seed splitting so every subsystem gets an independent stream.

Rule: a child stream is SeedSequence([master_seed, subsystem_id,
index]).  Subsystem ids are fixed constants, so ablations that share a
master seed see identical environments while learners keep their own
randomness.
"""

from __future__ import annotations

import numpy as np

SUBSYSTEM_IDS = {
    "env": 0,      # per-episode environment resets
    "agent": 1,    # per-agent learner streams
    "eval": 2,     # evaluation rollouts
    "trust": 3,    # trust-scenario evidence streams
}


def subsystem_seed(master_seed: int, subsystem: str, index: int = 0) -> np.random.SeedSequence:
    if subsystem not in SUBSYSTEM_IDS:
        raise KeyError(f"unknown subsystem {subsystem!r}; known: {sorted(SUBSYSTEM_IDS)}")
    return np.random.SeedSequence([master_seed, SUBSYSTEM_IDS[subsystem], index])


def subsystem_rng(master_seed: int, subsystem: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(subsystem_seed(master_seed, subsystem, index))
