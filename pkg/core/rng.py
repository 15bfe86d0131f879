"""
core/rng.py
Seeded random streams. Every random decision in a search draws from a stream
identified by (seed, *key), so a slot's draws never depend on which worker
thread or process happens to run it.
"""
import numpy as np

# Leading spawn-key tags, one per consumer.
STREAM_INIT     = 0   # (STREAM_INIT, idx): initial population member idx
STREAM_CHILD    = 1   # (STREAM_CHILD, t, p, k): child k of parent p at iteration t
STREAM_BASELINE = 2   # (STREAM_BASELINE,): whole baseline GA run
STREAM_SWEEP    = 3   # (STREAM_SWEEP, k_pop, k_mut, run): per-run seed of a sweep

SEED_MASK = (1 << 64) - 1


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Returns an independent Generator for the substream `key` of `seed`."""
    return np.random.default_rng(np.random.SeedSequence(seed & SEED_MASK, spawn_key=key))


def derive_seed(seed: int, *key: int) -> int:
    """Derives a 64-bit child seed from (seed, *key)."""
    state = np.random.SeedSequence(seed & SEED_MASK, spawn_key=key).generate_state(1, dtype=np.uint64)
    return int(state[0])
