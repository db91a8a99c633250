"""Deterministic stream derivation for embarrassingly parallel Monte Carlo.

Every sample owns two independent generator streams (one for drawing the
noise, one for the decoder's hop coins), keyed by

    splitmix64-chain(master_seed, decoder_name, L, float64 bits of p,
                     sample_index, purpose)

so results are bit-reproducible regardless of how samples are distributed
over workers.  The streams themselves are counter-based (Philox).
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

#: Purpose tags for the per-sample streams.
NOISE, DECODE = 0, 1


def splitmix64(x: int) -> int:
    """One step of the splitmix64 sequence/finalizer."""
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


def _as_u64(part) -> int:
    if isinstance(part, str):
        return _fnv1a64(part.encode("utf-8"))
    if isinstance(part, (float, np.floating)):
        return int(np.float64(part).view(np.uint64))
    if isinstance(part, (int, np.integer)):
        return int(part) & _MASK
    raise TypeError(f"cannot mix {type(part).__name__} into a seed")


def derive_key(master_seed: int, *parts) -> int:
    """Chain all parts through splitmix64 into one 64-bit stream key."""
    h = splitmix64(_as_u64(master_seed))
    for part in parts:
        h = splitmix64(h ^ _as_u64(part))
    return h


def sample_generator(master_seed: int, decoder: str, L: int, p: float,
                     sample_index: int, purpose: int) -> np.random.Generator:
    """The counter-based generator owned by one (sample, purpose) pair."""
    key = derive_key(master_seed, decoder, L, float(p), sample_index, purpose)
    return np.random.Generator(np.random.Philox(key=key))
