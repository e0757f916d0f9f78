"""Counter-based random streams for reproducible Monte Carlo walks.

Every draw is a pure function of (seed, walk, step, channel), so estimates
are bit-identical no matter how walks are batched or partitioned across
threads.  The generator is the splitmix64 sequence evaluated at a packed
counter: the two xor-shift-multiply finalizer rounds give full avalanche,
and the packing keeps counters unique for walk < 2^34, step < 2^24,
channel < 64.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1

MAX_WALKS = 1 << 34
MAX_STEPS = 1 << 24
MAX_CHANNELS = 64


def _finalize(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _seed_key(seed: int) -> np.uint64:
    return _finalize(np.asarray([(seed & _MASK)], dtype=np.uint64))[0]


def raw_uint64(seed: int, walk, step: int, channel: int) -> np.ndarray:
    """The underlying 64-bit words; walk may be an integer array."""
    if not 0 <= step < MAX_STEPS:
        raise ValueError(f"step must be in [0, {MAX_STEPS})")
    if not 0 <= channel < MAX_CHANNELS:
        raise ValueError(f"channel must be in [0, {MAX_CHANNELS})")
    walk = np.asarray(walk, dtype=np.uint64)
    if walk.size and int(walk.max()) >= MAX_WALKS:
        raise ValueError(f"walk index must be < {MAX_WALKS}")
    counter = (walk << np.uint64(30)) | np.uint64((step << 6) | channel)
    with np.errstate(over="ignore"):
        state = _seed_key(seed) + (counter + np.uint64(1)) * _GOLDEN
        return _finalize(state)


def uniform(seed: int, walk, step: int, channel: int) -> np.ndarray:
    """Uniform doubles in [0, 1)."""
    return (raw_uint64(seed, walk, step, channel) >> np.uint64(11)) * 2.0**-53


def uniform_open(seed: int, walk, step: int, channel: int) -> np.ndarray:
    """Uniform doubles in (0, 1]; safe under log()."""
    bits = (raw_uint64(seed, walk, step, channel) >> np.uint64(11)) + np.uint64(1)
    return bits * 2.0**-53
