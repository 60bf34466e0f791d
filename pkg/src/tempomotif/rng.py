"""Counter-based random decisions.

Every sampling decision is a pure function of ``(seed, tag, counters...)``
built on the SplitMix64 finaliser, so results do not depend on iteration
order or on which kernel backend runs them.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_INV53 = 1.0 / (1 << 53)

# stream tags; keep in sync with _kernels.pyx
TAG_EDGE = 1
TAG_WEDGE = 2
TAG_RESERVOIR_COIN = 3
TAG_RESERVOIR_SLOT = 4


def mix64(z):
    z = (z + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_key(seed, tag):
    """Root key for one decision stream of one run."""
    return mix64(mix64(seed & MASK64) ^ tag)


def derive(key, *counters):
    for c in counters:
        key = mix64(key ^ (c & MASK64))
    return key


def uniform(key, *counters):
    """Uniform float in [0, 1) for the given counters."""
    return (derive(key, *counters) >> 11) * _INV53


def below(key, n, *counters):
    """Integer in [0, n). Modulo bias is below 2**-40 for n < 2**24."""
    return derive(key, *counters) % n


def _mix64_array(z):
    z = z + np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def uniform_array(key, counters):
    """Vectorised ``uniform(key, c)`` over an integer array of counters."""
    c = np.asarray(counters).astype(np.uint64)
    with np.errstate(over="ignore"):
        h = _mix64_array(np.uint64(key) ^ c)
    return (h >> np.uint64(11)).astype(np.float64) * _INV53
