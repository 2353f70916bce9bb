"""Counter-based random streams.

Every uniform variate in a run is addressed by ``(seed, trial, attempt,
stream, index)`` and obtained by hashing that address with the SplitMix64
finalizer.  Nothing is carried between trials, so a batch of trials can be
evaluated in any order or split across workers and still give bitwise
identical numbers.
"""

import numba as nb
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_UNIT = 1.0 / 9007199254740992.0  # 2**-53

# stream ids
HEIGHTS = 0
POSITIONS = 1

_MASK64 = (1 << 64) - 1


def as_seed(seed):
    """Map any Python int onto the unsigned 64-bit seed space."""
    return np.uint64(int(seed) & _MASK64)


@nb.njit(inline="always", cache=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _MUL1
    z = (z ^ (z >> _S27)) * _MUL2
    return z ^ (z >> _S31)


@nb.njit(cache=True)
def stream_key(seed, trial, attempt, stream):
    k = mix64(seed + _GOLDEN)
    k = mix64(k + (np.uint64(trial) + np.uint64(1)) * _GOLDEN)
    k = mix64(k ^ (np.uint64(attempt) * _MUL1))
    return mix64(k + (np.uint64(stream) + np.uint64(1)) * _MUL2)


@nb.njit(inline="always", cache=True)
def unit(key, index):
    """Uniform variate in [0, 1) at position ``index`` of stream ``key``."""
    return (mix64(key + (np.uint64(index) + np.uint64(1)) * _GOLDEN) >> _S11) * _UNIT


@nb.njit(cache=True)
def fill_uniform(key, out):
    for j in range(out.shape[0]):
        out[j] = unit(key, j)


@nb.njit(cache=True)
def uniform_block(seed, trials, attempts, stream, n):
    """Uniforms for a block of trials, one row per trial."""
    out = np.empty((trials.shape[0], n))
    for r in range(trials.shape[0]):
        key = stream_key(seed, trials[r], attempts[r], stream)
        for j in range(n):
            out[r, j] = unit(key, j)
    return out


def uniforms(seed, trials, attempts, stream, n):
    trials = np.ascontiguousarray(trials, dtype=np.int64)
    attempts = np.ascontiguousarray(attempts, dtype=np.int64)
    return uniform_block(as_seed(seed), trials, attempts, stream, int(n))
