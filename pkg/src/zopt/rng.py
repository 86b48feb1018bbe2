"""Counter-based random substreams.

Every draw in this package is reproducible from a 64-bit root seed and a
nonnegative counter: substream(seed, k) always yields the same sequence, and
distinct counters yield statistically independent streams.  Parallel workers
therefore only need disjoint counter ranges, never shared RNG state.

Implemented on top of the Philox counter-based generator: substream k starts
the 256-bit Philox counter at k * 2**64, leaving 2**64 blocks of room per
substream.
"""

from __future__ import annotations

import numpy as np

_COUNTER_STRIDE_BITS = 64


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def substream(seed: int, counter: int = 0) -> np.random.Generator:
    """Generator for substream `counter` of the stream rooted at `seed`."""
    seed = _check_seed(seed)
    counter = int(counter)
    if counter < 0:
        raise ValueError(f"counter must be nonnegative, got {counter}")
    bitgen = np.random.Philox(key=seed, counter=counter << _COUNTER_STRIDE_BITS)
    return np.random.Generator(bitgen)


class SubstreamSampler:
    """Reusable sampler for hot loops.

    Produces draws bit-identical to substream(seed, counter) while avoiding
    the per-call cost of constructing a fresh Generator.  Not thread-safe;
    each worker should own its own instance.
    """

    def __init__(self, seed: int):
        self._seed = _check_seed(seed)
        self._bitgen = np.random.Philox(key=self._seed)
        self._gen = np.random.Generator(self._bitgen)
        template = self._bitgen.state
        self._key = template["state"]["key"]
        self._buffer = template["buffer"]

    def standard_normal(self, counter: int, size) -> np.ndarray:
        counter = int(counter)
        if counter < 0:
            raise ValueError(f"counter must be nonnegative, got {counter}")
        self._bitgen.state = {
            "bit_generator": "Philox",
            "state": {
                "counter": np.array([0, counter, 0, 0], dtype=np.uint64),
                "key": self._key,
            },
            "buffer": self._buffer,
            "buffer_pos": 4,
            "has_uint32": 0,
            "uinteger": 0,
        }
        return self._gen.standard_normal(size)
