"""Counter-based RNG substreams.

Every random quantity in the package draws from an independent Philox
stream keyed by (seed, purpose << 56 | index), so results never depend on
evaluation order or worker partitioning. The scheme is part of the wire
contract: dynamically frozen codewords are bit-exact functions of it.
"""

from __future__ import annotations

import numpy as np

RNG_VERSION = "numpy-philox4x64-1"

PURPOSE_PRETRANSFORM = 0
PURPOSE_AWGN = 1
PURPOSE_BEC = 2
PURPOSE_MESSAGE = 3

_INDEX_BITS = 56


def substream(seed: int, purpose: int, index: int) -> np.random.Generator:
    """Independent generator for one (purpose, index) cell under a seed."""
    if not 0 <= index < (1 << _INDEX_BITS):
        raise ValueError(f"substream index {index} out of range")
    key = [seed, (purpose << _INDEX_BITS) | index]
    return np.random.Generator(np.random.Philox(key=key))
