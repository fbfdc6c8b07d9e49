"""GF(4) arithmetic, trit-tuple indexing of length-3^m vectors, and the DFT
that defines spectral membership of abelian codes.

GF(4) elements are encoded as ints: 0, 1, ALPHA = 2, ALPHA_SQ = 3, where the
2-bit encoding makes addition plain XOR and ALPHA_SQ = ALPHA + 1.

Coordinates of length-3^m vectors are indexed by trit tuples (d1, ..., dm)
with digit 1 least significant: index = sum(d_l * 3^(l-1)).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

ALPHA = 2
ALPHA_SQ = 3

# multiplication table for the 2-bit encoding (row x, col y)
_F4_MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)

# alpha^k for k in Z3
_ALPHA_POW = (1, ALPHA, ALPHA_SQ)


def f4_add(x: int, y: int) -> int:
    """Addition in GF(4) (characteristic 2)."""
    return x ^ y


def f4_mul(x: int, y: int) -> int:
    """Multiplication in GF(4); f4_mul(ALPHA, ALPHA) == ALPHA_SQ."""
    return _F4_MUL[x][y]


def index_to_trits(idx: int, m: int) -> Tuple[int, ...]:
    """Radix-3 digits of idx, least significant first."""
    if not 0 <= idx < 3**m:
        raise ValueError(f"index {idx} out of range for m={m}")
    digits = []
    for _ in range(m):
        digits.append(idx % 3)
        idx //= 3
    return tuple(digits)


def trits_to_index(t: Sequence[int]) -> int:
    idx = 0
    for d in reversed(t):
        idx = idx * 3 + d
    return idx


def trit_dot(i: Sequence[int], j: Sequence[int]) -> int:
    """Inner product over Z3."""
    if len(i) != len(j):
        raise ValueError("trit tuples of unequal length")
    return sum(a * b for a, b in zip(i, j)) % 3


def trit_weight(t: Sequence[int]) -> int:
    """Number of nonzero trits."""
    return sum(1 for d in t if d != 0)


@lru_cache(maxsize=8)
def trit_dot_table(m: int) -> np.ndarray:
    """(3^m, 3^m) uint8 table of trit_dot(i, j) for all index pairs."""
    n = 3**m
    digits = np.zeros((n, m), dtype=np.int64)
    idx = np.arange(n)
    for l in range(m):
        digits[:, l] = (idx // 3**l) % 3
    return ((digits @ digits.T) % 3).astype(np.uint8)


def hamming_weight(a) -> int:
    """Hamming weight of a packed int or a 0/1 sequence."""
    if isinstance(a, (int, np.integer)):
        return int(a).bit_count()
    return int(np.count_nonzero(np.asarray(a)))


def _infer_m(n: int) -> int:
    m = 0
    size = 1
    while size < n:
        size *= 3
        m += 1
    if size != n:
        raise ValueError(f"length {n} is not a power of 3")
    return m


def dft(a) -> np.ndarray:
    """GF(4) spectrum of a binary vector of length 3^m.

    Coefficient j is the GF(4) sum of alpha^(i . j) over the support of a,
    where . is the trit inner product. Returned as a uint8 array with the
    2-bit field encoding.
    """
    bits = np.asarray(a, dtype=np.uint8)
    m = _infer_m(bits.shape[0])
    support = np.flatnonzero(bits)
    n = bits.shape[0]
    if support.size == 0:
        return np.zeros(n, dtype=np.uint8)
    table = trit_dot_table(m)
    pow_table = np.array(_ALPHA_POW, dtype=np.uint8)
    terms = pow_table[table[support, :]]  # (|supp|, n) GF(4) values
    return np.bitwise_xor.reduce(terms, axis=0)
