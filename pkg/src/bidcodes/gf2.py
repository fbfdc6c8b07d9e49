"""GF(2) linear algebra on bit-packed rows (one Python int per row, bit i = column i)."""

from __future__ import annotations

from typing import List, Optional, Tuple


def popcount(x: int) -> int:
    return x.bit_count()


def gf2_rank(rows: List[int]) -> int:
    """Rank of the row set via elimination on the lowest set bit."""
    pivots: List[int] = []
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
    return len(pivots)


def gf2_row_echelon(rows: List[int]) -> List[int]:
    """Independent rows spanning the same space, each with a unique pivot bit."""
    pivots: List[int] = []
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
    return pivots


def gf2_rref(rows: List[int]) -> List[int]:
    """Reduced row echelon form: independent rows, each pivot bit cleared
    from every other row (canonical basis of the span)."""
    pivots = gf2_row_echelon(rows)
    pivots.sort(key=lambda r: r & -r)
    for i, p in enumerate(pivots):
        low = p & -p
        for j in range(len(pivots)):
            if j != i and pivots[j] & low:
                pivots[j] ^= p
    return pivots


def gf2_same_span(rows_a: List[int], rows_b: List[int]) -> bool:
    """True iff the two row sets span the same subspace."""
    ea, eb = gf2_row_echelon(rows_a), gf2_row_echelon(rows_b)
    if len(ea) != len(eb):
        return False
    return all(gf2_in_rowspan(r, eb) for r in ea) and all(
        gf2_in_rowspan(r, ea) for r in eb
    )


def gf2_in_rowspan(vec: int, echelon: List[int]) -> bool:
    """Check membership against rows from gf2_row_echelon."""
    for p in echelon:
        low = p & -p
        if vec & low:
            vec ^= p
    return vec == 0


def gf2_solve_combination(vec: int, rows: List[int]) -> Optional[List[int]]:
    """Indices of rows XOR-ing to vec, or None if vec is outside the rowspan.

    Tracks coefficients through the elimination; the returned index list is
    one valid solution (not necessarily unique when rows are dependent).
    """
    n_rows = len(rows)
    # augment: high bits tag the original row combination
    width = max((r.bit_length() for r in rows), default=0)
    width = max(width, vec.bit_length())
    tagged = [r | (1 << (width + i)) for i, r in enumerate(rows)]
    mask = (1 << width) - 1
    pivots: List[int] = []
    for row in tagged:
        for p in pivots:
            low = (p & mask) & -(p & mask)
            if row & low:
                row ^= p
        if row & mask:
            pivots.append(row)
    acc = vec
    combo = 0
    for p in pivots:
        low = (p & mask) & -(p & mask)
        if acc & low:
            acc ^= p & mask
            combo ^= p >> width
    if acc != 0:
        return None
    return [i for i in range(n_rows) if (combo >> i) & 1]


def gf2_matmul_t(rows_a: List[int], rows_b: List[int]) -> List[List[int]]:
    """A · B^T over GF(2): entry [i][j] = parity(<a_i, b_j>)."""
    return [[(a & b).bit_count() & 1 for b in rows_b] for a in rows_a]


def pack_bits(bits) -> int:
    """Little-endian pack: bits[i] -> bit i."""
    out = 0
    for i, b in enumerate(bits):
        if b:
            out |= 1 << i
    return out


def unpack_bits(x: int, n: int) -> List[int]:
    return [(x >> i) & 1 for i in range(n)]


class IncrementalRank:
    """Online GF(2) rank of a growing set of column vectors (packed ints).

    add() returns True when the column increased the rank. Used for erasure
    decoding where we can stop as soon as rank reaches the code dimension.
    """

    def __init__(self) -> None:
        self._pivots: List[int] = []

    def add(self, col: int) -> bool:
        for p in self._pivots:
            low = p & -p
            if col & low:
                col ^= p
        if col:
            self._pivots.append(col)
            return True
        return False

    @property
    def rank(self) -> int:
        return len(self._pivots)


def min_weight_gray(rows: List[int]) -> Tuple[int, int]:
    """Exact minimum nonzero Hamming weight over the rowspan of packed rows.

    Gray-code enumeration: one XOR per codeword, 2^len(rows) - 1 steps.
    Returns (weight, witness codeword). Zero codewords reached through
    dependent rows are skipped; an empty or all-dependent set returns (0, 0).
    """
    k = len(rows)
    best_w = None
    best_c = 0
    cur = 0
    for g in range(1, 1 << k):
        cur ^= rows[(g & -g).bit_length() - 1]
        if cur == 0:
            continue
        w = cur.bit_count()
        if best_w is None or w < best_w:
            best_w, best_c = w, cur
    if best_w is None:
        return 0, 0
    return best_w, best_c


def weight_extremes_gray(rows: List[int]) -> Tuple[int, int]:
    """(min nonzero weight, max weight) over the rowspan, by Gray-code walk."""
    lo = None
    hi = 0
    cur = 0
    for g in range(1, 1 << len(rows)):
        cur ^= rows[(g & -g).bit_length() - 1]
        if cur == 0:
            continue
        w = cur.bit_count()
        if lo is None or w < lo:
            lo = w
        if w > hi:
            hi = w
    return (lo or 0), hi
