"""Minimum-distance machinery for BiD(m, r1, r2).

Exact values come from four families (Berman r2=m, dual Berman r1=0,
single-weight W={1}, single-weight W={m-1}); everything else gets an
interval from a length-3^(m-1) recursion plus a closed-form lower bound.
A Gray-code brute-force oracle and a randomized low-weight search provide
independent evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

import numpy as np

from . import gf2
from .codes import CodeSpec, GeneratorMatrix, abelian_generator, bid_generator, dimension


@dataclass(frozen=True)
class DistanceInterval:
    lower: int
    upper: int

    def __post_init__(self) -> None:
        if not 0 < self.lower <= self.upper:
            raise ValueError(f"bad interval [{self.lower},{self.upper}]")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def __str__(self) -> str:
        return str(self.lower) if self.exact else f"{self.lower}-{self.upper}"


def _check_params(m: int, r1: int, r2: int) -> None:
    if not (m >= 1 and 0 <= r1 <= r2 <= m):
        raise ValueError(f"invalid parameters ({m},{r1},{r2})")


def base_case_distance(m: int, r1: int, r2: int) -> Optional[int]:
    """Exact distance when the code is Berman (r2=m: 2^r1) or dual
    Berman (r1=0: 3^(m-r2)); None otherwise."""
    _check_params(m, r1, r2)
    if r2 == m:
        return 2**r1
    if r1 == 0:
        return 3 ** (m - r2)
    return None


def exact_w_one(m: int) -> Tuple[int, int]:
    """(min nonzero weight, max weight) of A(m, {1}), m >= 2."""
    if m < 2:
        raise ValueError("m must be >= 2")
    return 4 * 3 ** (m - 2), 6 * 3 ** (m - 2)


def exact_w_m_minus_one(m: int) -> int:
    """Minimum distance of A(m, {m-1}), m >= 3."""
    if m < 3:
        raise ValueError("m must be >= 3")
    return 3 * 2 ** (m - 2)


@lru_cache(maxsize=None)
def recursive_bounds(m: int, r1: int, r2: int, use_exact_families: bool = True) -> DistanceInterval:
    """Distance interval from the length-3^(m-1) recursion.

    Children use weight sets W, W_{0,-1}, W_{-1,0}, W_{-1,-1}. Lower bounds
    combine child lowers, upper bounds child uppers; every combining form is
    monotone so the interval is sound. use_exact_families=False drops the
    W={1} and W={m-1} shortcut values (useful for validating them).
    """
    _check_params(m, r1, r2)
    b = base_case_distance(m, r1, r2)
    if b is not None:
        return DistanceInterval(b, b)
    if use_exact_families:
        if r1 == r2 == 1:
            d = exact_w_one(m)[0]
            return DistanceInterval(d, d)
        if r1 == r2 == m - 1 and m >= 3:
            d = exact_w_m_minus_one(m)
            return DistanceInterval(d, d)
    # here 0 < r1 <= r2 < m
    same = recursive_bounds(m - 1, r1, r2, use_exact_families)
    hi_dec = recursive_bounds(m - 1, r1, r2 - 1, use_exact_families) if r2 > r1 else None
    lo_dec = recursive_bounds(m - 1, r1 - 1, r2, use_exact_families)
    both_dec = recursive_bounds(m - 1, r1 - 1, r2 - 1, use_exact_families)

    def combine(side) -> Tuple[Optional[int], int, int, int]:
        d2 = side(hi_dec) if hi_dec is not None else None
        d3 = 2 * side(both_dec)
        d4p = 3 * side(same)
        d4a = 3 * side(lo_dec)
        d4b = min(d4p, side(both_dec) + side(lo_dec))
        return d2, d3, d4p, max(d4a, d4b)

    lo2, lo3, _, lo4 = combine(lambda iv: iv.lower)
    hi2, hi3, hi4p, _ = combine(lambda iv: iv.upper)
    lower = min(x for x in (lo2, lo3, lo4) if x is not None)
    upper = min(x for x in (hi2, hi3, hi4p) if x is not None)
    return DistanceInterval(lower, upper)


def closed_form_lower(m: int, r1: int, r2: int) -> int:
    """ceil(max{4^r1 3^(m-r1-r2), 3^(m-r2) 2^(r1+r2-m)}), exact rationals."""
    _check_params(m, r1, r2)
    t1 = Fraction(4) ** r1 * Fraction(3) ** (m - r1 - r2)
    t2 = Fraction(3) ** (m - r2) * Fraction(2) ** (r1 + r2 - m)
    return math.ceil(max(t1, t2))


def brute_force_min_distance(gen: GeneratorMatrix, max_dim_budget: int = 20) -> Tuple[int, int]:
    """Exact (dmin, witness) by Gray-code enumeration of all 2^K codewords."""
    if gen.dim > max_dim_budget:
        raise ValueError(f"dimension {gen.dim} exceeds budget {max_dim_budget}")
    return gf2.min_weight_gray(gen.rows)


def odd_even_all_ones_weight(m: int, parity: str) -> int:
    """Weight of the sum of all generator rows of A(m, W) where W is every
    even (or odd) frequency weight up to m."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    rem = 0 if parity == "even" else 1
    gen = abelian_generator(m, [w for w in range(m + 1) if w % 2 == rem])
    word = 0
    for row in gen.rows:
        word ^= row
    return gf2.popcount(word)


# ---------------------------------------------------------------------------
# recursion tree

@dataclass
class RecursionNode:
    m: int
    r1: int
    r2: int
    result: DistanceInterval
    base_case: Optional[str] = None
    children: List[Tuple[str, "RecursionNode"]] = field(default_factory=list)

    @property
    def name(self) -> str:
        # weight sets are contiguous, so endpoints identify them
        ws = str(self.r1) if self.r1 == self.r2 else f"{self.r1},{self.r2}"
        return f"({self.m},{{{ws}}})"


_CHILD_LABELS = ("W", "W_{0,-1}", "W_{-1,0}", "W_{-1,-1}")


def recursion_tree(m: int, r1: int, r2: int) -> RecursionNode:
    """Tree of the interval recursion; a node expands iff 0 < r1 <= r2 < m."""
    _check_params(m, r1, r2)
    tag = None
    if r2 == m:
        tag = "Berman"
    elif r1 == 0:
        tag = "DualBerman"
    node = RecursionNode(m, r1, r2, recursive_bounds(m, r1, r2), tag)
    if 0 < r1 <= r2 < m:
        shifts = ((0, 0), (0, -1), (-1, 0), (-1, -1))
        for label, (i, j) in zip(_CHILD_LABELS, shifts):
            a, b = r1 + i, r2 + j
            if a <= b:
                node.children.append((label, recursion_tree(m - 1, a, b)))
    return node


def tree_edges(node: RecursionNode) -> Iterator[str]:
    """One 'parent -> child [label]' line per edge, depth first."""
    for label, child in node.children:
        yield f"{node.name} -> {child.name} [{label}]"
        yield from tree_edges(child)


def scatter_data(m: int) -> List[Tuple[int, int, float, float]]:
    """(r1, r2, rate, log(closed_form_lower)/log N) for every weight range."""
    n = 3**m
    out = []
    for r1 in range(m + 1):
        for r2 in range(r1, m + 1):
            k = dimension(m, range(r1, r2 + 1))
            d = closed_form_lower(m, r1, r2)
            out.append((r1, r2, k / n, math.log(d) / math.log(n)))
    return out


# ---------------------------------------------------------------------------
# randomized low-weight search

def random_low_weight_search(
    spec: CodeSpec, target_wt: int, trials: int, seed: int
) -> Optional[int]:
    """Search for a codeword of weight <= target_wt within a trial budget.

    Three phases, each charged per candidate examined: uniform random
    information words, then all sparse row combinations (singles, pairs,
    triples), then repeated information-set reduction (rows and row pairs of
    a column-permuted systematic form). Returns a packed witness or None.
    """
    gen = bid_generator(spec)
    n, k = gen.n, gen.dim
    g_arr = gen.to_array()
    rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
    left = trials

    # phase 1: uniform information words
    batch = 4096
    quota = min(left // 2, 100_000)
    while quota > 0:
        b = min(batch, quota)
        msgs = rng.integers(0, 2, size=(b, k), dtype=np.uint8)
        words = (msgs @ g_arr) & 1
        wts = words.sum(axis=1)
        wts[wts == 0] = n + 1
        i = int(wts.argmin())
        if wts[i] <= target_wt:
            return _pack_vec(words[i])
        quota -= b
        left -= b

    # phase 2: sparse combinations
    rows = gen.rows
    for i in range(k):
        if left <= 0:
            return None
        left -= 1
        if 0 < gf2.popcount(rows[i]) <= target_wt:
            return rows[i]
    for i in range(k):
        for j in range(i + 1, k):
            if left <= 0:
                return None
            left -= 1
            w = rows[i] ^ rows[j]
            if 0 < gf2.popcount(w) <= target_wt:
                return w
    for i in range(k):
        for j in range(i + 1, k):
            pre = rows[i] ^ rows[j]
            for l in range(j + 1, k):
                if left <= 0:
                    return None
                left -= 1
                w = pre ^ rows[l]
                if 0 < gf2.popcount(w) <= target_wt:
                    return w

    # phase 3: information-set reduction
    while left > 0:
        perm = rng.permutation(n)
        permuted = [_pack_vec(g_arr[i, perm]) for i in range(k)]
        reduced = gf2.gf2_rref(permuted)
        for idx in range(len(reduced)):
            if left <= 0:
                return None
            left -= 1
            w = reduced[idx]
            if 0 < gf2.popcount(w) <= target_wt:
                return _unpermute(w, perm, n)
        for idx in range(len(reduced)):
            for jdx in range(idx + 1, len(reduced)):
                if left <= 0:
                    return None
                left -= 1
                w = reduced[idx] ^ reduced[jdx]
                if 0 < gf2.popcount(w) <= target_wt:
                    return _unpermute(w, perm, n)
    return None


def _pack_vec(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _unpermute(word: int, perm: np.ndarray, n: int) -> int:
    # permuted column pos held original column perm[pos]
    out = 0
    for pos in range(n):
        if (word >> pos) & 1:
            out |= 1 << int(perm[pos])
    return out
