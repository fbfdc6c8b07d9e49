"""Construction of abelian/BiD codes of length 3^m.

Three equivalent routes are provided: spectral membership via the GF(4)
DFT, generator matrices built from rows of a 3x3 kernel's Kronecker power
selected by Hamming weight, and explicit inverse-DFT generator rows.

Generator rows are bit-packed ints (bit i = coordinate i, matching the
trit index convention of field_core).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import gf2
from .field_core import dft, index_to_trits, trit_dot_table, trit_weight, trits_to_index


@dataclass(frozen=True)
class Kernel:
    name: str
    rows: Tuple[Tuple[int, int, int], ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.uint8)

    def row_weights(self) -> Tuple[int, ...]:
        return tuple(sum(r) for r in self.rows)


A3 = Kernel("A3", ((1, 1, 1), (1, 1, 0), (1, 0, 1)))
A3P = Kernel("A3p", ((1, 1, 0), (1, 0, 1), (1, 1, 1)))

KERNELS = {"A3": A3, "A3p": A3P}


def get_kernel(name: str) -> Kernel:
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; expected one of {sorted(KERNELS)}")


@dataclass(frozen=True)
class CodeSpec:
    """Identity of a BiD code: BiD(m, r1, r2) with a kernel choice."""

    m: int
    r1: int
    r2: int
    kernel: Kernel = A3

    def __post_init__(self) -> None:
        if not (self.m >= 1 and 0 <= self.r1 <= self.r2 <= self.m):
            raise ValueError(f"invalid BiD parameters ({self.m},{self.r1},{self.r2})")

    @property
    def n(self) -> int:
        return 3**self.m

    @property
    def weight_set(self) -> range:
        return range(self.r1, self.r2 + 1)

    @property
    def label(self) -> str:
        return f"BiD({self.m},{self.r1},{self.r2})"


@dataclass
class GeneratorMatrix:
    """Rows are packed ints; row_labels carry the construction provenance
    (kernel row trit-tuple or spectral index j), row_classes the frequency
    weight w of each row."""

    m: int
    rows: List[int]
    row_labels: List[Tuple[int, ...]]
    row_classes: List[int]
    _echelon: Optional[List[int]] = field(default=None, repr=False)
    _columns: Optional[List[int]] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return 3**self.m

    @property
    def dim(self) -> int:
        return len(self.rows)

    def to_array(self) -> np.ndarray:
        out = np.zeros((len(self.rows), self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = _unpack_row(r, self.n)
        return out

    def echelon(self) -> List[int]:
        if self._echelon is None:
            self._echelon = gf2.gf2_row_echelon(self.rows)
        return self._echelon

    def packed_columns(self) -> List[int]:
        """Column c as a dim-bit int (bit i = rows[i] bit c); cached."""
        if self._columns is None:
            cols = [0] * self.n
            for i, r in enumerate(self.rows):
                bit = 1 << i
                while r:
                    low = r & -r
                    cols[low.bit_length() - 1] |= bit
                    r ^= low
            self._columns = cols
        return self._columns

    def contains(self, word: int) -> bool:
        return gf2.gf2_in_rowspan(word, self.echelon())


def _pack_row(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _unpack_row(x: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(x.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def kron(a, b) -> np.ndarray:
    """Kronecker product of 0/1 arrays (vectors or matrices)."""
    return np.kron(np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8))


@lru_cache(maxsize=32)
def kernel_power(kernel: Kernel, m: int) -> np.ndarray:
    """m-fold Kronecker power of the kernel, (3^m, 3^m) over GF(2)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = kernel.as_array()
    for _ in range(m - 1):
        out = np.kron(out, kernel.as_array())
    return out


def kernel_row_class(kernel: Kernel, k: int, m: int) -> int:
    """Frequency weight w of row k of kernel^(x)m: the number of weight-2
    kernel rows among its Kronecker factors (row weight is 2^w 3^(m-w))."""
    weights = kernel.row_weights()
    return sum(1 for d in index_to_trits(k, m) if weights[d] == 2)


@lru_cache(maxsize=64)
def _packed_kernel_rows(kernel: Kernel, m: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    mat = kernel_power(kernel, m)
    rows = tuple(_pack_row(mat[k]) for k in range(mat.shape[0]))
    classes = tuple(kernel_row_class(kernel, k, m) for k in range(mat.shape[0]))
    return rows, classes


def submatrix_by_weight(m: int, w: int, kernel: Kernel = A3) -> GeneratorMatrix:
    """G_{m,w}: the rows of kernel^(x)m with Hamming weight 2^w 3^(m-w).

    Generates the abelian code with frequency weight set {w}; row count is
    C(m,w) 2^w. Rows keep the kernel-power row order.
    """
    if not 0 <= w <= m:
        raise ValueError(f"w={w} outside 0..{m}")
    rows_all, classes = _packed_kernel_rows(kernel, m)
    rows, labels, cls = [], [], []
    for k in range(3**m):
        if classes[k] == w:
            rows.append(rows_all[k])
            labels.append(index_to_trits(k, m))
            cls.append(w)
    return GeneratorMatrix(m, rows, labels, cls)


def abelian_generator(m: int, weight_set: Iterable[int], kernel: Kernel = A3) -> GeneratorMatrix:
    """Generator of A(m, W) for any W subset of {0..m}: stacked G_{m,w}, w increasing."""
    ws = sorted(set(weight_set))
    if any(w < 0 or w > m for w in ws):
        raise ValueError(f"weight set {ws} outside 0..{m}")
    rows: List[int] = []
    labels: List[Tuple[int, ...]] = []
    cls: List[int] = []
    for w in ws:
        sub = submatrix_by_weight(m, w, kernel)
        rows.extend(sub.rows)
        labels.extend(sub.row_labels)
        cls.extend(sub.row_classes)
    return GeneratorMatrix(m, rows, labels, cls)


def bid_generator(spec: CodeSpec) -> GeneratorMatrix:
    """Generator of BiD(m, r1, r2) = A(m, {r1..r2})."""
    return abelian_generator(spec.m, spec.weight_set, spec.kernel)


def idft_generator_row(m: int, j: Sequence[int]) -> int:
    """Inverse-DFT generator row for spectral index j: support {i : i.j != 1}.

    All-ones for j = 0; weight 2x3^(m-1) otherwise.
    """
    jidx = trits_to_index(j)
    dots = trit_dot_table(m)[jidx]
    return _pack_row((dots != 1).astype(np.uint8))


def dual_weight_set(weight_set: Iterable[int], m: int) -> frozenset:
    """Complement in {0..m}; the dual of A(m,W) is A(m, complement)."""
    return frozenset(range(m + 1)) - frozenset(weight_set)


def dimension(m: int, weight_set: Iterable[int]) -> int:
    return sum(comb(m, w) * 2**w for w in set(weight_set))


def spectral_membership(a, weight_set: Iterable[int], m: Optional[int] = None) -> bool:
    """True iff the GF(4) spectrum of a vanishes at every index j whose trit
    weight lies outside the weight set."""
    if isinstance(a, int):
        if m is None:
            raise ValueError("packed input needs m")
        bits = _unpack_row(a, 3**m)
    else:
        bits = np.asarray(a, dtype=np.uint8)
        m = _infer_m_len(len(bits))
    allowed = set(weight_set)
    spectrum = dft(bits)
    for jidx in range(3**m):
        if spectrum[jidx] and trit_weight(index_to_trits(jidx, m)) not in allowed:
            return False
    return True


def _infer_m_len(n: int) -> int:
    m, size = 0, 1
    while size < n:
        size *= 3
        m += 1
    if size != n:
        raise ValueError(f"length {n} is not a power of 3")
    return m


def codeword_split(a: int, gen: GeneratorMatrix) -> Dict[int, int]:
    """Decompose a codeword into its unique per-weight-class components.

    Solves a = sum of generator rows, then groups the selected rows by
    frequency weight. Raises ValueError if a is outside the row space.
    Components XOR back to a; component w lies in A(m, {w}).
    """
    combo = gf2.gf2_solve_combination(a, gen.rows)
    if combo is None:
        raise ValueError("word is not in the code")
    parts: Dict[int, int] = {}
    for i in combo:
        w = gen.row_classes[i]
        parts[w] = parts.get(w, 0) ^ gen.rows[i]
    return {w: v for w, v in parts.items() if v}
