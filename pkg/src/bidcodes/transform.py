"""Polar-style encoding for length 3^m: trit-reversal permutation, the
transform x = u * (B_N kernel^(x)m), weight-rule frozen masks, and static
or dynamically frozen encoders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .codes import CodeSpec, Kernel, KERNELS, dimension, get_kernel, kernel_power, kernel_row_class
from .field_core import index_to_trits, trits_to_index
from .rng import PURPOSE_PRETRANSFORM, RNG_VERSION, substream


@lru_cache(maxsize=16)
def trit_reversal_perm(m: int) -> np.ndarray:
    """Involutive permutation sending each index to its trit-reversed twin."""
    if m < 1:
        raise ValueError("m must be >= 1")
    n = 3**m
    perm = np.empty(n, dtype=np.int64)
    for i in range(n):
        perm[i] = trits_to_index(index_to_trits(i, m)[::-1])
    perm.setflags(write=False)
    return perm


def polar_transform(u: Sequence[int], kernel: Kernel, m: Optional[int] = None) -> np.ndarray:
    """x = u * G'_N with G'_N = B_N kernel^(x)m, via m butterfly stages."""
    bits = np.asarray(u, dtype=np.uint8)
    mm = _infer_m(len(bits)) if m is None else m
    if len(bits) != 3**mm:
        raise ValueError(f"length {len(bits)} does not match m={mm}")
    karr = kernel.as_array()
    a = bits[trit_reversal_perm(mm)].reshape([3] * mm)
    for ax in range(mm):
        a = np.tensordot(a, karr, axes=([ax], [0])) % 2
        a = np.moveaxis(a, -1, ax)
    return a.reshape(-1).astype(np.uint8)


def polar_transform_dense(u: Sequence[int], kernel: Kernel, m: Optional[int] = None) -> np.ndarray:
    """Same map by explicit matrix product (cross-check path)."""
    bits = np.asarray(u, dtype=np.uint8)
    mm = _infer_m(len(bits)) if m is None else m
    return (bits[trit_reversal_perm(mm)] @ kernel_power(kernel, mm)) % 2


def _infer_m(n: int) -> int:
    m, size = 0, 1
    while size < n:
        size *= 3
        m += 1
    if size != n or m == 0:
        raise ValueError(f"length {n} is not a positive power of 3")
    return m


@dataclass(frozen=True)
class FrozenSpec:
    """Frozen mask over SC bit order; mask[i] is True when u_i is frozen."""

    m: int
    r1: int
    r2: int
    kernel: Kernel
    frozen_mask: np.ndarray

    @property
    def n(self) -> int:
        return 3**self.m

    @property
    def k(self) -> int:
        return int((~self.frozen_mask).sum())

    def unfrozen_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.frozen_mask)


def frozen_spec(m: int, r1: int, r2: int, kernel: Kernel) -> FrozenSpec:
    """Freeze u_i when the weight of row i of G'_N falls outside
    [2^r2 3^(m-r2), 2^r1 3^(m-r1)], i.e. when its weight class is
    outside r1..r2. Trit reversal preserves the class, so the mask is the
    same in the u and transformed domains."""
    CodeSpec(m, r1, r2, kernel)  # validates
    mask = np.array(
        [not r1 <= kernel_row_class(kernel, i, m) <= r2 for i in range(3**m)],
        dtype=bool,
    )
    mask.setflags(write=False)
    fs = FrozenSpec(m, r1, r2, kernel, mask)
    assert fs.k == dimension(m, range(r1, r2 + 1))
    return fs


@dataclass(frozen=True)
class PreTransform:
    """Implicit N x N unit-diagonal upper-triangular matrix T.

    Strictly-upper entries of row j are Bernoulli(1/2) from an independent
    substream keyed by (seed, j); rows regenerate identically in any order.
    row(j) returns the strictly-upper part packed as an int (bit index =
    column).
    """

    seed: int
    n: int
    _cache: Dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def row(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise ValueError(f"row {j} out of range")
        cached = self._cache.get(j)
        if cached is None:
            width = self.n - 1 - j
            cached = 0
            if width:
                bits = substream(self.seed, PURPOSE_PRETRANSFORM, j).integers(
                    0, 2, size=width, dtype=np.uint8
                )
                for t in range(width):
                    if bits[t]:
                        cached |= 1 << (j + 1 + t)
            self._cache[j] = cached
        return cached

    def materialize(self) -> np.ndarray:
        out = np.eye(self.n, dtype=np.uint8)
        for j in range(self.n):
            r = self.row(j)
            for c in range(j + 1, self.n):
                out[j, c] = (r >> c) & 1
        return out


@dataclass(frozen=True)
class EncoderConfig:
    spec: CodeSpec
    frozen: FrozenSpec
    dynamic: Optional[PreTransform] = None

    def __post_init__(self) -> None:
        if self.spec.m != self.frozen.m or self.spec.kernel != self.frozen.kernel:
            raise ValueError("spec and frozen mask disagree")
        if self.dynamic is not None and self.dynamic.n != self.spec.n:
            raise ValueError("pre-transform size mismatch")

    @property
    def label(self) -> str:
        prefix = "dBiD" if self.dynamic is not None else "BiD"
        s = self.spec
        return f"{prefix}({s.m},{s.r1},{s.r2})"


def default_kernel(r1: int, dynamic: bool) -> Kernel:
    """Dynamic configs follow the r1-based recipe; static ones default to
    A3p, the kernel the SC decoder is written for."""
    if dynamic:
        return KERNELS["A3"] if r1 <= 2 else KERNELS["A3p"]
    return KERNELS["A3p"]


def make_config(
    m: int,
    r1: int,
    r2: int,
    kernel: Optional[Union[Kernel, str]] = None,
    dynamic: bool = False,
    seed: int = 0,
) -> EncoderConfig:
    if kernel is None:
        kern = default_kernel(r1, dynamic)
    elif isinstance(kernel, str):
        kern = get_kernel(kernel)
    else:
        kern = kernel
    spec = CodeSpec(m, r1, r2, kern)
    fs = frozen_spec(m, r1, r2, kern)
    pre = PreTransform(seed, spec.n) if dynamic else None
    return EncoderConfig(spec, fs, pre)


def encode(config: EncoderConfig, message: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """Message bits fill unfrozen positions of v in increasing SC index;
    dynamic configs then apply u = v T so each frozen u_i becomes a parity
    of earlier v bits. Returns (u, x)."""
    msg = np.asarray(message, dtype=np.uint8)
    fs = config.frozen
    if len(msg) != fs.k:
        raise ValueError(f"message length {len(msg)} != K={fs.k}")
    v = np.zeros(fs.n, dtype=np.uint8)
    v[fs.unfrozen_indices()] = msg
    if config.dynamic is None:
        u = v
    else:
        u = v.copy()
        acc = 0
        for j in range(fs.n):
            if v[j]:
                acc ^= config.dynamic.row(j)
        # acc bit i = parity of v_j T[j,i] over j < i (row j only covers
        # columns > j, so no self term)
        for i in range(fs.n):
            if (acc >> i) & 1:
                u[i] ^= 1
    x = polar_transform(u, config.spec.kernel, config.spec.m)
    return u, x


def config_to_json(config: EncoderConfig) -> str:
    s = config.spec
    doc = {
        "m": s.m,
        "r1": s.r1,
        "r2": s.r2,
        "kernel": s.kernel.name,
        "dynamic": config.dynamic is not None,
        "seed": config.dynamic.seed if config.dynamic is not None else 0,
        "rng": RNG_VERSION,
    }
    return json.dumps(doc, sort_keys=True)


def config_from_json(text: str) -> EncoderConfig:
    doc = json.loads(text)
    rng_name = doc.get("rng", RNG_VERSION)
    if rng_name != RNG_VERSION:
        raise ValueError(f"unsupported rng {rng_name!r}; this build provides {RNG_VERSION}")
    return make_config(
        doc["m"], doc["r1"], doc["r2"],
        kernel=doc["kernel"], dynamic=doc["dynamic"], seed=doc.get("seed", 0),
    )
