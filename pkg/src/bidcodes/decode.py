"""Successive cancellation decoding for the ternary transform, a best-first
ordered-search wrapper with an ML certificate, and exact ML erasure decoding.

The SC branch equations are derived for the A3p kernel. Per 3-way node with
child blocks observed at LLRs (L0, L1, L2) and partial sums (C0, C1, C2):

    phase 0:  L(t0) = f_minus(L0, L2)
    phase 1:  L(t1) = f_minus(s0*L0 + L2, s0*L1),        s0 = (-1)^C0
    phase 2:  L(t2) = s0*s1*L0 + s0*L1 + s1*L2,          s1 = (-1)^C1
    upward :  (x0, x1, x2) = (C0^C1^C2, C0^C2, C1^C2)

BEC mode uses true +-inf/0 LLR sentinels. While the decoder's conditioning
event (its past decisions, the frozen prior, and the channel) has positive
probability, every computed LLR is an exact posterior and stays in
{0, +-inf}; opposing infinities cannot meet. A zero-LLR tie guess at an
erased position can empty that event, after which sums of opposing
infinities yield NaN and downstream decisions are arbitrary-but-
deterministic (NaN compares false, so the bit goes to 1). The block is
already lost at that point; erasure-channel block errors are scored by
bec_ml_decode, not by this path.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .codes import GeneratorMatrix
from .transform import FrozenSpec, PreTransform, trit_reversal_perm

LLR_MAX = 40.0

ERASED = 2


def f_minus(a, b, exact: bool = True):
    """Check-node LLR combine: exact boxplus, or min-sum when exact=False.

    Stable form; handles +-inf and 0 sentinels exactly. Works elementwise
    on arrays.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    sgn = np.sign(a) * np.sign(b)
    mag = np.minimum(np.abs(a), np.abs(b))
    if not exact:
        return sgn * mag
    s = np.abs(a) + np.abs(b)
    with np.errstate(invalid="ignore"):
        d = np.abs(np.abs(a) - np.abs(b))
    d = np.where(np.isnan(d), np.inf, d)  # both infinite: corrections vanish
    return sgn * (mag + np.log1p(np.exp(-s)) - np.log1p(np.exp(-d)))


def f_plus(a, b, u):
    """Variable-node combine given the earlier bit u: (-1)^u * a + b."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return (1.0 - 2.0 * np.asarray(u, dtype=np.float64)) * a + b


@dataclass
class SearchBudget:
    """Ordered-search knobs: lambda_max is an absolute path-cost threshold
    (costlier deviations are never queued), eta caps the number of SC-pass
    re-decodes. node_visits accumulates raw recursion-node counts across
    calls; ANV normalizes so one plain SC pass costs 1."""

    lambda_max: float = math.inf
    eta: int = 1_000_000
    node_visits: int = 0


class _Workspace:
    """Per-call SC scratch; reentrant across concurrent decodes."""

    def __init__(
        self,
        frozen: FrozenSpec,
        dynamic: Optional[PreTransform],
        exact_f: bool,
    ) -> None:
        if frozen.kernel.name != "A3p":
            raise ValueError("SC branch equations cover the A3p kernel only")
        if dynamic is not None and dynamic.n != frozen.n:
            raise ValueError("pre-transform size mismatch")
        self.frozen = frozen
        self.dynamic = dynamic
        self.exact_f = exact_f
        self.n = frozen.n
        self.perm = trit_reversal_perm(frozen.m)
        self.visits = 0

    def run(
        self, channel_llrs: np.ndarray, forced: Optional[Sequence[int]] = None
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """One full SC pass. forced overrides the hard decisions of the
        first len(forced) unfrozen positions. Returns (u_hat, x_hat,
        decision-time LLRs per u position)."""
        y = np.asarray(channel_llrs, dtype=np.float64)
        if len(y) != self.n:
            raise ValueError(f"expected {self.n} LLRs, got {len(y)}")
        self.u = np.zeros(self.n, dtype=np.uint8)
        self.dec_llr = np.zeros(self.n, dtype=np.float64)
        self.acc = 0
        self.pos = 0
        self.slot = 0
        self.forced = forced
        # inf + -inf -> NaN is reachable after a wrong erasure guess; keep quiet
        with np.errstate(invalid="ignore"):
            t = self._recurse(y[self.perm])
        x_hat = t[self.perm]
        return self.u, x_hat, self.dec_llr

    def _recurse(self, seg: np.ndarray) -> np.ndarray:
        self.visits += 1
        n = len(seg)
        if n == 3:
            return self._triad(seg)
        if n == 1:
            return np.array([self._leaf(float(seg[0]))], dtype=np.uint8)
        s = n // 3
        l0, l1, l2 = seg[:s], seg[s : 2 * s], seg[2 * s :]
        c0 = self._recurse(f_minus(l0, l2, self.exact_f))
        s0 = 1.0 - 2.0 * c0
        c1 = self._recurse(f_minus(s0 * l0 + l2, s0 * l1, self.exact_f))
        s1 = 1.0 - 2.0 * c1
        c2 = self._recurse(s0 * s1 * l0 + s0 * l1 + s1 * l2)
        out = np.empty(n, dtype=np.uint8)
        out[:s] = c0 ^ c1 ^ c2
        out[s : 2 * s] = c0 ^ c2
        out[2 * s :] = c1 ^ c2
        return out

    def _triad(self, seg: np.ndarray) -> np.ndarray:
        # scalar fast path for the bottom level; counts its three leaf visits
        self.visits += 3
        l0, l1, l2 = float(seg[0]), float(seg[1]), float(seg[2])
        c0 = self._leaf(self._fm_scalar(l0, l2))
        s0 = 1.0 - 2.0 * c0
        c1 = self._leaf(self._fm_scalar(s0 * l0 + l2, s0 * l1))
        s1 = 1.0 - 2.0 * c1
        c2 = self._leaf(s0 * s1 * l0 + s0 * l1 + s1 * l2)
        return np.array([c0 ^ c1 ^ c2, c0 ^ c2, c1 ^ c2], dtype=np.uint8)

    def _fm_scalar(self, a: float, b: float) -> float:
        # mirrors f_minus on floats, keeping the same operation order
        if a == 0.0 or b == 0.0:
            return 0.0
        sgn = 1.0 if (a > 0.0) == (b > 0.0) else -1.0
        aa, ab = abs(a), abs(b)
        mag = aa if aa < ab else ab
        if not self.exact_f or mag == math.inf:
            return sgn * mag
        s = aa + ab
        d = abs(aa - ab)
        return sgn * (mag + math.log1p(math.exp(-s)) - math.log1p(math.exp(-d)))

    def _leaf(self, llr: float) -> int:
        i = self.pos
        self.dec_llr[i] = llr
        parity = (self.acc >> i) & 1 if self.dynamic is not None else 0
        if self.frozen.frozen_mask[i]:
            ui, vi = parity, 0
        else:
            if self.forced is not None and self.slot < len(self.forced):
                ui = int(self.forced[self.slot])
            else:
                ui = 0 if llr >= 0 else 1
            vi = ui ^ parity
            self.slot += 1
        if self.dynamic is not None and vi:
            self.acc ^= self.dynamic.row(i)
        self.u[i] = ui
        self.pos += 1
        return ui


def sc_decode(
    channel_llrs: Sequence[float],
    frozen: FrozenSpec,
    dynamic: Optional[PreTransform] = None,
    exact_f: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """Plain SC: frozen positions take their frozen value (0 or the dynamic
    parity), unfrozen positions take the LLR hard decision (ties to 0)."""
    ws = _Workspace(frozen, dynamic, exact_f)
    u_hat, x_hat, _ = ws.run(np.asarray(channel_llrs))
    return u_hat, x_hat


def _excess(bits: np.ndarray, llrs: np.ndarray) -> np.ndarray:
    # |L| wherever the bit opposes the LLR sign, else 0
    s = (1.0 - 2.0 * bits.astype(np.float64)) * llrs
    return np.where(s < 0.0, -s, 0.0)


def ordered_search_decode(
    channel_llrs: Sequence[float],
    frozen: FrozenSpec,
    dynamic: Optional[PreTransform] = None,
    budget: Optional[SearchBudget] = None,
    exact_f: bool = True,
) -> Tuple[np.ndarray, np.ndarray, float, bool]:
    """Best-first search over SC decision flips.

    A node is a forced prefix of unfrozen decisions. Its cost g sums, over
    every bit position up to and including the last forced one, the |decision
    LLR| of each decision taken against the LLR sign (forced flips, plus
    frozen values the path data disagrees with). Completed paths are ranked
    by codeword discrepancy: the sum of channel |LLR| over positions where
    the codeword opposes the channel hard decision. In exact-f mode a
    prefix's cost never exceeds the discrepancy of any of its completions,
    so the incumbent is the exact ML codeword (up to ties) once the cheapest
    open node costs at least the incumbent discrepancy; that, an empty
    frontier, or the eta pass budget ends the search. lambda_max is an
    absolute cost threshold: spawned nodes costlier than it are dropped, and
    the ml flag then also requires the incumbent discrepancy to stay within
    lambda_max (a dropped node cannot complete below its own cost, so it
    cannot beat such an incumbent). With min-sum f the cost bound is
    heuristic and the ml flag approximate. Returns
    (u_hat, x_hat, anv, ml_flag).
    """
    budget = budget if budget is not None else SearchBudget()
    ws = _Workspace(frozen, dynamic, exact_f)
    y = np.asarray(channel_llrs, dtype=np.float64)
    unfrozen = frozen.unfrozen_indices()

    def complete(forced: Tuple[int, ...]):
        u_hat, x_hat, dec_llr = ws.run(y, forced)
        cum = np.concatenate(([0.0], np.cumsum(_excess(u_hat, dec_llr))))
        score = float(_excess(x_hat, y).sum())
        return u_hat, x_hat, dec_llr, cum, score

    u_best, x_best, dec_llr, cum, best_d = complete(())
    passes = 1
    dropped = False

    frontier: List[Tuple[float, int, Tuple[int, ...]]] = []
    counter = 0

    def spawn(u_hat, dec_llr, cum, first_slot):
        nonlocal counter, dropped
        decisions = u_hat[unfrozen]
        for q in range(first_slot, len(unfrozen)):
            pos = unfrozen[q]
            g = float(cum[pos]) + abs(float(dec_llr[pos]))
            if g > budget.lambda_max:
                dropped = True
                continue
            forced = tuple(int(b) for b in decisions[:q]) + (1 - int(decisions[q]),)
            counter += 1
            heapq.heappush(frontier, (g, counter, forced))

    spawn(u_best, dec_llr, cum, 0)
    while frontier and passes < budget.eta:
        g, _, forced = heapq.heappop(frontier)
        if g >= best_d:
            break
        u_hat, x_hat, dec_llr, cum, score = complete(forced)
        passes += 1
        if score < best_d:
            best_d = score
            u_best, x_best = u_hat.copy(), x_hat.copy()
        spawn(u_hat, dec_llr, cum, len(forced))
    exhausted = not frontier or frontier[0][0] >= best_d
    certified = exhausted and (not dropped or best_d <= budget.lambda_max)

    single_pass = (3 ** (frozen.m + 1) - 1) // 2
    budget.node_visits += ws.visits
    anv = ws.visits / single_pass
    return u_best, x_best, anv, certified


class _Ambiguous:
    """Sentinel: the erasure pattern covers a nonzero codeword."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "AMBIGUOUS"


AMBIGUOUS = _Ambiguous()


def bec_ml_decode(
    received: Sequence[int], gen: GeneratorMatrix
) -> Union[np.ndarray, _Ambiguous]:
    """Exact ML over the BEC: solve the unerased linear system.

    received holds symbols in {0, 1, ERASED}. Returns the unique consistent
    codeword, or AMBIGUOUS when the unerased column submatrix has rank < K
    (equivalently, a nonzero codeword lives inside the erasure set). Raises
    on inconsistent input, which would signal a harness bug.
    """
    sym = np.asarray(received)
    if len(sym) != gen.n:
        raise ValueError(f"expected length {gen.n}, got {len(sym)}")
    k = gen.dim
    cols = gen.packed_columns()
    rhs_bit = 1 << k
    pivots: List[int] = []
    rank = 0
    for c in np.flatnonzero(sym != ERASED):
        eq = cols[int(c)] | (rhs_bit if sym[c] else 0)
        for p in pivots:
            low = p & -p
            if eq & low:
                eq ^= p
        if eq & (rhs_bit - 1):
            pivots.append(eq)
            rank += 1
            if rank == k:
                break
        elif eq:
            raise ValueError("received word inconsistent with the code")
    if rank < k:
        return AMBIGUOUS
    word = 0
    if any(p & rhs_bit for p in pivots):
        # back-substitute to read off the message bits
        pivots.sort(key=lambda r: r & -r)
        for i in range(len(pivots) - 1, -1, -1):
            low = pivots[i] & -pivots[i]
            for j in range(i):
                if pivots[j] & low:
                    pivots[j] ^= pivots[i]
        for p in pivots:
            if p & rhs_bit:
                word ^= gen.rows[(p & -p).bit_length() - 1]
    out = np.zeros(gen.n, dtype=np.uint8)
    for pos in range(gen.n):
        out[pos] = (word >> pos) & 1
    # columns past the early rank-k exit were never eliminated; check them here
    unerased = sym != ERASED
    if (out[unerased] != sym[unerased]).any():
        raise ValueError("received word inconsistent with the code")
    return out


def ml_lower_bound_event(
    x_hat: np.ndarray, x_sent: np.ndarray, channel_llrs: Sequence[float]
) -> bool:
    """True iff x_hat differs from x_sent yet is at least as likely under
    the channel LLRs; such errors are ones exact ML would also make (ties
    counted conservatively as errors)."""
    x_hat = np.asarray(x_hat, dtype=np.uint8)
    x_sent = np.asarray(x_sent, dtype=np.uint8)
    if (x_hat == x_sent).all():
        return False
    y = np.asarray(channel_llrs, dtype=np.float64)
    score_hat = float(np.dot(y, 1.0 - 2.0 * x_hat))
    score_sent = float(np.dot(y, 1.0 - 2.0 * x_sent))
    return score_hat >= score_sent
