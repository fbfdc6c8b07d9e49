"""Channel models and Monte Carlo BLER estimation.

Every trial draws from its own counter-based RNG substream keyed by
(seed, purpose, trial index), so a run partitioned across any number of
workers produces the same counts as a serial run. Ledgers merge by
summation.
"""

from __future__ import annotations

import csv
import io
import math
import multiprocessing
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from .codes import CodeSpec, GeneratorMatrix, bid_generator
from .decode import (
    AMBIGUOUS,
    ERASED,
    LLR_MAX,
    SearchBudget,
    bec_ml_decode,
    ml_lower_bound_event,
    ordered_search_decode,
    sc_decode,
)
from .gf2 import pack_bits
from .rng import PURPOSE_AWGN, PURPOSE_BEC, PURPOSE_MESSAGE, substream
from .transform import EncoderConfig, encode, frozen_spec
from .codes import A3P

Z_95 = 1.959963984540054


@dataclass(frozen=True)
class BEC:
    """Binary erasure channel."""

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon {self.epsilon} outside [0, 1]")


@dataclass(frozen=True)
class BIAWGN:
    """Binary-input AWGN channel, parametrized by Eb/N0 in dB at a code rate."""

    ebn0_db: float
    rate: float

    def __post_init__(self) -> None:
        if not 0.0 < self.rate <= 1.0:
            raise ValueError(f"rate {self.rate} outside (0, 1]")

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))


Channel = Union[BEC, BIAWGN]


def wilson_interval(k: int, n: int, z: float = Z_95):
    """Wilson score interval for k successes in n trials."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    zz = z * z / n
    center = (p + zz / 2.0) / (1.0 + zz)
    half = (z / (1.0 + zz)) * math.sqrt(p * (1.0 - p) / n + zz / (4.0 * n))
    lo = 0.0 if k == 0 else max(0.0, center - half)
    hi = 1.0 if k == n else min(1.0, center + half)
    return lo, hi


@dataclass
class TrialLedger:
    trials: int
    block_errors: int
    ml_lb_errors: int
    anv_sum: float
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.ml_lb_errors <= self.block_errors <= self.trials:
            raise ValueError("need ml_lb_errors <= block_errors <= trials")

    @property
    def bler(self) -> float:
        return self.block_errors / self.trials if self.trials else 0.0

    @property
    def ml_lb_rate(self) -> float:
        return self.ml_lb_errors / self.trials if self.trials else 0.0

    @property
    def anv(self) -> float:
        return self.anv_sum / self.trials if self.trials else 0.0

    def wilson(self, z: float = Z_95):
        return wilson_interval(self.block_errors, self.trials, z)

    def merged(self, other: "TrialLedger") -> "TrialLedger":
        return TrialLedger(
            self.trials + other.trials,
            self.block_errors + other.block_errors,
            self.ml_lb_errors + other.ml_lb_errors,
            self.anv_sum + other.anv_sum,
            self.seed,
        )


def bpsk_llr(x_sent: Sequence[int], channel: BIAWGN, rng: np.random.Generator) -> np.ndarray:
    """BPSK over AWGN: s = 1-2x, y = s + noise, LLR = 2y/sigma^2, saturated
    at +-LLR_MAX."""
    x = np.asarray(x_sent, dtype=np.float64)
    s = 1.0 - 2.0 * x
    sigma2 = channel.sigma2
    y = s + rng.normal(0.0, math.sqrt(sigma2), len(x))
    return np.clip(2.0 * y / sigma2, -LLR_MAX, LLR_MAX)


@dataclass(frozen=True)
class DecoderConfig:
    """AWGN decoder selection: plain SC or the ordered search around it."""

    kind: str = "sc"
    lambda_max: float = math.inf
    eta: int = 1_000_000
    exact_f: bool = True

    def __post_init__(self) -> None:
        if self.kind not in ("sc", "scos"):
            raise ValueError(f"unknown decoder {self.kind!r}; use 'sc' or 'scos'")


def _bec_trial_range(
    gen: GeneratorMatrix, epsilon: float, lo: int, hi: int, seed: int, random_words: bool
):
    n = gen.n
    errors = 0
    zero = np.zeros(n, dtype=np.uint8)
    for t in range(lo, hi):
        if random_words:
            msg_rng = substream(seed, PURPOSE_MESSAGE, t)
            word = 0
            for i, b in enumerate(msg_rng.integers(0, 2, gen.dim, dtype=np.uint8)):
                if b:
                    word ^= gen.rows[i]
            sent = np.array([(word >> p) & 1 for p in range(n)], dtype=np.uint8)
        else:
            sent = zero
        rng = substream(seed, PURPOSE_BEC, t)
        erase = rng.random(n) < epsilon
        received = sent.copy()
        received[erase] = ERASED
        out = bec_ml_decode(received, gen)
        if out is AMBIGUOUS or (out != sent).any():
            errors += 1
    return hi - lo, errors


def simulate_bec(
    spec: CodeSpec,
    epsilon: float,
    trials: int,
    seed: int,
    jobs: int = 1,
    gen: Optional[GeneratorMatrix] = None,
    random_words: bool = False,
) -> TrialLedger:
    """Estimate BLER under exact ML over the BEC.

    By linearity the all-zero codeword is transmitted unless random_words is
    set (the option exists so the equivalence can be demonstrated). A block
    errs iff the erasure pattern leaves the codeword ambiguous. gen overrides
    the generator, which lets dynamically frozen codes reuse this path.
    """
    BEC(epsilon)
    if gen is None:
        gen = bid_generator(spec)
    counts = _parallel(
        _bec_trial_range, (gen, epsilon), trials, seed, jobs, (random_words,)
    )
    errors = sum(c[1] for c in counts)
    # one solver pass per trial, by convention
    return TrialLedger(trials, errors, 0, float(trials), seed)


def _awgn_trial_range(
    config: EncoderConfig, channel: BIAWGN, lo: int, hi: int, seed: int, dec: DecoderConfig
):
    frozen = config.frozen
    if frozen.kernel.name != "A3p":
        if config.dynamic is not None:
            raise ValueError(
                "dynamic parities are tied to the build kernel; "
                "construct the config with kernel='A3p' to decode"
            )
        frozen = frozen_spec(frozen.m, frozen.r1, frozen.r2, A3P)
    k = frozen.k
    errors = 0
    ml_events = 0
    anv_sum = 0.0
    for t in range(lo, hi):
        msg = substream(seed, PURPOSE_MESSAGE, t).integers(0, 2, k, dtype=np.uint8)
        _, x = encode(config, msg)
        llrs = bpsk_llr(x, channel, substream(seed, PURPOSE_AWGN, t))
        if dec.kind == "sc":
            _, x_hat = sc_decode(llrs, frozen, config.dynamic, dec.exact_f)
            anv_sum += 1.0
        else:
            budget = SearchBudget(lambda_max=dec.lambda_max, eta=dec.eta)
            _, x_hat, anv, _ = ordered_search_decode(
                llrs, frozen, config.dynamic, budget, dec.exact_f
            )
            anv_sum += anv
        if (x_hat != x).any():
            errors += 1
            if ml_lower_bound_event(x_hat, x, llrs):
                ml_events += 1
    return hi - lo, errors, ml_events, anv_sum


def simulate_awgn(
    config: EncoderConfig,
    channel: BIAWGN,
    trials: int,
    decoder_cfg: Optional[DecoderConfig] = None,
    seed: int = 0,
    jobs: int = 1,
) -> TrialLedger:
    """Estimate BLER over BI-AWGN with random messages each trial."""
    dec = decoder_cfg if decoder_cfg is not None else DecoderConfig()
    counts = _parallel(_awgn_trial_range, (config, channel), trials, seed, jobs, (dec,))
    errors = sum(c[1] for c in counts)
    ml_events = sum(c[2] for c in counts)
    anv_sum = sum(c[3] for c in counts)
    return TrialLedger(trials, errors, ml_events, anv_sum, seed)


def _call_range(args):
    fn, head, lo, hi, seed, tail = args
    return fn(*head, lo, hi, seed, *tail)


def _parallel(fn, head, trials, seed, jobs, tail):
    """Split [0, trials) into contiguous ranges; per-trial substreams make
    the partition invisible in the results."""
    if trials < 0:
        raise ValueError("trials must be >= 0")
    jobs = max(1, min(jobs, trials or 1))
    if jobs == 1:
        return [fn(*head, 0, trials, seed, *tail)]
    bounds = np.linspace(0, trials, jobs + 1).astype(int)
    work = [
        (fn, head, int(bounds[i]), int(bounds[i + 1]), seed, tail)
        for i in range(jobs)
    ]
    with multiprocessing.get_context("fork").Pool(jobs) as pool:
        return pool.map(_call_range, work)


def derived_seed(seed: int, index: int) -> int:
    """Per-grid-point seed; distinct points never share trial substreams."""
    return (seed * 1_000_003 + index) & (2**63 - 1)


def sweep(
    config: EncoderConfig,
    channel_grid: Sequence[Channel],
    trials: int,
    seed: int = 0,
    decoder_cfg: Optional[DecoderConfig] = None,
    jobs: int = 1,
) -> List[dict]:
    """One ledger row per grid point, with per-point derived seeds."""
    rows = []
    for idx, channel in enumerate(channel_grid):
        point_seed = derived_seed(seed, idx)
        if isinstance(channel, BEC):
            gen = None
            if config.dynamic is not None:
                gen = encoder_generator(config)
            ledger = simulate_bec(
                config.spec, channel.epsilon, trials, point_seed, jobs=jobs, gen=gen
            )
            kind, param = "bec", channel.epsilon
        else:
            ledger = simulate_awgn(
                config, channel, trials, decoder_cfg, point_seed, jobs=jobs
            )
            kind, param = "biawgn", channel.ebn0_db
        lo, hi = ledger.wilson()
        rows.append(
            {
                "code": config.label,
                "m": config.spec.m,
                "r1": config.spec.r1,
                "r2": config.spec.r2,
                "kernel": config.spec.kernel.name,
                "dynamic": config.dynamic is not None,
                "channel": kind,
                "param": param,
                "trials": ledger.trials,
                "block_errors": ledger.block_errors,
                "bler": ledger.bler,
                "bler_ci_lo": lo,
                "bler_ci_hi": hi,
                "ml_lb_errors": ledger.ml_lb_errors,
                "ml_lb_rate": ledger.ml_lb_rate,
                "anv": ledger.anv,
            }
        )
    return rows


SWEEP_COLUMNS = (
    "code,m,r1,r2,kernel,dynamic,channel,param,trials,block_errors,"
    "bler,bler_ci_lo,bler_ci_hi,ml_lb_errors,ml_lb_rate,anv"
).split(",")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def encoder_generator(config: EncoderConfig) -> GeneratorMatrix:
    """Generator of the encoder's image: unit-message encodings as rows.
    For static configs this spans the same code as bid_generator; dynamic
    parities move the span, so this is the matrix erasure decoding needs."""
    from .codes import kernel_row_class
    from .field_core import index_to_trits

    rows, labels, classes = [], [], []
    k = config.frozen.k
    m = config.spec.m
    for slot, i in enumerate(config.frozen.unfrozen_indices()):
        msg = np.zeros(k, dtype=np.uint8)
        msg[slot] = 1
        _, x = encode(config, msg)
        rows.append(pack_bits(x))
        labels.append(index_to_trits(int(i), m))
        classes.append(kernel_row_class(config.spec.kernel, int(i), m))
    return GeneratorMatrix(m, rows, labels, classes)
