"""Command-line front end: construction, distance tables, recursion trees,
verification checks, and channel simulations, all with reproducible output.

Numeric results are CSV with a header row; matrices and recursion trees are
JSON. Identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional, Sequence

import numpy as np

from .codes import (
    CodeSpec,
    abelian_generator,
    bid_generator,
    dimension,
    dual_weight_set,
    get_kernel,
    idft_generator_row,
    spectral_membership,
    submatrix_by_weight,
)
from .decode import LLR_MAX, sc_decode
from .distance import (
    brute_force_min_distance,
    closed_form_lower,
    odd_even_all_ones_weight,
    recursion_tree,
    recursive_bounds,
    scatter_data,
)
from .gf2 import gf2_matmul_t, gf2_same_span
from .sim import (
    BEC,
    BIAWGN,
    DecoderConfig,
    rows_to_csv,
    sweep,
)
from .transform import encode, make_config


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_float(v: float) -> str:
    return f"{v:.10g}"


def parse_grid(text: str) -> List[float]:
    """A single value, or an inclusive a:b:step grid."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid {text!r} is not a:b:step")
        a, b, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(round((b - a) / step)) + 1
        if count < 1 or abs(a + (count - 1) * step - b) > 1e-9 * max(1.0, abs(b)):
            raise ValueError(f"grid {text!r} endpoint does not land on a step")
        return [a + i * step for i in range(count)]
    return [float(text)]


def _cmd_info(args) -> int:
    spec = CodeSpec(args.m, args.r1, args.r2, get_kernel(args.kernel))
    iv = recursive_bounds(args.m, args.r1, args.r2)
    k = dimension(args.m, spec.weight_set)
    rows = [
        [
            args.m,
            args.r1,
            args.r2,
            spec.n,
            k,
            _fmt_float(k / spec.n),
            closed_form_lower(args.m, args.r1, args.r2),
            iv.lower,
            iv.upper,
            "true" if iv.exact else "false",
        ]
    ]
    header = [
        "m", "r1", "r2", "N", "K", "rate",
        "closed_form", "dmin_lower", "dmin_upper", "exact",
    ]
    _emit(_csv_text(header, rows), args.out)
    return 0


def _cmd_distance(args) -> int:
    iv = recursive_bounds(args.m, args.r1, args.r2)
    k = dimension(args.m, range(args.r1, args.r2 + 1))
    rows = [
        [
            args.m, args.r1, args.r2, k,
            iv.lower, iv.upper,
            closed_form_lower(args.m, args.r1, args.r2),
            "true" if iv.exact else "false",
        ]
    ]
    header = ["m", "r1", "r2", "K", "dmin_lower", "dmin_upper", "closed_form", "exact"]
    _emit(_csv_text(header, rows), args.out)
    return 0


def _cmd_tables(args) -> int:
    rows = []
    for m in range(2, args.max_m + 1):
        for r1 in range(m + 1):
            for r2 in range(r1, m + 1):
                iv = recursive_bounds(m, r1, r2)
                k = dimension(m, range(r1, r2 + 1))
                rows.append([m, r1, r2, k, iv.lower, iv.upper])
    header = ["m", "r1", "r2", "K", "dmin_lower", "dmin_upper"]
    _emit(_csv_text(header, rows), args.out)
    return 0


def _tree_json(node) -> dict:
    return {
        "name": node.name,
        "m": node.m,
        "r1": node.r1,
        "r2": node.r2,
        "lower": node.result.lower,
        "upper": node.result.upper,
        "base_case": node.base_case,
        "children": [
            {"rule": label, "node": _tree_json(child)} for label, child in node.children
        ],
    }


def _cmd_tree(args) -> int:
    node = recursion_tree(args.m, args.r1, args.r2)
    text = json.dumps(_tree_json(node), indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_scatter(args) -> int:
    rows = [
        [args.m, r1, r2, _fmt_float(rate), _fmt_float(y)]
        for r1, r2, rate, y in scatter_data(args.m)
    ]
    header = ["m", "r1", "r2", "rate", "norm_log_dmin"]
    _emit(_csv_text(header, rows), args.out)
    return 0


def _cmd_gen_matrix(args) -> int:
    cfg = make_config(
        args.m, args.r1, args.r2,
        kernel=args.kernel, dynamic=args.dynamic, seed=args.seed,
    )
    if args.dynamic:
        from .sim import encoder_generator

        gen = encoder_generator(cfg)
    else:
        gen = bid_generator(cfg.spec)
    if args.format == "text":
        lines = []
        for r in gen.rows:
            lines.append("".join(str((r >> i) & 1) for i in range(gen.n)))
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    hexlen = (gen.n + 3) // 4
    doc = {
        "m": args.m,
        "r1": args.r1,
        "r2": args.r2,
        "kernel": cfg.spec.kernel.name,
        "dynamic": bool(args.dynamic),
        "rows": [f"{r:0{hexlen}x}" for r in gen.rows],
    }
    if args.dynamic:
        doc["seed"] = args.seed
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _verify_checks(max_m: int):
    """Construction, duality, oracle, and round-trip checks. Yields
    (name, passed, detail)."""
    # exhaustive distance oracle at length 9, and length 27 within budget
    for m in (2, 3):
        if m > max_m:
            break
        ok, detail = True, ""
        for r1 in range(m + 1):
            for r2 in range(r1, m + 1):
                k = dimension(m, range(r1, r2 + 1))
                if k == 0 or k > 20:
                    continue
                got, _ = brute_force_min_distance(bid_generator(CodeSpec(m, r1, r2)))
                iv = recursive_bounds(m, r1, r2)
                if not (iv.exact and iv.lower == got):
                    ok = False
                    detail = f"({m},{r1},{r2}): brute {got} vs recursion {iv}"
        yield f"distance oracle, length {3**m}", ok, detail

    for m in range(1, min(max_m, 4) + 1):
        ok, detail = True, ""
        for w in range(m + 1):
            sub = submatrix_by_weight(m, w)
            spectral = [idft_generator_row(m, lbl) for lbl in sub.row_labels]
            if not gf2_same_span(spectral, sub.rows):
                ok = False
                detail = f"m={m} w={w}: spectral rows span differs"
        yield f"spectral rows == kernel rows, m={m}", ok, detail

    for m in range(1, min(max_m, 4) + 1):
        ok, detail = True, ""
        for r1 in range(m + 1):
            for r2 in range(r1, m + 1):
                ws = range(r1, r2 + 1)
                gen = abelian_generator(m, ws)
                dual = abelian_generator(m, dual_weight_set(ws, m))
                if any(any(row) for row in gf2_matmul_t(gen.rows, dual.rows)):
                    ok = False
                    detail = f"({m},{r1},{r2}): dual product nonzero"
                if not all(spectral_membership(r, ws, m) for r in gen.rows):
                    ok = False
                    detail = f"({m},{r1},{r2}): generator row outside spectrum"
                other = bid_generator(CodeSpec(m, r1, r2, get_kernel("A3p")))
                if not gf2_same_span(gen.rows, other.rows):
                    ok = False
                    detail = f"({m},{r1},{r2}): kernel spans differ"
        yield f"duality / spectra / kernel invariance, m={m}", ok, detail

    ok, detail = True, ""
    for m in range(1, min(max_m, 6) + 1):
        if odd_even_all_ones_weight(m, "even") != 2 * m + 1:
            ok, detail = False, f"even identity fails at m={m}"
        if m >= 1 and odd_even_all_ones_weight(m, "odd") != 2 * m:
            ok, detail = False, f"odd identity fails at m={m}"
    yield "all-ones row weights, odd/even splits", ok, detail

    ok, detail = True, ""
    rng = np.random.default_rng(0)
    for m in range(1, min(max_m, 3) + 1):
        for r1 in range(m + 1):
            for r2 in range(r1, m + 1):
                cfg = make_config(m, r1, r2, kernel="A3p")
                for _ in range(10):
                    msg = rng.integers(0, 2, cfg.frozen.k, dtype=np.uint8)
                    u, x = encode(cfg, msg)
                    llrs = LLR_MAX * (1.0 - 2.0 * x.astype(float))
                    u_hat, x_hat = sc_decode(llrs, cfg.frozen)
                    if (u_hat != u).any() or (x_hat != x).any():
                        ok, detail = False, f"({m},{r1},{r2}): round trip failed"
    yield "noiseless encode/decode round trips", ok, detail


def _cmd_verify(args) -> int:
    failures = 0
    lines = []
    for name, ok, detail in _verify_checks(args.max_m):
        if ok:
            lines.append(f"ok   {name}")
        else:
            failures += 1
            lines.append(f"FAIL {name}: {detail}")
    lines.append(f"{'PASS' if failures == 0 else 'FAIL'}: {failures} failing check(s)")
    _emit("\n".join(lines) + "\n", args.out)
    return 1 if failures else 0


def _cmd_simulate_bec(args) -> int:
    cfg = make_config(
        args.m, args.r1, args.r2,
        kernel=args.kernel, dynamic=args.dynamic, seed=args.seed,
    )
    grid = [BEC(e) for e in parse_grid(args.epsilon)]
    rows = sweep(cfg, grid, args.trials, seed=args.seed, jobs=args.jobs)
    _emit(rows_to_csv(rows), args.out)
    return 0


def _cmd_simulate_awgn(args) -> int:
    cfg = make_config(
        args.m, args.r1, args.r2,
        kernel=args.kernel, dynamic=args.dynamic, seed=args.seed,
    )
    rate = cfg.frozen.k / cfg.frozen.n
    grid = [BIAWGN(v, rate) for v in parse_grid(args.ebn0)]
    dec = DecoderConfig(args.decoder, args.lambda_max, args.eta)
    rows = sweep(cfg, grid, args.trials, seed=args.seed, decoder_cfg=dec, jobs=args.jobs)
    _emit(rows_to_csv(rows), args.out)
    return 0


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("m", type=int)
    p.add_argument("r1", type=int)
    p.add_argument("r2", type=int)


def _add_common(p: argparse.ArgumentParser, kernel_default: Optional[str]) -> None:
    p.add_argument("--kernel", choices=["A3", "A3p"], default=kernel_default)
    p.add_argument("--out", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bidcodes",
        description="Construction, distance bounds, and simulation for length-3^m binary abelian codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="N, K, rate, and distance bounds for one code")
    _add_spec_args(p)
    _add_common(p, "A3")
    p.set_defaults(fn=_cmd_info)

    p = sub.add_parser("distance", help="distance bounds row for one code")
    _add_spec_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("tables", help="distance table rows for 2 <= m <= max-m")
    p.add_argument("--max-m", type=int, default=6, dest="max_m")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_tables)

    p = sub.add_parser("tree", help="distance recursion tree as JSON")
    _add_spec_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_tree)

    p = sub.add_parser("scatter", help="rate vs normalized distance rows")
    p.add_argument("m", type=int)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_scatter)

    p = sub.add_parser("gen-matrix", help="generator matrix as JSON or text")
    _add_spec_args(p)
    _add_common(p, None)
    p.add_argument("--dynamic", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(fn=_cmd_gen_matrix)

    p = sub.add_parser("verify", help="construction and decoding self-checks")
    p.add_argument("--max-m", type=int, default=3, dest="max_m")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("simulate-bec", help="BLER sweep over the erasure channel")
    _add_spec_args(p)
    _add_common(p, None)
    p.add_argument("--dynamic", action="store_true")
    p.add_argument("--epsilon", required=True, help="value or a:b:step grid")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_simulate_bec)

    p = sub.add_parser("simulate-awgn", help="BLER sweep over BI-AWGN")
    _add_spec_args(p)
    _add_common(p, None)
    p.add_argument("--dynamic", action="store_true")
    p.add_argument("--ebn0", required=True, help="dB value or a:b:step grid")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--decoder", choices=["sc", "scos"], default="sc")
    p.add_argument("--lambda-max", type=float, default=math.inf, dest="lambda_max")
    p.add_argument("--eta", type=int, default=1_000_000)
    p.set_defaults(fn=_cmd_simulate_awgn)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
