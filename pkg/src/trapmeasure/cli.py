"""Command-line driver: every operation, emitting text, CSV, JSON, or SVG.

Exit codes: 0 success, 1 invalid input, 2 internal failure, 3 when a
``verify`` subcommand records a violated row.  All outputs are
deterministic for a fixed command line (and seed), so they can be pinned
byte-for-byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import traceback
from fractions import Fraction

from . import cantor as cantor_mod
from . import gasket as gasket_mod
from . import render as render_mod
from . import search as search_mod
from . import trapezoid as trap_mod
from .exact import measure
from .permutations import Permutation, composite_permutation, composite_plan, digit_swap_permutation, identity, reversal

VERIFY_FAILED = 3


class CliError(Exception):
    """Invalid input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would sys.exit(2)
        raise CliError(message)


def _decimal(value) -> str:
    return f"{float(value):.15g}"


def _frac_str(value: Fraction) -> str:
    return str(value)


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"cannot parse rational {text!r}") from None


def _parse_perm(text: str, n: int) -> Permutation:
    if text == "identity":
        return identity(n)
    if text == "reversal":
        return reversal(n)
    if text == "composite":
        return composite_permutation(n)
    if text.startswith("digit-swap:"):
        m = int(text.split(":", 1)[1])
        if 3**m != n:
            raise CliError(f"digit-swap:{m} needs n = 3^{m} = {3 ** m}, got n = {n}")
        return digit_swap_permutation(m)
    perm = Permutation.parse(text)
    if len(perm) != n:
        raise CliError(f"permutation length {len(perm)} != n {n}")
    return perm


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise CliError(f"cannot parse integer list {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


# ---------------------------------------------------------------- subcommands


def _cmd_area(args) -> int:
    spec = trap_mod.TrapezoidSpec(args.n, _parse_perm(args.perm, args.n))
    value = trap_mod.area(spec)
    if args.format == "text":
        _emit(f"{value} ≈ {float(value):.6f}\n", args.out)
    elif args.format == "json":
        _emit(
            _json_text(
                {
                    "n": args.n,
                    "perm": str(spec.sigma),
                    "area": _frac_str(value),
                    "area_decimal": _decimal(value),
                }
            ),
            args.out,
        )
    else:
        _emit(
            _csv_text(
                ["n", "perm", "area_num", "area_den", "area_decimal"],
                [[str(args.n), str(spec.sigma), str(value.numerator), str(value.denominator), _decimal(value)]],
            ),
            args.out,
        )
    return 0


def _cmd_slice(args) -> int:
    spec = trap_mod.TrapezoidSpec(args.n, _parse_perm(args.perm, args.n))
    y = _parse_rational(args.y)
    union = trap_mod.slice_at(spec, y)
    total = measure(union)
    if args.format == "text":
        parts = " ∪ ".join(f"[{p.lo}, {p.hi}]" for p in union.parts) or "(empty)"
        _emit(f"{parts}\nmeasure {total} ≈ {float(total):.6f}\n", args.out)
    elif args.format == "json":
        _emit(
            _json_text(
                {
                    "n": args.n,
                    "perm": str(spec.sigma),
                    "y": _frac_str(y),
                    "parts": [[_frac_str(p.lo), _frac_str(p.hi)] for p in union.parts],
                    "measure": _frac_str(total),
                    "measure_decimal": _decimal(total),
                }
            ),
            args.out,
        )
    else:
        rows = [
            [str(i), str(p.lo.numerator), str(p.lo.denominator), str(p.hi.numerator), str(p.hi.denominator)]
            for i, p in enumerate(union.parts)
        ]
        _emit(_csv_text(["part", "lo_num", "lo_den", "hi_num", "hi_den"], rows), args.out)
    return 0


def _record_payload(record: search_mod.AlphaRecord, timing: bool) -> dict:
    payload = {
        "n": record.n,
        "alpha": _frac_str(record.alpha),
        "alpha_decimal": _decimal(record.alpha),
        "argmin": str(record.argmin),
        "mode": record.mode,
        "perms_evaluated": record.perms_evaluated,
    }
    if timing:
        payload["wall_time_s"] = round(record.wall_time, 6)
    return payload


def _record_csv_row(record: search_mod.AlphaRecord) -> list[str]:
    return [
        str(record.n),
        str(record.alpha.numerator),
        str(record.alpha.denominator),
        _decimal(record.alpha),
        str(record.argmin),
        record.mode,
        str(record.perms_evaluated),
    ]


_ALPHA_COLUMNS = ["n", "alpha_num", "alpha_den", "alpha_decimal", "argmin", "mode", "perms_evaluated"]


def _cmd_alpha(args) -> int:
    if args.heuristic:
        record = search_mod.alpha_heuristic(args.n, budget=args.budget, seed=args.seed)
    else:
        record = search_mod.alpha_exhaustive(
            args.n,
            use_symmetry=not args.no_symmetry,
            workers=args.workers,
            force=args.force,
        )
    if args.format == "json":
        _emit(_json_text(_record_payload(record, args.timing)), args.out)
    elif args.format == "csv":
        _emit(_csv_text(_ALPHA_COLUMNS, [_record_csv_row(record)]), args.out)
    else:
        _emit(
            f"alpha({record.n}) = {record.alpha} ≈ {float(record.alpha):.6f} "
            f"argmin {record.argmin} ({record.mode}, {record.perms_evaluated} evaluated)\n",
            args.out,
        )
    return 0


def _cmd_alpha_scan(args) -> int:
    report = search_mod.alpha_scan(
        args.max_n,
        exhaustive_limit=args.exhaustive_limit,
        budget=args.budget,
        seed=args.seed,
        workers=args.workers,
    )
    fit = report.upper_bound_fit
    if args.format == "json":
        payload = {
            "records": [_record_payload(r, args.timing) for r in report.records],
            "monotonicity_violations": [list(v) for v in report.violations],
            "c_estimates": [
                {"n": n, "alpha_times_log_n": value} for n, value in report.c_estimates
            ],
            "upper_bound_fit": None
            if fit is None
            else {"c": fit.c, "p": fit.p, "residual": fit.residual},
        }
        _emit(_json_text(payload), args.out)
    else:
        rows = [_record_csv_row(r) for r in report.records]
        _emit(_csv_text(_ALPHA_COLUMNS, rows), args.out)
        if report.violations:
            for a, b in report.violations:
                print(f"monotonicity violated: alpha({b}) > alpha({a})", file=sys.stderr)
        else:
            print("monotonicity: no violations among exact values", file=sys.stderr)
        for n, value in report.c_estimates:
            print(f"c-estimate n={n}: alpha*log(n) = {value:.6f}", file=sys.stderr)
        if fit is not None:
            print(
                f"upper-bound fit vs log(n): p={fit.p:.6f} c={fit.c:.6f} residual={fit.residual:.3g}",
                file=sys.stderr,
            )
    return 0


def _cmd_sigma3(args) -> int:
    rows = []
    pairs = []
    for m in range(1, args.max_m + 1):
        value = trap_mod.area(trap_mod.TrapezoidSpec(3**m, digit_swap_permutation(m)))
        pairs.append((m, float(value)))
        rows.append([str(m), str(3**m), str(value.numerator), str(value.denominator), _decimal(value)])
    fit = gasket_mod.decay_fit(pairs) if len(pairs) >= 3 else None
    if args.format == "json":
        payload = {
            "rows": [
                {"m": int(r[0]), "n": int(r[1]), "area": f"{r[2]}/{r[3]}", "area_decimal": r[4]}
                for r in rows
            ],
            "fit": None if fit is None else {"c": fit.c, "p": fit.p, "residual": fit.residual},
        }
        _emit(_json_text(payload), args.out)
    else:
        _emit(_csv_text(["m", "n", "area_num", "area_den", "area_decimal"], rows), args.out)
        if fit is not None:
            print(
                f"decay fit: p={fit.p:.6f} c={fit.c:.6f} residual={fit.residual:.3g}",
                file=sys.stderr,
            )
    return 0


def _cmd_sigma_n(args) -> int:
    plan = composite_plan(args.n)
    perm = composite_permutation(args.n)
    lhs, rhs = trap_mod.weighted_sum_identity(args.n)
    payload = {
        "n": args.n,
        "digits_base3": "".join(str(d) for d in plan.digits),
        "blocks": [{"size": size, "count": count} for size, count in plan.blocks],
        "perm": str(perm),
        "lhs": _frac_str(lhs),
        "rhs": _frac_str(rhs),
        "lhs_decimal": _decimal(lhs),
        "equal": lhs == rhs,
    }
    if args.format == "json":
        _emit(_json_text(payload), args.out)
    else:
        _emit(
            _csv_text(
                ["n", "digits_base3", "lhs_num", "lhs_den", "rhs_num", "rhs_den", "equal"],
                [
                    [
                        str(args.n),
                        payload["digits_base3"],
                        str(lhs.numerator),
                        str(lhs.denominator),
                        str(rhs.numerator),
                        str(rhs.denominator),
                        str(lhs == rhs).lower(),
                    ]
                ],
            ),
            args.out,
        )
    return 0


def _cmd_cantor(args) -> int:
    t = _parse_rational(args.t)
    closed = cantor_mod.cantor_measure_closed(t)
    spec = cantor_mod.DigitSetSpec(args.depth, (Fraction(0), Fraction(1), t))
    partial = measure(cantor_mod.partial_cantor(spec))
    excess = partial - closed
    if args.format == "text":
        _emit(
            f"closed-form measure: {closed} ≈ {float(closed):.6f}\n"
            f"depth-{args.depth} partial measure: {partial} ≈ {float(partial):.6f}\n"
            f"excess: {excess} ≈ {float(excess):.6g}\n",
            args.out,
        )
    elif args.format == "json":
        _emit(
            _json_text(
                {
                    "t": _frac_str(t),
                    "depth": args.depth,
                    "closed": _frac_str(closed),
                    "closed_decimal": _decimal(closed),
                    "partial": _frac_str(partial),
                    "partial_decimal": _decimal(partial),
                    "excess_decimal": _decimal(excess),
                }
            ),
            args.out,
        )
    else:
        _emit(
            _csv_text(
                [
                    "t_num",
                    "t_den",
                    "depth",
                    "closed_num",
                    "closed_den",
                    "closed_decimal",
                    "partial_num",
                    "partial_den",
                    "partial_decimal",
                ],
                [
                    [
                        str(t.numerator),
                        str(t.denominator),
                        str(args.depth),
                        str(closed.numerator),
                        str(closed.denominator),
                        _decimal(closed),
                        str(partial.numerator),
                        str(partial.denominator),
                        _decimal(partial),
                    ]
                ],
            ),
            args.out,
        )
    return 0


def _cmd_slice_measure(args) -> int:
    t = _parse_rational(args.t)
    value = cantor_mod.slice_measure_closed(t)
    if args.format == "text":
        _emit(f"{value} ≈ {float(value):.6f}\n", args.out)
    elif args.format == "json":
        _emit(
            _json_text(
                {"t": _frac_str(t), "measure": _frac_str(value), "measure_decimal": _decimal(value)}
            ),
            args.out,
        )
    else:
        _emit(
            _csv_text(
                ["t_num", "t_den", "measure_num", "measure_den", "measure_decimal"],
                [
                    [
                        str(t.numerator),
                        str(t.denominator),
                        str(value.numerator),
                        str(value.denominator),
                        _decimal(value),
                    ]
                ],
            ),
            args.out,
        )
    return 0


def _cmd_favard(args) -> int:
    value = gasket_mod.favard(gasket_mod.GasketSpec(args.depth), args.quad_points)
    if args.format == "text":
        _emit(f"favard(depth={args.depth}, points={args.quad_points}) = {value:.12f}\n", args.out)
    elif args.format == "json":
        _emit(
            _json_text({"depth": args.depth, "quad_points": args.quad_points, "favard": value}),
            args.out,
        )
    else:
        _emit(
            _csv_text(
                ["depth", "quad_points", "favard"],
                [[str(args.depth), str(args.quad_points), _decimal(value)]],
            ),
            args.out,
        )
    return 0


def _cmd_verify_lemma1(args) -> int:
    depths = _parse_int_list(args.depths)
    points = args.t_points
    if points < 2:
        raise CliError("need at least 2 grid points")
    grid = [Fraction(k, points - 1) for k in range(points)]
    rows = []
    any_violation = False
    for depth in depths:
        for row in gasket_mod.lemma1_check(depth, grid):
            any_violation |= not row.ok
            rows.append(
                [
                    str(row.depth),
                    str(row.t.numerator),
                    str(row.t.denominator),
                    _decimal(row.t),
                    str(row.lhs.numerator),
                    str(row.lhs.denominator),
                    _decimal(row.lhs),
                    _decimal(row.rhs),
                    _decimal(row.ratio),
                    str(row.ok).lower(),
                ]
            )
    header = [
        "depth",
        "t_num",
        "t_den",
        "t_decimal",
        "lhs_num",
        "lhs_den",
        "lhs_decimal",
        "rhs",
        "ratio",
        "ok",
    ]
    if args.format == "json":
        payload = [
            dict(zip(header, row)) for row in rows
        ]
        _emit(_json_text(payload), args.out)
    else:
        _emit(_csv_text(header, rows), args.out)
    return VERIFY_FAILED if any_violation else 0


def _cmd_verify_lemma2(args) -> int:
    p = float(_parse_rational(args.p))
    n_values = [float(Fraction(part)) for part in args.n_values.split(",")]
    rows = gasket_mod.lemma2_check(p, n_values)
    csv_rows = []
    any_violation = False
    previous = None
    for row in rows:
        ok = math.isfinite(row.ratio) and row.ratio > 0 and (previous is None or row.ratio <= previous)
        previous = row.ratio
        any_violation |= not ok
        csv_rows.append(
            [
                _decimal(p),
                _decimal(row.n),
                _decimal(row.integral),
                _decimal(row.bound),
                _decimal(row.ratio),
                str(ok).lower(),
            ]
        )
    header = ["p", "n", "integral", "bound", "ratio", "ok"]
    if args.format == "json":
        _emit(_json_text([dict(zip(header, row)) for row in csv_rows]), args.out)
    else:
        _emit(_csv_text(header, csv_rows), args.out)
    return VERIFY_FAILED if any_violation else 0


def _cmd_verify_weighted_sum(args) -> int:
    lhs, rhs = trap_mod.weighted_sum_identity(args.n)
    ok = lhs == rhs
    header = ["n", "lhs_num", "lhs_den", "lhs_decimal", "rhs_num", "rhs_den", "rhs_decimal", "ok"]
    row = [
        str(args.n),
        str(lhs.numerator),
        str(lhs.denominator),
        _decimal(lhs),
        str(rhs.numerator),
        str(rhs.denominator),
        _decimal(rhs),
        str(ok).lower(),
    ]
    if args.format == "json":
        _emit(_json_text(dict(zip(header, row))), args.out)
    else:
        _emit(_csv_text(header, [row]), args.out)
    return 0 if ok else VERIFY_FAILED


def _cmd_render(args) -> int:
    if args.target == "trapezoid":
        spec = trap_mod.TrapezoidSpec(args.n, _parse_perm(args.perm, args.n))
        _emit(render_mod.trapezoid_svg(spec), args.out)
    else:
        _emit(render_mod.gasket_svg(gasket_mod.GasketSpec(args.depth)), args.out)
    return 0


# --------------------------------------------------------------------- parser


def _add_common(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument("--format", choices=("text", "csv", "json"), default=default_format)
    parser.add_argument("--out", "-o", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trapmeasure", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("area", help="exact trapezoid area")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perm", required=True, help='"1,3,2", identity, reversal, composite, digit-swap:M')
    _add_common(p, "text")
    p.set_defaults(func=_cmd_area)

    p = sub.add_parser("slice", help="exact horizontal slice")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perm", required=True)
    p.add_argument("--y", required=True, help="height in [0,1], e.g. 1/2")
    _add_common(p, "text")
    p.set_defaults(func=_cmd_slice)

    p = sub.add_parser("alpha", help="minimum area over permutations")
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=True)
    mode.add_argument("--heuristic", action="store_true")
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--force", action="store_true", help="lift the exhaustive n guard")
    p.add_argument("--timing", action="store_true", help="include wall time in output")
    _add_common(p, "json")
    p.set_defaults(func=_cmd_alpha)

    p = sub.add_parser("alpha-scan", help="alpha table for n = 1..max-n")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--exhaustive-limit", type=int, default=8)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--timing", action="store_true")
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_alpha_scan)

    p = sub.add_parser("sigma3", help="areas of the 3^m digit-swap family")
    p.add_argument("--max-m", type=int, default=4)
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_sigma3)

    p = sub.add_parser("sigma-n", help="composite permutation and its block identity")
    p.add_argument("--n", type=int, required=True)
    _add_common(p, "json")
    p.set_defaults(func=_cmd_sigma_n)

    p = sub.add_parser("cantor", help="closed-form vs partial Cantor measures")
    p.add_argument("--t", required=True)
    p.add_argument("--depth", type=int, default=8)
    _add_common(p, "text")
    p.set_defaults(func=_cmd_cantor)

    p = sub.add_parser("slice-measure", help="closed-form slice measure at height t")
    p.add_argument("--t", required=True)
    _add_common(p, "text")
    p.set_defaults(func=_cmd_slice_measure)

    p = sub.add_parser("favard", help="direction-averaged gasket projection measure")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--quad-points", type=int, default=4096)
    _add_common(p, "text")
    p.set_defaults(func=_cmd_favard)

    verify = sub.add_parser("verify", help="inequality and identity checks")
    vsub = verify.add_subparsers(dest="check", required=True, parser_class=_Parser)

    p = vsub.add_parser("lemma1", help="slice measure vs projection bound")
    p.add_argument("--depths", default="1,2,3,4", help="comma-separated depths")
    p.add_argument("--t-points", type=int, default=11, help="uniform grid size on [0,1]")
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_verify_lemma1)

    p = vsub.add_parser("lemma2", help="singular integral growth ratios")
    p.add_argument("--p", default="1/2")
    p.add_argument("--n-values", default="5,10,20,40")
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_verify_lemma2)

    p = vsub.add_parser("weighted-sum", help="composite block identity, both sides")
    p.add_argument("--n", type=int, required=True)
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_verify_weighted_sum)

    render = sub.add_parser("render", help="SVG figures")
    rsub = render.add_subparsers(dest="target", required=True, parser_class=_Parser)

    p = rsub.add_parser("trapezoid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perm", required=True)
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=_cmd_render, target="trapezoid")

    p = rsub.add_parser("gasket")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=_cmd_render, target="gasket")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


def app() -> None:
    sys.exit(main())


if __name__ == "__main__":
    app()
