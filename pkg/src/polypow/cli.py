"""Command-line front end: subcommand dispatch, CSV/JSON/TSV/PBM emission.

Exit codes: 0 success, 2 parse or usage error, 3 computation diagnostic (a
scan that fails to stabilize, inference without a consistent recursion, an
inconclusive residual check, or PENDING results when exactness was demanded).
Output goes to stdout unless --out is given, in which case it is written to a
temp file and renamed into place.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import asympt, blocks, genfun, willson
from .fpoly import FpPoly, format_poly, iter_rows, parse_poly

# Bitmaps above this cell count would be several hundred MB of PBM text.
MAX_BITMAP_CELLS = 1 << 24


class BitmapSizeError(RuntimeError):
    pass


class PendingResultError(RuntimeError):
    pass


@dataclass(frozen=True)
class Bitmap:
    """Row-major 0/1 grid; grid row k marks the nonzero digits of f^k."""

    width: int
    height: int
    bits: tuple[bytes, ...]


def render_fractal(f: FpPoly, rows: int) -> Bitmap:
    """Bitmap of the nonzero coefficients of f^0..f^(rows-1), left-aligned."""
    if rows < 1:
        raise ValueError("rows must be >= 1")
    width = (rows - 1) * max(f.degree, 0) + 1
    if rows * width > MAX_BITMAP_CELLS:
        raise BitmapSizeError(
            f"bitmap {width}x{rows} exceeds the cap of {MAX_BITMAP_CELLS} cells"
        )
    grid = []
    for row in iter_rows(f, rows):
        line = bytearray(width)
        line[: len(row)] = (np.asarray(row) != 0).astype(np.uint8).tobytes()
        grid.append(bytes(line))
    return Bitmap(width, rows, tuple(grid))


def to_pbm(bitmap: Bitmap) -> str:
    lines = [f"P1\n{bitmap.width} {bitmap.height}"]
    for row in bitmap.bits:
        lines.append(" ".join("1" if b else "0" for b in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Output helpers


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    target = os.path.abspath(out)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".polypow-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _table(values) -> str:
    return genfun.series_to_csv(list(values))


def _values_json(f: FpPoly, values) -> str:
    return _json(
        {
            "poly": format_poly(f),
            "prime": str(f.p),
            "a": [str(v) for v in values],
        }
    )


def _poly_arg(args) -> FpPoly:
    return parse_poly(args.poly, args.prime)


# ---------------------------------------------------------------------------
# Subcommands


def _known_recursion(f: FpPoly):
    if f.coeffs == (1, 1):
        return blocks.recursion_1px(f.p)
    if f.p == 2 and f.coeffs == (1, 1, 1):
        return blocks.recursion_1xx2_mod2()
    return None


def _cmd_blocks(args) -> str:
    f = _poly_arg(args)
    rec = _known_recursion(f)
    if args.engine == "recursion" and rec is None:
        rec = blocks.infer_recursion(f)
    if args.engine == "scan" or rec is None:
        values = blocks.line_complexity_range(f, args.n)
    else:
        values = [blocks.a_from_recursion(rec, i) for i in range(args.n + 1)]
    if args.format == "json":
        return _values_json(f, values)
    return _table(values)


def _cmd_series(args) -> str:
    f = _poly_arg(args)
    if f.coeffs == (1, 1):
        values = genfun.series_1px(f.p, args.terms)
    elif f.p == 2 and f.coeffs == (1, 1, 1):
        values = genfun.series_1xx2(args.terms)
    else:
        raise ValueError(
            f"no closed generating function for {format_poly(f)} mod {f.p}"
        )
    if args.format == "json":
        return _values_json(f, values)
    return _table(values)


def _family_of(f: FpPoly):
    if f.coeffs == (1, 1):
        return asympt.OnePlusX(f.p)
    if f.p == 2 and f.coeffs == (1, 1, 1):
        return asympt.ONE_PLUS_X_PLUS_X2_MOD2
    raise ValueError(f"no limit law available for {format_poly(f)} mod {f.p}")


def _cmd_limits(args) -> str:
    f = _poly_arg(args)
    family = _family_of(f)
    if args.oscillation is not None:
        rec = _known_recursion(f)
        table = asympt.oscillation_table(rec, args.samples, args.oscillation)
        return asympt.oscillation_csv(table)
    law = asympt.limit_function(family)
    ex = asympt.extrema(family)
    if args.format == "json":
        return _json(
            {
                "poly": format_poly(f),
                "prime": str(f.p),
                "pieces": [
                    {
                        "lo": str(pc.lo),
                        "hi": str(pc.hi),
                        "a": str(pc.a),
                        "b": str(pc.b),
                        "c": str(pc.c),
                    }
                    for pc in law.pieces
                ],
                "inf": str(ex.inf),
                "sup": str(ex.sup),
                "arg_inf": str(ex.arg_inf),
                "arg_sup": str(ex.arg_sup),
            }
        )
    lines = ["lo,hi,a,b,c"]
    for pc in law.pieces:
        lines.append(f"{pc.lo},{pc.hi},{pc.a},{pc.b},{pc.c}")
    return "\n".join(lines) + "\n"


def _spectral_report(f: FpPoly, depth: int, budget: float | None):
    system = willson.build_transfer(f)
    if depth > 0:
        ok = willson.verify_counts(system, depth)
        if ok is not True:
            raise willson.SpectralMismatchError(
                f"count identity failed for {format_poly(f)}: {ok}"
            )
    res = willson.minpoly_of_lambda(willson.perron(system), budget=budget)
    return system, res


def _cmd_willson(args) -> str:
    f = _poly_arg(args)
    system, res = _spectral_report(f, args.depth, args.budget)
    if args.exact and res.degree == willson.PENDING:
        raise PendingResultError(
            f"minimal polynomial of {format_poly(f)} still PENDING at "
            f"budget {args.budget}s"
        )
    bound = willson.eigen_bound(f.degree)
    if args.format == "tsv":
        row = willson.SurveyRow(
            poly=f, result=res, bound=bound, bound_ok=res.lam <= bound + 1e-9
        )
        return willson.survey_tsv(willson.SurveyResult((row,), (), ()))
    lo, hi = res.interval
    return _json(
        {
            "poly": format_poly(f),
            "lambda": res.lam,
            "interval_lo": str(lo),
            "interval_hi": str(hi),
            "charpoly": [str(c) for c in res.charpoly],
            "minpoly": (
                res.minpoly
                if res.minpoly == willson.PENDING
                else [str(c) for c in res.minpoly]
            ),
            "degree": res.degree if res.degree == willson.PENDING else str(res.degree),
            "dimension": res.dimension,
            "bound": bound,
            "states": len(system.states),
            "states_trimmed": len(system.trimmed),
        }
    )


def _cmd_survey(args) -> str:
    result = willson.survey(args.max_deg, depth=args.depth, minpoly_budget=args.budget)
    if args.format == "json":
        return _json(
            {
                "rows": [
                    {
                        "poly": format_poly(row.poly),
                        "lambda": row.result.lam,
                        "degree": (
                            row.result.degree
                            if row.result.degree == willson.PENDING
                            else str(row.result.degree)
                        ),
                        "dimension": row.result.dimension,
                        "bound": row.bound,
                        "bound_ok": row.bound_ok,
                    }
                    for row in result.rows
                ],
                "lambda_max": [
                    {"deg": k, "lambda": lam} for k, lam in result.lambda_max
                ],
                "collisions": [list(pair) for pair in result.collisions],
            }
        )
    return willson.survey_tsv(result)


def _cmd_infer(args) -> str:
    f = _poly_arg(args)
    rec = blocks.infer_recursion(f, window=args.window)
    if args.format == "csv":
        width = max(len(row) for row in rec.rows)
        header = "k," + ",".join(f"c{j}" for j in range(width)) + ",constant"
        lines = [header]
        for k, row in enumerate(rec.rows):
            padded = list(row) + [0] * (width - len(row))
            lines.append(f"{k}," + ",".join(str(c) for c in padded) + f",{rec.constant}")
        return "\n".join(lines) + "\n"
    return _json(
        {
            "poly": format_poly(f),
            "prime": str(rec.p),
            "rows": [[str(c) for c in row] for row in rec.rows],
            "constant": str(rec.constant),
            "threshold": str(rec.threshold),
            "initials": [str(v) for v in rec.initials],
        }
    )


def _cmd_fractal(args) -> str:
    f = _poly_arg(args)
    return to_pbm(render_fractal(f, args.rows))


# ---------------------------------------------------------------------------
# Parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polypow",
        description="Coefficient patterns of powers of polynomials over Z/p.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats, default):
        p.add_argument("--poly", required=True, help='e.g. "1+x+x^2" or "1,1,1"')
        p.add_argument("--prime", type=int, default=2)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=formats, default=default)

    p = sub.add_parser("blocks", help="line complexity a(n) by scan or recursion")
    common(p, ("csv", "json"), "csv")
    p.add_argument("--n", type=int, default=20, help="largest block length")
    p.add_argument("--engine", choices=("auto", "scan", "recursion"), default="auto")
    p.set_defaults(func=_cmd_blocks)

    p = sub.add_parser("series", help="generating-function prefix of a(n)")
    common(p, ("csv", "json"), "csv")
    p.add_argument("--terms", type=int, default=64)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("limits", help="quadratic limit law and extrema")
    common(p, ("csv", "json"), "json")
    p.add_argument(
        "--oscillation",
        type=int,
        default=None,
        metavar="KMAX",
        help="emit the a(n)/n^2 table up to p^KMAX instead",
    )
    p.add_argument("--samples", type=int, default=4, help="grid points per octave")
    p.set_defaults(func=_cmd_limits)

    p = sub.add_parser("willson", help="spectral report for one polynomial")
    common(p, ("json", "tsv"), "json")
    p.add_argument("--depth", type=int, default=0, help="verify counts up to 2^depth")
    p.add_argument("--budget", type=float, default=10.0, help="factoring budget, s")
    p.add_argument("--exact", action="store_true", help="fail if minpoly is PENDING")
    p.set_defaults(func=_cmd_willson)

    p = sub.add_parser("survey", help="spectral survey of all classes")
    p.add_argument("--max-deg", type=int, required=True)
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--budget", type=float, default=8.0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=_cmd_survey)

    p = sub.add_parser("infer", help="fit the base-p recursion of a(n)")
    common(p, ("json", "csv"), "json")
    p.add_argument("--window", type=int, default=None, help="pin the data window")
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("fractal", help="PBM bitmap of nonzero coefficients")
    common(p, ("pbm",), "pbm")
    p.add_argument("--rows", type=int, default=256)
    p.set_defaults(func=_cmd_fractal)

    return parser


_DIAGNOSTICS = (
    blocks.StabilizationError,
    blocks.InferenceError,
    genfun.InconclusiveError,
    willson.SpectralMismatchError,
    BitmapSizeError,
    PendingResultError,
)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    try:
        text = args.func(args)
        _emit(text, args.out)
    except _DIAGNOSTICS as exc:
        print(f"diagnostic: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
