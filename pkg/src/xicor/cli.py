"""Command-line interface.

Subcommands: compute, test, simulate, bench, verify.  Results go to stdout
(or --output) as JSON with a top-level ``"schema": 1``; failures print
``{"error": code, "message": text}`` on stderr and exit with

    1 verification failure, 2 parse/usage error, 3 constant y (or x),
    4 sample too small, 5 degenerate variance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from typing import Optional

from . import _rng
from .core import xi, xi_symmetrized, xi_tie_averaged
from .errors import ConstantY, SampleTooSmall, VarianceDegenerate, XiError
from .inference import test_asymptotic, test_permutation
from .ranks import PairedSample
from .sims import NOISY_SCENARIOS, POWER_TESTS

SCHEMA = 1

EXIT_VERIFY, EXIT_PARSE, EXIT_CONSTANT, EXIT_SMALL, EXIT_DEGENERATE = 1, 2, 3, 4, 5

_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


class ParseError(XiError):
    code = "parse_error"


class CliFailure(Exception):
    def __init__(self, exit_code: int, payload: dict):
        super().__init__(payload.get("message", ""))
        self.exit_code = exit_code
        self.payload = payload


def _is_number(cell: str) -> bool:
    return _NUMBER.fullmatch(cell.strip()) is not None


def _select(row: list, col, lineno: int) -> str:
    if col >= len(row):
        raise ParseError(f"line {lineno}: expected at least {col + 1} fields, got {len(row)}")
    return row[col]


def read_columns(text: str, x_col: str = "0", y_col: str = "1", delimiter: str = ",") -> PairedSample:
    """Parse two numeric columns out of delimited text.

    Column selectors are header names or 0-based indices.  The first row is
    a header when one of its selected cells is not a number.  Only dot
    decimals are accepted; empty cells and ragged rows are errors.
    """
    rows = [r for r in csv.reader(io.StringIO(text), delimiter=delimiter) if r]
    if not rows:
        raise ParseError("input is empty")
    width = len(rows[0])
    header: Optional[list] = None

    def index(sel: str) -> Optional[int]:
        return int(sel) if re.fullmatch(r"\d+", sel) else None

    ix, iy = index(x_col), index(y_col)
    first = rows[0]
    named = ix is None or iy is None
    probe = [c for c in (ix, iy) if c is not None and c < len(first)]
    if named or any(not _is_number(first[c]) for c in probe):
        header = [h.strip() for h in first]
        rows = rows[1:]

    def resolve(sel: str, idx: Optional[int]) -> int:
        if idx is not None:
            return idx
        if header is None or sel not in header:
            raise ParseError(f"column {sel!r} not found in header")
        return header.index(sel)

    cx, cy = resolve(x_col, ix), resolve(y_col, iy)
    if cx == cy:
        raise ParseError("x and y columns must differ")
    xs, ys = [], []
    start = 2 if header is not None else 1
    for k, row in enumerate(rows, start=start):
        if len(row) != width:
            raise ParseError(f"line {k}: expected {width} fields, got {len(row)}")
        cells = (_select(row, cx, k), _select(row, cy, k))
        for cell in cells:
            if not cell.strip():
                raise ParseError(f"line {k}: empty cell in a selected column")
            if not _is_number(cell):
                raise ParseError(f"line {k}: non-numeric value {cell.strip()!r}")
        xs.append(float(cells[0]))
        ys.append(float(cells[1]))
    if len(xs) < 2:
        raise SampleTooSmall(f"need at least 2 rows, got {len(xs)}")
    return PairedSample(xs, ys)


def _seed(value: str) -> int:
    if value == "random":
        return _rng.random_seed()
    try:
        return _rng.check_seed(int(value, 0))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid seed {value!r}: {exc}") from None


def _float_list(value: str) -> list:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}") from None


def _int_list(value: str) -> list:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


def _load(args) -> PairedSample:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8", newline="") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.input}: {exc.strerror}") from None
    delim = "\t" if args.delimiter in ("tab", "\\t") else args.delimiter
    return read_columns(text, args.x, args.y, delim)


def cmd_compute(args) -> dict:
    sample = _load(args)
    res = xi(sample, seed=args.seed)
    out = {
        "schema": SCHEMA,
        "xi": res.value,
        "n": res.n,
        "x_had_ties": res.x_had_ties,
        "y_had_ties": res.y_had_ties,
        "seed": args.seed,
        "formula": res.formula,
    }
    if args.symmetrize:
        out["symmetrized"] = xi_symmetrized(sample, seed=args.seed)
    if args.tie_average:
        mean, sd = xi_tie_averaged(sample, n_draws=args.tie_average, seed=args.seed)
        out["tie_average"] = {"mean": mean, "sd": sd, "draws": args.tie_average}
    return out


def cmd_test(args) -> dict:
    sample = _load(args)
    if args.method == "permutation":
        stat = "xi_symmetrized" if args.symmetrize else "xi"
        res = test_permutation(sample, statistic=stat, n_permutations=args.n_perms, seed=args.seed)
    else:
        if args.symmetrize:
            raise ParseError("the symmetrized statistic has no asymptotic test; use --method permutation")
        res = test_asymptotic(sample, y_continuous=args.y_continuous, force=args.force_continuous, seed=args.seed)
    out = {"schema": SCHEMA}
    out.update(res.to_dict())
    out["seed"] = args.seed
    return out


def cmd_simulate(args) -> dict:
    from . import sims

    if args.study == "null":
        doc = sims.null_distribution_study(args.y_kind, args.n, args.reps, args.seed, threads=args.threads)
    elif args.study == "bernoulli":
        doc = sims.bernoulli_dependence_study(args.p, args.pp, args.n, args.reps, args.seed, threads=args.threads)
    else:
        doc = sims.power_curve(
            args.scenario,
            args.lambdas,
            n=args.n,
            reps=args.reps,
            alpha=args.alpha,
            test=args.test,
            seed=args.seed,
            n_permutations=args.n_perms,
            threads=args.threads,
        ).to_dict()
    if args.csv:
        _write_csv(args.csv, doc)
    return {"schema": SCHEMA, **doc}


def _write_csv(path: str, doc: dict) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        if doc["study"] == "power":
            w.writerow(["lambda", "power", "std_error"])
            w.writerows(zip(doc["lambdas"], doc["power"], doc["std_error"]))
        elif doc["study"] == "null":
            h = doc["histogram"]
            w.writerow(["left", "right", "count"])
            w.writerows(zip(h["edges"][:-1], h["edges"][1:], h["counts"]))
        else:
            w.writerow(["mean", "sd"])
            w.writerow([doc["mean"], doc["sd"]])


def cmd_bench(args) -> dict:
    from .sims import runtime_benchmark

    return {"schema": SCHEMA, **runtime_benchmark(args.n_grid, args.reps, args.seed)}


def cmd_verify(args) -> dict:
    from .verify import run_sweeps

    report = run_sweeps(args.sweep_size, seed=args.seed)
    doc = {"schema": SCHEMA, **report}
    if not report["passed"]:
        raise CliFailure(EXIT_VERIFY, doc)
    return doc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xicor", description="xi rank correlation: compute, test, simulate")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=_rng.DEFAULT_SEED,
                        help=f"64-bit seed or 'random' (default {_rng.DEFAULT_SEED})")
    common.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    common.add_argument("--compact", action="store_true", help="single-line JSON")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads, 0 for all cores (default $XICOR_THREADS or 1)")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("input", nargs="?", default="-", help="CSV/TSV path or '-' for stdin")
    data.add_argument("--x", default="0", help="x column: header name or 0-based index")
    data.add_argument("--y", default="1", help="y column: header name or 0-based index")
    data.add_argument("--delimiter", default=",", help="field delimiter; 'tab' for TSV")
    data.add_argument("--symmetrize", action="store_true", help="use max(xi(X,Y), xi(Y,X))")

    p = sub.add_parser("compute", parents=[common, data], help="compute xi_n")
    p.add_argument("--tie-average", type=int, default=0, metavar="DRAWS",
                   help="also average xi_n over this many random tie-breaks")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("test", parents=[common, data], help="test independence")
    p.add_argument("--method", choices=["asymptotic", "permutation"], default="asymptotic")
    cont = p.add_mutually_exclusive_group()
    cont.add_argument("--y-continuous", dest="y_continuous", action="store_true", default=None,
                      help="use the 2/5 null variance")
    cont.add_argument("--y-discrete", dest="y_continuous", action="store_false",
                      help="estimate the null variance from y")
    p.add_argument("--force-continuous", action="store_true",
                   help="allow --y-continuous even when y has duplicates")
    p.add_argument("--n-perms", type=int, default=199)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", parents=[common], help="run a simulation study")
    p.add_argument("--study", choices=["null", "bernoulli", "power"], required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--y", dest="y_kind", choices=["uniform", "binomial_3_half"], default="uniform")
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--pp", type=float, default=0.5, help="p' of the Bernoulli product model")
    p.add_argument("--scenario", choices=list(NOISY_SCENARIOS), default="sinusoid")
    p.add_argument("--lambda", dest="lambdas", type=_float_list, default=[0.0])
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--test", choices=list(POWER_TESTS), default="asymptotic")
    p.add_argument("--n-perms", type=int, default=199)
    p.add_argument("--csv", default=None, help="also write a CSV table here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", parents=[common], help="runtime of xi plus asymptotic test")
    p.add_argument("--n-grid", type=_int_list, default=[1_000, 10_000, 100_000])
    p.add_argument("--reps", type=int, default=21)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", parents=[common], help="cross-check fast paths against the oracles")
    p.add_argument("--sweep-size", type=int, default=1000)
    p.set_defaults(func=cmd_verify)
    return parser


_STUDY_DEFAULTS = {"null": (1000, 10_000), "bernoulli": (1000, 10_000), "power": (100, 500)}


def _emit(doc: dict, args, stream=None) -> None:
    text = json.dumps(doc, indent=None if args.compact else 2, allow_nan=False) + "\n"
    if stream is not None:
        stream.write(text)
    elif args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _error(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "simulate":
        n, reps = _STUDY_DEFAULTS[args.study]
        args.n = args.n if args.n is not None else n
        args.reps = args.reps if args.reps is not None else reps
    try:
        doc = args.func(args)
    except CliFailure as exc:
        _emit(exc.payload, args)
        _error("verification_failed", "fast path disagrees with the oracle; see counterexample")
        return exc.exit_code
    except XiError as exc:
        if isinstance(exc, ConstantY):
            status = EXIT_CONSTANT
        elif isinstance(exc, SampleTooSmall):
            status = EXIT_SMALL
        elif isinstance(exc, VarianceDegenerate):
            status = EXIT_DEGENERATE
        else:
            status = EXIT_PARSE
        _error(exc.code, str(exc))
        return status
    except ValueError as exc:
        _error("invalid_argument", str(exc))
        return EXIT_PARSE
    _emit(doc, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
