"""Command-line surface: sample, apply, kernel, verify and demo.

Machine output (CSV, JSON, report tables) goes to stdout or --out; styled
progress and errors go to stderr through PrintStyle.
"""

import argparse
import math
import sys
from typing import TextIO

from helpers.print_style import PrintStyle
from helpers.strings import format_number
from radial.errors import InvalidArgumentError, MalformedInputError, RadialError
from radial.functions import parse_descriptor
from radial.grid import RadialGrid, SampledFunction, make_grid, read_csv, sample, write_csv
from radial.opmatrix import OperatorMatrix, build_matrix, write_matrix_csv
from radial.radialops import (
    OperatorKind,
    OperatorSpec,
    Realization,
    deficiency_check,
    pplus_apply,
    pr2_apply,
    shift_demo,
    zinv_apply,
    zinv_kernel_matrix,
    zplus_discrete,
)
from radial.transforms import dst_apply
from verification_tool import SUITES, VerificationTool

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_MALFORMED = 3

DEFAULT_GRID = "20,2047"

APPLY_OPS = {
    "fs": dst_apply,
    "zplus": zplus_discrete,
    "zinv": zinv_apply,
    "pplus": pplus_apply,
    "pr2": pr2_apply,
}

KERNEL_OPS = ("zinv", "zplus", "pplus", "pr2", "dtilde-fd", "second-diff-fd")


def parse_grid(text: str) -> RadialGrid:
    """'R,N' -> RadialGrid."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise InvalidArgumentError(f"grid must be given as R,N, got {text!r}")
    try:
        R, N = float(parts[0]), int(parts[1])
    except ValueError as e:
        raise InvalidArgumentError(f"grid {text!r}: {e}") from e
    return make_grid(R, N)


def _open_out(path: str | None) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="")


def _emit(write, path: str | None) -> None:
    stream = _open_out(path)
    try:
        write(stream)
    finally:
        if stream is not sys.stdout:
            stream.close()


def run_sample(fn: str, grid: RadialGrid) -> SampledFunction:
    return sample(parse_descriptor(fn), grid)


def run_apply(op: str, func: SampledFunction) -> SampledFunction:
    """CSV samples always load as position space; an fs image is written with the same node column."""
    if op not in APPLY_OPS:
        raise InvalidArgumentError(f"unknown operator {op!r}; expected one of {', '.join(APPLY_OPS)}")
    return APPLY_OPS[op](func)


def run_kernel(op: str, grid: RadialGrid) -> OperatorMatrix:
    if op not in KERNEL_OPS:
        raise InvalidArgumentError(f"unknown kernel {op!r}; expected one of {', '.join(KERNEL_OPS)}")
    if op == "zinv":
        spec = OperatorSpec(OperatorKind.ZPLUS_INV, Realization.KERNEL)
        return OperatorMatrix(grid, zinv_kernel_matrix(grid), spec)
    return build_matrix(OperatorSpec.default_for(op), grid)


def run_shift(fn: str, a: float, grid: RadialGrid, tool: VerificationTool) -> str:
    if not (math.isfinite(a) and a > 0):
        raise InvalidArgumentError(f"shift must be positive, got {a!r}")
    descriptor = parse_descriptor(fn)
    steps = max(1, round(a / grid.spacing))
    snapped = steps * grid.spacing
    if not math.isclose(snapped, a, rel_tol=1e-9):
        PrintStyle.warning(
            tool.read_prompt(
                "fw.radial.shift_snapped.md",
                requested=format_number(a),
                spacing=format_number(grid.spacing),
                a=format_number(snapped),
            )
        )
    report = shift_demo(sample(descriptor, grid), snapped, descriptor)
    return tool.shift_text(report, descriptor.label)


def run_deficiency(R_check: float, signs: tuple[int, ...], tool: VerificationTool) -> str:
    return "\n".join(tool.deficiency_text(deficiency_check(sign, R_check)) for sign in signs)


# --- subcommand handlers ---

def cmd_sample(args) -> int:
    func = run_sample(args.fn, parse_grid(args.grid))
    _emit(lambda stream: write_csv(func, stream), args.out)
    return EXIT_OK


def cmd_apply(args) -> int:
    if args.op not in APPLY_OPS:
        # an unknown operator is a usage error even when the input is also bad
        raise InvalidArgumentError(f"unknown operator {args.op!r}; expected one of {', '.join(APPLY_OPS)}")
    result = run_apply(args.op, read_csv(sys.stdin if args.input == "-" else args.input))
    _emit(lambda stream: write_csv(result, stream), args.out)
    return EXIT_OK


def cmd_kernel(args) -> int:
    matrix = run_kernel(args.op, parse_grid(args.grid))
    _emit(lambda stream: write_matrix_csv(matrix, stream), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    tool = VerificationTool(tolerance=args.tol)
    report = tool.run(args.suite)
    text = report.to_json() if args.json else report.to_table()
    _emit(lambda stream: stream.write(text + "\n"), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_demo(args) -> int:
    tool = VerificationTool()
    if args.name == "shift":
        text = run_shift(args.fn, args.a, parse_grid(args.grid), tool)
    else:
        signs = (1, -1) if args.sign == 0 else (args.sign,)
        text = run_deficiency(args.R, signs, tool)
    _emit(lambda stream: stream.write(text + "\n"), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radial-momentum", description="Positive radial momentum operators on the half-line.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a builtin function on a grid")
    p.add_argument("--fn", required=True, help="descriptor, e.g. sin:1.0, exp:2, step:0,1, tgauss")
    p.add_argument("--grid", default=DEFAULT_GRID, help="R,N (default %(default)s)")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("apply", help="apply an operator to CSV samples")
    p.add_argument("--op", required=True, help=f"one of {', '.join(APPLY_OPS)}")
    p.add_argument("--in", dest="input", required=True, help="input CSV, '-' for stdin")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("kernel", help="dump an operator matrix or the (z+)^-1 log kernel")
    p.add_argument("--op", default="zinv", help=f"one of {', '.join(KERNEL_OPS)}")
    p.add_argument("--grid", default=DEFAULT_GRID, help="R,N (default %(default)s)")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(handler=cmd_kernel)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all", choices=[*SUITES, "all"])
    p.add_argument("--tol", type=float, default=None, help="replace every check's tolerance")
    p.add_argument("--json", action="store_true", help="print one JSON report instead of a table")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("demo", help="non-Hermiticity witnesses")
    p.add_argument("name", choices=["shift", "deficiency"])
    p.add_argument("--a", type=float, default=0.5, help="shift toward the origin (snapped to the grid)")
    p.add_argument("--fn", default="step:0,1", help="function to shift")
    p.add_argument("--grid", default=DEFAULT_GRID, help="R,N (default %(default)s)")
    p.add_argument("--sign", type=int, choices=[-1, 0, 1], default=0, help="deficiency sign, 0 for both")
    p.add_argument("--R", type=float, default=40.0, help="deficiency check radius")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(handler=cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except MalformedInputError as e:
        PrintStyle.error(str(e))
        return EXIT_MALFORMED
    except RadialError as e:
        PrintStyle.error(str(e))
        return EXIT_USAGE
    except OSError as e:
        PrintStyle.error(f"cannot write output: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
