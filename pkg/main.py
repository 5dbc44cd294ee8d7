#!/usr/bin/env python3
import asyncio
import io
import sys

from fastmcp import FastMCP

from cli import run_apply, run_deficiency, run_kernel, run_sample, run_shift
from helpers.strings import truncate_text
from radial.grid import make_grid, read_csv, write_csv
from radial.opmatrix import write_matrix_csv
from verification_tool import SUITES, VerificationTool

version = f"v0.2.0, Python {sys.version.split(' ')[0]}"
MAX_OUTPUT = 1000000

# quiet: stdout belongs to the stdio transport
tool = VerificationTool(quiet=True)

mcp = FastMCP(
    "radial-momentum",
    instructions=tool.read_prompt("fw.radial.mcp_info.md", suites=", ".join([*SUITES, "all"]), version=version),
    version=version,
)


def _csv_text(write) -> str:
    buffer = io.StringIO()
    write(buffer)
    return truncate_text(buffer.getvalue(), MAX_OUTPUT) or tool.read_prompt("fw.radial.no_output.md")


@mcp.tool()
async def verify_suite(suite: str = "all", tol: float | None = None) -> str:
    """Run a verification suite and return its JSON report."""
    try:
        # suites take up to a minute; keep the event loop serving
        report = await asyncio.to_thread(VerificationTool(tolerance=tol, quiet=True).run, suite)
        return report.to_json()
    except Exception as e:
        return f"Error running suite {suite}: {str(e)}"


@mcp.tool()
async def sample_function(fn: str, R: float = 20.0, N: int = 2047) -> str:
    """Sample a builtin function (e.g. sin:1.0, exp:2, step:0,1) as 'r,value' CSV."""
    try:
        func = run_sample(fn, make_grid(R, N))
        return _csv_text(lambda stream: write_csv(func, stream))
    except Exception as e:
        return f"Error sampling {fn}: {str(e)}"


@mcp.tool()
async def apply_operator(op: str, csv: str) -> str:
    """Apply fs, zplus, zinv, pplus or pr2 to 'r,value' CSV text."""
    try:
        result = run_apply(op, read_csv(io.StringIO(csv)))
        return _csv_text(lambda stream: write_csv(result, stream))
    except Exception as e:
        return f"Error applying {op}: {str(e)}"


@mcp.tool()
async def dump_kernel(op: str = "zinv", R: float = 1.0, N: int = 3) -> str:
    """Operator matrix, or the (z+)^-1 log kernel, at node pairs as CSV."""
    try:
        matrix = run_kernel(op, make_grid(R, N))
        return _csv_text(lambda stream: write_matrix_csv(matrix, stream))
    except Exception as e:
        return f"Error building kernel {op}: {str(e)}"


@mcp.tool()
async def run_demo(name: str, a: float = 0.5, fn: str = "step:0,1", R: float = 20.0, N: int = 2047) -> str:
    """Non-Hermiticity witnesses: 'shift' (norm lost under r -> r - a) or 'deficiency'."""
    try:
        if name == "shift":
            return run_shift(fn, a, make_grid(R, N), tool)
        if name == "deficiency":
            return run_deficiency(40.0, (1, -1), tool)
        return f"Error running demo: unknown demo {name!r}, expected shift or deficiency"
    except Exception as e:
        return f"Error running demo {name}: {str(e)}"


def main():
    # Run with stdio transport (default)
    mcp.run()


if __name__ == "__main__":
    main()
