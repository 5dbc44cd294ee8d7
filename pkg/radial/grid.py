"""Grids on the truncated half-line and functions sampled on them.

The grid keeps only interior nodes r_j = j*R/(N+1), j = 1..N. Values at r = 0
and r = R are zero by construction, which is the discrete form of chi(0) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import TextIO

import numpy as np

from .errors import IncompatibleOperandsError, InvalidArgumentError, MalformedInputError


class Space(str, Enum):
    POSITION = "position"
    MOMENTUM = "momentum"

    def flipped(self) -> "Space":
        return Space.MOMENTUM if self is Space.POSITION else Space.POSITION


@dataclass(frozen=True)
class RadialGrid:
    R: float
    N: int

    @property
    def spacing(self) -> float:
        return self.R / (self.N + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.N + 1, dtype=float)

    @property
    def momenta(self) -> np.ndarray:
        return (math.pi / self.R) * np.arange(1, self.N + 1, dtype=float)

    def matches(self, other: "RadialGrid") -> bool:
        return self.N == other.N and math.isclose(self.R, other.R, rel_tol=1e-12)


def make_grid(R: float, N: int) -> RadialGrid:
    if not (isinstance(R, (int, float)) and math.isfinite(R) and R > 0):
        raise InvalidArgumentError(f"truncation radius must be positive, got {R!r}")
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"node count must be an integer >= 1, got {N!r}")
    return RadialGrid(R=float(R), N=int(N))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: RadialGrid
    values: np.ndarray
    space: Space = Space.POSITION

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.N,):
            raise InvalidArgumentError(
                f"expected {self.grid.N} samples, got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray, space: Space | None = None) -> "SampledFunction":
        return SampledFunction(self.grid, values, self.space if space is None else space)


def sample(func, grid: RadialGrid) -> SampledFunction:
    """Sample a descriptor (or any vectorized callable) on the grid nodes."""
    return SampledFunction(grid, np.asarray(func(grid.nodes), dtype=float))


def _check_pair(a: SampledFunction, b: SampledFunction) -> None:
    if not a.grid.matches(b.grid):
        raise IncompatibleOperandsError(
            f"grid mismatch: (R={a.grid.R}, N={a.grid.N}) vs (R={b.grid.R}, N={b.grid.N})"
        )
    if a.space is not Space.POSITION or b.space is not Space.POSITION:
        raise IncompatibleOperandsError("inner products are defined on position-space samples")


def inner_product_half_line(a: SampledFunction, b: SampledFunction) -> float:
    """Trapezoid value of the integral of a*b over [0, R]; endpoint values are zero."""
    _check_pair(a, b)
    return float(a.grid.spacing * np.dot(a.values, b.values))


def inner_product_spherical(a: SampledFunction, b: SampledFunction) -> float:
    """Radial part of the spherical scalar product, weight r^2 (the 4*pi is dropped)."""
    _check_pair(a, b)
    r = a.grid.nodes
    return float(a.grid.spacing * np.dot(a.values * r, b.values * r))


def chi_from_phi(phi: SampledFunction) -> SampledFunction:
    return phi.with_values(phi.values * phi.grid.nodes)


def phi_from_chi(chi: SampledFunction) -> SampledFunction:
    return chi.with_values(chi.values / chi.grid.nodes)


# CSV interchange: header "r,value", one row per node in increasing r.

def write_csv(func: SampledFunction, path: str | Path | TextIO) -> None:
    table = np.column_stack([func.grid.nodes, func.values])
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header="r,value", comments="")


def _load_table(handle: TextIO, path) -> np.ndarray:
    header = handle.readline().strip()
    if header.replace(" ", "") != "r,value":
        raise MalformedInputError(f"{path}: expected header 'r,value', got {header!r}")
    return np.loadtxt(handle, delimiter=",", ndmin=2)


def read_csv(path: str | Path | TextIO, space: Space = Space.POSITION) -> SampledFunction:
    """Read samples written by write_csv; path may also be an open text stream."""
    try:
        if hasattr(path, "readline"):
            table = _load_table(path, "<stream>")
        else:
            with open(path, "r", encoding="utf-8") as f:
                table = _load_table(f, path)
    except OSError as e:
        raise MalformedInputError(f"{path}: {e}") from e
    except ValueError as e:
        raise MalformedInputError(f"{path}: {e}") from e

    if table.shape[0] < 1 or table.shape[1] != 2:
        raise MalformedInputError(f"{path}: expected two columns and at least one row")
    nodes, values = table[:, 0], table[:, 1]
    N = len(nodes)
    spacing = nodes[0]
    if not np.all(np.isfinite(table)) or spacing <= 0:
        raise MalformedInputError(f"{path}: nodes must be finite and start above r = 0")
    grid = make_grid(spacing * (N + 1), N)
    if not np.allclose(nodes, grid.nodes, rtol=1e-12, atol=0.0):
        raise MalformedInputError(f"{path}: nodes are not a uniform interior grid")
    return SampledFunction(grid, values, space)
