"""Dense operator matrices on a grid and their spectral diagnostics.

Eigenvalues come from a cyclic Jacobi solver with a fixed round-robin pair
ordering: every round rotates N/2 disjoint (p, q) pairs at once, so the
result depends only on the input matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    IncompatibleOperandsError,
    InvalidArgumentError,
    NotSymmetricError,
    UnsupportedRealizationError,
)
from .grid import RadialGrid, SampledFunction
from .radialops import OperatorSpec, Realization, apply_discrete

MAX_EIGEN_DIMENSION = 1024
SYMMETRY_TOLERANCE = 1e-8
JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 50


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    grid: RadialGrid
    entries: np.ndarray
    label: OperatorSpec | None = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.shape != (self.grid.N, self.grid.N):
            raise InvalidArgumentError(f"expected a {self.grid.N}x{self.grid.N} matrix, got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise InvalidArgumentError("matrix entries must be finite")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def name(self) -> str:
        return self.label.label if self.label is not None else "matrix"

    @property
    def flat(self) -> np.ndarray:
        """Entries in the flat-measure representation, diag(r) M diag(1/r) for phi operators."""
        if self.label is not None and self.label.phi_representation:
            r = self.grid.nodes
            return r[:, None] * self.entries / r[None, :]
        return self.entries


def build_matrix(spec: OperatorSpec, grid: RadialGrid) -> OperatorMatrix:
    """Column j is the operator applied to the basis vector e_j."""
    if spec.realization in (Realization.QUADRATURE, Realization.KERNEL):
        raise UnsupportedRealizationError(f"{spec.label} has no matrix on a grid")
    return OperatorMatrix(grid, apply_discrete(spec.kind, grid, np.eye(grid.N)), spec)


def symmetry_defect(M: OperatorMatrix) -> float:
    flat = M.flat
    return float(np.max(np.abs(flat - flat.T))) if flat.size else 0.0


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Circle-method schedule: n - 1 rounds of n/2 disjoint pairs covering every pair once."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        p = np.array([players[i] for i in range(n // 2)])
        q = np.array([players[n - 1 - i] for i in range(n // 2)])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def _off_diagonal_norm(A: np.ndarray) -> float:
    return math.sqrt(max(float(np.sum(A * A) - np.sum(np.diag(A) ** 2)), 0.0))


def jacobi_eigenvalues(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, ascending."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if n == 1:
        return A.diagonal().copy()
    padded = n % 2 == 1
    if padded:
        # a decoupled extra index keeps the schedule at N/2 pairs per round
        A = np.pad(A, ((0, 1), (0, 1)))
    frobenius = math.sqrt(float(np.sum(A * A)))
    schedule = _round_robin(A.shape[0])

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(A) <= JACOBI_TOLERANCE * frobenius:
            break
        for p, q in schedule:
            apq = A[p, q]
            active = np.abs(apq) > 0.0
            if not active.any():
                continue
            app, aqq = A[p, p], A[q, q]
            safe = np.where(active, apq, 1.0)
            theta = (aqq - app) / (2.0 * safe)
            sign = np.where(theta >= 0.0, 1.0, -1.0)
            t = np.where(active, sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0)), 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            col_p, col_q = A[:, p].copy(), A[:, q].copy()
            A[:, p] = c * col_p - s * col_q
            A[:, q] = s * col_p + c * col_q
            row_p, row_q = A[p, :].copy(), A[q, :].copy()
            A[p, :] = c[:, None] * row_p - s[:, None] * row_q
            A[q, :] = s[:, None] * row_p + c[:, None] * row_q
            A[p, q] = np.where(active, 0.0, A[p, q])
            A[q, p] = A[p, q]

    values = A.diagonal()
    if padded:
        values = values[:-1]
    return np.sort(values)


def _checked_flat(M: OperatorMatrix) -> np.ndarray:
    if M.grid.N > MAX_EIGEN_DIMENSION:
        raise InvalidArgumentError(f"dense eigen-solves are limited to N <= {MAX_EIGEN_DIMENSION}")
    flat = M.flat
    scale = float(np.max(np.abs(flat))) if flat.size else 0.0
    defect = symmetry_defect(M)
    if defect > SYMMETRY_TOLERANCE * scale:
        raise NotSymmetricError(f"{M.name} is not symmetric (defect {defect:.3e}, scale {scale:.3e})")
    return 0.5 * (flat + flat.T)


def eigenvalues(M: OperatorMatrix) -> np.ndarray:
    return jacobi_eigenvalues(_checked_flat(M))


def min_eigenvalue(M: OperatorMatrix) -> float:
    return float(eigenvalues(M)[0])


def quadratic_form(M: OperatorMatrix, chi: SampledFunction) -> float:
    """chi^T M chi * spacing."""
    if not M.grid.matches(chi.grid):
        raise IncompatibleOperandsError("matrix and function live on different grids")
    return float(M.grid.spacing * chi.values @ (M.entries @ chi.values))


def commutator_norm(M: OperatorMatrix) -> float:
    """Frobenius norm of [M, diag(r)]; reported, never asserted."""
    r = M.grid.nodes
    return float(np.linalg.norm(M.entries * (r[None, :] - r[:, None])))


def write_matrix_csv(M: OperatorMatrix, path: str | Path) -> None:
    header = f"# N={M.grid.N} R={M.grid.R:.17g} op={M.name}"
    np.savetxt(path, M.entries, fmt="%.17g", delimiter=",", header=header, comments="")
