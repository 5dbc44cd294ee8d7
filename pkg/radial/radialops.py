"""Positive radial momentum operators and the non-Hermitian contrast.

Discrete-spectral realizations are built from the DST-I model S:

    z+      = S diag(k) S             (z+)^-1 = S diag(1/k) S
    p+ phi  = (1/r) z+ (r phi)        p_r^2 phi = (1/r) S diag(k^2) S (r phi)

Quadrature realizations act on FunctionDescriptors at single radii and are
used to check the continuum identities. The finite-difference operators exist
only to contrast with the spectral ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import xlogy

from .errors import IncompatibleOperandsError, InvalidArgumentError, SingularPointError
from .fracint import rki_apply
from .functions import Decay, Family, FunctionDescriptor, exponential
from .grid import RadialGrid, SampledFunction, Space
from .hilbert import he_apply, he_of_ho
from .quadrature import (
    DEFAULT_SETTINGS,
    QuadratureSettings,
    graded_marks,
    integrate,
    panel_edges,
    tail_series,
)
from .transforms import DstMatrixModel, fs_quad, sine_image


class OperatorKind(str, Enum):
    ZPLUS = "zplus"
    ZPLUS_INV = "zinv"
    PPLUS = "pplus"
    PR2 = "pr2"
    DTILDE_FD = "dtilde-fd"  # (1/r) d/dr r by centred differences; the -i is left symbolic
    SECOND_DIFF_FD = "second-diff-fd"  # -d^2/dr^2 by the 3-point stencil


class Realization(str, Enum):
    DISCRETE_SPECTRAL = "discrete-spectral"
    QUADRATURE = "quadrature"
    KERNEL = "kernel"
    FINITE_DIFFERENCE = "finite-difference"


VALID_REALIZATIONS: dict[OperatorKind, frozenset[Realization]] = {
    OperatorKind.ZPLUS: frozenset({Realization.DISCRETE_SPECTRAL, Realization.QUADRATURE}),
    OperatorKind.ZPLUS_INV: frozenset({Realization.DISCRETE_SPECTRAL, Realization.QUADRATURE, Realization.KERNEL}),
    OperatorKind.PPLUS: frozenset({Realization.DISCRETE_SPECTRAL, Realization.QUADRATURE}),
    OperatorKind.PR2: frozenset({Realization.DISCRETE_SPECTRAL, Realization.QUADRATURE}),
    OperatorKind.DTILDE_FD: frozenset({Realization.FINITE_DIFFERENCE}),
    OperatorKind.SECOND_DIFF_FD: frozenset({Realization.FINITE_DIFFERENCE}),
}

# operators acting on phi = chi / r rather than on chi
PHI_REPRESENTATION = frozenset({OperatorKind.PPLUS, OperatorKind.PR2, OperatorKind.DTILDE_FD})


@dataclass(frozen=True)
class OperatorSpec:
    kind: OperatorKind
    realization: Realization = Realization.DISCRETE_SPECTRAL

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        object.__setattr__(self, "realization", Realization(self.realization))
        if self.realization not in VALID_REALIZATIONS[self.kind]:
            raise InvalidArgumentError(f"{self.kind.value} has no {self.realization.value} realization")

    @property
    def label(self) -> str:
        return f"{self.kind.value}/{self.realization.value}"

    @property
    def phi_representation(self) -> bool:
        return self.kind in PHI_REPRESENTATION

    @classmethod
    def default_for(cls, kind: OperatorKind | str) -> "OperatorSpec":
        kind = OperatorKind(kind)
        if Realization.DISCRETE_SPECTRAL in VALID_REALIZATIONS[kind]:
            return cls(kind, Realization.DISCRETE_SPECTRAL)
        return cls(kind, Realization.FINITE_DIFFERENCE)


# --- discrete operators on raw arrays (axis 0 is the grid) ---

def _column(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    return grid.nodes.reshape((-1,) + (1,) * (values.ndim - 1))


def _second_difference(values: np.ndarray, spacing: float) -> np.ndarray:
    padded = np.pad(values, [(1, 1)] + [(0, 0)] * (values.ndim - 1))
    return (padded[:-2] - 2.0 * padded[1:-1] + padded[2:]) / (spacing * spacing)


def _centred_difference(values: np.ndarray, spacing: float) -> np.ndarray:
    padded = np.pad(values, [(1, 1)] + [(0, 0)] * (values.ndim - 1))
    return (padded[2:] - padded[:-2]) / (2.0 * spacing)


def apply_discrete(kind: OperatorKind, grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """Apply a discrete operator along axis 0; a matrix argument is mapped column by column."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] != grid.N:
        raise IncompatibleOperandsError(f"expected {grid.N} rows, got {values.shape[0]}")
    model = DstMatrixModel(grid)
    k = grid.momenta
    r = _column(grid, values)
    if kind is OperatorKind.ZPLUS:
        return model.spectral(values, k)
    if kind is OperatorKind.ZPLUS_INV:
        return model.spectral(values, 1.0 / k)
    if kind is OperatorKind.PPLUS:
        return model.spectral(r * values, k) / r
    if kind is OperatorKind.PR2:
        return model.spectral(r * values, k * k) / r
    if kind is OperatorKind.SECOND_DIFF_FD:
        return -_second_difference(values, grid.spacing)
    if kind is OperatorKind.DTILDE_FD:
        return _centred_difference(r * values, grid.spacing) / r
    raise InvalidArgumentError(f"unknown operator kind {kind!r}")


def _require_position(func: SampledFunction) -> None:
    if func.space is not Space.POSITION:
        raise IncompatibleOperandsError("operator expects position-space samples")


def _apply(kind: OperatorKind, func: SampledFunction) -> SampledFunction:
    _require_position(func)
    return func.with_values(apply_discrete(kind, func.grid, func.values))


def zplus_discrete(chi: SampledFunction) -> SampledFunction:
    return _apply(OperatorKind.ZPLUS, chi)


def zinv_apply(chi: SampledFunction) -> SampledFunction:
    return _apply(OperatorKind.ZPLUS_INV, chi)


def pplus_apply(phi: SampledFunction) -> SampledFunction:
    return _apply(OperatorKind.PPLUS, phi)


def pr2_apply(phi: SampledFunction) -> SampledFunction:
    return _apply(OperatorKind.PR2, phi)


def spectral_second_derivative(chi: SampledFunction) -> SampledFunction:
    """chi'' in the spectral model, -S diag(k^2) S chi."""
    _require_position(chi)
    model = DstMatrixModel(chi.grid)
    return chi.with_values(-model.spectral(chi.values, chi.grid.momenta**2))


def fd_second_derivative(chi: SampledFunction) -> SampledFunction:
    """chi'' by the 3-point stencil with chi = 0 at both ends."""
    _require_position(chi)
    return chi.with_values(_second_difference(chi.values, chi.grid.spacing))


def dtilde_fd(phi: SampledFunction) -> SampledFunction:
    return _apply(OperatorKind.DTILDE_FD, phi)


# --- quadrature realizations ---

def zplus_quad(f: FunctionDescriptor, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """z+ f(r) = H_e f'(r)."""
    return he_apply(f.derivative, r, settings)


def zplus_spectral_quad(f: FunctionDescriptor, rs, settings: QuadratureSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """F_s(k F_s f) at each r. Equals zplus_quad only when f(0) = 0."""
    image = sine_image(f, settings, weight="k")
    return np.array([fs_quad(image, float(r), settings) for r in np.atleast_1d(rs)])


def pplus_quad(phi: FunctionDescriptor, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """p+ phi(r) = (1/r) z+ (t phi)(r)."""
    return zplus_quad(phi.times_t, r, settings) / r


def pr2_quad(phi: FunctionDescriptor, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """p_r^2 phi(r) = (1/r) (z+)^2 (t phi)(r), using (z+)^2 = H_e d H_e d = -H_e H_o d^2."""
    chi = phi.times_t
    return -float(he_of_ho(chi.derivative.derivative, r, settings)[0]) / r


def zinv_kernel(r: float, u: float) -> float:
    """(1/2) log|(r+u)/(r-u)|, the kernel of (z+)^-1 up to the factor 2/pi."""
    r, u = float(r), float(u)
    if r < 0 or u < 0:
        raise InvalidArgumentError(f"kernel arguments must be non-negative, got ({r}, {u})")
    if r == u:
        raise SingularPointError(f"log kernel is singular at r = u = {r}")
    return 0.5 * math.log(abs((r + u) / (r - u)))


def _kernel_primitive(r: float, u):
    """Antiderivative in u of (1/2) log|(r+u)/(r-u)|, zero-safe at u = r."""
    u = np.asarray(u, dtype=float)
    return 0.5 * (xlogy(r + u, r + u) + xlogy(r - u, np.abs(r - u))) - r


def zinv_quad(f: FunctionDescriptor, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """(2/pi) int_0^inf zinv_kernel(r, u) f(u) du.

    f(r) is subtracted so the integrand vanishes at the log singularity; the
    subtracted constant is integrated in closed form over [0, T], and beyond T
    the kernel series sum r^(2n+1) / ((2n+1) u^(2n+1)) meets the tail model.
    """
    r = float(r)
    if not r > 0:
        raise InvalidArgumentError(f"(z+)^-1 is evaluated at r > 0, got {r!r}")
    if f.decay is Decay.NONDECAYING and f.family not in (Family.SIN, Family.COS):
        f.require_decay("(z+)^-1")
    T = max(f.cutoff(settings), 2.0 * r)
    fr = float(f(r))

    def regular(u):
        return 0.5 * (np.log(r + u) - np.log(np.abs(r - u))) * (f(u) - fr)

    marks = [*f.breakpoints, *graded_marks(r, 0.5 * min(r, 1.0))]
    edges = panel_edges(
        T,
        breakpoints=marks,
        spacing=math.pi / f.frequency if f.frequency > 0 else 0.0,
        max_width=settings.max_panel_width,
    )
    body = integrate(regular, edges, settings.panel_order)
    body += fr * float(_kernel_primitive(r, T) - _kernel_primitive(r, 0.0))
    body += tail_series(f.tail(), T, lambda n: r ** (2 * n + 1) / (2 * n + 1), lambda n: 2 * n + 1)
    return (2.0 / math.pi) * body


def zinv_spectral_quad(f: FunctionDescriptor, rs, settings: QuadratureSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """F_s((1/k) F_s f) at each r."""
    image = sine_image(f, settings, weight="1/k")
    return np.array([fs_quad(image, float(r), settings) for r in np.atleast_1d(rs)])


def zinv_fractional(f: FunctionDescriptor, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """(z+)^-1 f(r) through the factorization (1/2) r K I f."""
    return 0.5 * rki_apply(f, r, settings)


def zinv_kernel_matrix(grid: RadialGrid) -> np.ndarray:
    """zinv_kernel at node pairs; diagonal cells hold the kernel's mean over [r - dr/2, r + dr/2]."""
    r = grid.nodes
    u = r[None, :]
    rr = r[:, None]
    with np.errstate(divide="ignore"):
        entries = 0.5 * np.log(np.abs((rr + u) / (rr - u)))
    half = 0.5 * grid.spacing
    diagonal = (_kernel_primitive(r, r + half) - _kernel_primitive(r, r - half)) / grid.spacing
    np.fill_diagonal(entries, diagonal)
    return entries


# --- non-Hermiticity witnesses ---

@dataclass(frozen=True)
class ShiftReport:
    """Squared half-line norms before and after moving the samples a toward the origin."""

    a: float
    shift_nodes: int
    norm_before: float
    norm_after: float
    analytic_loss: float

    @property
    def measured_loss(self) -> float:
        return self.norm_before - self.norm_after


def shift_demo(chi: SampledFunction, a: float, descriptor: FunctionDescriptor | None = None) -> ShiftReport:
    """Realize r -> r - a by reindexing; mass pushed below r = 0 is discarded."""
    _require_position(chi)
    grid = chi.grid
    steps = a / grid.spacing
    if not a > 0 or abs(steps - round(steps)) > 1e-9 * max(steps, 1.0):
        raise InvalidArgumentError(f"shift {a!r} is not a positive multiple of the spacing {grid.spacing!r}")
    s = int(round(steps))
    shifted = np.zeros(grid.N)
    if s < grid.N:
        shifted[: grid.N - s] = chi.values[s:]
    before = grid.spacing * float(np.dot(chi.values, chi.values))
    after = grid.spacing * float(np.dot(shifted, shifted))
    if descriptor is None:
        dropped = chi.values[:s]
        loss = grid.spacing * float(np.dot(dropped, dropped))
    else:
        edges = panel_edges(a, breakpoints=descriptor.breakpoints, max_width=0.25)
        loss = integrate(lambda t: descriptor(t) ** 2, edges)
    return ShiftReport(float(a), s, before, after, loss)


@dataclass(frozen=True)
class DeficiencyReport:
    sign: int
    candidate: str
    residual: float
    norm_sq: float
    norm_sq_doubled: float
    R_check: float

    @property
    def norm_finite(self) -> bool:
        return abs(self.norm_sq_doubled - self.norm_sq) <= 1e-6 * abs(self.norm_sq_doubled)


def deficiency_norm(f: FunctionDescriptor, R: float) -> float:
    """Squared half-line norm of f on [0, R]."""
    edges = panel_edges(R, breakpoints=f.breakpoints, max_width=0.5)
    return integrate(lambda t: f(t) ** 2, edges)


def deficiency_check(
    sign: int, R_check: float = 40.0, candidate: FunctionDescriptor | None = None
) -> DeficiencyReport:
    """Check that chi solves -i chi' = sign * i chi, i.e. chi' = -sign * chi, and whether it is normalizable.

    The default candidates are exp(-r) for sign +1 and exp(+r) for sign -1.
    """
    if sign not in (1, -1):
        raise InvalidArgumentError(f"sign must be +1 or -1, got {sign!r}")
    if not R_check > 0:
        raise InvalidArgumentError(f"check radius must be positive, got {R_check!r}")
    if candidate is None:
        candidate = exponential(1.0) if sign == 1 else FunctionDescriptor(Family.EXP, (-1.0,), (1.0,), "exp(+t)")
    r = np.linspace(0.0, R_check, 4001)
    values = candidate(r)
    scale = float(np.max(np.abs(values))) or 1.0
    residual = float(np.max(np.abs(candidate.slope(r) + sign * values))) / scale
    return DeficiencyReport(
        sign=sign,
        candidate=candidate.label,
        residual=residual,
        norm_sq=deficiency_norm(candidate, R_check),
        norm_sq_doubled=deficiency_norm(candidate, 2.0 * R_check),
        R_check=float(R_check),
    )
