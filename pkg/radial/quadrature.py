"""Gauss-Legendre panel quadrature on the half-line.

Integrals are split into panels at kernel zeros and function breakpoints,
each panel integrated with a fixed Gauss-Legendre rule, and the panel sums
combined with math.fsum in panel order so results never depend on how the
work was batched. Behaviour beyond the numeric cutoff T is described by a
TailModel and integrated in closed form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Protocol, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline

from .errors import InvalidArgumentError
from .specfun import ci, si


@dataclass(frozen=True)
class QuadratureSettings:
    panel_order: int = 16
    max_panel_width: float = 1.0
    # None: cut where the envelope drops below envelope_cutoff, capped at max(200, 40/rate)
    truncation: float | None = None
    envelope_cutoff: float = 1e-12
    oscillatory_truncation: float = 2000.0
    tolerance: float = 1e-8


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    tail_bound: float
    truncation: float
    panel_count: int


class TailKind(str, Enum):
    ZERO = "zero"
    SIN = "sin"
    COS = "cos"
    POWER = "power"


@dataclass(frozen=True)
class TailModel:
    """Shape of a function on [T, inf): zero, c*sin(wt), c*cos(wt) or c*t**(-p)."""

    kind: TailKind = TailKind.ZERO
    coefficient: float = 0.0
    frequency: float = 0.0
    power: float = 0.0

    def moment(self, q: float, T: float) -> float:
        """Integral over [T, inf) of tail(t) * t**(-q)."""
        if self.kind is TailKind.ZERO or self.coefficient == 0.0:
            return 0.0
        if self.kind is TailKind.POWER:
            return self.coefficient * power_tail(self.power + q, T)
        return self.coefficient * oscillatory_tail(self.kind.value, self.frequency, T, q)

    def kernel_moment(self, kind: str, omega: float, T: float) -> float:
        """Integral over [T, inf) of tail(t) * sin/cos(omega t); POWER tails only."""
        if self.kind is TailKind.ZERO or self.coefficient == 0.0:
            return 0.0
        if self.kind is not TailKind.POWER:
            raise InvalidArgumentError("oscillatory tails have no Fourier moment")
        return self.coefficient * oscillatory_tail(kind, omega, T, self.power)


class RadialFunction(Protocol):
    """Anything the quadrature-based operators can integrate."""

    label: str

    def __call__(self, t) -> np.ndarray: ...

    def slope(self, t) -> np.ndarray: ...

    @property
    def breakpoints(self) -> tuple[float, ...]: ...

    @property
    def frequency(self) -> float: ...

    def cutoff(self, settings: QuadratureSettings) -> float: ...

    def tail(self) -> TailModel: ...

    def tail_bound(self, T: float) -> float: ...


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_edges(
    stop: float,
    *,
    start: float = 0.0,
    breakpoints: Sequence[float] = (),
    spacing: float = 0.0,
    max_width: float = 1.0,
) -> np.ndarray:
    """Panel boundaries on [start, stop]: breakpoints, multiples of spacing, then width-capped."""
    if not stop > start:
        return np.array([start, start])
    marks = [start, stop]
    marks.extend(b for b in breakpoints if start < b < stop)
    if spacing > 0.0:
        first = math.floor(start / spacing) + 1
        marks.extend(spacing * np.arange(first, math.ceil(stop / spacing)))
    marks = np.unique(np.asarray(marks, dtype=float))
    marks = marks[(marks >= start) & (marks <= stop)]

    gaps = np.diff(marks)
    pieces = np.maximum(1, np.ceil(gaps / max_width - 1e-12)).astype(int)
    if np.all(pieces == 1):
        return marks
    edges = [marks[0]]
    for left, gap, count in zip(marks[:-1], gaps, pieces):
        edges.extend(left + gap * np.arange(1, count + 1) / count)
    return np.asarray(edges)


def graded_marks(center: float, width: float, levels: int = 40) -> list[float]:
    """Breakpoints accumulating geometrically at center from both sides."""
    scales = width * 0.5 ** np.arange(levels)
    return list(center - scales) + [center] + list(center + scales)


def panel_rule(edges: np.ndarray, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of the composite rule on the given panels."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def integrate(func: Callable[[np.ndarray], np.ndarray], edges: np.ndarray, order: int = 16) -> float:
    value, _ = integrate_with_magnitude(func, edges, order)
    return value


def integrate_with_magnitude(
    func: Callable[[np.ndarray], np.ndarray], edges: np.ndarray, order: int = 16
) -> tuple[float, float]:
    """Panel Gauss-Legendre sum and the sum of |panel| (a rounding scale)."""
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2:
        return 0.0, 0.0
    x, w = gauss_legendre(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    keep = half > 0
    mid, half = mid[keep], half[keep]
    if mid.size == 0:
        return 0.0, 0.0
    t = mid[:, None] + half[:, None] * x[None, :]
    values = np.asarray(func(t), dtype=float)
    panels = (values * w[None, :]).sum(axis=1) * half
    return math.fsum(panels), math.fsum(np.abs(panels))


def power_tail(p: float, T: float) -> float:
    """Integral of t**(-p) over [T, inf)."""
    if p <= 1.0:
        raise InvalidArgumentError(f"power tail t^-{p} is not integrable at infinity")
    return T ** (1.0 - p) / (p - 1.0)


def oscillatory_tail(kind: str, omega: float, T: float, q: float) -> float:
    """Integral of sin(omega t) t**(-q) (kind 'sin') or cos(...) over [T, inf)."""
    if omega == 0.0:
        return 0.0 if kind == "sin" else power_tail(q, T)
    if omega < 0.0:
        sign = -1.0 if kind == "sin" else 1.0
        return sign * oscillatory_tail(kind, -omega, T, q)
    x = omega * T
    if x >= 25.0:
        total = 0j
        term = 1 + 0j
        for j in range(400):
            total += term
            nxt = term * (-1j) * (q + j) / x
            if abs(nxt) < 1e-17 or abs(nxt) > abs(term):
                break
            term = nxt
        value = (1j / omega) * cmath.exp(1j * x) * T ** (-q) * total
        return value.imag if kind == "sin" else value.real

    if q < 1 or int(q) != q:
        raise InvalidArgumentError(f"closed-form oscillatory tail needs integer q >= 1, got {q}")
    s_val = math.pi / 2 - si(x)
    c_val = -ci(x)
    s, c = math.sin(x), math.cos(x)
    for p in range(2, int(q) + 1):
        scale = 1.0 / ((p - 1) * T ** (p - 1))
        s_val, c_val = s * scale + omega / (p - 1) * c_val, c * scale - omega / (p - 1) * s_val
    return s_val if kind == "sin" else c_val


def tail_series(
    tail: TailModel,
    T: float,
    coefficient: Callable[[int], float],
    power: Callable[[int], float],
    max_terms: int = 400,
) -> float:
    """Sum of coefficient(n) * tail.moment(power(n), T) over n, for kernels expanded in 1/t."""
    if tail.kind is TailKind.ZERO or tail.coefficient == 0.0:
        return 0.0
    terms = []
    first = None
    for n in range(max_terms):
        c, q = coefficient(n), power(n)
        size = abs(c) * T ** (1.0 - q)
        if first is None:
            first = size
        elif size < 1e-17 * first:
            break
        terms.append(c * tail.moment(q, T))
    return math.fsum(terms)


class TabulatedFunction:
    """Cubic-spline interpolant of sampled values with a c*t**(-p) tail beyond the last node."""

    def __init__(self, nodes: np.ndarray, values: np.ndarray, tail_power: float, label: str = "tabulated"):
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 4:
            raise InvalidArgumentError("tabulation needs at least four matching nodes and values")
        self.label = label
        self.nodes = nodes
        self.values = values
        self.end = float(nodes[-1])
        self.tail_power = float(tail_power)
        self.tail_coefficient = float(values[-1]) * self.end ** self.tail_power
        self._spline = CubicSpline(nodes, values)
        self._slope = self._spline.derivative()

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        far = t > self.end
        tt = np.where(far, t, self.end)
        inside = self._spline(np.minimum(t, self.end))
        return np.where(far, self.tail_coefficient * tt ** (-self.tail_power), inside)

    def slope(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        far = t > self.end
        tt = np.where(far, t, self.end)
        inside = self._slope(np.minimum(t, self.end))
        return np.where(far, -self.tail_power * self.tail_coefficient * tt ** (-self.tail_power - 1.0), inside)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        # every spline knot, so each panel sees a single cubic piece
        return tuple(float(x) for x in self.nodes[:-1])

    @property
    def frequency(self) -> float:
        return 0.0

    def cutoff(self, settings: QuadratureSettings) -> float:
        return self.end

    def tail(self) -> TailModel:
        return TailModel(TailKind.POWER, self.tail_coefficient, 0.0, self.tail_power)

    def tail_bound(self, T: float) -> float:
        return 0.0


def image_nodes(end: float = 60.0, step: float = 0.05, smallest: float = 1e-6, graded: int = 80) -> np.ndarray:
    """Geometric nodes from smallest up to 0.5, then uniform spacing up to end."""
    near = np.geomspace(smallest, 0.5, graded, endpoint=False)
    far = np.arange(0.5, end + 0.5 * step, step)
    return np.concatenate([near, far])


def tabulate(
    func: Callable[[float], float], nodes: np.ndarray, tail_power: float, label: str = "tabulated"
) -> TabulatedFunction:
    values = np.array([func(float(x)) for x in nodes], dtype=float)
    return TabulatedFunction(nodes, values, tail_power, label)
