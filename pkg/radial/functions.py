"""Symbolic test functions f(t), t >= 0, with analytic derivatives.

Exponential and Gaussian families are stored as polynomial * envelope, so the
derivative of any descriptor is again a descriptor of the same family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.polynomial import polyval

from .errors import InvalidArgumentError, UnsupportedDecayError
from .quadrature import QuadratureSettings, TailKind, TailModel


class Family(str, Enum):
    SIN = "sin"
    COS = "cos"
    EXP = "exp"  # P(t) * exp(-a t)
    GAUSS = "gauss"  # P(t) * exp(-t^2 / 2)
    STEP = "step"


class Decay(str, Enum):
    EXPONENTIAL = "exponential"
    GAUSSIAN = "gaussian"
    NONDECAYING = "oscillatory-nondecaying"
    COMPACT = "compact"


DECAYING = frozenset({Decay.EXPONENTIAL, Decay.GAUSSIAN, Decay.COMPACT})


@dataclass(frozen=True)
class FunctionDescriptor:
    family: Family
    params: tuple[float, ...]
    # polynomial coefficients (ascending) for EXP/GAUSS, the amplitude otherwise
    coefficients: tuple[float, ...] = (1.0,)
    label: str = field(default="", compare=False)

    def __call__(self, t) -> np.ndarray:
        return self.evaluate(t)

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        c = self.coefficients
        if self.family is Family.SIN:
            return c[0] * np.sin(self.params[0] * t)
        if self.family is Family.COS:
            return c[0] * np.cos(self.params[0] * t)
        if self.family is Family.EXP:
            return polyval(t, c) * np.exp(-self.params[0] * t)
        if self.family is Family.GAUSS:
            return polyval(t, c) * np.exp(-0.5 * t * t)
        a, b = self.params
        return c[0] * np.where((t >= a) & (t < b), 1.0, 0.0)

    @cached_property
    def derivative(self) -> "FunctionDescriptor":
        c = self.coefficients
        if self.family is Family.SIN:
            k = self.params[0]
            return FunctionDescriptor(Family.COS, self.params, (c[0] * k,), f"d/dt[{self.label}]")
        if self.family is Family.COS:
            k = self.params[0]
            return FunctionDescriptor(Family.SIN, self.params, (-c[0] * k,), f"d/dt[{self.label}]")
        if self.family in (Family.EXP, Family.GAUSS):
            poly = Polynomial(c)
            if self.family is Family.EXP:
                result = poly.deriv() - self.params[0] * poly
            else:
                result = poly.deriv() - Polynomial([0.0, 1.0]) * poly
            coefs = tuple(float(x) for x in result.coef) or (0.0,)
            return FunctionDescriptor(self.family, self.params, coefs, f"d/dt[{self.label}]")
        # the jumps of a step carry delta functions, which are dropped
        return zero()

    @cached_property
    def times_t(self) -> "FunctionDescriptor":
        """t f(t); only the polynomial-envelope families are closed under it."""
        if self.family not in (Family.EXP, Family.GAUSS):
            raise InvalidArgumentError(f"t*{self.label} is not a builtin descriptor")
        return FunctionDescriptor(self.family, self.params, (0.0, *self.coefficients), f"t*{self.label}")

    def slope(self, t) -> np.ndarray:
        return self.derivative.evaluate(t)

    @property
    def value_at_zero(self) -> float:
        return float(self.evaluate(0.0))

    @property
    def is_zero(self) -> bool:
        return all(x == 0.0 for x in self.coefficients)

    @property
    def decay(self) -> Decay:
        if self.is_zero:
            return Decay.COMPACT
        if self.family in (Family.SIN, Family.COS):
            return Decay.NONDECAYING
        if self.family is Family.EXP:
            return Decay.EXPONENTIAL if self.params[0] > 0 else Decay.NONDECAYING
        if self.family is Family.GAUSS:
            return Decay.GAUSSIAN
        return Decay.COMPACT if math.isfinite(self.params[1]) else Decay.NONDECAYING

    @property
    def frequency(self) -> float:
        if self.family in (Family.SIN, Family.COS):
            return abs(self.params[0])
        return 0.0

    @property
    def breakpoints(self) -> tuple[float, ...]:
        if self.family is Family.STEP:
            return tuple(x for x in self.params if 0.0 < x < math.inf)
        return ()

    def envelope(self, t) -> np.ndarray:
        """Upper bound of |f| at t, non-increasing for large t on decaying families."""
        t = np.asarray(t, dtype=float)
        c = np.abs(np.asarray(self.coefficients, dtype=float))
        if self.family is Family.EXP:
            return polyval(t, c) * np.exp(-self.params[0] * t)
        if self.family is Family.GAUSS:
            return polyval(t, c) * np.exp(-0.5 * t * t)
        if self.family is Family.STEP:
            return c[0] * np.where(t < self.params[1], 1.0, 0.0)
        return np.full_like(t, c[0])

    def require_decay(self, operation: str) -> None:
        if self.decay not in DECAYING:
            raise UnsupportedDecayError(f"{operation} needs a decaying input, got {self.label} ({self.decay.value})")

    def cutoff(self, settings: QuadratureSettings, envelope_cutoff: float | None = None) -> float:
        """Where numeric integration stops; beyond it the tail model takes over."""
        if settings.truncation is not None:
            return float(settings.truncation)
        decay = self.decay
        if decay is Decay.NONDECAYING:
            if self.family in (Family.SIN, Family.COS):
                return max(settings.oscillatory_truncation, 60.0 / self.frequency)
            raise UnsupportedDecayError(f"{self.label} neither decays nor oscillates")
        if decay is Decay.COMPACT:
            return 0.0 if self.is_zero else float(self.params[1])
        cutoff = settings.envelope_cutoff if envelope_cutoff is None else envelope_cutoff
        rate = self.params[0] if self.family is Family.EXP else 1.0
        cap = max(200.0, 40.0 / rate)
        grid = np.arange(0.0, cap + 0.25, 0.25)
        above = np.nonzero(self.envelope(grid) >= cutoff)[0]
        if above.size == 0:
            return 0.25
        last = above[-1]
        return float(grid[min(last + 1, grid.size - 1)])

    def tail(self) -> TailModel:
        if self.family is Family.SIN and not self.is_zero:
            return TailModel(TailKind.SIN, self.coefficients[0], self.params[0])
        if self.family is Family.COS and not self.is_zero:
            return TailModel(TailKind.COS, self.coefficients[0], self.params[0])
        return TailModel()

    def tail_bound(self, T: float) -> float:
        """Bound on the integral of |f| over [T, inf) for decaying families."""
        decay = self.decay
        if decay is Decay.COMPACT:
            return 0.0
        if decay is Decay.NONDECAYING:
            return math.inf
        env = float(self.envelope(T))
        degree = len(self.coefficients) - 1
        rate = self.params[0] if self.family is Family.EXP else T
        margin = rate - degree / max(T, 1e-300)
        if margin > 0.5 * rate:
            return env / margin
        return env * max(T, 1.0)


# named constructors

def _check_frequency(k: float) -> float:
    k = float(k)
    if not (k > 0.0 and math.isfinite(k)):
        raise InvalidArgumentError(f"trigonometric descriptors need a finite frequency k > 0, got {k!r}")
    return k


def sine(k: float, amplitude: float = 1.0) -> FunctionDescriptor:
    k = _check_frequency(k)
    return FunctionDescriptor(Family.SIN, (float(k),), (float(amplitude),), f"sin({k:g}t)")


def cosine(k: float, amplitude: float = 1.0) -> FunctionDescriptor:
    k = _check_frequency(k)
    return FunctionDescriptor(Family.COS, (float(k),), (float(amplitude),), f"cos({k:g}t)")


def exponential(a: float = 1.0) -> FunctionDescriptor:
    return FunctionDescriptor(Family.EXP, (float(a),), (1.0,), f"exp(-{a:g}t)")


def t_exponential(a: float = 1.0) -> FunctionDescriptor:
    return FunctionDescriptor(Family.EXP, (float(a),), (0.0, 1.0), f"t*exp(-{a:g}t)")


def polynomial_exponential(coefficients, a: float = 1.0, label: str = "") -> FunctionDescriptor:
    coefs = tuple(float(x) for x in coefficients)
    return FunctionDescriptor(Family.EXP, (float(a),), coefs, label or f"P(t)*exp(-{a:g}t)")


def gaussian() -> FunctionDescriptor:
    return FunctionDescriptor(Family.GAUSS, (), (1.0,), "exp(-t^2/2)")


def t_gaussian() -> FunctionDescriptor:
    return FunctionDescriptor(Family.GAUSS, (), (0.0, 1.0), "t*exp(-t^2/2)")


def step(a: float, b: float = math.inf, amplitude: float = 1.0) -> FunctionDescriptor:
    if not (0.0 <= a < b):
        raise InvalidArgumentError(f"step needs 0 <= a < b, got [{a}, {b}]")
    return FunctionDescriptor(Family.STEP, (float(a), float(b)), (float(amplitude),), f"step[{a:g},{b:g})")


def zero() -> FunctionDescriptor:
    return FunctionDescriptor(Family.EXP, (1.0,), (0.0,), "0")


def _numbers(text: str, count: int, spec: str) -> list[float]:
    parts = [p.strip() for p in text.split(",")] if text else []
    if len(parts) != count:
        raise InvalidArgumentError(f"descriptor {spec!r} expects {count} parameter(s)")
    try:
        values = [float(p) for p in parts]
    except ValueError as e:
        raise InvalidArgumentError(f"descriptor {spec!r}: {e}") from e
    if any(math.isnan(v) for v in values):
        raise InvalidArgumentError(f"descriptor {spec!r}: NaN parameter")
    return values


def parse_descriptor(spec: str) -> FunctionDescriptor:
    """Parse '<family>:<params>', e.g. 'sin:1.0', 'exp:2', 'step:0,1', 'tgauss'."""
    name, _, rest = spec.strip().partition(":")
    name = name.strip().lower()
    if name == "sin":
        return sine(*_numbers(rest, 1, spec))
    if name == "cos":
        return cosine(*_numbers(rest, 1, spec))
    if name in ("exp", "texp"):
        (a,) = _numbers(rest, 1, spec)
        if a <= 0:
            raise InvalidArgumentError(f"descriptor {spec!r}: decay rate must be positive")
        return exponential(a) if name == "exp" else t_exponential(a)
    if name in ("gauss", "tgauss"):
        _numbers(rest, 0, spec)
        return gaussian() if name == "gauss" else t_gaussian()
    if name == "step":
        return step(*_numbers(rest, 2, spec))
    if name == "zero":
        _numbers(rest, 0, spec)
        return zero()
    raise InvalidArgumentError(f"unknown function family in {spec!r}")
