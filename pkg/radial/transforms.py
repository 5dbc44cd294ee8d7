"""Fourier sine and cosine transforms.

Two realizations: the orthonormal DST-I matrix S on a RadialGrid, which is
symmetric and its own inverse, and panel quadrature of the half-line integrals
sqrt(2/pi) * int f(t) sin(kt) dt (resp. cos) for continuum checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft

from .errors import InvalidArgumentError
from .functions import FunctionDescriptor
from .grid import RadialGrid, SampledFunction
from .quadrature import (
    DEFAULT_SETTINGS,
    QuadratureResult,
    QuadratureSettings,
    RadialFunction,
    TabulatedFunction,
    image_nodes,
    integrate_with_magnitude,
    panel_edges,
    tabulate,
)

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@lru_cache(maxsize=8)
def _dst_matrix(N: int) -> np.ndarray:
    index = np.arange(1, N + 1)
    # reduce m*j before scaling so sin() sees exact multiples of pi/(N+1)
    phase = np.outer(index, index) % (2 * (N + 1))
    S = math.sqrt(2.0 / (N + 1)) * np.sin(math.pi * phase / (N + 1))
    S.setflags(write=False)
    return S


@dataclass(frozen=True)
class DstMatrixModel:
    grid: RadialGrid

    @property
    def matrix(self) -> np.ndarray:
        return _dst_matrix(self.grid.N)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """S applied along axis 0, so a matrix argument is transformed column by column."""
        return fft.dst(np.asarray(values, dtype=float), type=1, norm="ortho", axis=0)

    def spectral(self, values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
        """S diag(multiplier) S applied to values."""
        values = np.asarray(values, dtype=float)
        scale = np.asarray(multiplier, dtype=float).reshape((-1,) + (1,) * (values.ndim - 1))
        return self.apply(scale * self.apply(values))


def continuum_scale(grid: RadialGrid) -> float:
    """Factor turning (S chi)_m into the trapezoid value of F_s chi at k_m."""
    return grid.spacing * math.sqrt((grid.N + 1) / math.pi)


def dst_apply(chi: SampledFunction) -> SampledFunction:
    model = DstMatrixModel(chi.grid)
    return chi.with_values(model.apply(chi.values), chi.space.flipped())


def _transform(kind: str, f: RadialFunction, k: float, settings: QuadratureSettings) -> QuadratureResult:
    if isinstance(f, FunctionDescriptor):
        f.require_decay(f"F_{kind[0]}")
    T = f.cutoff(settings)
    kernel = np.sin if kind == "sin" else np.cos
    edges = panel_edges(
        T,
        breakpoints=f.breakpoints,
        spacing=math.pi / k if k > 0 else 0.0,
        max_width=settings.max_panel_width,
    )
    value, magnitude = integrate_with_magnitude(lambda t: f(t) * kernel(k * t), edges, settings.panel_order)
    value += f.tail().kernel_moment(kind, k, T)
    bound = f.tail_bound(T) + 64 * np.finfo(float).eps * magnitude
    return QuadratureResult(SQRT_2_OVER_PI * value, SQRT_2_OVER_PI * bound, T, edges.size - 1)


def fs_quad_detailed(f: RadialFunction, k: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> QuadratureResult:
    if not k > 0:
        raise InvalidArgumentError(f"sine transform needs k > 0, got {k!r}")
    return _transform("sin", f, float(k), settings)


def fc_quad_detailed(f: RadialFunction, k: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> QuadratureResult:
    if not k >= 0:
        raise InvalidArgumentError(f"cosine transform needs k >= 0, got {k!r}")
    return _transform("cos", f, float(k), settings)


def fs_quad(f: RadialFunction, k: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    return fs_quad_detailed(f, k, settings).value


def fc_quad(f: RadialFunction, k: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    return fc_quad_detailed(f, k, settings).value


def derivative_identity_defect(
    f: FunctionDescriptor, k: float, settings: QuadratureSettings = DEFAULT_SETTINGS
) -> tuple[float, float]:
    """Defects of F_s f' = -k F_c f and F_c f' = -sqrt(2/pi) f(0) + k F_s f."""
    f.require_decay("derivative identity")
    df = f.derivative
    sine_defect = abs(fs_quad(df, k, settings) + k * fc_quad(f, k, settings))
    cosine_defect = abs(fc_quad(df, k, settings) + SQRT_2_OVER_PI * f.value_at_zero - k * fs_quad(f, k, settings))
    return sine_defect, cosine_defect


# Tabulated images feed the composition oracles (F_s F_c, F_s k F_s, ...).
# The fitted tail power follows the leading large-k behaviour of each image.

def sine_image(
    f: FunctionDescriptor,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    nodes: np.ndarray | None = None,
    weight: str = "",
) -> TabulatedFunction:
    """F_s f tabulated in k; weight 'k' or '1/k' multiplies the image before tabulating."""
    nodes = image_nodes() if nodes is None else nodes
    power = 1.0 if f.value_at_zero != 0.0 else 3.0
    if weight == "k":
        func, power = (lambda k: k * fs_quad(f, k, settings)), power - 1.0
    elif weight == "1/k":
        func, power = (lambda k: fs_quad(f, k, settings) / k), power + 1.0
    else:
        func = lambda k: fs_quad(f, k, settings)
    if power <= 1.0 and weight:
        raise InvalidArgumentError(f"k-weighted sine image of {f.label} does not decay")
    suffix = f"{weight}*" if weight else ""
    return tabulate(func, nodes, power, f"{suffix}F_s[{f.label}]")


def cosine_image(
    f: FunctionDescriptor,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    nodes: np.ndarray | None = None,
) -> TabulatedFunction:
    nodes = image_nodes() if nodes is None else nodes
    power = 2.0 if float(f.slope(0.0)) != 0.0 else 4.0
    return tabulate(lambda k: fc_quad(f, k, settings), nodes, power, f"F_c[{f.label}]")
