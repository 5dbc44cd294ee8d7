"""Even and odd Hilbert transforms on the half-line.

    H_e f(r) = -(2r/pi) PV int f(t) / (t^2 - r^2) dt      (= F_s F_c f)
    H_o f(r) =  (2/pi)  PV int t f(t) / (t^2 - r^2) dt    (= F_c F_s f)

The principal value is taken by subtracting g(r) from the numerator, which
leaves a regular integrand, and adding the closed-form PV of 1/(t^2 - r^2).
Beyond the truncation T the kernel is expanded in powers of r/t and the
expansion is integrated against the function's tail model.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .quadrature import (
    DEFAULT_SETTINGS,
    QuadratureSettings,
    RadialFunction,
    TabulatedFunction,
    image_nodes,
    integrate,
    panel_edges,
    tabulate,
    tail_series,
)
from .transforms import cosine_image, fc_quad, fs_quad, sine_image

# below this relative distance from t = r the regular integrand uses its limit
LIMIT_RADIUS = 1e-6


def _check_radius(r: float) -> float:
    r = float(r)
    if not r > 0.0 or not math.isfinite(r):
        raise InvalidArgumentError(f"Hilbert transforms are evaluated at r > 0, got {r!r}")
    return r


def principal_value(
    g: Callable[[np.ndarray], np.ndarray],
    dg: Callable[[np.ndarray], np.ndarray],
    r: float,
    T: float,
    *,
    breakpoints: Sequence[float] = (),
    frequency: float = 0.0,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    limit_radius: float = LIMIT_RADIUS,
) -> float:
    """PV of the integral of g(t) / (t^2 - r^2) over [0, T], T > r."""
    gr = float(g(r))
    limit = float(dg(r)) / (2.0 * r)

    def regular(t):
        near = np.abs(t - r) < limit_radius * r
        denom = np.where(near, 1.0, t * t - r * r)
        return np.where(near, limit, (g(t) - gr) / denom)

    edges = panel_edges(
        T,
        breakpoints=(*breakpoints, r),
        spacing=math.pi / frequency if frequency > 0 else 0.0,
        max_width=settings.max_panel_width,
    )
    value = integrate(regular, edges, settings.panel_order)
    return value - gr * math.log((T + r) / (T - r)) / (2.0 * r)


def _truncation(f: RadialFunction, r: float, settings: QuadratureSettings) -> float:
    # the tail expansion in (r/t)^2 needs T comfortably past r
    return max(f.cutoff(settings), 2.0 * r)


def he_apply(
    f: RadialFunction,
    r: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    limit_radius: float = LIMIT_RADIUS,
) -> float:
    r = _check_radius(r)
    T = _truncation(f, r, settings)
    body = principal_value(
        f, f.slope, r, T,
        breakpoints=f.breakpoints,
        frequency=f.frequency,
        settings=settings,
        limit_radius=limit_radius,
    )
    # 1/(t^2 - r^2) = sum r^(2n) / t^(2n+2)
    tail = tail_series(f.tail(), T, lambda n: r ** (2 * n), lambda n: 2 * n + 2)
    return -(2.0 * r / math.pi) * (body + tail)


def ho_apply(
    f: RadialFunction,
    r: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    limit_radius: float = LIMIT_RADIUS,
) -> float:
    r = _check_radius(r)
    T = _truncation(f, r, settings)
    body = principal_value(
        lambda t: t * f(t),
        lambda t: f(t) + t * f.slope(t),
        r, T,
        breakpoints=f.breakpoints,
        frequency=f.frequency,
        settings=settings,
        limit_radius=limit_radius,
    )
    # t/(t^2 - r^2) = sum r^(2n) / t^(2n+1)
    tail = tail_series(f.tail(), T, lambda n: r ** (2 * n), lambda n: 2 * n + 1)
    return (2.0 / math.pi) * (body + tail)


def origin_profile(r) -> np.ndarray:
    """H_o of g(t) = (1 + t^2)^-2 in closed form: -(2/pi) [ln r / (1 + r^2)^2 + 1 / (2 (1 + r^2))].

    Its only singularity is -(2/pi) ln r at the origin, the same one H_o f has
    with coefficient f(0).
    """
    r = np.asarray(r, dtype=float)
    s = 1.0 + r * r
    return -(2.0 / np.pi) * (np.log(r) / (s * s) + 0.5 / s)


def origin_source(r) -> np.ndarray:
    """(1 + r^2)^-2, the function origin_profile is the H_o image of."""
    r = np.asarray(r, dtype=float)
    return 1.0 / (1.0 + r * r) ** 2


def he_image(f: RadialFunction, settings: QuadratureSettings = DEFAULT_SETTINGS) -> TabulatedFunction:
    """H_e f tabulated for use as an inner operand; decays like 1/r."""
    return tabulate(lambda x: he_apply(f, x, settings), image_nodes(), 1.0, f"H_e[{f.label}]")


def ho_image(f: RadialFunction, settings: QuadratureSettings = DEFAULT_SETTINGS) -> TabulatedFunction:
    """H_o f - f(0) origin_profile tabulated for use as an inner operand; decays like 1/r^2.

    The log singularity is taken out first since no spline reproduces it.
    """
    f0 = float(f(0.0))
    return tabulate(
        lambda x: ho_apply(f, x, settings) - f0 * float(origin_profile(x)),
        image_nodes(),
        2.0,
        f"H_o[{f.label}] - f(0) log",
    )


def he_via_transforms(f, rs, settings: QuadratureSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """F_s(F_c f) at each r, the factorized form of H_e."""
    image = cosine_image(f, settings)
    return np.array([fs_quad(image, _check_radius(r), settings) for r in np.atleast_1d(rs)])


def ho_via_transforms(f, rs, settings: QuadratureSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """F_c(F_s f) at each r, the factorized form of H_o."""
    image = sine_image(f, settings)
    return np.array([fc_quad(image, _check_radius(r), settings) for r in np.atleast_1d(rs)])


def he_of_ho(f, rs, settings: QuadratureSettings = DEFAULT_SETTINGS) -> np.ndarray:
    rs = np.atleast_1d(np.asarray(rs, dtype=float))
    image = ho_image(f, settings)
    # H_e origin_profile = origin_source exactly
    regular = np.array([he_apply(image, r, settings) for r in rs])
    return regular + float(f(0.0)) * origin_source(rs)


def ho_of_he(f, rs, settings: QuadratureSettings = DEFAULT_SETTINGS) -> np.ndarray:
    image = he_image(f, settings)
    return np.array([ho_apply(image, r, settings) for r in np.atleast_1d(rs)])
