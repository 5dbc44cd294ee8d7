"""Erdelyi-Kober fractional integrals I and K.

    I f(r) = (2/sqrt(pi)) int_0^1 u (1-u^2)^(-1/2) f(ur) du
           = (2/sqrt(pi)) int_0^(pi/2) sin(th) f(r sin(th)) dth
    K f(r) = (2/sqrt(pi)) int_1^inf (u^2-1)^(-1/2) f(ur) du
           = (2/sqrt(pi)) int_0^inf f(r cosh(s)) ds

The substitutions remove the endpoint singularities, so plain Gauss panels
suffice. The scalar entry points honour step breakpoints; the vectorized
helpers evaluate many radii at once for the nested identity checks.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError
from .functions import DECAYING, Family, FunctionDescriptor, sine
from .hilbert import he_apply
from .quadrature import (
    DEFAULT_SETTINGS,
    QuadratureSettings,
    RadialFunction,
    TabulatedFunction,
    graded_marks,
    image_nodes,
    integrate,
    panel_edges,
    panel_rule,
)
from .specfun import j0, j1, j1_zero

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
K_PANEL_WIDTH = 0.25
K_INTEGRAND_FLOOR = 1e-14
K_MAX_ARGUMENT = 40.0


def _check_radius(r: float) -> float:
    r = float(r)
    if not r > 0.0 or not math.isfinite(r):
        raise InvalidArgumentError(f"fractional integrals are evaluated at r > 0, got {r!r}")
    return r


def _support(f: RadialFunction, settings: QuadratureSettings) -> float:
    """Where f may be treated as zero; inf when it cannot."""
    if isinstance(f, FunctionDescriptor) and f.decay in DECAYING:
        return f.cutoff(settings)
    return math.inf


def ek_i_apply(f: RadialFunction, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    r = _check_radius(r)
    support = _support(f, settings)
    upper = math.pi / 2 if r <= support else math.asin(support / r)
    if upper == 0.0:
        return 0.0
    marks = [math.asin(b / r) for b in f.breakpoints if b < r]
    panels = 8 + math.ceil(r * f.frequency)
    edges = panel_edges(upper, breakpoints=marks, spacing=upper / panels, max_width=settings.max_panel_width)
    return TWO_OVER_SQRT_PI * integrate(lambda th: np.sin(th) * f(r * np.sin(th)), edges, settings.panel_order)


def ek_k_apply(f: RadialFunction, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    r = _check_radius(r)
    if isinstance(f, FunctionDescriptor):
        f.require_decay("K")
    support = _support(f, settings)
    if not math.isfinite(support):
        return float(k_values(f, np.array([r]), settings=settings)[0])
    if support <= r:
        return 0.0
    upper = math.acosh(support / r)
    marks = [math.acosh(b / r) for b in f.breakpoints if b > r]
    edges = panel_edges(upper, breakpoints=marks, max_width=K_PANEL_WIDTH)
    return TWO_OVER_SQRT_PI * integrate(lambda s: f(r * np.cosh(s)), edges, settings.panel_order)


def i_values(
    func: Callable[[np.ndarray], np.ndarray],
    xs,
    *,
    support: float = math.inf,
    frequency: float = 0.0,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> np.ndarray:
    """I func at every x in xs (any shape). func must be smooth on [0, max(xs)]."""
    xs = np.asarray(xs, dtype=float)
    x = xs.ravel()
    if x.size == 0:
        return np.zeros(xs.shape)
    ratio = support / np.maximum(x, np.finfo(float).tiny)
    upper = np.where(ratio < 1.0, np.arcsin(np.minimum(ratio, 1.0)), math.pi / 2)
    panels = 8 + math.ceil(float(x.max()) * frequency)
    u, w = panel_rule(np.linspace(0.0, 1.0, panels + 1), settings.panel_order)
    theta = upper[:, None] * u[None, :]
    values = np.sin(theta) * func(x[:, None] * np.sin(theta))
    out = TWO_OVER_SQRT_PI * upper * (values * w[None, :]).sum(axis=1)
    return out.reshape(xs.shape)


def k_values(
    func: Callable[[np.ndarray], np.ndarray],
    xs,
    *,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    floor: float = K_INTEGRAND_FLOOR,
) -> np.ndarray:
    """K func at every x in xs, stepping through s in chunks until the integrand falls below floor."""
    xs = np.asarray(xs, dtype=float)
    x = xs.ravel()
    total = np.zeros(x.size)
    active = np.ones(x.size, dtype=bool)
    order = settings.panel_order
    chunk = 8
    start = 0.0
    while start < K_MAX_ARGUMENT and active.any():
        s, w = panel_rule(start + K_PANEL_WIDTH * np.arange(chunk + 1), order)
        live = np.nonzero(active)[0]
        values = func(x[live, None] * np.cosh(s)[None, :])
        total[live] += (values * w[None, :]).sum(axis=1)
        settled = np.abs(values[:, -order:]).max(axis=1) < floor
        active[live[settled]] = False
        start += chunk * K_PANEL_WIDTH
    return (TWO_OVER_SQRT_PI * total).reshape(xs.shape)


def rki_apply(f: FunctionDescriptor, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """r * K(I f)(r)."""
    r = _check_radius(r)
    f.require_decay("r K I")
    support = _support(f, settings)

    def inner(y):
        return i_values(f, y, support=support, frequency=f.frequency, settings=settings)

    return r * float(k_values(inner, np.array([r]), settings=settings)[0])


def moment(f: FunctionDescriptor, n: int, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Integral of t^n f(t) over the half-line, for decaying f."""
    f.require_decay("moment")
    edges = panel_edges(f.cutoff(settings), breakpoints=f.breakpoints, max_width=settings.max_panel_width)
    return integrate(lambda t: t**n * f(t), edges, settings.panel_order)


def adjoint_defect(
    psi: FunctionDescriptor,
    chi: FunctionDescriptor,
    R_int: float = 40.0,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """|<psi, r K(I chi)> - <r I psi, I chi>|, both sides integrated over [0, R_int]
    plus, on the right, the closed-form tail of the r^-3 integrand."""
    psi.require_decay("adjoint check")
    chi.require_decay("adjoint check")
    if not R_int > 0:
        raise InvalidArgumentError(f"integration radius must be positive, got {R_int!r}")
    sup_psi, sup_chi = _support(psi, settings), _support(chi, settings)

    # K(I chi)(t) grows like log(1/t) at the origin, hence the graded panels
    edges = panel_edges(R_int, breakpoints=graded_marks(0.0, 1.0, levels=24), max_width=settings.max_panel_width)
    t, w = panel_rule(edges, settings.panel_order)

    nodes = image_nodes()
    i_chi = TabulatedFunction(nodes, i_values(chi, nodes, support=sup_chi, settings=settings), 2.0, f"I[{chi.label}]")
    lhs = math.fsum(w * psi(t) * t * k_values(i_chi, t, settings=settings))

    i_psi_t = i_values(psi, t, support=sup_psi, settings=settings)
    i_chi_t = i_values(chi, t, support=sup_chi, settings=settings)
    m1p, m3p = moment(psi, 1, settings), moment(psi, 3, settings)
    m1c, m3c = moment(chi, 1, settings), moment(chi, 3, settings)
    # I f(x) = (2/sqrt(pi)) (M1/x^2 + M3/(2x^4) + ...) for x past the support
    tail = (4.0 / math.pi) * (m1p * m1c / (2 * R_int**2) + (m1p * m3c + m3p * m1c) / (8 * R_int**4))
    rhs = math.fsum(w * t * i_psi_t * i_chi_t) + tail
    return abs(lhs - rhs)


def _he_far_field(f: FunctionDescriptor, settings: QuadratureSettings) -> Callable[[np.ndarray], np.ndarray]:
    """H_e f(x) = (2/pi) sum M_2n / x^(2n+1), valid once x is past the support of f."""
    # x >= 2 * support, so each term is at most a quarter of the previous one
    moments = [moment(f, 2 * n, settings) for n in range(20)]

    def far(x):
        x = np.asarray(x, dtype=float)
        inv2 = 1.0 / (x * x)
        total = np.zeros_like(x)
        power = 1.0 / x
        for m in moments:
            term = m * power
            total = total + term
            power = power * inv2
        return (2.0 / math.pi) * total

    return far


def _rooney_rhs(f: FunctionDescriptor, r: float, settings: QuadratureSettings) -> float:
    """r I(f/t)(r) = (2/sqrt(pi)) int_0^(pi/2) f(r sin th) dth."""
    marks = [math.asin(b / r) for b in f.breakpoints if b < r]
    edges = panel_edges(math.pi / 2, breakpoints=marks, spacing=math.pi / 16, max_width=settings.max_panel_width)
    return TWO_OVER_SQRT_PI * integrate(lambda th: f(r * np.sin(th)), edges, settings.panel_order)


def rooney_defect(f: FunctionDescriptor, r: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """|K(H_e f)(r) - r I(f/t)(r)|.

    A cosine is the one non-decaying input accepted: H_e c cos(k.) = c sin(k.),
    and its K image is the Mehler-Sonine integral sqrt(pi) c J0(kr).
    """
    r = _check_radius(r)
    if f.family is Family.COS and not f.is_zero:
        lhs = math.sqrt(math.pi) * f.coefficients[0] * j0(f.frequency * r)
        return abs(lhs - _rooney_rhs(f, r, settings))
    f.require_decay("Rooney identity")
    support = _support(f, settings)
    order = settings.panel_order

    # near field by direct PV quadrature, far field from the moment expansion
    switch = max(60.0, 2.0 * support, 2.0 * r)
    split = math.acosh(switch / r)
    near = np.vectorize(lambda x: he_apply(f, x, settings), otypes=[float])
    lhs = integrate(lambda s: near(r * np.cosh(s)), panel_edges(split, max_width=K_PANEL_WIDTH), order)
    far = _he_far_field(f, settings)
    lhs += integrate(
        lambda s: far(r * np.cosh(s)),
        panel_edges(split + K_MAX_ARGUMENT, start=split, max_width=K_PANEL_WIDTH),
        order,
    )
    lhs *= TWO_OVER_SQRT_PI
    return abs(lhs - _rooney_rhs(f, r, settings))


def i_sine_defect(k: float, rs, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """max over rs of |I sin(k.)(r) - sqrt(pi) J1(kr)|."""
    f = sine(k)
    return max(abs(ek_i_apply(f, r, settings) - math.sqrt(math.pi) * j1(k * r)) for r in np.atleast_1d(rs))


def bessel_orthogonality(R: float = 1.0, count: int = 4, settings: QuadratureSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """pi int_0^R r J1(k_n r) J1(k_m r) dr / (pi R^2 / 2) for k_n = z_n / R, z_n the zeros of J1."""
    if not R > 0 or count < 1:
        raise InvalidArgumentError("orthogonality check needs R > 0 and at least one mode")
    ks = [j1_zero(n) / R for n in range(1, count + 1)]
    r, w = panel_rule(panel_edges(R, max_width=R / 8), settings.panel_order)
    modes = np.array([[j1(k * x) for x in r] for k in ks])
    gram = math.pi * (modes * (w * r)[None, :]) @ modes.T
    return gram / (math.pi * R * R / 2)


def bessel_orthogonality_defect(R: float = 1.0, count: int = 4, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    gram = bessel_orthogonality(R, count, settings)
    return float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
