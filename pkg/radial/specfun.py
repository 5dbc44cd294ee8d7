"""Sine and cosine integrals and Bessel functions J0, J1 for real x >= 0.

Small arguments use power series summed with math.fsum. Si/Ci switch to the
continued fraction of E1(ix) above x = 4 and to the asymptotic auxiliary
functions above x = 50. J0/J1 switch to the Hankel expansion above x = 16.
"""

import math

import numpy as np

from .errors import InvalidArgumentError

EULER_GAMMA = 0.57721566490153286061

_SICI_SERIES_MAX = 4.0
_SICI_ASYMPTOTIC_MIN = 50.0
_BESSEL_SERIES_MAX = 16.0
_TINY = 1e-300
_EPS = 4e-16


def _check_nonnegative(x: float, name: str) -> float:
    x = float(x)
    if not x >= 0.0:
        raise InvalidArgumentError(f"{name} is defined here for x >= 0, got {x!r}")
    return x


def _si_series(x: float) -> float:
    x2 = x * x
    term = x
    terms = []
    for n in range(200):
        terms.append(term / (2 * n + 1))
        term *= -x2 / ((2 * n + 2) * (2 * n + 3))
        if abs(term) < 1e-18:
            break
    return math.fsum(terms)


def _ci_series(x: float) -> float:
    x2 = x * x
    term = -x2 / 2.0
    terms = [EULER_GAMMA, math.log(x)]
    for n in range(1, 200):
        terms.append(term / (2 * n))
        term *= -x2 / ((2 * n + 1) * (2 * n + 2))
        if abs(term) < 1e-18:
            break
    return math.fsum(terms)


def _sici_continued_fraction(x: float) -> tuple[float, float]:
    # Modified Lentz evaluation of E1(ix); converges quickly for x > 2.
    b = complex(1.0, x)
    c = 1.0 / _TINY
    d = h = 1.0 / b
    for i in range(2, 10_000):
        a = -float((i - 1) * (i - 1))
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < _EPS:
            break
    h *= complex(math.cos(x), -math.sin(x))
    return math.pi / 2 + h.imag, -h.real


def _auxiliary(x: float) -> tuple[float, float]:
    """Asymptotic auxiliary functions f(x), g(x) of the sine/cosine integrals."""
    inv2 = 1.0 / (x * x)
    f_terms, g_terms = [], []
    f_term, g_term = 1.0, 1.0
    for n in range(1, 200):
        f_terms.append(f_term)
        g_terms.append(g_term)
        f_next = -f_term * (2 * n - 1) * (2 * n) * inv2
        g_next = -g_term * (2 * n) * (2 * n + 1) * inv2
        if abs(f_next) > abs(f_term) or (abs(f_next) < 1e-18 and abs(g_next) < 1e-18):
            break
        f_term, g_term = f_next, g_next
    return math.fsum(f_terms) / x, math.fsum(g_terms) * inv2


def sici(x: float) -> tuple[float, float]:
    """Return (Si(x), Ci(x)); x must be positive."""
    x = _check_nonnegative(x, "sici")
    if x == 0.0:
        raise InvalidArgumentError("Ci has a logarithmic singularity at x = 0")
    if x <= _SICI_SERIES_MAX:
        return _si_series(x), _ci_series(x)
    if x <= _SICI_ASYMPTOTIC_MIN:
        return _sici_continued_fraction(x)
    f, g = _auxiliary(x)
    s, c = math.sin(x), math.cos(x)
    return math.pi / 2 - f * c - g * s, f * s - g * c


def si(x: float) -> float:
    x = _check_nonnegative(x, "si")
    if x == 0.0:
        return 0.0
    return sici(x)[0]


def ci(x: float) -> float:
    x = float(x)
    if not x > 0.0:
        raise InvalidArgumentError(f"ci requires x > 0, got {x!r}")
    return sici(x)[1]


def _bessel_series(x: float, order: int) -> float:
    half = 0.5 * x
    q = half * half
    term = 1.0 if order == 0 else half
    terms = []
    for m in range(500):
        terms.append(term)
        term *= -q / ((m + 1) * (m + 1 + order))
        if abs(term) < 1e-18 and m >= half:
            break
    return math.fsum(terms)


def _bessel_hankel(x: float, order: int) -> float:
    mu = 4.0 * order * order
    p_terms, q_terms = [], []
    term = 1.0
    for k in range(200):
        if k % 2 == 0:
            p_terms.append(term if k % 4 == 0 else -term)
        else:
            q_terms.append(term if k % 4 == 1 else -term)
        nxt = term * (mu - (2 * k + 1) ** 2) / ((k + 1) * 8.0 * x)
        if abs(nxt) > abs(term) or abs(nxt) < 1e-18:
            break
        term = nxt
    p, q = math.fsum(p_terms), math.fsum(q_terms)
    phase = x - (0.5 * order + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(phase) - q * math.sin(phase))


def j0(x: float) -> float:
    x = _check_nonnegative(x, "j0")
    if x <= _BESSEL_SERIES_MAX:
        return _bessel_series(x, 0)
    return _bessel_hankel(x, 0)


def j1(x: float) -> float:
    x = _check_nonnegative(x, "j1")
    if x <= _BESSEL_SERIES_MAX:
        return _bessel_series(x, 1)
    return _bessel_hankel(x, 1)


def j1_zero(n: int) -> float:
    """n-th positive zero of J1, by bisection around McMahon's estimate."""
    if n < 1:
        raise InvalidArgumentError(f"zero index must be >= 1, got {n}")
    beta = (n + 0.25) * math.pi
    lo, hi = beta - 0.5, beta + 0.3
    f_lo = j1(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = j1(mid)
        if f_mid == 0.0 or hi - lo < 1e-15 * beta:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


si_array = np.vectorize(si, otypes=[float])
ci_array = np.vectorize(ci, otypes=[float])
j0_array = np.vectorize(j0, otypes=[float])
j1_array = np.vectorize(j1, otypes=[float])
