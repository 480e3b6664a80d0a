"""Scalar special functions used by the closed-form gain expressions.

Everything here is pure Python on floats so the numerical path is fully
owned by this package: Bessel J0, Fresnel integrals, normalized sinc and a
bisection root finder.

Fresnel convention: ``C(x) = int_0^x cos(pi t^2 / 2) dt`` and
``S(x) = int_0^x sin(pi t^2 / 2) dt``, so that ``C(inf) = S(inf) = 1/2``.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import BracketError, DomainError

# |x| below this uses the power series, above it the Hankel expansion.
# At 12 the worst series term is ~4e3 (cancellation ~1e-12) and the
# optimally truncated asymptotic remainder is ~1e-11.
J0_SERIES_LIMIT = 12.0

# Fresnel: power series below, continued fraction above.
FRESNEL_SERIES_LIMIT = 1.5

ROOT_TOL = 1e-12

_EPS = 1e-17
_MAXIT = 500


def _check_finite(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def _j0_series(x: float) -> float:
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if abs(term) < _EPS * max(abs(total), 1e-300) or k > _MAXIT:
            return total


def _j0_asymptotic(x: float) -> float:
    # Hankel expansion: J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4
    p = 1.0
    q = 0.0
    a = 1.0
    prev = math.inf
    for k in range(1, _MAXIT):
        a *= (2 * k - 1) ** 2 / (8.0 * k * x)
        if a > prev or a < _EPS:
            break
        prev = a
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q -= sign * a
        else:
            p += sign * a
    c, s = math.cos(x), math.sin(x)
    cos_chi = (c + s) / math.sqrt(2.0)
    sin_chi = (s - c) / math.sqrt(2.0)
    return math.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, order zero, for real ``x``."""
    x = abs(_check_finite(x))
    if x < J0_SERIES_LIMIT:
        return _j0_series(x)
    return _j0_asymptotic(x)


def _fresnel_series(x: float) -> tuple[float, float]:
    # C + iS = x * sum_m (i t)^m / (m! (2m + 1)),  t = pi x^2 / 2
    t = 0.5 * math.pi * x * x
    c = s = 0.0
    term = 1.0
    m = 0
    while True:
        contrib = term / (2 * m + 1)
        r = m % 4
        if r == 0:
            c += contrib
        elif r == 1:
            s += contrib
        elif r == 2:
            c -= contrib
        else:
            s -= contrib
        if contrib < _EPS or m > _MAXIT:
            break
        m += 1
        term *= t / m
    return x * c, x * s


def _fresnel_cf(x: float) -> tuple[float, float]:
    # Continued fraction for the complementary error function, evaluated
    # with the modified Lentz method.
    tiny = 1e-300
    pix2 = math.pi * x * x
    b = complex(1.0, -pix2)
    cc = 1.0 / tiny
    d = h = 1.0 / b
    n = -1
    for _ in range(2, _MAXIT):
        n += 2
        a = -n * (n + 1)
        b += 4.0
        d = 1.0 / (a * d + b)
        cc = b + a / cc
        delta = cc * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < 1e-16:
            break
    h *= complex(x, -x)
    cs = complex(0.5, 0.5) * (1.0 - complex(math.cos(0.5 * pix2), math.sin(0.5 * pix2)) * h)
    return cs.real, cs.imag


def fresnel(x: float) -> tuple[float, float]:
    """Return ``(C(x), S(x))`` for ``x >= 0``."""
    x = _check_finite(x)
    if x < 0.0:
        raise DomainError(f"fresnel requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0, 0.0
    if x < FRESNEL_SERIES_LIMIT:
        return _fresnel_series(x)
    return _fresnel_cf(x)


def sinc(x: float) -> float:
    """Normalized sinc, sin(pi x) / (pi x)."""
    x = _check_finite(x)
    if x == 0.0:
        return 1.0
    if x == round(x):
        return 0.0
    px = math.pi * x
    return math.sin(px) / px


def find_root_bracketed(
    f: Callable[[float], float], a: float, b: float, tol: float = ROOT_TOL
) -> float:
    """Locate a sign change of ``f`` inside ``[a, b]`` by bisection.

    Deterministic: the same ``f`` and bracket always yield the same float.
    Returns the midpoint of the final bracket once its width is <= ``tol``.
    """
    a = _check_finite(a, "a")
    b = _check_finite(b, "b")
    if not tol > 0:
        raise DomainError("tol must be positive")
    if a > b:
        a, b = b, a
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if not fa * fb < 0:
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    while b - a > tol:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break  # bracket at float resolution
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)
