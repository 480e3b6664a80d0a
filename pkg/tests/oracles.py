"""Independent reference computations used only by the tests.

None of these go through nfbeam's numerical paths.
"""

import math

import mpmath
import numpy as np
from scipy import integrate


def j0_mp_series(x, dps=50):
    """J0 power series summed in ``dps``-digit arithmetic to convergence."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        q = -x * x / 4
        term = total = mpmath.mpf(1)
        k = 0
        while True:
            k += 1
            term = term * q / (k * k)
            total += term
            if abs(term) < mpmath.mpf(10) ** (5 - dps) and k > abs(x):
                return float(total)


def fresnel_quad(x):
    """(C, S) by adaptive quadrature on panels between successive phase turns."""
    if x == 0:
        return 0.0, 0.0
    # breakpoints where pi t^2 / 2 crosses multiples of pi/2
    pts = [math.sqrt(m) for m in range(1, int(x * x) + 1) if math.sqrt(m) < x]
    edges = [0.0, *pts, x]
    c = s = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        c += integrate.quad(lambda t: math.cos(math.pi * t * t / 2), a, b, epsabs=1e-13, epsrel=1e-13)[0]
        s += integrate.quad(lambda t: math.sin(math.pi * t * t / 2), a, b, epsabs=1e-13, epsrel=1e-13)[0]
    return c, s


def j0_integral(z):
    """(1/2pi) int_0^2pi exp(-j z cos psi) dpsi, folded onto [0, pi] by symmetry."""
    val = integrate.quad(lambda p: math.cos(z * math.cos(p)), 0, math.pi, limit=400,
                         epsabs=1e-13, epsrel=1e-13)[0]
    return val / math.pi


def element_coords(g):
    """Element coordinates rebuilt from the geometric definition."""
    if g.kind.value == "uca":
        R = g.n * g.spacing / math.pi / 2
        return [(R * math.cos(2 * math.pi * n / g.n), R * math.sin(2 * math.pi * n / g.n), 0.0)
                for n in range(1, g.n + 1)]
    return [(0.0, (n - (g.n - 1) / 2) * g.spacing, 0.0) for n in range(g.n)]


def point(p):
    st = math.sin(p.theta)
    return (p.r * st * math.cos(p.phi), p.r * st * math.sin(p.phi), p.r * math.cos(p.theta))


def brute_gain(g, focus, r_obs):
    """Matched-filter gain by an explicit loop over elements with 3D distances."""
    k = 2 * math.pi / g.wavelength
    pf = point(focus)
    po = point(focus.with_range(r_obs))
    acc = 0j
    for e in element_coords(g):
        df = math.dist(e, pf) - focus.r
        do = math.dist(e, po) - r_obs
        acc += complex(math.cos(k * (do - df)), math.sin(k * (do - df)))
    return abs(acc) / g.n


def first_crossing_scan(f, lo, hi, step):
    """Grid scan for the first sign change of f; returns the bracketing pair."""
    xs = np.arange(lo, hi, step)
    v = np.array([f(x) for x in xs])
    i = np.nonzero(np.sign(v[:-1]) != np.sign(v[1:]))[0][0]
    return xs[i], xs[i + 1]
