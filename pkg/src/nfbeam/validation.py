"""Oracle cross-checks behind ``nfbeam validate``.

Each check recomputes a quantity along an independent route (high precision
series, Gauss-Legendre quadrature, exact matched-filter sums) and compares
it with the production path at a fixed tolerance.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun
from .channel import DistanceModel, Position
from .focus import (
    alpha_3db,
    beamdepth_closed,
    beamdepth_numeric,
    ebrd,
    ebrd_from_rayleigh,
)
from .gain import decay_curves, inverse_range_grid, matched_gain, uca_range_gain_closed, windowed_envelope
from .geometry import ArrayKind, CarrierConfig, make_uca, make_ula, uca_for_aperture

REF_FC_GHZ = 28.0
REF_N = 256
REF_FOCUS_M = 6.1
CHECK_SEED = 20240601


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _ref_geometries():
    c = CarrierConfig.from_ghz(REF_FC_GHZ)
    return make_ula(REF_N, c), make_uca(REF_N, c)


# -- independent oracles -----------------------------------------------------

def j0_series_decimal(x: float, digits: int = 80) -> float:
    """J0 by its power series in ``digits``-digit decimal arithmetic."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        q = -(decimal.Decimal(x) ** 2) / 4
        term = total = decimal.Decimal(1)
        eps = decimal.Decimal(10) ** (-digits + 5)
        k = 0
        while True:
            k += 1
            term = term * q / (k * k)
            total += term
            if abs(term) < eps and k > abs(x):
                return float(total)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int) -> float:
    """Composite 24-point Gauss-Legendre rule on ``panels`` equal panels."""
    if b == a:
        return 0.0
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    return float(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * f(t)))


def fresnel_quadrature(x: float) -> tuple[float, float]:
    panels = max(4, int(math.ceil(x * x * 2)))
    c = gauss_legendre(lambda t: np.cos(0.5 * np.pi * t * t), 0.0, x, panels)
    s = gauss_legendre(lambda t: np.sin(0.5 * np.pi * t * t), 0.0, x, panels)
    return c, s


def j0_quadrature(z: float) -> float:
    """(1/pi) int_0^pi cos(z cos psi) dpsi."""
    panels = max(4, int(math.ceil(z)))
    return gauss_legendre(lambda p: np.cos(z * np.cos(p)), 0.0, math.pi, panels) / math.pi


# -- checks ------------------------------------------------------------------

def check_geometry_anchors() -> Check:
    ula, uca = _ref_geometries()
    ok = (
        abs(ula.rayleigh / 348 - 1) <= 0.02
        and abs(uca.rayleigh / 35 - 1) <= 0.03
        and abs(ula.aperture - 1.37) <= 0.01
        and abs(uca.aperture - 0.436) <= 0.001
    )
    return Check("geometry anchors", ok,
                 f"R_D ula={ula.rayleigh:.2f} m uca={uca.rayleigh:.2f} m, "
                 f"D ula={ula.aperture:.4f} m uca={uca.aperture:.4f} m")


def check_aperture_scaling() -> Check:
    c = CarrierConfig.from_ghz(REF_FC_GHZ)
    worst = 0.0
    for n in (16, 256, 1024):
        ula, uca = make_ula(n, c), make_uca(n, c)
        worst = max(worst,
                    abs(uca.aperture * math.pi / ula.aperture - 1),
                    abs(ula.rayleigh / uca.rayleigh / math.pi**2 - 1))
    return Check("aperture scaling", worst <= 1e-12, f"max relative error {worst:.2e}")


def check_bessel_range_gain() -> Check:
    _, uca = _ref_geometries()
    focus = Position(REF_FOCUS_M, math.pi / 2, 0.0)
    r = inverse_range_grid(uca.min_nf, 100 * uca.rayleigh, 2000)
    g = matched_gain(uca, focus, r, DistanceModel.TAYLOR)
    dev = float(np.max(np.abs(g - uca_range_gain_closed(uca, focus.r, focus.theta, r))))
    return Check("Taylor gain vs Bessel closed form", dev <= 0.05, f"max |G_taylor - |J0|| = {dev:.2e}")


def check_ebrd_anchors() -> Check:
    ula, uca = _ref_geometries()
    e_ula = ebrd(ula, 0.0, alpha_3db("ula"))
    e_uca = ebrd(uca, math.pi / 2, alpha_3db("uca"))
    e_ula_ref = ebrd_from_rayleigh("ula", 348.0, 0.0, 1.75)
    e_uca_ref = ebrd_from_rayleigh("uca", 35.0, math.pi / 2, 1.2)
    ok = (
        abs(e_ula / (ula.rayleigh / 7) - 1) <= 0.01
        and abs(e_uca / (math.pi * uca.rayleigh / 19.2) - 1) <= 0.01
        and abs(e_ula / 49.7 - 1) <= 0.01
        and abs(e_ula_ref / 49.7 - 1) <= 0.01
        and abs(e_uca_ref / 5.72 - 1) <= 0.01
    )
    return Check("EBRD anchors", ok,
                 f"ula={e_ula:.3f} m (R_D=348: {e_ula_ref:.3f}), "
                 f"uca={e_uca:.3f} m (R_D=35: {e_uca_ref:.3f})")


def check_beamdepth_anchors() -> Check:
    ula, uca = _ref_geometries()
    d_ula = beamdepth_closed(ula, Position(REF_FOCUS_M, math.pi / 2, 0.0), alpha_3db("ula")).depth
    d_uca = beamdepth_numeric(uca, Position(REF_FOCUS_M, math.pi / 2, 0.0)).depth
    ok = abs(d_ula / 1.4 - 1) <= 0.15 and d_uca > 50
    return Check("beamdepth anchors", ok, f"ULA closed {d_ula:.3f} m, UCA numeric {d_uca:.1f} m")


def _random_focus(rng, g, n):
    best = math.pi / 2 if g.kind is ArrayKind.UCA else 0.0
    top = 2 * ebrd(g, best, alpha_3db(g.kind))
    r = rng.uniform(g.min_nf, top, n)
    ang = rng.uniform(-math.pi / 2, math.pi / 2, n)
    if g.kind is ArrayKind.UCA:
        return [(Position(ri, a, 0.0), a) for ri, a in zip(r, ang)]
    return [(Position(ri, math.pi / 2, a), a) for ri, a in zip(r, ang)]


def check_branch_consistency(samples: int = 1000) -> Check:
    rng = np.random.default_rng(CHECK_SEED)
    mismatches = 0
    for g in _ref_geometries():
        alpha = alpha_3db(g.kind)
        for p, ang in _random_focus(rng, g, samples):
            unbounded = not beamdepth_closed(g, p, alpha).is_finite
            mismatches += unbounded != (p.r >= ebrd(g, ang, alpha))
    return Check("branch consistency", mismatches == 0, f"{mismatches} mismatches")


def check_root_symmetry(samples: int = 1000) -> Check:
    rng = np.random.default_rng(CHECK_SEED + 1)
    worst = 0.0
    count = 0
    for g in _ref_geometries():
        alpha = alpha_3db(g.kind)
        for p, _ in _random_focus(rng, g, samples):
            res = beamdepth_closed(g, p, alpha)
            if not res.is_finite:
                continue
            lo = 1 / res.r_min - 1 / p.r
            hi = 1 / p.r - 1 / res.r_max
            worst = max(worst, abs(lo - hi) / abs(lo))
            count += 1
    return Check("two-root symmetry", worst <= 1e-9 and count > 0,
                 f"{count} finite cases, max relative asymmetry {worst:.2e}")


def check_fixed_aperture_count() -> Check:
    n = uca_for_aperture(1.36, CarrierConfig.from_ghz(REF_FC_GHZ)).n
    return Check("fixed-aperture UCA element count", abs(n / 801 - 1) <= 0.01, f"N = {n} (reference 801)")


def check_special_functions() -> Check:
    xs = np.linspace(0.0, 50.0, 501)
    j0_err = max(abs(specfun.bessel_j0(x) - j0_series_decimal(x)) for x in xs)
    fx = np.linspace(0.0, 20.0, 201)
    fr_err = 0.0
    for x in fx:
        c, s = specfun.fresnel(x)
        qc, qs = fresnel_quadrature(x)
        fr_err = max(fr_err, abs(c - qc), abs(s - qs))
    env = np.linspace(10.0, 50.0, 2001)
    env_ok = all(abs(specfun.bessel_j0(x)) <= math.sqrt(2 / (math.pi * x)) + 1e-6 for x in env)
    ok = j0_err <= 1e-10 and fr_err <= 1e-9 and env_ok
    return Check("special functions", ok,
                 f"J0 err {j0_err:.1e}, Fresnel err {fr_err:.1e}, envelope {'ok' if env_ok else 'violated'}")


DECAY_WINDOW = 2 * math.pi
"One oscillation of J0, the slowest of the three kernels."


def decay_envelopes(lo: float = 5.0, hi: float = 50.0, step: float = 0.005):
    x = np.arange(lo, hi + step / 2, step)
    bes, fre, snc = decay_curves(x)
    starts, eb = windowed_envelope(bes, x, DECAY_WINDOW)
    _, ef = windowed_envelope(fre, x, DECAY_WINDOW)
    _, es = windowed_envelope(snc, x, DECAY_WINDOW)
    return starts, eb, ef, es


def check_decay_ordering() -> Check:
    _, eb, ef, es = decay_envelopes()
    bad = int(np.sum(~((eb >= ef) & (ef >= es))))
    return Check("decay ordering", bad == 0, f"{bad} of {len(eb)} windows out of order")


ALL_CHECKS = (
    check_geometry_anchors,
    check_aperture_scaling,
    check_bessel_range_gain,
    check_ebrd_anchors,
    check_beamdepth_anchors,
    check_branch_consistency,
    check_root_symmetry,
    check_fixed_aperture_count,
    check_special_functions,
    check_decay_ordering,
)


def run_all() -> list[Check]:
    return [check() for check in ALL_CHECKS]
