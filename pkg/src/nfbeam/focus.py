"""3 dB beamdepth and the effective beamfocusing Rayleigh distance (EBRD).

Both closed forms reduce to one structure. With ``E`` the EBRD along the
focal direction, the 3 dB points satisfy ``|1/r - 1/r_f| = 1/E`` so

    r_min = E r_f / (E + r_f),   r_max = E r_f / (E - r_f),
    depth = 2 E r_f^2 / (E^2 - r_f^2),

and the depth is unbounded once ``r_f >= E``. For the UCA
``E = pi R_D sin^2(theta) / (16 alpha)``; for the ULA
``E = R_D cos^2(phi) / (4 alpha)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import specfun
from .channel import DistanceModel, Position, check_near_field
from .errors import ConfigError, NumericalError
from .gain import fresnel_ratio, inverse_range_grid, matched_gain, ula_cos2
from .geometry import ArrayGeometry, ArrayKind

PUBLISHED_ALPHA = {ArrayKind.ULA: 1.75, ArrayKind.UCA: 1.2}

NUMERIC_FAR_FACTOR = 100.0
"Numeric sweeps stop at this multiple of the Rayleigh distance."

HALF_POWER = 1 / math.sqrt(2)


class AlphaSource(str, enum.Enum):
    PUBLISHED = "paper"
    COMPUTED = "computed"


@dataclass(frozen=True)
class Alpha3dB:
    kind: ArrayKind
    value: float
    source: AlphaSource


def _closed_gain_of_alpha(kind: ArrayKind, a: float) -> float:
    # UCA: alpha is the Bessel argument; ULA: alpha is the squared Fresnel argument
    if kind is ArrayKind.UCA:
        return abs(specfun.bessel_j0(a))
    return fresnel_ratio(math.sqrt(a))


@lru_cache(maxsize=None)
def _computed_alpha(kind: ArrayKind) -> float:
    f = lambda a: _closed_gain_of_alpha(kind, a) ** 2 - 0.5
    grid = np.linspace(1e-3, 3.0, 3000)
    prev = grid[0]
    for a in grid[1:]:
        if f(prev) * f(a) < 0:
            return specfun.find_root_bracketed(f, prev, a)
        prev = a
    raise NumericalError(f"no 3 dB crossing of the {kind.value} gain in (0, 3]")


def alpha_3db(kind, source=AlphaSource.PUBLISHED) -> Alpha3dB:
    """Half-power argument of the closed-form range gain.

    ``paper`` gives the published constants (1.75 ULA, 1.2 UCA); ``computed``
    solves ``|G(alpha)|^2 = 0.5`` at the first crossing.
    """
    kind = ArrayKind(kind)
    source = AlphaSource(source)
    if source is AlphaSource.PUBLISHED:
        return Alpha3dB(kind, PUBLISHED_ALPHA[kind], source)
    return Alpha3dB(kind, _computed_alpha(kind), source)


@dataclass(frozen=True)
class BeamdepthResult:
    r_min: float | None = None
    r_max: float | None = None

    @classmethod
    def unbounded(cls) -> "BeamdepthResult":
        return cls()

    @property
    def is_finite(self) -> bool:
        return self.r_max is not None

    @property
    def depth(self) -> float:
        if not self.is_finite:
            return math.inf
        return self.r_max - self.r_min


def _angle_factor(g: ArrayGeometry, focus: Position) -> float:
    if g.kind is ArrayKind.UCA:
        return math.sin(focus.theta) ** 2
    return ula_cos2(focus.theta, focus.phi)


def _ebrd_scale(kind: ArrayKind, rayleigh: float, factor: float, alpha: float):
    # returns (numerator, alpha term) with EBRD = numerator / alpha term
    if kind is ArrayKind.UCA:
        return math.pi * rayleigh * factor, 16 * alpha
    return rayleigh * factor, 4 * alpha


def _check_alpha(g: ArrayGeometry, alpha: Alpha3dB) -> None:
    if alpha.kind is not g.kind:
        raise ConfigError(f"alpha for {alpha.kind.value} used with a {g.kind.value}")


def ebrd_from_rayleigh(kind, rayleigh: float, angle: float, alpha: float) -> float:
    """EBRD from a given Rayleigh distance (angle is theta for UCA, phi for ULA)."""
    kind = ArrayKind(kind)
    # ULA factor is cos^2(phi), written as ula_cos2 so ebrd and ebrd_at agree bitwise
    factor = math.sin(angle) ** 2 if kind is ArrayKind.UCA else ula_cos2(math.pi / 2, angle)
    num, den = _ebrd_scale(kind, rayleigh, factor, alpha)
    return num / den


def ebrd(g: ArrayGeometry, angle: float, alpha: Alpha3dB) -> float:
    """Farthest focal range with a finite 3 dB beamdepth.

    ``angle`` is the elevation ``theta`` for a UCA and the in-plane azimuth
    ``phi`` for a ULA.
    """
    _check_alpha(g, alpha)
    return ebrd_from_rayleigh(g.kind, g.rayleigh, angle, alpha.value)


def ebrd_at(g: ArrayGeometry, focus: Position, alpha: Alpha3dB) -> float:
    """EBRD along the direction of ``focus``."""
    _check_alpha(g, alpha)
    num, den = _ebrd_scale(g.kind, g.rayleigh, _angle_factor(g, focus), alpha.value)
    return num / den


def beamdepth_closed(g: ArrayGeometry, focus: Position, alpha: Alpha3dB,
                     allow_reactive: bool = False) -> BeamdepthResult:
    """Closed-form 3 dB interval around ``focus.r``."""
    check_near_field(g, focus.r, allow_reactive)
    r_f = focus.r
    if r_f >= ebrd_at(g, focus, alpha):
        return BeamdepthResult.unbounded()
    num, den = _ebrd_scale(g.kind, g.rayleigh, _angle_factor(g, focus), alpha.value)
    r_max = num * r_f / (num - den * r_f)
    r_min = num * r_f / (num + den * r_f)
    return BeamdepthResult(r_min, r_max)


def beamdepth_numeric(g: ArrayGeometry, focus: Position, grid: int = 4000,
                      model: DistanceModel | str = DistanceModel.EXACT) -> BeamdepthResult:
    """3 dB interval read from the exact matched-filter gain.

    Sweeps an inverse-range grid on ``[1.2 D, 100 R_D]``, takes the first
    half-power crossing on each side of the focus and refines it by
    bisection. Unbounded if the far side never drops below 1/sqrt(2). If the
    near side never drops, ``r_min`` is the start of the window.
    """
    if grid < 1000:
        raise ConfigError("numeric beamdepth needs a grid of at least 1000 points")
    check_near_field(g, focus.r)
    r_lo, r_hi = g.min_nf, NUMERIC_FAR_FACTOR * g.rayleigh
    if focus.r >= r_hi:
        raise ConfigError(f"focus {focus.r} m beyond the sweep limit {r_hi:.6g} m")
    ranges = inverse_range_grid(r_lo, r_hi, grid)
    gains = matched_gain(g, focus, ranges, model)
    f = lambda r: matched_gain(g, focus, r, model) - HALF_POWER

    above = np.nonzero(ranges > focus.r)[0]
    below = np.nonzero(ranges < focus.r)[0][::-1]

    r_max = None
    prev = focus.r
    for i in above:
        if gains[i] < HALF_POWER:
            r_max = specfun.find_root_bracketed(f, prev, ranges[i], tol=1e-10 * ranges[i])
            break
        prev = ranges[i]
    if r_max is None:
        return BeamdepthResult.unbounded()

    r_min = r_lo
    prev = focus.r
    for i in below:
        if gains[i] < HALF_POWER:
            r_min = specfun.find_root_bracketed(f, ranges[i], prev, tol=1e-10 * prev)
            break
        prev = ranges[i]
    return BeamdepthResult(r_min, r_max)


def focus_angle(g: ArrayGeometry, focus: Position) -> float:
    return focus.theta if g.kind is ArrayKind.UCA else focus.phi


def beamdepth_record(g: ArrayGeometry, focus: Position, alpha: Alpha3dB,
                     result: BeamdepthResult) -> dict:
    """JSON-ready summary of a beamdepth evaluation."""
    rec = {
        "kind": g.kind.value,
        "angle_rad": focus_angle(g, focus),
        "focus_m": focus.r,
        "alpha": alpha.value,
        "alpha_source": alpha.source.value,
    }
    if result.is_finite:
        rec.update(r_min_m=result.r_min, r_max_m=result.r_max, depth_m=result.depth)
    else:
        rec["unbounded"] = True
    rec["ebrd_m"] = ebrd_at(g, focus, alpha)
    return rec
