"""ULA / UCA geometry and the derived near-field distances.

Coordinate frame (shared by both kinds):

* The UCA lies in the horizontal x-y plane, centred at the origin, element
  ``n`` at polar angle ``psi_n = 2*pi*n/N`` for ``n = 1..N``.
* The ULA lies on the y axis, centred at the origin, so its boresight in the
  horizontal plane is the +x axis.
* A point ``(r, theta, phi)`` sits at ``r * (sin(theta) cos(phi),
  sin(theta) sin(phi), cos(theta))``: ``theta`` is measured from the array
  normal (z axis) and ``phi`` from +x. For the UCA ``theta = 0`` is
  boresight; for the ULA ``phi`` is the angle from boresight in the
  horizontal plane (``theta = pi/2``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigError

SPEED_OF_LIGHT = 299_792_458.0
"Speed of light in m/s."

MIN_NF_FACTOR = 1.2
"Lower edge of the radiative near field, in apertures."


class ArrayKind(str, enum.Enum):
    ULA = "ula"
    UCA = "uca"


@dataclass(frozen=True)
class CarrierConfig:
    """Carrier frequency and element spacing (defaults to half a wavelength)."""

    frequency: float
    spacing: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise ConfigError(f"frequency must be positive, got {self.frequency}")
        if self.spacing is None:
            object.__setattr__(self, "spacing", self.wavelength / 2)
        elif not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ConfigError(f"spacing must be positive, got {self.spacing}")

    @classmethod
    def from_ghz(cls, fc_ghz: float, spacing: float | None = None) -> "CarrierConfig":
        return cls(fc_ghz * 1e9, spacing)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    @property
    def wavenumber(self) -> float:
        return 2 * math.pi / self.wavelength


@dataclass(frozen=True)
class ArrayGeometry:
    kind: ArrayKind
    n: int
    carrier: CarrierConfig = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", ArrayKind(self.kind))
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"array needs at least 2 elements, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def wavelength(self) -> float:
        return self.carrier.wavelength

    @property
    def spacing(self) -> float:
        return self.carrier.spacing

    @property
    def aperture(self) -> float:
        # ULA: N*d rather than (N-1)*d. UCA: circumference pi*D = N*d.
        if self.kind is ArrayKind.ULA:
            return self.n * self.spacing
        return self.n * self.spacing / math.pi

    @property
    def radius(self) -> float:
        if self.kind is not ArrayKind.UCA:
            raise ConfigError("radius is only defined for a UCA")
        return self.aperture / 2

    @property
    def rayleigh(self) -> float:
        return rayleigh_distance(self)

    @property
    def min_nf(self) -> float:
        return MIN_NF_FACTOR * self.aperture

    @cached_property
    def element_angles(self) -> np.ndarray:
        """UCA element polar angles ``2*pi*n/N``, n = 1..N."""
        if self.kind is not ArrayKind.UCA:
            raise ConfigError("element angles are only defined for a UCA")
        a = 2 * np.pi * np.arange(1, self.n + 1) / self.n
        a.flags.writeable = False
        return a

    @cached_property
    def positions(self) -> np.ndarray:
        """(N, 3) element coordinates in metres."""
        if self.kind is ArrayKind.UCA:
            psi = self.element_angles
            r = self.radius
            pos = np.stack([r * np.cos(psi), r * np.sin(psi), np.zeros(self.n)], axis=1)
        else:
            y = (np.arange(self.n) - (self.n - 1) / 2) * self.spacing
            pos = np.stack([np.zeros(self.n), y, np.zeros(self.n)], axis=1)
        pos.flags.writeable = False
        return pos


def make_ula(n: int, carrier: CarrierConfig) -> ArrayGeometry:
    return ArrayGeometry(ArrayKind.ULA, n, carrier)


def make_uca(n: int, carrier: CarrierConfig) -> ArrayGeometry:
    return ArrayGeometry(ArrayKind.UCA, n, carrier)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def uca_for_aperture(d_target: float, carrier: CarrierConfig) -> ArrayGeometry:
    """UCA whose aperture is closest to ``d_target`` (N = round(pi*D/d))."""
    if not d_target > 0:
        raise ConfigError(f"target aperture must be positive, got {d_target}")
    n = _round_half_up(math.pi * d_target / carrier.spacing)
    if n < 2:
        raise ConfigError(f"aperture {d_target} m gives fewer than 2 elements")
    return make_uca(n, carrier)


def ula_for_aperture(d_target: float, carrier: CarrierConfig) -> ArrayGeometry:
    """ULA whose aperture N*d is closest to ``d_target``."""
    if not d_target > 0:
        raise ConfigError(f"target aperture must be positive, got {d_target}")
    n = _round_half_up(d_target / carrier.spacing)
    if n < 2:
        raise ConfigError(f"aperture {d_target} m gives fewer than 2 elements")
    return make_ula(n, carrier)


def rayleigh_distance(g: ArrayGeometry) -> float:
    """Classical Rayleigh distance 2 D^2 / lambda."""
    return 2 * g.aperture**2 / g.wavelength


def element_positions(g: ArrayGeometry) -> np.ndarray:
    return g.positions
