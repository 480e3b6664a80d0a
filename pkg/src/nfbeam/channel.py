"""Spherical-wave propagation distances and USW steering vectors."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, KindError, ValidityError
from .geometry import ArrayGeometry, ArrayKind


class DistanceModel(str, enum.Enum):
    EXACT = "exact"
    TAYLOR = "taylor"


@dataclass(frozen=True)
class Position:
    """Spherical coordinate of a UE or focal point.

    ``phi`` is wrapped into (-pi, pi]; ``theta`` must lie in [-pi/2, pi/2].
    """

    r: float
    theta: float = math.pi / 2
    phi: float = 0.0

    def __post_init__(self):
        r, theta, phi = float(self.r), float(self.theta), float(self.phi)
        if not all(map(math.isfinite, (r, theta, phi))):
            raise ConfigError(f"non-finite position {self!r}")
        if r <= 0:
            raise ConfigError(f"range must be positive, got {r}")
        if abs(theta) > math.pi / 2 + 1e-12:
            raise ConfigError(f"elevation {theta} outside [-pi/2, pi/2]")
        theta = max(-math.pi / 2, min(math.pi / 2, theta))
        phi = math.remainder(phi, 2 * math.pi)
        if phi == -math.pi:
            phi = math.pi
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @property
    def direction(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def with_range(self, r: float) -> "Position":
        return Position(r, self.theta, self.phi)


@dataclass(frozen=True, eq=False)
class ChannelVector:
    """Unit-modulus per-element response scaled by the path gain ``beta``.

    Entries are NOT divided by sqrt(N), so ``||h||^2 = N`` for ``beta = 1``.
    """

    entries: np.ndarray
    model: DistanceModel = DistanceModel.EXACT
    beta: complex = 1.0

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 1:
            raise ConfigError("channel vector must be one-dimensional")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def __len__(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def _check_index(g: ArrayGeometry, n: int) -> int:
    if not 1 <= n <= g.n:
        raise IndexError(f"element index {n} outside 1..{g.n}")
    return n - 1


def check_near_field(g: ArrayGeometry, r, allow_reactive: bool = False) -> None:
    if allow_reactive:
        return
    rmin = float(np.min(r))
    # tolerate rounding from inverse-range grids that start exactly at 1.2*D
    if rmin < g.min_nf * (1 - 1e-12):
        raise ValidityError(
            f"range {rmin:.6g} m is inside the 1.2*D = {g.min_nf:.6g} m near-field limit"
        )


def path_differences(g: ArrayGeometry, p: Position, r=None,
                     model: DistanceModel | str = DistanceModel.EXACT) -> np.ndarray:
    """``r^(n) - r`` for every element, shape ``(len(r), N)`` (or ``(N,)``).

    ``r`` overrides ``p.r`` and may be an array of ranges sharing p's angles.
    The exact branch uses ``(|e|^2 - 2 r u.e) / (r^(n) + r)`` which stays
    accurate at ranges far beyond the aperture.
    """
    model = DistanceModel(model)
    scalar = r is None or np.ndim(r) == 0
    rr = np.atleast_1d(np.asarray(p.r if r is None else r, dtype=float))[:, None]
    if model is DistanceModel.EXACT:
        pos = g.positions
        e2 = np.einsum("ij,ij->i", pos, pos)
        proj = pos @ p.direction
        lin = e2 - 2 * rr * proj
        out = lin / (np.sqrt(rr * rr + lin) + rr)
    elif g.kind is ArrayKind.UCA:
        R = g.radius
        sc = math.sin(p.theta) * np.cos(p.phi - g.element_angles)
        out = -R * sc + R * R / (2 * rr) * (1 - sc * sc)
    else:
        y = g.positions[:, 1]
        u = math.sin(p.theta) * math.sin(p.phi)
        out = -y * u + y * y / (2 * rr) * (1 - u * u)
    return out[0] if scalar else out


def exact_element_distance(g: ArrayGeometry, n: int, p: Position) -> float:
    """Euclidean distance from element ``n`` (1-based) to ``p``."""
    i = _check_index(g, n)
    if g.kind is ArrayKind.UCA:
        R = g.radius
        c = math.sin(p.theta) * math.cos(p.phi - g.element_angles[i])
        return math.sqrt(max(p.r * p.r + R * R - 2 * p.r * R * c, 0.0))
    y = g.positions[i, 1]
    u = math.sin(p.theta) * math.sin(p.phi)
    return math.sqrt(max(p.r * p.r + y * y - 2 * p.r * y * u, 0.0))


def taylor_element_distance_uca(g: ArrayGeometry, n: int, p: Position) -> float:
    """Second-order expansion of the UCA element distance in R / r."""
    if g.kind is not ArrayKind.UCA:
        raise KindError("Taylor distance is defined for UCA geometries only")
    i = _check_index(g, n)
    R = g.radius
    sc = math.sin(p.theta) * math.cos(p.phi - g.element_angles[i])
    return p.r - R * sc + R * R / (2 * p.r) * (1 - sc * sc)


def steering_vector(g: ArrayGeometry, p: Position,
                    model: DistanceModel | str = DistanceModel.EXACT,
                    allow_reactive: bool = False) -> ChannelVector:
    """Phase-only response with entries ``exp(-j k (r^(n) - r))``."""
    model = DistanceModel(model)
    check_near_field(g, p.r, allow_reactive)
    phase = -g.carrier.wavenumber * path_differences(g, p, model=model)
    return ChannelVector(np.exp(1j * phase), model)


def steering_matrix(g: ArrayGeometry, positions, model=DistanceModel.EXACT,
                    allow_reactive: bool = False) -> np.ndarray:
    """Stack steering vectors for many positions into a ``(K, N)`` array."""
    rows = [steering_vector(g, p, model, allow_reactive).entries for p in positions]
    return np.array(rows).reshape(len(rows), g.n)


def channel_vector(g: ArrayGeometry, p: Position,
                   model: DistanceModel | str = DistanceModel.EXACT,
                   allow_reactive: bool = False) -> ChannelVector:
    """LoS channel ``h = beta * b`` with ``beta = 1``."""
    return steering_vector(g, p, model, allow_reactive)
