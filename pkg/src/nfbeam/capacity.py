"""Multi-user MRT sum-rate: correlations, per-user rates and Monte Carlo runs.

With unit-modulus channels (``||h||^2 = N``) and ``w_k = h_k^H / sqrt(N)``
the SINR of user ``k`` is ``gamma N / (1 + gamma N sum_{j != k} G_kj^2)``
where ``G_kj = |h_k^H h_j| / N``.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import ChannelVector, DistanceModel, Position, steering_matrix
from .errors import ConfigError, DegenerateError
from .focus import alpha_3db, ebrd
from .geometry import (
    ArrayGeometry,
    ArrayKind,
    CarrierConfig,
    make_uca,
    make_ula,
    uca_for_aperture,
    ula_for_aperture,
)

RNG_ALGORITHM = f"numpy.random.PCG64/SeedSequence(seed, spawn_key=(trial,)) numpy=={np.__version__}"


class UEDistribution(str, enum.Enum):
    UNIFORM_2D = "uniform2d"
    AZIMUTH_ONLY = "azimuth-only"
    ELEVATION_ONLY = "elevation-only"
    BORESIGHT_ULA = "boresight-ula"


def _as_vector(h) -> np.ndarray:
    return h.entries if isinstance(h, ChannelVector) else np.asarray(h, dtype=complex)


def pairwise_correlation(h_k, h_j) -> float:
    """``|h_k^H h_j| / N``."""
    a, b = _as_vector(h_k), _as_vector(h_j)
    if a.shape != b.shape:
        raise ConfigError(f"channel length mismatch: {a.shape} vs {b.shape}")
    return min(abs(np.vdot(a, b)) / a.shape[0], 1.0)


def correlation_matrix(H: np.ndarray) -> np.ndarray:
    """All pairwise correlations of the rows of a ``(K, N)`` channel matrix."""
    H = np.asarray(H)
    return np.minimum(np.abs(H.conj() @ H.T) / H.shape[1], 1.0)


def mrt_precoder(h) -> np.ndarray:
    """Unit-norm conjugate beamformer (a row vector)."""
    v = _as_vector(h)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise DegenerateError("cannot precode a zero channel")
    return v.conj() / nrm


def rates_from_correlation(G: np.ndarray, snr: float, n: int) -> np.ndarray:
    """Per-user rates (bits/s/Hz) from a ``(K, K)`` correlation matrix."""
    G2 = np.asarray(G, dtype=float) ** 2
    interference = G2.sum(axis=1) - np.diag(G2)
    sn = snr * n
    return np.log2(1 + sn / (1 + sn * interference))


def user_rate(k: int, channels, snr: float) -> float:
    """Rate of user ``k`` (0-based) given all channels and linear SNR."""
    if not snr > 0:
        raise ConfigError("SNR must be positive")
    if not 0 <= k < len(channels):
        raise IndexError(f"user {k} out of range")
    n = len(_as_vector(channels[k]))
    interference = sum(
        pairwise_correlation(channels[k], h) ** 2 for j, h in enumerate(channels) if j != k
    )
    return math.log2(1 + snr * n / (1 + snr * n * interference))


def sum_rate(channels, snr: float) -> float:
    H = np.array([_as_vector(h) for h in channels])
    return float(rates_from_correlation(correlation_matrix(H), snr, H.shape[1]).sum())


@dataclass(frozen=True)
class ArraySpec:
    kind: ArrayKind
    n: int | None = None
    aperture_m: float | None = None
    fc_ghz: float = 28.0
    spacing: str = "half-wavelength"

    def __post_init__(self):
        object.__setattr__(self, "kind", ArrayKind(self.kind))
        if (self.n is None) == (self.aperture_m is None):
            raise ConfigError("exactly one of n / aperture_m must be set")
        if self.spacing != "half-wavelength":
            raise ConfigError(f"unsupported spacing {self.spacing!r}")

    def build(self) -> ArrayGeometry:
        carrier = CarrierConfig.from_ghz(self.fc_ghz)
        if self.n is not None:
            make = make_ula if self.kind is ArrayKind.ULA else make_uca
            return make(self.n, carrier)
        make = ula_for_aperture if self.kind is ArrayKind.ULA else uca_for_aperture
        return make(self.aperture_m, carrier)


@dataclass(frozen=True)
class ScenarioConfig:
    """One Monte Carlo sum-rate experiment.

    ``range_bound`` is ``"ebrd"`` (EBRD at the best angle with the published
    alpha) or an explicit upper range in metres.
    """

    array: ArraySpec
    k: int = 50
    distribution: UEDistribution = UEDistribution.UNIFORM_2D
    range_bound: str | float = "ebrd"
    snr_db: tuple = tuple(range(0, 31, 5))
    trials: int = 200
    seed: int = 0
    elevation_only_phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "distribution", UEDistribution(self.distribution))
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        if self.k < 1:
            raise ConfigError("need at least one UE")
        if self.trials < 1:
            raise ConfigError("need at least one trial")
        if not self.snr_db:
            raise ConfigError("SNR grid is empty")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.range_bound != "ebrd":
            try:
                object.__setattr__(self, "range_bound", float(self.range_bound))
            except (TypeError, ValueError):
                raise ConfigError(f"range_bound must be 'ebrd' or metres, got {self.range_bound!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        d = dict(d)
        try:
            arr = dict(d.pop("array"))
        except KeyError:
            raise ConfigError("scenario is missing 'array'")
        known = {"k", "distribution", "range_bound", "snr_db", "trials", "seed", "elevation_only_phi"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown scenario keys: {sorted(extra)}")
        try:
            return cls(array=ArraySpec(**arr), **d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["array"]["kind"] = self.array.kind.value
        d["distribution"] = self.distribution.value
        d["snr_db"] = list(self.snr_db)
        return d

    def upper_range(self, g: ArrayGeometry) -> float:
        if self.range_bound != "ebrd":
            return self.range_bound
        best = math.pi / 2 if g.kind is ArrayKind.UCA else 0.0
        return ebrd(g, best, alpha_3db(g.kind))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def place_ues(config: ScenarioConfig, rng: np.random.Generator,
              geometry: ArrayGeometry | None = None) -> list[Position]:
    """Draw ``config.k`` UE positions with ranges uniform in [1.2 D, bound]."""
    g = geometry if geometry is not None else config.array.build()
    lo, hi = g.min_nf, config.upper_range(g)
    if not hi > lo:
        raise ConfigError(f"range bound {hi:.6g} m is inside the reactive limit 1.2*D = {lo:.6g} m")
    k = config.k
    r = rng.uniform(lo, hi, k)
    dist = config.distribution
    half = math.pi / 2
    if dist is UEDistribution.UNIFORM_2D:
        theta = rng.uniform(-half, half, k)
        phi = rng.uniform(-math.pi, math.pi, k)
    elif dist is UEDistribution.AZIMUTH_ONLY:
        theta = np.full(k, half)
        phi = rng.uniform(-math.pi, math.pi, k)
    elif dist is UEDistribution.ELEVATION_ONLY:
        theta = rng.uniform(-half, half, k)
        phi = np.full(k, config.elevation_only_phi)
    else:
        theta = np.full(k, half)
        phi = rng.uniform(-half, half, k)
    return [Position(*p) for p in zip(r, theta, phi)]


@dataclass(frozen=True, eq=False)
class SumRateResult:
    snr_db: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    trials: int
    samples: np.ndarray = field(repr=False)

    @property
    def ci_halfwidth(self) -> np.ndarray:
        return self.std / math.sqrt(self.trials)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("snr_db,mean_sumrate,std_sumrate,trials\n")
        for s, m, sd in zip(self.snr_db, self.mean, self.std):
            buf.write(f"{s:.12g},{m:.12g},{sd:.12g},{self.trials}\n")
        return buf.getvalue()


def run_trial(config: ScenarioConfig, g: ArrayGeometry, trial: int) -> np.ndarray:
    """Sum-rate at every grid SNR for one placement."""
    positions = place_ues(config, trial_rng(config.seed, trial), g)
    H = steering_matrix(g, positions, DistanceModel.EXACT)
    G = correlation_matrix(H)
    snrs = 10.0 ** (np.asarray(config.snr_db) / 10)
    return np.array([rates_from_correlation(G, s, g.n).sum() for s in snrs])


def run_scenario(config: ScenarioConfig) -> SumRateResult:
    """Monte Carlo mean sum-rate over ``config.trials`` independent placements.

    Each trial draws from its own stream derived from ``(seed, trial)`` and its
    placement is reused across the SNR grid.
    """
    g = config.array.build()
    samples = np.array([run_trial(config, g, t) for t in range(config.trials)])
    return SumRateResult(
        np.asarray(config.snr_db), samples.mean(axis=0), samples.std(axis=0),
        config.trials, samples,
    )
