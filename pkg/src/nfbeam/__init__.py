"""Near-field beamfocusing for uniform linear and circular arrays."""

__version__ = "0.1.0"

from .capacity import (
    ArraySpec,
    ScenarioConfig,
    SumRateResult,
    UEDistribution,
    mrt_precoder,
    pairwise_correlation,
    place_ues,
    run_scenario,
    user_rate,
)
from .channel import (
    ChannelVector,
    DistanceModel,
    Position,
    channel_vector,
    exact_element_distance,
    steering_vector,
    taylor_element_distance_uca,
)
from .errors import (
    BracketError,
    ConfigError,
    DegenerateError,
    DomainError,
    KindError,
    NearFieldError,
    NumericalError,
    ValidityError,
)
from .focus import (
    Alpha3dB,
    AlphaSource,
    BeamdepthResult,
    alpha_3db,
    beamdepth_closed,
    beamdepth_numeric,
    ebrd,
)
from .gain import (
    GainProfile,
    angle_gain,
    gain_profile,
    matched_gain,
    r_eff,
    uca_range_gain_closed,
    ula_range_gain_closed,
    zeta,
)
from .geometry import (
    ArrayGeometry,
    ArrayKind,
    CarrierConfig,
    element_positions,
    make_uca,
    make_ula,
    rayleigh_distance,
    uca_for_aperture,
    ula_for_aperture,
)
from .specfun import bessel_j0, find_root_bracketed, fresnel, sinc
