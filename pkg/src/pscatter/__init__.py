"""Transmission through squeezed double-layer heterostructures.

Exact finite-width scattering, the three-scale squeezing limit towards a
``gamma * delta'`` point interaction, the resulting resonance sets and the
limiting transmission on them.
"""

from .errors import DomainError, NumericError, PoleError, ScatterError, UnsupportedRegion
from .oracle import PiecewisePotential, oracle_scatter
from .resonance import (
    FeasibilityVerdict,
    ResonanceSet,
    Root,
    enumerate_resonances,
    feasibility,
    general_resonance_residual,
    region_resonance_residual,
)
from .scattering import (
    DoubleLayerSystem,
    Layer,
    ScatteringAmplitudes,
    compose_interference,
    double_layer_composed,
    double_layer_exact,
    double_layer_uvd,
    layer_scattering,
    transfer_matrix,
    wave_numbers,
)
from .squeeze import (
    PROBES,
    RegionLabel,
    SqueezedSystem,
    SqueezeParametrization,
    amplitudes_from_gamma,
    asymptotic_uvd,
    check_delta_prime_convergence,
    classify_region,
    standard_probes,
    theta_limit,
    weak_pairing,
    zeta,
)
from .transmission import (
    ResonantTransmission,
    convergence_study,
    theta_squared,
    transmission_limit,
    transmission_vertex_c0,
)

__version__ = "0.1.0"

_SUBMODULES = {"errors", "oracle", "resonance", "scattering", "squeeze", "transmission"}
__all__ = sorted(n for n in dir() if not n.startswith("_") and n not in _SUBMODULES)
