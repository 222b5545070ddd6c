"""Type-II SPDC in a finite birefringent crystal: eigen modes, phase matching,
two-photon states and polarization correlations checked against a Fock-space
oracle.
"""

from .correlation import (
    CorrelationOracle,
    CorrelationScan,
    chsh_parameter,
    coincidence_closed,
    fit_sin2,
    gamma_offset,
    same_beam_closed,
    scan,
)
from .crystal import (
    CrystalConfig,
    kz_extraordinary,
    kz_ordinary,
    mirror_kx_e,
    polarization_vector,
    slope_coefficients,
)
from .errors import (
    ConfigError,
    DegenerateConstraint,
    EvanescentMode,
    NoConvergence,
    NoPhaseMatch,
    PhysicsDomainError,
    SPDCError,
)
from .estimator import CorrelationEstimator
from .modes import build_internal_mode, mode_inner_product, standing_wavenumber
from .phasematch import DegenerateGeometry, matrix_element, parity_coefficient, solve_degenerate_kyd
from .state import (
    PumpBeam,
    TwoPhotonState,
    build_degenerate_pair_state,
    build_state_gaussian,
    build_state_planewave,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CorrelationEstimator",
    "CorrelationOracle",
    "CorrelationScan",
    "CrystalConfig",
    "DegenerateConstraint",
    "DegenerateGeometry",
    "EvanescentMode",
    "NoConvergence",
    "NoPhaseMatch",
    "PhysicsDomainError",
    "PumpBeam",
    "SPDCError",
    "TwoPhotonState",
    "build_degenerate_pair_state",
    "build_internal_mode",
    "build_state_gaussian",
    "build_state_planewave",
    "chsh_parameter",
    "coincidence_closed",
    "fit_sin2",
    "gamma_offset",
    "kz_extraordinary",
    "kz_ordinary",
    "matrix_element",
    "mirror_kx_e",
    "mode_inner_product",
    "parity_coefficient",
    "polarization_vector",
    "same_beam_closed",
    "scan",
    "slope_coefficients",
    "solve_degenerate_kyd",
    "standing_wavenumber",
]
