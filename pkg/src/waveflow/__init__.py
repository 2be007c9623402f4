"""waveflow: a polarization-qubit open-system simulator on coupled
waveguide arrays.

The photon's polarization is the open system, its path through the array
the environment. The package builds the joint Hamiltonians, evolves
product inputs exactly, tracks how the distinguishability of test-state
pairs flows between system and environment, witnesses information
backflow, and searches rotation-equipped arrays for full state transfer.
"""

__version__ = "0.1.0"

from .analysis import (
    BlpResult,
    ExtremalCurves,
    SearchBounds,
    SwapReport,
    SwapSearchResult,
    blp_measure,
    build_generalized_swap,
    extremal_pairs,
    fibonacci_directions,
    search_swap_config,
    swap_scan,
    transfer_score_curve,
)
from .dynamics import (
    InfoFlowRecord,
    Propagator,
    closed_form_distances,
    evolve,
    gamma,
    gamma_sweep,
    intensity_profile,
    joint_product_ket,
    reduced_environment,
    reduced_system,
    simulate_pair,
)
from .errors import (
    ConfigInvalid,
    ConfigParseError,
    ConvergenceFailure,
    DimensionMismatch,
    EmptyCurve,
    InvalidGamma,
    NonDiagonalConfig,
    NonHermitianInput,
    NonMonotoneTimeGrid,
    NonOrthogonalEnvPair,
    NonPhysicalBloch,
    WaveflowError,
)
from .linalg import (
    Eigensystem,
    expi,
    hermitian_eig,
    partial_trace,
    tensor,
    trace_norm,
)
from .model import ArrayConfig, build_h0, build_h1, effective_env_generator
from .presets import FIVEWG_REFERENCE, SWAP_TRANSFER, named_configs
from .quantum import (
    PureQubitState,
    TestStatePair,
    angles_to_bloch,
    bloch_to_density,
    center_guide_ket,
    density_to_bloch,
    env_ket,
    guide_ket,
    pair_from_direction,
    standard_test_pairs,
    trace_distance,
)

__all__ = [
    "__version__",
    "ArrayConfig",
    "BlpResult",
    "ConfigInvalid",
    "ConfigParseError",
    "ConvergenceFailure",
    "DimensionMismatch",
    "Eigensystem",
    "EmptyCurve",
    "ExtremalCurves",
    "FIVEWG_REFERENCE",
    "InfoFlowRecord",
    "InvalidGamma",
    "NonDiagonalConfig",
    "NonHermitianInput",
    "NonMonotoneTimeGrid",
    "NonOrthogonalEnvPair",
    "NonPhysicalBloch",
    "Propagator",
    "PureQubitState",
    "SWAP_TRANSFER",
    "SearchBounds",
    "SwapReport",
    "SwapSearchResult",
    "TestStatePair",
    "WaveflowError",
    "angles_to_bloch",
    "blp_measure",
    "bloch_to_density",
    "build_generalized_swap",
    "build_h0",
    "build_h1",
    "center_guide_ket",
    "closed_form_distances",
    "density_to_bloch",
    "effective_env_generator",
    "env_ket",
    "evolve",
    "expi",
    "extremal_pairs",
    "fibonacci_directions",
    "gamma",
    "gamma_sweep",
    "guide_ket",
    "hermitian_eig",
    "intensity_profile",
    "joint_product_ket",
    "named_configs",
    "pair_from_direction",
    "partial_trace",
    "reduced_environment",
    "reduced_system",
    "search_swap_config",
    "simulate_pair",
    "standard_test_pairs",
    "swap_scan",
    "tensor",
    "trace_distance",
    "trace_norm",
    "transfer_score_curve",
]
