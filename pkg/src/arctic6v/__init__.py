"""Six-vertex model with domain wall boundaries.

Exact enumeration, free-fermion Hankel-determinant emptiness probabilities,
triple-Penner saddle-point asymptotics with the arctic ellipse, and a
Metropolis corner-flip sampler.
"""

from .model import (
    EDGES_BY_TYPE,
    TYPE_BY_EDGES,
    VERTEX_TYPES,
    Phase,
    VertexWeights,
    classify_phase,
    delta,
    weights_from_spectral,
    weights_from_tau,
)
from .enumeration import (
    Configuration,
    SizeLimitError,
    boundary_correlation,
    config_weight,
    efp_brute,
    efp_table,
    enumerate_dwbc,
    generating_coeffs,
    partition_function,
)
from .hankel import (
    contour_identity,
    det_fraction_free,
    efp_exact,
    generating_closed,
    generating_coeffs_exact,
    identity_matrix,
    moment,
    moment_sequence,
)
from .penner import (
    ArcticCurve,
    BranchCutError,
    ChargeCollisionError,
    ConvergenceError,
    SaddleConfiguration,
    ScaledPoint,
    action_coeffs,
    arctic_implicit,
    arctic_y_of_x,
    condensation_discriminant,
    contact_points,
    decoupled_residual,
    decoupled_saddle,
    diffeq_residual,
    efp_limit_step,
    green_asymptotic,
    green_finite,
    is_frozen_nw,
    omega_moment,
    radicand_coeffs,
    solve_decoupled,
    solve_equilibrium,
    spe_residual,
    tilde_coeffs,
)
from .sampler import (
    MarkovState,
    config_code_series,
    config_histogram,
    edges_from_types,
    encode_types,
    estimate_efp,
    init_extremal,
    propose,
    sample_efp_table,
    sweep,
    to_configuration,
)

__version__ = "0.1.0"
