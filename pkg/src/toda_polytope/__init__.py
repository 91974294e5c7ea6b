"""Toda-flow slices of symmetric matrices and their spectral polytopes."""

from .bfr import bfr, bfr_jacobian, forward, invert_bfr
from .errors import *  # noqa: F401,F403
from .flow import (
    integrate_toda_ode,
    normalize_direction,
    partial_trace,
    partial_trace_rate,
    toda_action,
    toda_action_derivative_at_zero,
    toda_ode_rhs,
    toda_trajectory,
)
from .linalg import (
    QrFactors,
    SpectralPair,
    apply_spectral_function,
    pi_skew,
    pi_upper,
    qr_pos,
    qr_q_derivative,
    reconstruct,
    sym_eig,
)
from .polytope import (
    HalfSpace,
    SpectralPolytope,
    accessible_vertices,
    contains,
    extremal_vertex,
    is_spectrally_complete,
    jacobi_from_spectral_data,
    spectral_polytope,
    vertices_from_halfspaces,
)
from .sieve import (
    OrderedPartition,
    SievedDecomposition,
    boundary_limit,
    flow_limit,
    j_of_i,
    partition_from_direction,
    sieve,
)

__version__ = "0.1.0"
