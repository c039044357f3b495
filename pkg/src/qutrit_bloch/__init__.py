"""Qutrit states as three coupled Bloch vectors, with validity checks and dynamics."""

from .basis import (
    GENERATORS,
    GeneratorId,
    basis_operator,
    commutator_table,
    cyclic_triples,
    spin1_matrices,
    countertwisting_identities,
)
from .bloch import (
    QutritCoefficients,
    bloch_triple,
    decompose,
    derived_geometry,
    det_formula,
    purity,
    radii,
    reconstruct,
)
from .dynamics import evolve, radius_oscillation_fit, trajectory
from .linalg import determinant, eigenvalues_hermitian, matrix_exp_unitary, principal_minor, trace_inner
from .qudit import QuditCoefficients, decompose_qudit, necessary_conditions, reconstruct_qudit, subspace_bloch_vectors
from .validity import (
    all_phi_valid,
    boundary_phase_constraint,
    check_constraints,
    is_valid_state,
    orthogonal_pure_mixed,
    orthogonal_pure_pure,
    sample_valid,
)

__version__ = "0.1.0"
