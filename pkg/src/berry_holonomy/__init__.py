"""Non-abelian adiabatic geometry of a displaced-squeezed vacuum bundle.

Closed-form connection, curvature, wedge-square, and holonomy for the
isospectral family U(lam, mu) H0 U(lam, mu)+, with an independent
finite-difference oracle over the truncated number basis for every closed
expression.
"""
__version__ = "0.1.0"

from .connection import (
    ConnectionCoeffs,
    ConnectionMatrices,
    MaurerCartanCoeffs,
    berry_phase_diagonal,
    connection_closed,
    contract_one_form,
    derivative_identity_report,
)
from .curvature import (
    COMPONENT_KEYS,
    COMPONENT_NAMES,
    PLANE_TANGENTS,
    BasisMatrices,
    CurvatureForm,
    basis_matrices,
    contract_two_form,
    curvature_closed,
    curvature_from_components,
    curvature_span_dimension,
    f_squared,
    f_squared_from_wedge,
)
from .family import (
    Frame,
    GeneralizedPoint,
    ParameterPoint,
    Projector,
    classifying_projector,
    hamiltonian_h0,
    isospectral_check,
    unitary_u,
    unitary_u_generalized,
    vacuum_frame,
)
from .fock import (
    FockOperators,
    TruncatedOperator,
    TruncatedSpace,
    UnitaryOperator,
    bch_identity_report,
    displacement,
    exp_antihermitian,
    make_operators,
    squeeze,
)
from .holonomy import (
    HolonomyResult,
    LoopPath,
    holonomy_algebra_dimension,
    lambda_circle,
    parallel_transport,
    polygon_loop,
    small_loop_check,
    square_loop,
    transport,
)
from .lie import ClosureNotStabilized, numerical_rank, real_lie_closure, real_vector
from .numeric import (
    DifferentiationPlan,
    GeneralizedOracleConnection,
    OracleConnection,
    UnitaryCache,
    connection_numeric,
    convergence_report,
    curvature_numeric,
    default_dim,
    global_form_check,
    wirtinger_derivative,
)
from .reports import ConvergenceReport, IdentityReport, SpectrumReport, dump_json
