"""craut: exact graded automorphism algebras of model submanifolds."""

from .scalars import GaussianRational
from .poly import (
    HOL,
    REAL,
    Polynomial,
    VarTable,
    monomials_of_scaled_degree,
    weighted_degree,
)
from .exprs import ExprError, format_poly, format_scalar, parse_poly, parse_scalar
from .model import (
    CheckResult,
    Model,
    ModelError,
    NondegeneracyVerdict,
    NormalizationReport,
    QuadricData,
    QuadricError,
    coerce_matrix,
    holomorphic_nondegeneracy,
    new_model,
    quadric_from_matrices,
    quadric_matrices,
    quadric_nondegenerate,
    validate_normal_form,
)
from .fields import (
    VectorField,
    complex_tangency_residual,
    d_operator,
    euler_field,
    is_in_aut,
    last_block_translations,
    lie_bracket,
    normal_translation,
    tangency_residual,
)
from .grading import (
    AdMap,
    Ansatz,
    AutTable,
    DegenerateModelError,
    GradedBasis,
    GridError,
    InconclusiveTableError,
    IntegrationPreimage,
    JetReport,
    LinearSystem,
    ad_map,
    build_tangency_system,
    compute_G_mu,
    default_mu_max,
    enumerate_ansatz,
    integration_preimage,
    jet_report,
    mu0_search,
    solve_kernel,
)

__version__ = "0.1.0"
