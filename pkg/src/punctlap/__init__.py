"""punctlap: point-interaction Laplacians on R^n minus a point.

Numerical library for the computable content of the theory: Bessel
potentials and Macdonald functions, singular Sobolev decompositions and
their classification predicates, the point-interaction operator family
A_beta, its explicit three-dimensional heat kernel, and Monte Carlo
simulation of the boundary-noise heat equation.
"""

from .errors import (
    ContractViolationError,
    DomainError,
    EvaluationError,
    NonConvergenceError,
    PoleError,
    PunctlapError,
    SingularityError,
)
from .quad import DEFAULT_SPEC, QuadratureSpec, QuadResult, integrate_finite, integrate_halfline, integrate_radial
from .specfun import (
    KernelValue,
    Point,
    bessel_potential,
    bessel_potential_radial,
    bessel_potential_scaled,
    grad_bessel_potential,
    grad_bessel_potential_norm,
    heat_kernel_free,
    heat_kernel_free_radial,
    macdonald_k,
)
from .sobolev import (
    CaseTag,
    OneDBoundaryData,
    RepresentationCase,
    SingularDecomposition,
    SpaceContext,
    ZeroTraceCase,
    classify,
    decompose_1d,
    extract_c0_by_limit,
    extract_f0,
    recompose_1d,
    scaled_potential_decomposition,
    scaling_shift,
    tau_beta,
    tau_beta_lambda_convert,
)
from .operators import (
    EigenPair,
    PointInteraction,
    alpha_from_beta,
    apply_A_beta,
    beta_from_alpha,
    domain_membership,
    eigenvalue,
    green_form,
    resolvent_apply,
    resolvent_coefficient,
)
from .heatkernel import (
    HeatKernelQuery,
    c_lower_bound,
    heat_kernel_beta,
    r_beta,
    semigroup_apply,
)
from .spde import (
    PathEnsemble,
    SimulationConfig,
    WellPosednessReport,
    covariance,
    limiting_covariance,
    simulate,
    variance_oracle,
    wellposedness_report,
)

__version__ = "0.1.0"
