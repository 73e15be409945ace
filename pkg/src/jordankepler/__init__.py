"""Numerical kernels, blow-up geometry and verification suites for the
rectangular-matrix Jordan triple and its Kepler varieties."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    JordanKeplerError,
    OutOfChartError,
    RankMismatchError,
)
from .partitions import (
    EMPTY,
    E_mu,
    Partition,
    dim_P_mu,
    enumerate_partitions,
    log_gamma_lambda,
    num_syt,
    ones,
    pochhammer,
    schur_from_power_sums,
)
from .triples import (
    Tripotent,
    TripleSpace,
    bergman_apply,
    bergman_det,
    delta,
    inner,
    is_tripotent,
    jordan_det,
    matrix_rank,
    peirce_project,
    pseudo_inverse,
    quadratic_rep,
    random_tripotent,
    standard_tripotent,
    triple_product,
)
from .kernels import (
    CoefficientSequence,
    KernelSpec,
    kernel_coefficient,
    kernel_eval,
    normalized_kernel,
    q_kernel_eval,
    recover_coefficients,
    truncated_kernel_eval,
)
from .blowup import (
    BundleGerm,
    ChartPoint,
    CurvatureReport,
    bundle_metric,
    chart_inverse,
    curvature,
    embedding_check,
    sigma_c,
    theta_c,
    transition_germ,
)
from .measures import RadialMeasure, beta_integral_check, reproducing_property_check

__version__ = "0.1.0"
