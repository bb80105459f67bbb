"""Common fixed points of commuting map pairs on cone metric spaces."""

from .errors import (
    ConefixError,
    DimensionMismatchError,
    DomainError,
    ParameterError,
    PreimageError,
    ScenarioError,
)
from .cones import (
    Cone,
    Euclidean,
    MaxNorm,
    Norm,
    NormalConstantEstimate,
    Orthant,
    Polyhedral,
    SecondOrder,
    Weighted,
    analytic_normal_constant,
    cone_contains,
    cone_interior_contains,
    estimate_normal_constant,
    margin,
    norm_value,
    partial_leq,
    strictly_less,
)
from .spaces import (
    AxiomReport,
    AxiomViolation,
    ConeMetricSpace,
    Continuous,
    FinitePoints,
    InducedMetric,
    TableMetric,
    cauchy_ratio_profile,
    check_convergence,
    distance,
    distance_norm,
    verify_axioms,
)
from .maps import (
    Affine,
    CommuteReport,
    FiniteTable,
    MapSpec,
    RangeReport,
    ScalarRational,
    apply_map,
    check_commuting,
    check_range_inclusion,
    t_preimage,
)
from .conditions import (
    Chatterjea,
    ConditionSpec,
    CrossWeakContraction,
    FitResult,
    Jungck,
    Kannan,
    SinghContraction,
    ViolationReport,
    WeakContraction,
    WorstPair,
    Zamfirescu,
    ZamfirescuMax,
    alpha_from_singh,
    check_condition,
    contraction_factor,
    cross_weak_witness_from,
    delta_from_gz0,
    fit_minimal_constants,
    gwc_witness_from,
    gz0_to_maxform,
    maxform_to_gz0,
    singh_rate,
    zamfirescu_rate,
)
from .solver import (
    Certificate,
    IterationTrace,
    a_priori_bound,
    certify_common_fixed_point,
    jungck_iterate,
    uniqueness_probe,
)
from .oracle import (
    ExactConstant,
    FiniteInstance,
    enumerate_common_fixed_points,
    exact_minimal_constant,
    exhaustive_certify,
    random_finite_instance,
)
from .scenario import Scenario, load_scenario, scenario_from_dict

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "AxiomReport",
    "AxiomViolation",
    "Certificate",
    "Chatterjea",
    "CommuteReport",
    "Cone",
    "ConeMetricSpace",
    "ConditionSpec",
    "ConefixError",
    "Continuous",
    "CrossWeakContraction",
    "DimensionMismatchError",
    "DomainError",
    "Euclidean",
    "ExactConstant",
    "FiniteInstance",
    "FinitePoints",
    "FiniteTable",
    "FitResult",
    "InducedMetric",
    "IterationTrace",
    "Jungck",
    "Kannan",
    "MapSpec",
    "MaxNorm",
    "Norm",
    "NormalConstantEstimate",
    "Orthant",
    "ParameterError",
    "Polyhedral",
    "PreimageError",
    "RangeReport",
    "ScalarRational",
    "Scenario",
    "ScenarioError",
    "SecondOrder",
    "SinghContraction",
    "TableMetric",
    "ViolationReport",
    "WeakContraction",
    "Weighted",
    "WorstPair",
    "Zamfirescu",
    "ZamfirescuMax",
    "a_priori_bound",
    "alpha_from_singh",
    "analytic_normal_constant",
    "apply_map",
    "cauchy_ratio_profile",
    "certify_common_fixed_point",
    "check_commuting",
    "check_condition",
    "check_convergence",
    "check_range_inclusion",
    "cone_contains",
    "cone_interior_contains",
    "contraction_factor",
    "cross_weak_witness_from",
    "delta_from_gz0",
    "distance",
    "distance_norm",
    "enumerate_common_fixed_points",
    "estimate_normal_constant",
    "exact_minimal_constant",
    "exhaustive_certify",
    "fit_minimal_constants",
    "gwc_witness_from",
    "gz0_to_maxform",
    "jungck_iterate",
    "load_scenario",
    "margin",
    "maxform_to_gz0",
    "norm_value",
    "partial_leq",
    "random_finite_instance",
    "scenario_from_dict",
    "singh_rate",
    "strictly_less",
    "t_preimage",
    "uniqueness_probe",
    "verify_axioms",
    "zamfirescu_rate",
]
