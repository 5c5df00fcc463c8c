"""Self-paced learning solvers with majorization-minimization convergence certificates."""

from splcert._core import (
    ArmijoConfig,
    CertificationReport,
    CheckResult,
    ConditionReport,
    Dataset,
    DescentMode,
    ErrorSchedule,
    GeneratedData,
    GeneratorSpec,
    InnerMethod,
    InnerSolverConfig,
    IterateTrace,
    LossKind,
    Problem,
    Regularizer,
    RegularizerKind,
    SolverConfig,
    SolverScheme,
    TraceRow,
    aos_solve,
    certify_criticality,
    certify_descent,
    certify_equivalence,
    certify_level_set,
    certify_lsc_limit,
    certify_majorization,
    check_sp_conditions,
    generate,
    inexact_mm_solve,
    mm_solve,
    normalize_binary_labels,
    param_step,
    percentile,
    weight_step,
)

__version__ = "0.1.0"

__all__ = [
    "ArmijoConfig",
    "CertificationReport",
    "CheckResult",
    "ConditionReport",
    "Dataset",
    "DescentMode",
    "ErrorSchedule",
    "GeneratedData",
    "GeneratorSpec",
    "InnerMethod",
    "InnerSolverConfig",
    "IterateTrace",
    "LossKind",
    "Problem",
    "Regularizer",
    "RegularizerKind",
    "SolverConfig",
    "SolverScheme",
    "TraceRow",
    "aos_solve",
    "certify_criticality",
    "certify_descent",
    "certify_equivalence",
    "certify_level_set",
    "certify_lsc_limit",
    "certify_majorization",
    "check_sp_conditions",
    "generate",
    "inexact_mm_solve",
    "mm_solve",
    "normalize_binary_labels",
    "param_step",
    "percentile",
    "weight_step",
]
