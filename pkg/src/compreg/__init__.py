"""Compositional regression toolkit.

Log-ratio transforms for simplex data, per-component maximum-likelihood
regression with Wald intervals, back-mapping of fits to proportions with
delta or bootstrap uncertainty, a seeded Monte Carlo study engine, and a
bundled volleyball match dataset.
"""

from . import errors
from .backmap import (
    ProportionEstimate,
    estimate_proportions,
    linear_predictors,
    proportion_ci_bootstrap,
    proportion_ci_delta,
)
from .composition import (
    Composition,
    LogRatioVector,
    alr,
    alr_inverse,
    closure,
)
from .ingest import (
    COMPONENT_LABELS,
    REF_LABEL,
    MatchRecord,
    MatchTable,
    load_bundled,
    parse_matches,
    serialize_matches,
    to_regression_dataset,
)
from .regress import (
    ComponentFit,
    ModelFit,
    ParameterInterval,
    RegressionDataset,
    SignificanceEntry,
    fit,
    fit_from_binary_summary,
    log_likelihood,
    significance_report,
    wald_ci,
)
from .simulate import (
    ParameterSummary,
    SimConfig,
    SimReport,
    comparison_table,
    generate_dataset,
    run_study,
    study_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "COMPONENT_LABELS",
    "ComponentFit",
    "Composition",
    "LogRatioVector",
    "MatchRecord",
    "MatchTable",
    "ModelFit",
    "ParameterInterval",
    "ParameterSummary",
    "ProportionEstimate",
    "REF_LABEL",
    "RegressionDataset",
    "SignificanceEntry",
    "SimConfig",
    "SimReport",
    "alr",
    "alr_inverse",
    "closure",
    "comparison_table",
    "errors",
    "estimate_proportions",
    "fit",
    "fit_from_binary_summary",
    "generate_dataset",
    "linear_predictors",
    "load_bundled",
    "log_likelihood",
    "parse_matches",
    "proportion_ci_bootstrap",
    "proportion_ci_delta",
    "run_study",
    "serialize_matches",
    "significance_report",
    "study_sweep",
    "to_regression_dataset",
    "wald_ci",
]
