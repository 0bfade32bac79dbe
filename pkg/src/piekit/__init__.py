"""piekit: per-observation key-driver attribution for tabular data.

Given a table of observations and a global importance weight per feature,
piekit standardizes both, clips negative parts at zero, and normalizes the
per-row products into influence weights that sum to one.  The top-weighted
feature is that row's key driver.  The package also ships importance
estimators (least squares and correlation), a perturbation-based local
surrogate baseline with greedy representative-row selection, and a CLI.
"""

from .core import (
    InfluenceMatrix,
    PieReport,
    RowDrivers,
    influence_matrix,
    pie_argmax,
    pie_raw,
    pie_standardized,
    top_k_drivers,
)
from .errors import DegenerateError, PiekitError, ValidationError
from .importance import (
    LabeledTable,
    correlation_importance,
    extract_target,
    ols_importance,
)
from .kernels import BACKEND
from .lime import (
    AgreementSummary,
    LimeParams,
    LinearModel,
    LocalExplanation,
    NearestRowModel,
    PickResult,
    compare_with_pie,
    explain_instance,
    explain_table,
    explanation_matrix,
    scatter_explanations,
    submodular_pick,
)
from .standardize import (
    StandardizationStats,
    apply_stats,
    standardize_columns,
    standardize_importance,
)
from .tabular import (
    FeatureImportance,
    ObservationTable,
    align,
    load_importance,
    load_table,
    write_importance,
    write_table,
)

__version__ = "0.1.0"

__all__ = [
    "AgreementSummary",
    "BACKEND",
    "DegenerateError",
    "FeatureImportance",
    "InfluenceMatrix",
    "LabeledTable",
    "LimeParams",
    "LinearModel",
    "LocalExplanation",
    "NearestRowModel",
    "ObservationTable",
    "PickResult",
    "PieReport",
    "PiekitError",
    "RowDrivers",
    "StandardizationStats",
    "ValidationError",
    "align",
    "apply_stats",
    "compare_with_pie",
    "correlation_importance",
    "explain_instance",
    "explain_table",
    "explanation_matrix",
    "extract_target",
    "influence_matrix",
    "load_importance",
    "load_table",
    "ols_importance",
    "pie_argmax",
    "pie_raw",
    "pie_standardized",
    "scatter_explanations",
    "standardize_columns",
    "standardize_importance",
    "submodular_pick",
    "top_k_drivers",
    "write_importance",
    "write_table",
    "__version__",
]
