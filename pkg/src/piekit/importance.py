"""Built-in feature-importance estimators for labeled tables.

These are conveniences for users without an external model: a least-squares
fit on z-scored features (coefficients comparable across features) and an
absolute-Pearson-correlation score.  Externally estimated importances remain
the primary path; anything a model produces can be fed in through the
importance CSV.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, ValidationError
from .tabular import FeatureImportance, ObservationTable

# reject near-singular normal matrices well before the solution turns to noise
MAX_CONDITION = 1e8


@dataclass(frozen=True, eq=False)
class LabeledTable:
    """Feature table plus one numeric target per row."""

    features: ObservationTable
    target: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.target, dtype=np.float64)
        if y.ndim != 1:
            raise ValidationError("target must be a 1-d vector")
        if y.shape[0] != self.features.n_rows:
            raise ValidationError(
                f"{y.shape[0]} target values for {self.features.n_rows} rows"
            )
        if not np.isfinite(y).all():
            raise ValidationError("target contains non-finite values")
        y = np.ascontiguousarray(y)
        y.setflags(write=False)
        object.__setattr__(self, "target", y)


def extract_target(table: ObservationTable, target: str) -> LabeledTable:
    """Split a loaded table into features plus the named target column."""
    if target not in table.column_names:
        raise ValidationError(f"target column '{target}' not found in the table")
    j = table.column_names.index(target)
    names = table.column_names[:j] + table.column_names[j + 1:]
    if not names:
        raise ValidationError("table has no feature columns besides the target")
    values = np.delete(table.values, j, axis=1)
    return LabeledTable(ObservationTable(names, values, table.row_ids), table.values[:, j])


def _constant_columns(values: np.ndarray) -> list[int]:
    return [int(k) for k in np.flatnonzero(np.all(values == values[0:1, :], axis=0))]


def ols_importance(data: LabeledTable) -> FeatureImportance:
    """Least-squares importances on z-scored features.

    Fits the target on z-scored features plus an intercept via the normal
    equations, rejecting designs whose normal-matrix condition estimate
    exceeds MAX_CONDITION.  The intercept is discarded; the returned
    coefficients are standardized betas, comparable across features.
    """
    X = data.features.values
    y = data.target
    names = data.features.column_names
    n, m = X.shape
    if n <= m:
        raise ValidationError(
            f"least-squares fit needs more rows than features: n={n}, m={m}"
        )
    if np.all(y == y[0]):
        raise DegenerateError("target is constant; nothing to estimate")
    constant = _constant_columns(X)
    if constant:
        raise DegenerateError(
            "constant feature columns cannot be ranked: "
            + ", ".join(names[k] for k in constant)
        )
    z = (X - np.mean(X, axis=0)) / np.std(X, axis=0, ddof=1)
    design = np.column_stack([np.ones(n), z])
    normal = design.T @ design
    rhs = design.T @ y
    singular = np.linalg.svd(normal, compute_uv=False)
    cond = float(singular[0] / singular[-1]) if singular[-1] > 0 else np.inf
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise DegenerateError(
            f"near-collinear design (condition estimate {cond:.3g} > {MAX_CONDITION:g}); "
            "columns involved: " + ", ".join(_collinear_columns(normal, names))
        )
    coef = np.linalg.solve(normal, rhs)
    return FeatureImportance(names, coef[1:])


def _collinear_columns(normal: np.ndarray, names) -> list[str]:
    """Names with weight in the normal matrix's smallest singular direction."""
    _, _, vt = np.linalg.svd(normal)
    v = np.abs(vt[-1][1:])  # drop the intercept component
    involved = v > 0.1 * v.max() if v.max() > 0 else np.zeros_like(v, dtype=bool)
    return [names[k] for k in np.flatnonzero(involved)]


def correlation_importance(data: LabeledTable) -> FeatureImportance:
    """Absolute Pearson correlation of each feature with the target."""
    X = data.features.values
    y = data.target
    names = data.features.column_names
    if np.all(y == y[0]):
        raise DegenerateError("target is constant; correlations are undefined")
    constant = _constant_columns(X)
    if constant:
        raise DegenerateError(
            "constant feature columns have undefined correlation: "
            + ", ".join(names[k] for k in constant)
        )
    xc = X - np.mean(X, axis=0)
    yc = y - np.mean(y)
    den = np.sqrt(np.sum(xc * xc, axis=0) * np.sum(yc * yc))
    if (den == 0.0).any():
        raise DegenerateError("zero variance encountered while correlating")
    beta = np.abs(xc.T @ yc) / den
    return FeatureImportance(names, np.minimum(beta, 1.0))
