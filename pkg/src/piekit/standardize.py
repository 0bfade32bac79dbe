"""Z-scoring with clip-at-zero for importance vectors and feature tables.

Both transforms subtract the mean, divide by the sample standard deviation
(divisor n-1, m-1 for importances) and then clip negatives to zero, so only
above-average values survive.  Exactly-constant data columns standardize to
all-zero and are flagged; a constant importance vector is an error because
no ranking can be derived from it.

Summation schemes are fixed for determinism: means and stds use NumPy's
pairwise reductions, the clip itself is element-wise.  Results do not depend
on thread count or evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import DegenerateError, ValidationError
from .tabular import FeatureImportance, ObservationTable


@dataclass(frozen=True, eq=False)
class StandardizationStats:
    """Fitted per-column means/stds plus the importance mean/std.

    ``beta_mean``/``beta_std`` stay None until an importance vector has been
    standardized against the same feature set.
    """

    column_names: tuple[str, ...]
    col_means: np.ndarray
    col_stds: np.ndarray
    beta_mean: float | None = None
    beta_std: float | None = None

    def __post_init__(self):
        names = tuple(str(c) for c in self.column_names)
        means = np.ascontiguousarray(self.col_means, dtype=np.float64)
        stds = np.ascontiguousarray(self.col_stds, dtype=np.float64)
        if means.ndim != 1 or stds.ndim != 1:
            raise ValidationError("col_means and col_stds must be 1-d vectors")
        if not (len(names) == means.shape[0] == stds.shape[0]):
            raise ValidationError("stats fields have inconsistent lengths")
        if not (np.isfinite(means).all() and np.isfinite(stds).all()):
            raise ValidationError("stats contain non-finite values")
        if (stds < 0).any():
            raise ValidationError("standard deviations must be non-negative")
        if self.beta_std is not None and self.beta_std < 0:
            raise ValidationError("beta_std must be non-negative")
        means.setflags(write=False)
        stds.setflags(write=False)
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "col_means", means)
        object.__setattr__(self, "col_stds", stds)

    @property
    def constant_columns(self) -> tuple[int, ...]:
        """Indices of columns with zero std, derived so it can never drift."""
        return tuple(int(k) for k in np.flatnonzero(self.col_stds == 0.0))

    def to_json_dict(self) -> dict:
        return {
            "column_names": list(self.column_names),
            "col_means": self.col_means.tolist(),
            "col_stds": self.col_stds.tolist(),
            "beta_mean": self.beta_mean,
            "beta_std": self.beta_std,
            "constant_columns": list(self.constant_columns),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "StandardizationStats":
        try:
            stats = cls(
                column_names=tuple(doc["column_names"]),
                col_means=np.array(doc["col_means"], dtype=np.float64),
                col_stds=np.array(doc["col_stds"], dtype=np.float64),
                beta_mean=doc["beta_mean"],
                beta_std=doc["beta_std"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed stats JSON: {exc}") from None
        stored = tuple(int(k) for k in doc.get("constant_columns", ()))
        if stored != stats.constant_columns:
            raise ValidationError(
                "stats JSON is inconsistent: constant_columns does not match col_stds"
            )
        return stats

    def with_beta(self, beta_mean: float, beta_std: float) -> "StandardizationStats":
        return replace(self, beta_mean=beta_mean, beta_std=beta_std)


def standardize_importance(imp: FeatureImportance):
    """Z-score and clip an importance vector.

    Returns ``(clipped, beta_mean, beta_std)``.  The input is not modified.
    """
    beta = imp.beta
    m = beta.shape[0]
    if m < 2:
        raise ValidationError(
            "standardizing an importance vector needs at least two features"
        )
    if np.all(beta == beta[0]):
        raise DegenerateError(
            "all importance values are equal; no feature ranking is derivable"
        )
    mean = float(np.mean(beta))
    std = float(np.std(beta, ddof=1))
    if std == 0.0:
        raise DegenerateError(
            "importance values have zero variance; no feature ranking is derivable"
        )
    z = (beta - mean) / std
    clipped = np.where(z > 0.0, z, 0.0)
    return clipped, mean, std


def standardize_columns(table: ObservationTable):
    """Fit per-column z-scoring on a table and return the clipped result.

    Returns ``(standardized_table, stats)``.  Exactly-constant columns are
    forced to std 0 (so they come out all-zero and flagged) rather than
    trusting the floating-point std of identical values.
    """
    if table.n_rows < 2:
        raise ValidationError("fitting standardization needs at least two rows")
    values = table.values
    constant = np.all(values == values[0:1, :], axis=0)
    means = np.mean(values, axis=0)
    stds = np.std(values, axis=0, ddof=1)
    if constant.any():
        means = np.where(constant, values[0], means)
        stds = np.where(constant, 0.0, stds)
    stats = StandardizationStats(table.column_names, means, stds)
    out = kernels.clip_standardize(values, stats.col_means, stats.col_stds)
    return ObservationTable(table.column_names, out, table.row_ids), stats


def apply_stats(table: ObservationTable, stats: StandardizationStats) -> ObservationTable:
    """Standardize-and-clip a table using previously fitted stats.

    New rows never alter the stats, and a single-row table is fine here;
    the two-row minimum applies only to fitting.
    """
    if table.column_names != stats.column_names:
        raise ValidationError(
            "table columns do not match the fitted stats: "
            f"table has {', '.join(table.column_names)}; "
            f"stats were fitted on {', '.join(stats.column_names)}"
        )
    out = kernels.clip_standardize(table.values, stats.col_means, stats.col_stds)
    return ObservationTable(table.column_names, out, table.row_ids)
