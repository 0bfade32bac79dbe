"""Per-observation influence weights and driver reports.

For each row the products of importance and feature value are normalized to
sum to one, and the heaviest features become that row's drivers.  Two entry
points exist: ``pie_standardized`` runs the full standardize-clip-normalize
pipeline (for importances from non-linear models), ``pie_raw`` normalizes the
raw products directly (for linear or tree models whose scale is already
meaningful).  Rows whose products are all zero get no driver and are flagged
degenerate instead of being dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ValidationError
from .standardize import StandardizationStats, standardize_columns, standardize_importance
from .tabular import FeatureImportance, ObservationTable, align


@dataclass(frozen=True, eq=False)
class InfluenceMatrix:
    """n x m weight matrix with per-row sums and activity flags.

    Active rows sum to 1 and hold weights in [0, 1]; inactive rows are all
    zero with sum 0.
    """

    weights: np.ndarray
    row_sums: np.ndarray
    active: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        s = np.asarray(self.row_sums, dtype=np.float64)
        a = np.asarray(self.active, dtype=bool)
        if w.ndim != 2 or s.shape != (w.shape[0],) or a.shape != (w.shape[0],):
            raise ValidationError("inconsistent influence matrix shapes")
        for arr in (w, s, a):
            arr.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "row_sums", s)
        object.__setattr__(self, "active", a)

    @property
    def n_rows(self) -> int:
        return self.weights.shape[0]

    @property
    def n_cols(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class RowDrivers:
    """Ranked drivers for one observation."""

    row: int
    row_id: str | None
    degenerate: bool
    top_driver: str | None
    ranked: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class PieReport:
    """Per-row driver report; degenerate rows carry no drivers."""

    rows: tuple[RowDrivers, ...]

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


def _check_names(infl: InfluenceMatrix, names, row_ids):
    names = tuple(names)
    if len(names) != infl.n_cols:
        raise ValidationError(
            f"{len(names)} column names for {infl.n_cols} weight columns"
        )
    if row_ids is not None and len(row_ids) != infl.n_rows:
        raise ValidationError(f"{len(row_ids)} row ids for {infl.n_rows} rows")
    return names


def influence_matrix(beta_std, x_std) -> InfluenceMatrix:
    """Build the influence matrix from clipped, standardized inputs.

    ``beta_std`` is the clipped standardized importance vector; ``x_std`` a
    clipped standardized table (ObservationTable or plain matrix).  Inputs
    must be non-negative; for raw-scale scoring use ``pie_raw``.
    """
    beta = np.asarray(beta_std, dtype=np.float64)
    x = x_std.values if isinstance(x_std, ObservationTable) else np.asarray(x_std, dtype=np.float64)
    if beta.ndim != 1 or x.ndim != 2:
        raise ValidationError("expected a 1-d importance vector and a 2-d table")
    if x.shape[1] != beta.shape[0]:
        raise ValidationError(
            f"importance length {beta.shape[0]} does not match table width {x.shape[1]}"
        )
    if (beta < 0).any() or (x < 0).any():
        raise ValidationError(
            "influence_matrix expects clipped (non-negative) inputs; "
            "use pie_raw for raw-scale values"
        )
    weights, sums, active = kernels.influence(beta, x)
    return InfluenceMatrix(weights, sums, active)


def pie_argmax(infl: InfluenceMatrix, names, row_ids=None) -> PieReport:
    """Report each active row's single top driver.

    The argmax is taken over the weights directly: rescaling a row by its
    positive sum cannot change which entry is largest.  Ties go to the
    smallest column index; inactive rows are flagged degenerate.
    """
    names = _check_names(infl, names, row_ids)
    top = np.argmax(infl.weights, axis=1)
    rows = []
    for i in range(infl.n_rows):
        rid = row_ids[i] if row_ids is not None else None
        if infl.active[i]:
            k = int(top[i])
            weight = float(infl.weights[i, k])
            rows.append(RowDrivers(i, rid, False, names[k], ((names[k], weight),)))
        else:
            rows.append(RowDrivers(i, rid, True, None, ()))
    return PieReport(tuple(rows))


def top_k_drivers(infl: InfluenceMatrix, names, k: int, row_ids=None) -> PieReport:
    """Report up to k drivers per row, heaviest first.

    Only strictly positive weights are listed; ties break toward the smaller
    column index.  Inactive rows are flagged degenerate with no drivers.
    """
    if k < 1:
        raise ValidationError("top_k must be at least 1")
    names = _check_names(infl, names, row_ids)
    order = np.argsort(-infl.weights, axis=1, kind="stable")
    rows = []
    for i in range(infl.n_rows):
        rid = row_ids[i] if row_ids is not None else None
        if not infl.active[i]:
            rows.append(RowDrivers(i, rid, True, None, ()))
            continue
        ranked = []
        for col in order[i]:
            weight = float(infl.weights[i, col])
            if weight <= 0.0 or len(ranked) == k:
                break
            ranked.append((names[col], weight))
        rows.append(RowDrivers(i, rid, False, ranked[0][0], tuple(ranked)))
    return PieReport(tuple(rows))


def pie_standardized(imp: FeatureImportance, table: ObservationTable, top_k: int = 1):
    """Full pipeline: align, standardize-and-clip both inputs, normalize, rank.

    Returns ``(report, influence, stats)`` where stats carry the fitted
    column means/stds plus the importance mean/std for later reuse.
    """
    imp = align(imp, table)
    beta_clipped, beta_mean, beta_std = standardize_importance(imp)
    x_clipped, stats = standardize_columns(table)
    stats = stats.with_beta(beta_mean, beta_std)
    infl = influence_matrix(beta_clipped, x_clipped)
    report = top_k_drivers(infl, table.column_names, top_k, table.row_ids)
    return report, infl, stats


def pie_raw(imp: FeatureImportance, table: ObservationTable, top_k: int = 1):
    """Raw-scale pipeline: products on the given values, negatives clipped.

    No standardization is applied; a negative product contributes nothing
    rather than dragging the row sum down.  Returns ``(report, influence)``.
    """
    imp = align(imp, table)
    weights, sums, active = kernels.influence(imp.beta, table.values)
    infl = InfluenceMatrix(weights, sums, active)
    report = top_k_drivers(infl, table.column_names, top_k, table.row_ids)
    return report, infl
