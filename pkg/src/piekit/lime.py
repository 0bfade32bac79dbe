"""Local surrogate explanations and instance picking.

A desk-scale LIME-style baseline to put next to the influence-matrix
attributions: perturb one instance with per-feature Gaussian noise, weight
the samples by an exponential kernel on z-scored distance, pick K features
by forward stepwise selection, fit weighted least squares, and report the
surrogate weights.  ``submodular_pick`` then greedily chooses a budget of
instances whose explanations jointly cover the most important columns.

Everything is seeded and deterministic: row i of an explanation matrix uses
``seed + i``, so parallel and sequential evaluation agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PieReport
from .errors import DegenerateError, ValidationError
from .standardize import StandardizationStats
from .tabular import ObservationTable

WEIGHT_FLOOR = 1e-12


class LinearModel:
    """Black box ``f(z) = w . z + b`` with fixed weights, handy for tests."""

    def __init__(self, weights, intercept: float = 0.0):
        self.weights = np.asarray(weights, dtype=np.float64)
        if self.weights.ndim != 1:
            raise ValidationError("linear model weights must be a 1-d vector")
        self.intercept = float(intercept)

    def __call__(self, z) -> float:
        return float(np.dot(self.weights, np.asarray(z, dtype=np.float64)) + self.intercept)


class NearestRowModel:
    """Table-lookup black box: the score of the nearest stored row.

    Distance is Euclidean on z-scored coordinates so large-scale columns do
    not dominate; ties go to the earliest row.
    """

    def __init__(self, table: ObservationTable, scores, stats: StandardizationStats):
        scores = np.asarray(scores, dtype=np.float64)
        if scores.shape != (table.n_rows,):
            raise ValidationError("one score per table row is required")
        if table.column_names != stats.column_names:
            raise ValidationError("stats were fitted on different columns")
        self._stats = stats
        self._z = _zscores(table.values, stats)
        self._scores = scores

    def __call__(self, z) -> float:
        point = _zscores(np.asarray(z, dtype=np.float64)[np.newaxis, :], self._stats)
        d2 = ((self._z - point) ** 2).sum(axis=1)
        return float(self._scores[int(np.argmin(d2))])


@dataclass(frozen=True)
class LimeParams:
    """Sampling and selection parameters; ``kernel_width=None`` means
    the default 0.75 * sqrt(m)."""

    n_samples: int = 500
    k_features: int = 3
    kernel_width: float | None = None
    seed: int = 42

    def resolved_width(self, m: int) -> float:
        if self.kernel_width is None:
            return 0.75 * math.sqrt(m)
        return self.kernel_width


@dataclass(frozen=True)
class LocalExplanation:
    """Sparse linear surrogate for one instance, in z-scored coordinates."""

    row: int
    selected: tuple[str, ...]
    weights: tuple[float, ...]
    intercept: float
    samples_used: int
    kernel_width: float


@dataclass(frozen=True)
class PickResult:
    """Rows chosen by greedy coverage plus the coverage they achieve."""

    selected_rows: tuple[int, ...]
    coverage_score: float


def _zscores(values: np.ndarray, stats: StandardizationStats) -> np.ndarray:
    """Unclipped z-scores; constant columns map to 0."""
    safe = np.where(stats.col_stds > 0.0, stats.col_stds, 1.0)
    z = (values - stats.col_means) / safe
    if len(stats.constant_columns) > 0:
        z[:, stats.col_stds == 0.0] = 0.0
    return z


def _weighted_rss(design: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, float]:
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    resid = target - design @ coef
    return coef, float(resid @ resid)


def explain_instance(
    model,
    x,
    stats: StandardizationStats,
    *,
    n_samples: int = 500,
    k_features: int = 3,
    kernel_width: float | None = None,
    seed: int = 42,
    row: int = 0,
) -> LocalExplanation:
    """Fit a sparse local surrogate around one instance.

    Draws ``n_samples`` Gaussian perturbations with per-feature std taken
    from the fitted stats, weights them by ``exp(-d^2 / width^2)`` with d the
    z-scored distance to x, selects ``k_features`` by forward stepwise
    selection on weighted residual reduction, and fits weighted least squares
    on the selection.
    """
    x = np.asarray(x, dtype=np.float64)
    m = len(stats.column_names)
    if x.shape != (m,):
        raise ValidationError(f"instance has {x.shape} values; stats expect {m}")
    if not np.isfinite(x).all():
        raise ValidationError("instance contains non-finite values")
    if k_features < 1:
        raise ValidationError("k_features must be at least 1")
    if n_samples < k_features + 1:
        raise ValidationError(
            f"need at least k_features + 1 samples: {n_samples} < {k_features + 1}"
        )
    width = LimeParams(kernel_width=kernel_width).resolved_width(m)
    if not width > 0:
        raise ValidationError("kernel width must be positive")

    rng = np.random.default_rng(seed)
    samples = x + rng.standard_normal((n_samples, m)) * stats.col_stds

    z_samples = _zscores(samples, stats)
    z_x = _zscores(x[np.newaxis, :], stats)[0]
    d2 = ((z_samples - z_x) ** 2).sum(axis=1)
    pi = np.exp(-d2 / (width * width))
    if float(pi.max()) < WEIGHT_FLOOR:
        raise DegenerateError(
            f"all sample weights fell below {WEIGHT_FLOOR:g}; "
            "increase the kernel width"
        )

    fz = np.array([model(z) for z in samples], dtype=np.float64)
    if not np.isfinite(fz).all():
        raise ValidationError("black-box model returned a non-finite value")

    sw = np.sqrt(pi)
    target = fz * sw
    design_cols = z_samples * sw[:, np.newaxis]
    intercept_col = sw

    if k_features >= m:
        selected = list(range(m))
    else:
        selected: list[int] = []
        remaining = list(range(m))
        while len(selected) < k_features:
            best_j, best_rss = None, math.inf
            for j in remaining:
                trial = np.column_stack(
                    [intercept_col] + [design_cols[:, c] for c in selected + [j]]
                )
                _, rss = _weighted_rss(trial, target)
                if rss < best_rss:
                    best_j, best_rss = j, rss
            selected.append(best_j)
            remaining.remove(best_j)

    final = np.column_stack([intercept_col] + [design_cols[:, c] for c in selected])
    coef, _ = _weighted_rss(final, target)
    return LocalExplanation(
        row=row,
        selected=tuple(stats.column_names[j] for j in selected),
        weights=tuple(float(c) for c in coef[1:]),
        intercept=float(coef[0]),
        samples_used=n_samples,
        kernel_width=width,
    )


def explain_table(
    model, table: ObservationTable, stats: StandardizationStats, params: LimeParams = LimeParams()
) -> tuple[LocalExplanation, ...]:
    """Explain every table row; row i uses seed ``params.seed + i``."""
    return tuple(
        explain_instance(
            model,
            table.values[i],
            stats,
            n_samples=params.n_samples,
            k_features=params.k_features,
            kernel_width=params.kernel_width,
            seed=params.seed + i,
            row=i,
        )
        for i in range(table.n_rows)
    )


def scatter_explanations(explanations, column_names) -> np.ndarray:
    """Scatter per-row surrogate weights into a full-width matrix.

    Unselected features are exactly zero.
    """
    names = list(column_names)
    index = {name: j for j, name in enumerate(names)}
    out = np.zeros((len(explanations), len(names)))
    for i, expl in enumerate(explanations):
        for name, weight in zip(expl.selected, expl.weights):
            out[i, index[name]] = weight
    return out


def explanation_matrix(
    model, table: ObservationTable, stats: StandardizationStats, params: LimeParams = LimeParams()
) -> np.ndarray:
    """n x m surrogate-weight matrix, deterministic for a fixed seed."""
    return scatter_explanations(explain_table(model, table, stats, params), table.column_names)


def submodular_pick(expl_matrix, budget: int) -> PickResult:
    """Greedy weighted-coverage pick of at most ``budget`` rows.

    Column importance is ``sqrt(sum_i |W_ij|)``; a column counts as covered
    once any selected row touches it.  Rows are added by best marginal gain
    (ties to the smallest row index) until the budget is spent or no gain
    remains.
    """
    W = np.asarray(expl_matrix, dtype=np.float64)
    if W.ndim != 2:
        raise ValidationError("explanation matrix must be 2-d")
    if budget < 0:
        raise ValidationError("budget must be non-negative")
    n = W.shape[0]
    importance = np.sqrt(np.abs(W).sum(axis=0))
    nonzero = W != 0.0
    covered = np.zeros(W.shape[1], dtype=bool)
    selected: list[int] = []
    while len(selected) < min(budget, n):
        gains = (nonzero & ~covered) @ importance
        if selected:
            gains[np.array(selected)] = -1.0
        best = int(np.argmax(gains))
        if gains[best] <= 0.0:
            break
        selected.append(best)
        covered |= nonzero[best]
    return PickResult(tuple(selected), float(importance[covered].sum()))


@dataclass(frozen=True)
class RowAgreement:
    """Whether one row's top driver shows up in its surrogate explanation."""

    row: int
    top_driver: str | None
    in_selected: bool
    is_largest: bool


@dataclass(frozen=True)
class AgreementSummary:
    """How often the top driver lands in / leads the surrogate explanation.

    Fractions are over active rows; with no active rows both are 0.0.
    """

    top_in_selected: float
    top_is_largest: float
    n_active: int
    rows: tuple[RowAgreement, ...]


def compare_with_pie(report: PieReport, expl_matrix, column_names) -> AgreementSummary:
    """Score agreement between driver attributions and surrogate explanations."""
    W = np.asarray(expl_matrix, dtype=np.float64)
    if W.ndim != 2 or len(report) != W.shape[0]:
        raise ValidationError(
            f"report has {len(report)} rows but the explanation matrix has "
            f"{W.shape[0] if W.ndim == 2 else '?'}"
        )
    names = list(column_names)
    if len(names) != W.shape[1]:
        raise ValidationError("column names do not match the explanation matrix")
    index = {name: j for j, name in enumerate(names)}

    detail = []
    hits_selected = 0
    hits_largest = 0
    n_active = 0
    for entry in report:
        if entry.degenerate:
            detail.append(RowAgreement(entry.row, None, False, False))
            continue
        n_active += 1
        j = index[entry.top_driver]
        row = W[entry.row]
        magnitudes = np.abs(row)
        largest = int(np.argmax(magnitudes))
        in_selected = bool(row[j] != 0.0)
        is_largest = bool(magnitudes[largest] > 0.0) and largest == j
        hits_selected += in_selected
        hits_largest += is_largest
        detail.append(RowAgreement(entry.row, entry.top_driver, bool(in_selected), bool(is_largest)))
    return AgreementSummary(
        top_in_selected=hits_selected / n_active if n_active else 0.0,
        top_is_largest=hits_largest / n_active if n_active else 0.0,
        n_active=n_active,
        rows=tuple(detail),
    )
