"""Tests for z-scoring with clip-at-zero, checked against loop oracles."""

import numpy as np
import pytest

from piekit import (
    DegenerateError,
    FeatureImportance,
    ObservationTable,
    StandardizationStats,
    ValidationError,
    apply_stats,
    standardize_columns,
    standardize_importance,
)
from oracles import oracle_standardize_beta, oracle_standardize_columns


def make_table(rows, names=None):
    rows = np.asarray(rows, dtype=np.float64)
    if names is None:
        names = tuple(f"c{j}" for j in range(rows.shape[1]))
    return ObservationTable(tuple(names), rows)


def test_importance_example():
    imp = FeatureImportance(("a", "b", "c"), np.array([1.0, 2.0, 3.0]))
    clipped, mean, std = standardize_importance(imp)
    assert mean == 2.0 and std == 1.0
    assert clipped.tolist() == [0.0, 0.0, 1.0]


def test_importance_matches_oracle():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = rng.integers(2, 25)
        beta = rng.standard_normal(m) * rng.uniform(0.1, 50)
        expected = oracle_standardize_beta(beta.tolist())
        imp = FeatureImportance(tuple(f"f{j}" for j in range(m)), beta)
        if expected is None:
            with pytest.raises(DegenerateError):
                standardize_importance(imp)
            continue
        clipped, _, _ = standardize_importance(imp)
        assert np.allclose(clipped, expected, rtol=0, atol=1e-12)


def test_importance_constant_is_degenerate():
    imp = FeatureImportance(("a", "b"), np.array([4.0, 4.0]))
    with pytest.raises(DegenerateError, match="equal"):
        standardize_importance(imp)


def test_importance_single_feature_rejected():
    imp = FeatureImportance(("a",), np.array([1.0]))
    with pytest.raises(ValidationError, match="at least two features"):
        standardize_importance(imp)


def test_columns_match_oracle():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(2, 60))
        m = int(rng.integers(1, 8))
        values = rng.standard_normal((n, m)) * 10
        if rng.random() < 0.3:
            values[:, 0] = 7.5  # plant a constant column
        table = make_table(values)
        out, stats = standardize_columns(table)
        expected = oracle_standardize_columns(values.tolist())
        assert np.allclose(out.values, expected, rtol=0, atol=1e-12)
        assert (out.values >= 0).all()
        assert stats.col_means.shape == (m,)


def test_constant_column_flagged_and_zeroed():
    table = make_table([[1.0, 5.0], [1.0, 6.0], [1.0, 7.0]])
    out, stats = standardize_columns(table)
    assert stats.constant_columns == (0,)
    assert stats.col_stds[0] == 0.0
    assert stats.col_means[0] == 1.0
    assert (out.values[:, 0] == 0.0).all()
    assert out.values[:, 1].max() > 0


def test_near_constant_column_is_not_forced_to_zero():
    # values differ in the last bit, so the column is genuinely non-constant
    base = 1.0
    eps = np.nextafter(1.0, 2.0) - 1.0
    table = make_table([[base], [base + eps], [base]])
    _, stats = standardize_columns(table)
    assert stats.constant_columns == ()
    assert stats.col_stds[0] > 0.0


def test_unclipped_zscores_have_unit_moments():
    rng = np.random.default_rng(31)
    values = rng.standard_normal((40, 5)) * rng.uniform(0.5, 20, size=5) + 3.0
    _, stats = standardize_columns(make_table(values))
    z = (values - stats.col_means) / stats.col_stds
    assert np.abs(z.mean(axis=0)).max() < 1e-9
    assert np.abs(z.std(axis=0, ddof=1) - 1.0).max() < 1e-9


def test_affine_rescaling_leaves_clipped_columns_unchanged():
    rng = np.random.default_rng(43)
    values = rng.standard_normal((25, 3))
    base, _ = standardize_columns(make_table(values))
    scaled, _ = standardize_columns(make_table(values * np.array([2.0, 0.5, 7.0]) - 4.0))
    assert np.allclose(base.values, scaled.values, rtol=0, atol=1e-9)


def test_sign_flip_swaps_clipped_regions():
    rng = np.random.default_rng(47)
    values = rng.standard_normal((30, 1))
    flipped = -values
    pos, stats = standardize_columns(make_table(values))
    neg, _ = standardize_columns(make_table(flipped))
    z = (values[:, 0] - stats.col_means[0]) / stats.col_stds[0]
    # where z > 0 the flipped column clips to 0, and vice versa
    assert (neg.values[z > 0, 0] == 0.0).all()
    assert (pos.values[z < 0, 0] == 0.0).all()
    assert np.allclose(neg.values[z < 0, 0], -z[z < 0], atol=1e-9)


def test_single_row_fit_rejected():
    with pytest.raises(ValidationError, match="at least two rows"):
        standardize_columns(make_table([[1.0, 2.0]]))


def test_apply_stats_accepts_single_row():
    fit_table = make_table([[0.0, 10.0], [2.0, 20.0], [4.0, 30.0]])
    _, stats = standardize_columns(fit_table)
    new = make_table([[3.0, 15.0]])
    out = apply_stats(new, stats)
    assert out.values.shape == (1, 2)
    assert out.values[0, 0] == pytest.approx((3.0 - 2.0) / 2.0)
    assert out.values[0, 1] == 0.0  # below the fitted mean, clipped


def test_apply_stats_rejects_mismatched_columns():
    _, stats = standardize_columns(make_table([[1.0], [2.0]], names=("a",)))
    other = make_table([[1.0], [2.0]], names=("b",))
    with pytest.raises(ValidationError, match="do not match"):
        apply_stats(other, stats)


def test_apply_stats_equals_fit_transform():
    rng = np.random.default_rng(19)
    values = rng.standard_normal((20, 4))
    table = make_table(values)
    fitted, stats = standardize_columns(table)
    applied = apply_stats(table, stats)
    assert np.array_equal(fitted.values, applied.values)


def test_stats_json_round_trip():
    table = make_table([[1.0, 3.0], [1.0, 4.0], [1.0, 8.0]])
    _, stats = standardize_columns(table)
    stats = stats.with_beta(0.5, 2.0)
    doc = stats.to_json_dict()
    assert doc["constant_columns"] == [0]
    assert doc["beta_mean"] == 0.5
    back = StandardizationStats.from_json_dict(doc)
    assert back.column_names == stats.column_names
    assert np.array_equal(back.col_means, stats.col_means)
    assert np.array_equal(back.col_stds, stats.col_stds)
    assert back.constant_columns == (0,)


def test_stats_json_inconsistent_constants_rejected():
    table = make_table([[1.0, 3.0], [1.0, 4.0], [1.0, 8.0]])
    _, stats = standardize_columns(table)
    doc = stats.to_json_dict()
    doc["constant_columns"] = []
    with pytest.raises(ValidationError, match="inconsistent"):
        StandardizationStats.from_json_dict(doc)


def test_stats_json_missing_key_rejected():
    with pytest.raises(ValidationError, match="malformed"):
        StandardizationStats.from_json_dict({"column_names": ["a"]})


def test_negative_std_rejected():
    with pytest.raises(ValidationError, match="non-negative"):
        StandardizationStats(("a",), np.array([0.0]), np.array([-1.0]))
