"""Tests for the built-in importance estimators."""

import numpy as np
import pytest

from piekit import (
    DegenerateError,
    ObservationTable,
    ValidationError,
    correlation_importance,
    extract_target,
    ols_importance,
)
from oracles import oracle_correlation, oracle_solve


def labeled(X, y, names=None):
    X = np.asarray(X, dtype=np.float64)
    if names is None:
        names = tuple(f"x{j}" for j in range(X.shape[1]))
    full = np.column_stack([X, y])
    table = ObservationTable(tuple(names) + ("y",), full)
    return extract_target(table, "y")


def test_extract_target_splits_columns():
    table = ObservationTable(("a", "b", "y"), np.array([[1.0, 2.0, 3.0]]))
    data = extract_target(table, "y")
    assert data.features.column_names == ("a", "b")
    assert data.target.tolist() == [3.0]


def test_extract_target_unknown_column():
    table = ObservationTable(("a",), np.array([[1.0]]))
    with pytest.raises(ValidationError, match="'nope' not found"):
        extract_target(table, "nope")


def test_extract_target_needs_leftover_features():
    table = ObservationTable(("y",), np.array([[1.0]]))
    with pytest.raises(ValidationError, match="no feature columns"):
        extract_target(table, "y")


def test_ols_recovers_planted_coefficients():
    rng = np.random.default_rng(101)
    n = 400
    X = rng.normal(0, 1, (n, 3)) * np.array([1.0, 2.0, 0.5])
    y = 2.0 * X[:, 0] - 3.0 * X[:, 1] + rng.normal(0, 0.01, n)
    imp = ols_importance(labeled(X, y))
    stds = np.std(X, axis=0, ddof=1)
    # standardized coefficients scale the raw truth by each feature's std
    assert imp.beta[0] == pytest.approx(2.0 * stds[0], rel=0.05)
    assert imp.beta[1] == pytest.approx(-3.0 * stds[1], rel=0.05)
    assert abs(imp.beta[2]) < 0.02


def test_ols_noise_free_recovery_is_sharp():
    rng = np.random.default_rng(211)
    n = 100
    x1 = rng.normal(0.0, 3.0, n)
    x2 = rng.normal(0.0, 1.0, n)
    y = 2.0 * x1
    imp = ols_importance(labeled(np.column_stack([x1, x2]), y))
    assert imp.beta[0] == pytest.approx(2.0 * np.std(x1, ddof=1), abs=1e-6)
    assert abs(imp.beta[1]) < 1e-9


def test_ols_invariant_under_positive_rescaling():
    rng = np.random.default_rng(223)
    X = rng.standard_normal((60, 3))
    y = rng.standard_normal(60)
    base = ols_importance(labeled(X, y))
    scaled = ols_importance(labeled(X * np.array([4.0, 0.25, 100.0]) + 7.0, y))
    assert np.allclose(base.beta, scaled.beta, rtol=0, atol=1e-9)


def test_ols_matches_gaussian_elimination_oracle():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(6, 30))
        m = int(rng.integers(1, 4))
        X = rng.standard_normal((n, m))
        y = rng.standard_normal(n)
        imp = ols_importance(labeled(X, y))
        z = (X - X.mean(axis=0)) / X.std(axis=0, ddof=1)
        design = np.column_stack([np.ones(n), z])
        normal = (design.T @ design).tolist()
        rhs = (design.T @ y).tolist()
        expected = oracle_solve(normal, rhs)[1:]
        assert np.allclose(imp.beta, expected, rtol=1e-9, atol=1e-9)


def test_ols_rejects_wide_data():
    X = np.eye(3)
    y = np.arange(3.0)
    with pytest.raises(ValidationError, match="more rows than features"):
        ols_importance(labeled(X, y))


def test_ols_constant_target_degenerate():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((10, 2))
    with pytest.raises(DegenerateError, match="constant"):
        ols_importance(labeled(X, np.full(10, 3.0)))


def test_ols_constant_column_degenerate_names_column():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((10, 2))
    X[:, 1] = 4.0
    with pytest.raises(DegenerateError, match="x1"):
        ols_importance(labeled(X, rng.standard_normal(10)))


def test_ols_collinear_columns_named():
    rng = np.random.default_rng(3)
    a = rng.standard_normal(30)
    X = np.column_stack([a, 2.0 * a, rng.standard_normal(30)])
    y = rng.standard_normal(30)
    with pytest.raises(DegenerateError) as excinfo:
        ols_importance(labeled(X, y, names=("p", "q", "r")))
    message = str(excinfo.value)
    assert "near-collinear" in message
    assert "p" in message and "q" in message
    assert ", r" not in message


def test_correlation_matches_oracle():
    rng = np.random.default_rng(13)
    for _ in range(50):
        n = int(rng.integers(3, 40))
        X = rng.standard_normal((n, 3))
        y = rng.standard_normal(n)
        imp = correlation_importance(labeled(X, y))
        for j in range(3):
            expected = oracle_correlation(X[:, j].tolist(), y.tolist())
            assert imp.beta[j] == pytest.approx(abs(expected), abs=1e-12)


def test_correlation_is_absolute_and_bounded():
    rng = np.random.default_rng(227)
    y = rng.standard_normal(20)
    X = np.column_stack([y, -y])  # x0 = y, x1 = -y
    imp = correlation_importance(labeled(X, y))
    assert imp.beta[0] == pytest.approx(1.0, abs=1e-12)
    assert imp.beta[1] == pytest.approx(1.0, abs=1e-12)
    assert (imp.beta >= 0).all() and (imp.beta <= 1).all()


def test_correlation_constant_target_degenerate():
    X = np.arange(10.0)[:, None]
    with pytest.raises(DegenerateError, match="constant"):
        correlation_importance(labeled(X, np.zeros(10)))


def test_correlation_constant_column_degenerate():
    X = np.column_stack([np.arange(10.0), np.full(10, 2.0)])
    y = np.arange(10.0)
    with pytest.raises(DegenerateError, match="x1"):
        correlation_importance(labeled(X, y))


def test_importance_vector_feeds_pipeline():
    from piekit import pie_standardized

    rng = np.random.default_rng(17)
    n = 50
    X = rng.normal(0, 1, (n, 3))
    y = 3.0 * X[:, 0] + 0.1 * X[:, 1] + rng.normal(0, 0.01, n)
    data = labeled(X, y)
    imp = ols_importance(data)
    report, _, _ = pie_standardized(imp, data.features)
    drivers = {e.top_driver for e in report if not e.degenerate}
    assert drivers == {"x0"}
