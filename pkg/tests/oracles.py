"""Brute-force reference implementations used to check the library.

Everything here is written with plain Python loops and scalar math so that
it shares no code path with the package under test.  These oracles are
deliberately slow and simple; tests compare the fast implementations
against them on small inputs.
"""

import itertools
import math


def oracle_mean(xs):
    total = 0.0
    for x in xs:
        total += x
    return total / len(xs)


def oracle_sample_std(xs):
    """Sample standard deviation (n - 1 in the denominator)."""
    m = oracle_mean(xs)
    acc = 0.0
    for x in xs:
        acc += (x - m) * (x - m)
    return math.sqrt(acc / (len(xs) - 1))


def clip0(v):
    return v if v > 0.0 else 0.0


def oracle_standardize_beta(betas):
    """Center, scale, clip an importance vector.  None when the spread is zero."""
    if all(b == betas[0] for b in betas):
        return None
    std = oracle_sample_std(betas)
    if std == 0.0:
        return None
    mean = oracle_mean(betas)
    return [clip0((b - mean) / std) for b in betas]


def oracle_standardize_columns(rows):
    """Column-wise center, scale, clip.  Exactly constant columns map to zero."""
    n = len(rows)
    m = len(rows[0])
    out = [[0.0] * m for _ in range(n)]
    for j in range(m):
        column = [rows[i][j] for i in range(n)]
        if all(v == column[0] for v in column):
            continue
        mean = oracle_mean(column)
        std = oracle_sample_std(column)
        if std == 0.0:
            continue
        for i in range(n):
            out[i][j] = clip0((column[i] - mean) / std)
    return out


def oracle_influence(beta, rows):
    """Literal product, clip, row-normalize.  Returns (weights, sums, active)."""
    n = len(rows)
    m = len(beta)
    weights = [[0.0] * m for _ in range(n)]
    sums = [0.0] * n
    active = [False] * n
    for i in range(n):
        products = [clip0(beta[j] * rows[i][j]) for j in range(m)]
        s = 0.0
        for p in products:
            s += p
        sums[i] = s
        if s > 0.0:
            active[i] = True
            weights[i] = [p / s for p in products]
    return weights, sums, active


def oracle_top_k(weight_row, names, k):
    """Descending weight, ties broken by smaller column index, zeros dropped."""
    order = sorted(range(len(weight_row)), key=lambda j: (-weight_row[j], j))
    ranked = []
    for j in order:
        if weight_row[j] > 0.0 and len(ranked) < k:
            ranked.append((names[j], weight_row[j]))
    return ranked


def oracle_pie(betas, rows, names, top_k=1, standardized=True):
    """Full pipeline oracle.

    Returns a list of (degenerate, top_driver, ranked) per row, or None when
    the importance vector itself is degenerate in standardized mode.
    """
    if standardized:
        beta = oracle_standardize_beta(betas)
        if beta is None:
            return None
        values = oracle_standardize_columns(rows)
    else:
        beta = list(betas)
        values = [list(r) for r in rows]
    weights, _, active = oracle_influence(beta, values)
    report = []
    for i in range(len(rows)):
        if not active[i]:
            report.append((True, None, []))
        else:
            ranked = oracle_top_k(weights[i], names, top_k)
            report.append((False, ranked[0][0], ranked))
    return report


def oracle_correlation(xs, ys):
    """Pearson correlation from the definition, two full passes."""
    mx = oracle_mean(xs)
    my = oracle_mean(ys)
    sxy = 0.0
    sxx = 0.0
    syy = 0.0
    for x, y in zip(xs, ys):
        sxy += (x - mx) * (y - my)
        sxx += (x - mx) * (x - mx)
        syy += (y - my) * (y - my)
    if sxx == 0.0 or syy == 0.0:
        return None
    return sxy / math.sqrt(sxx * syy)


def oracle_solve(a, b):
    """Gaussian elimination with partial pivoting on plain lists."""
    n = len(a)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[pivot][col] == 0.0:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            for c in range(col, n + 1):
                m[r][c] -= factor * m[col][c]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        acc = m[r][n]
        for c in range(r + 1, n):
            acc -= m[r][c] * x[c]
        x[r] = acc / m[r][r]
    return x


def oracle_pick_coverage(matrix, rows_chosen):
    """Coverage of a candidate subset under the root-sum-of-weights metric."""
    n = len(matrix)
    m = len(matrix[0]) if n else 0
    importance = []
    for j in range(m):
        acc = 0.0
        for i in range(n):
            acc += abs(matrix[i][j])
        importance.append(math.sqrt(acc))
    total = 0.0
    for j in range(m):
        if any(matrix[i][j] != 0.0 for i in rows_chosen):
            total += importance[j]
    return total


def oracle_best_pick(matrix, budget):
    """Exhaustive optimum over all subsets within the budget."""
    n = len(matrix)
    best = 0.0
    for size in range(0, min(budget, n) + 1):
        for combo in itertools.combinations(range(n), size):
            best = max(best, oracle_pick_coverage(matrix, combo))
    return best
