"""Pure NumPy implementations of the scoring kernels.

Must stay numerically identical to ``_ckernels``: the same per-element IEEE
operations, clips written as ``v if v > 0 else 0`` (so -0.0 maps to +0.0),
and left-to-right row summation (``cumsum`` here, an accumulator loop there).
"""

import numpy as np


def clip_standardize(values, means, stds):
    safe = np.where(stds > 0.0, stds, 1.0)
    z = (values - means) / safe
    out = np.where(z > 0.0, z, 0.0)
    zero_std = stds == 0.0
    if zero_std.any():
        out[:, zero_std] = 0.0
    return out


def influence(beta, x):
    p = beta * x
    p = np.where(p > 0.0, p, 0.0)
    sums = np.cumsum(p, axis=1)[:, -1]
    active = sums > 0.0
    weights = np.zeros_like(p)
    np.divide(p, sums[:, np.newaxis], out=weights, where=active[:, np.newaxis])
    return weights, sums, active
