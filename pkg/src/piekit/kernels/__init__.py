"""Hot scoring kernels with a compiled fast path.

The compiled extension (``_ckernels``, built from Cython at install time)
and the NumPy fallback (``_pykernels``) implement the same two operations
with the same floating-point semantics: element-wise IEEE arithmetic and
left-to-right row summation.  Both backends therefore return equal values,
and which one is active never changes a result.

Selection happens once at import.  Set ``PIEKIT_BACKEND=python`` to skip
the compiled extension or ``PIEKIT_BACKEND=compiled`` to require it;
``piekit.kernels.BACKEND`` reports what is active.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import ValidationError
from . import _pykernels

_requested = os.environ.get("PIEKIT_BACKEND", "").strip().lower()
if _requested not in ("", "python", "compiled"):
    raise ImportError(
        f"PIEKIT_BACKEND must be 'python' or 'compiled', not {_requested!r}"
    )

if _requested == "python":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _pykernels
        BACKEND = "python"


def _as_matrix(a, name):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValidationError(f"{name} must be a 2-d matrix")
    return a


def _as_vector(a, name):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != 1:
        raise ValidationError(f"{name} must be a 1-d vector")
    return a


def clip_standardize(values, col_means, col_stds):
    """Per column: ``max(0, (x - mean) / std)``; columns with std 0 become 0."""
    values = _as_matrix(values, "values")
    means = _as_vector(col_means, "col_means")
    stds = _as_vector(col_stds, "col_stds")
    if values.shape[1] != means.shape[0] or means.shape[0] != stds.shape[0]:
        raise ValidationError(
            f"shape mismatch: {values.shape[1]} columns, "
            f"{means.shape[0]} means, {stds.shape[0]} stds"
        )
    return _impl.clip_standardize(values, means, stds)


def influence(beta, x):
    """Row-normalized clipped products.

    Per cell ``p_ik = max(0, beta_k * x_ik)``, per row ``s_i = sum_k p_ik``
    summed left to right; active rows (``s_i > 0``) get ``w_ik = p_ik / s_i``,
    inactive rows stay all zero with sum 0.  Returns
    ``(weights, row_sums, active)``.
    """
    beta = _as_vector(beta, "beta")
    x = _as_matrix(x, "x")
    if x.shape[1] != beta.shape[0]:
        raise ValidationError(
            f"importance length {beta.shape[0]} does not match table width {x.shape[1]}"
        )
    return _impl.influence(beta, x)
