"""NumPy batch kernel for the constellation search.

Evaluates the normalized variance of many (frame, k) cases at once.
The accumulation order mirrors variance_engine exactly (ascending r for
the weights, row-major for the quadratic form), so results are
bit-identical to both the scalar path and the compiled kernel.
"""

from __future__ import annotations

import numpy as np


def eval_block(d_block: np.ndarray, shifts: np.ndarray, table: np.ndarray,
               corr: np.ndarray) -> np.ndarray:
    """Normalized variances for a block of ratio-digit rows.

    Parameters
    ----------
    d_block : uint8 array, shape (B, n)
        Symbol-ratio exponents per case; column k is zero by construction.
    shifts : int64 array, shape (n, n)
        Tone index table for the fixed k of this block.
    table : float64 array, shape (4, n)
        Weight contribution table.
    corr : float64 array, shape (n, n)
        Channel correlation matrix.

    Returns
    -------
    float64 array, shape (B,)
    """
    b, n = d_block.shape
    weights = np.zeros((b, n))
    for r in range(n):
        weights += table[d_block[:, r][:, None], shifts[r][None, :]]
    acc = np.zeros(b)
    for p in range(n):
        wp = weights[:, p]
        row = corr[p]
        for q in range(n):
            acc += (wp * row[q]) * weights[:, q]
    return acc / (n * n)
