"""Pairwise Euclidean distances and the bias-corrected U-centering transform.

The full n x n matrix is materialized once and shared by every estimator and
every permutation replicate; permutations only re-index it.  Memory is
8 * n**2 bytes, sized for n up to roughly 1e4.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .core import GroupIndex, LabeledDataset
from .errors import TooSmallError

# Above this many coordinates, accumulate squared differences with numpy's
# pairwise (tree) reduction instead of scipy's sequential loop, which bounds
# rounding-error growth in high dimension.
_TREE_SUM_DIM = 1024


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, LabeledDataset):
        return x.data
    return np.ascontiguousarray(x, dtype=np.float64)


def pairwise_distances(ds) -> np.ndarray:
    """Symmetric matrix of Euclidean distances between rows.

    Accepts a LabeledDataset or a plain (n, p) array.  The diagonal is
    exactly zero and the matrix is exactly symmetric (each unordered pair is
    evaluated once).
    """
    x = _as_matrix(ds)
    n, p = x.shape
    if p <= _TREE_SUM_DIM:
        return squareform(pdist(x))

    d = np.empty((n, n), dtype=np.float64)
    # block rows so the (block, n, p) difference buffer stays ~64 MB
    block = max(1, (8 << 20) // max(1, n * p))
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        diff = x[i0:i1, None, :] - x[None, :, :]
        np.square(diff, out=diff)
        sq = diff.sum(axis=2)
        np.sqrt(sq, out=sq)
        d[i0:i1] = sq
    # (x_i - x_j)^2 and (x_j - x_i)^2 round identically coordinate by
    # coordinate, so both triangles agree bit for bit without mirroring
    np.fill_diagonal(d, 0.0)
    return d


def u_center(d: np.ndarray) -> np.ndarray:
    """Bias-corrected double centering of a symmetric distance matrix.

    Off-diagonal entries become
    ``d[k, l] - rowsum_k/(n-2) - colsum_l/(n-2) + total/((n-1)(n-2))``
    with the sums taken over the full index range; the diagonal is zero.
    Every off-diagonal row and column of the result sums to zero exactly
    (up to rounding), which is what removes the bias from the squared-sum
    variance estimate downstream.
    """
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    n = d.shape[0]
    if n < 4:
        raise TooSmallError(
            f"U-centering needs n >= 4 (the n(n-3) denominator), got n={n}"
        )
    # d is symmetric, so one sum serves both rows and columns
    row = d.sum(axis=1)
    total = d.sum()
    a = d - row[:, None] / (n - 2) - row[None, :] / (n - 2) + total / (
        (n - 1) * (n - 2)
    )
    np.fill_diagonal(a, 0.0)
    return a


def group_gmd_inputs(d: np.ndarray, gi: GroupIndex):
    """Pooled and per-class sums of distances over unordered pairs.

    Returns ``(pooled, per_class)`` where ``pooled`` sums d[i, j] over all
    i < j and ``per_class[k]`` sums over pairs inside class k.  Sums use
    numpy's pairwise reduction; halving the symmetric full sum is exact in
    binary arithmetic.
    """
    if d.shape[0] != gi.n:
        raise ValueError(
            f"distance matrix size {d.shape[0]} does not match index n={gi.n}"
        )
    pooled = float(d.sum()) / 2.0
    per_class = np.array(
        [float(d[np.ix_(ix, ix)].sum()) / 2.0 for ix in gi.indices]
    )
    return pooled, per_class
