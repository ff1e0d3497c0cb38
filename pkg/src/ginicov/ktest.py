"""K-sample tests: the closed-form normal-limit test and permutation tests.

The normal test studentizes the Gini covariance by a consistent null
standard deviation and rejects one-sided for large values; no resampling is
involved.  The permutation engine calibrates either the Gini covariance or
the distance-covariance comparator by uniformly reshuffling class labels,
reusing the distance matrix across replicates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .core import LabeledDataset, group_index, validate_for_testing
from .distmat import pairwise_distances, u_center
from .estimators import (
    _class_pair_sums,
    _dcov_from_centered_sums,
    _gini_from_sums,
    gini_estimates,
)
from .streams import substream

METHOD_GINI_NORMAL = "gini-normal"
METHOD_GINI_PERM = "gini-perm"
METHOD_DCOV_PERM = "dcov-perm"

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class TestResult:
    """Outcome of one test: the decision is data, never an exit status."""

    method: str
    statistic: float
    z: float | None
    p_value: float
    alpha: float
    reject: bool
    permutations: int | None = None
    seed: int | None = None
    degenerate: bool = False


def normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate to a few ulp across the real line."""
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_quantile(q: float) -> float:
    """Inverse standard normal CDF for q in the open unit interval."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile argument must be in (0, 1), got {q}")
    return float(ndtri(q))


def _normal_test_from_distance(d, gi, alpha: float) -> TestResult:
    est = gini_estimates(d, gi)
    sigma0 = math.sqrt(est.sigma0_sq)
    if sigma0 == 0.0:
        # all points coincide (or the centered matrix vanishes): report the
        # non-rejection outright instead of dividing by zero
        return TestResult(
            method=METHOD_GINI_NORMAL,
            statistic=est.gcov,
            z=None,
            p_value=1.0,
            alpha=alpha,
            reject=False,
            degenerate=True,
        )
    z = est.gcov / sigma0
    p_value = 1.0 - normal_cdf(z)
    return TestResult(
        method=METHOD_GINI_NORMAL,
        statistic=est.gcov,
        z=z,
        p_value=p_value,
        alpha=alpha,
        reject=p_value < alpha,
    )


def gini_normal_test(ds: LabeledDataset, alpha: float = 0.05) -> TestResult:
    """One-sided test of class-distribution equality via the standardized
    Gini covariance; rejects when the upper-tail p-value falls below alpha.
    """
    gi = group_index(ds)
    validate_for_testing(gi)
    return _normal_test_from_distance(pairwise_distances(ds), gi, alpha)


def _perm_test_from_distance(
    d, gi, statistic: str, permutations: int, alpha: float, seed: int
) -> TestResult:
    if statistic not in ("gini", "dcov"):
        raise ValueError(f"unknown permutation statistic {statistic!r}")
    if permutations < 1:
        raise ValueError(
            f"permutation count must be >= 1, got {permutations}"
        )
    n = gi.n
    counts = gi.counts
    base = gi.indices
    use_dcov = statistic == "dcov"
    # replicates reshuffle labels only, so the relabeling-invariant pieces
    # (the matrix itself, the pooled pair sum) are computed once
    mat = u_center(d) if use_dcov else d
    pooled = float(d.sum()) / 2.0

    def evaluate(indices):
        class_sums = _class_pair_sums(mat, indices)
        if use_dcov:
            return _dcov_from_centered_sums(class_sums, n)
        return _gini_from_sums(pooled, class_sums, counts, n)

    t_obs = evaluate(base)
    arange = np.arange(n)
    inv = np.empty(n, dtype=np.intp)
    n_ge = 0
    for b in range(1, permutations + 1):
        # replicate b owns the stream (seed, b): the count below is the same
        # for any evaluation order or worker layout
        perm = substream(seed, b).permutation(n)
        inv[perm] = arange
        if evaluate([inv[ix] for ix in base]) >= t_obs:
            n_ge += 1
    p_value = (1.0 + n_ge) / (permutations + 1.0)
    return TestResult(
        method=METHOD_DCOV_PERM if use_dcov else METHOD_GINI_PERM,
        statistic=t_obs,
        z=None,
        p_value=p_value,
        alpha=alpha,
        reject=p_value <= alpha,
        permutations=permutations,
        seed=seed,
    )


def permutation_test(
    ds: LabeledDataset,
    statistic: str = "gini",
    permutations: int = 999,
    alpha: float = 0.05,
    seed: int = 0,
) -> TestResult:
    """Permutation-calibrated K-sample test.

    ``statistic`` chooses between the Gini covariance ("gini") and the
    squared-weight distance-covariance comparator ("dcov").  The label
    vector is reshuffled uniformly for each replicate; the add-one p-value
    (1 + #{T_b >= T_obs}) / (B + 1) keeps the test valid at any finite B.
    Deterministic given ``seed``.
    """
    gi = group_index(ds)
    validate_for_testing(gi)
    return _perm_test_from_distance(
        pairwise_distances(ds), gi, statistic, permutations, alpha, seed
    )
