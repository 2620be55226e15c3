"""PCA projections, residual variance and approximate embedding dimension."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist

from .geometry import UndefinedCorrelationError, pearson_correlation, streamed_distance_correlation

CAP = 100
CUTOFF = 0.05
FULL_PAIR_LIMIT = 900      # clouds up to n = 30 use every pair
SUBSAMPLE_PAIRS = 10 ** 6
SUBSAMPLE_SEED = 20240101


@dataclass
class EmbeddingReport:
    P: int
    residuals: list[float]
    meta: dict = field(default_factory=dict)


def _points(cloud) -> np.ndarray:
    return np.asarray(getattr(cloud, "points", cloud), dtype=np.float64)


def principal_axes(X: np.ndarray):
    """Centred data, right singular vectors (rows) and singular values.

    Each direction is flipped so its largest-magnitude component is positive.
    """
    Xc = X - X.mean(axis=0)
    _, s, Vt = np.linalg.svd(Xc, full_matrices=False)
    idx = np.argmax(np.abs(Vt), axis=1)
    signs = np.sign(Vt[np.arange(Vt.shape[0]), idx])
    signs[signs == 0] = 1.0
    return Xc, Vt * signs[:, None], s


def pca_project(cloud, p: int) -> np.ndarray:
    X = _points(cloud)
    N, D = X.shape
    if not 1 <= p <= min(N, D):
        raise ValueError(f"projection dimension {p} outside [1, {min(N, D)}]")
    Xc, Vt, _ = principal_axes(X)
    return Xc @ Vt[:p].T


def residual_variance(orig, proj) -> float:
    """1 - rho^2 between the pairwise distances of two clouds of the same points."""
    X, Y = _points(orig), _points(proj)
    if X.shape[0] != Y.shape[0]:
        raise ValueError("clouds must have the same number of points")
    rho = streamed_distance_correlation(X, Y)
    return 1.0 - rho * rho


def _pair_index(N: int, rng_seed: int):
    total = N * (N - 1) // 2
    if N <= FULL_PAIR_LIMIT or total <= SUBSAMPLE_PAIRS:
        return None
    rng = np.random.default_rng(rng_seed)
    i = rng.integers(0, N, size=SUBSAMPLE_PAIRS)
    j = rng.integers(0, N - 1, size=SUBSAMPLE_PAIRS)
    j = np.where(j >= i, j + 1, j)
    return i, j


def embedding_dimension(cloud, cap: int = CAP, cutoff: float = CUTOFF) -> EmbeddingReport:
    """Smallest p with R_p < cutoff, capped at ``cap``.

    Projected squared distances are accumulated one principal component at
    a time.  Clouds above 900 points are scored on a fixed-seed sample of
    10^6 point pairs (recorded in ``meta``).
    """
    X = _points(cloud)
    N, D = X.shape
    if N < 3:
        raise ValueError("need at least 3 points")
    Xc, Vt, _ = principal_axes(X)
    pairs = _pair_index(N, SUBSAMPLE_SEED)
    if pairs is None:
        target = pdist(Xc)
    else:
        i, j = pairs
        target = np.linalg.norm(Xc[i] - Xc[j], axis=1)
    acc = np.zeros_like(target)
    residuals: list[float] = []
    limit = min(cap, N, D)
    for p in range(1, limit + 1):
        score = Xc @ Vt[p - 1]
        if pairs is None:
            diff = pdist(score[:, None], "sqeuclidean")
        else:
            diff = (score[i] - score[j]) ** 2
        acc += diff
        try:
            r = 1.0 - pearson_correlation(target, np.sqrt(acc)) ** 2
        except UndefinedCorrelationError:
            r = 1.0
        residuals.append(r)
        if r < cutoff:
            break
    P = len(residuals) if residuals[-1] < cutoff else cap
    meta = {"pairs": "all" if pairs is None else f"sample:{SUBSAMPLE_PAIRS}:seed={SUBSAMPLE_SEED}"}
    return EmbeddingReport(P=P, residuals=residuals, meta=meta)
