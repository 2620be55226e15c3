"""Torus reference embedding and the Pearson geometry score."""
from __future__ import annotations

import math

import numpy as np
from scipy.spatial.distance import cdist

TWO_PI = 2.0 * math.pi


class UndefinedCorrelationError(ValueError):
    pass


def torus_embedding(i, n: int) -> np.ndarray:
    """R^4 coordinates of node(s) i = (x, y) on two circles of radius 1/(2 pi)."""
    x, y = (np.asarray(c, dtype=np.float64) for c in i)
    ax, ay = TWO_PI * x / n, TWO_PI * y / n
    return np.stack([np.cos(ax), np.sin(ax), np.cos(ay), np.sin(ay)], axis=-1) / TWO_PI


def torus_cloud(n: int) -> np.ndarray:
    """Embedding of all n^2 nodes, row k is node k = x * n + y."""
    x, y = np.divmod(np.arange(n * n), n)
    return torus_embedding((x, y), n)


def torus_chordal_distance(i, j, n: int):
    """Closed-form Euclidean distance between two embedded nodes."""
    dx = np.subtract(i[0], j[0])
    dy = np.subtract(i[1], j[1])
    d = np.sqrt(np.sin(dx * math.pi / n) ** 2 + np.sin(dy * math.pi / n) ** 2) / math.pi
    return float(d) if np.ndim(d) == 0 else d


def pearson_correlation(a, b) -> float:
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape or a.size < 2:
        raise ValueError("need two equal-length sequences of length >= 2")
    da = a - a.mean()
    db = b - b.mean()
    saa = np.dot(da, da)
    sbb = np.dot(db, db)
    if saa == 0.0 or sbb == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant sequence")
    r = np.dot(da, db) / math.sqrt(saa * sbb)
    return float(min(1.0, max(-1.0, r)))


def _upper_blocks(X: np.ndarray, block: int):
    """Yield condensed pairwise distances (i < j) row block by row block."""
    N = X.shape[0]
    for start in range(0, N - 1, block):
        stop = min(start + block, N - 1)
        D = cdist(X[start:stop], X[start + 1:])
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(start + 1, N)[None, :]
        yield D[cols > rows]


class _Moments:
    """Two-pass Pearson over paired streams of equal-shaped chunks."""

    def __init__(self, make_stream):
        self.make_stream = make_stream

    def corr(self) -> float:
        count = 0
        sa = sb = 0.0
        for a, b in self.make_stream():
            count += a.size
            sa += a.sum()
            sb += b.sum()
        ma, mb = sa / count, sb / count
        sab = saa = sbb = 0.0
        for a, b in self.make_stream():
            da, db = a - ma, b - mb
            sab += np.dot(da, db)
            saa += np.dot(da, da)
            sbb += np.dot(db, db)
        if saa == 0.0 or sbb == 0.0:
            raise UndefinedCorrelationError("correlation undefined for a constant distance list")
        return float(min(1.0, max(-1.0, sab / math.sqrt(saa * sbb))))


def streamed_distance_correlation(X: np.ndarray, Y: np.ndarray, block: int = 256) -> float:
    """Pearson correlation of the pairwise distances of two clouds with the same points."""
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.shape[0] != Y.shape[0]:
        raise ValueError("clouds must have the same number of points")
    return _Moments(lambda: zip(_upper_blocks(X, block), _upper_blocks(Y, block))).corr()


def geometry_score(cloud, n: int, block: int = 256) -> float:
    """rho between cloud distances and torus chordal distances over all node pairs."""
    X = getattr(cloud, "points", cloud)
    if X.shape[0] != n * n:
        raise ValueError(f"cloud has {X.shape[0]} points, expected n^2 = {n * n}")
    return streamed_distance_correlation(X, torus_cloud(n), block)
