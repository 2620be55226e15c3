"""Vietoris-Rips persistent homology over Z/2, dimensions 0 and 1.

Dimension 0 comes from Kruskal-style union-find over the edges.  Dimension
1 is computed by reducing the coboundary matrix of the edges (persistent
cohomology), which yields the same barcode as reducing the boundary matrix
of the 2-skeleton.  Edges whose coboundary column would be cleared by a
0-dimensional pivot are skipped, and columns whose pivot triangle has the
column's edge as its longest edge are paired without any reduction.

Filtration order: edges by (length, i, j) with i < j; a triangle sits right
after its longest edge, ties among triangles sharing that edge broken by
the opposite vertex.  Triangles are keyed as ``rank(longest edge) * N + v``
so that keys are totally ordered consistently with the filtration.
"""
from __future__ import annotations

import numpy as np
from numba import njit, types
from numba.typed import Dict, List


class InvalidMetricError(ValueError):
    pass


def check_distance_matrix(dist) -> np.ndarray:
    D = np.asarray(dist, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise InvalidMetricError(f"distance matrix must be square, got {D.shape}")
    if not np.all(np.isfinite(D)):
        raise InvalidMetricError("distance matrix has non-finite entries")
    if np.any(D < 0):
        raise InvalidMetricError("distance matrix has negative entries")
    if not np.array_equal(D, D.T):
        raise InvalidMetricError("distance matrix is not symmetric")
    if np.any(np.diag(D) != 0):
        raise InvalidMetricError("distance matrix has a nonzero diagonal")
    return D


def enclosing_radius(D: np.ndarray) -> float:
    """Smallest r at which some point is within r of every other point."""
    if D.shape[0] == 0:
        return 0.0
    return float(D.max(axis=1).min())


def sorted_edges(D: np.ndarray, threshold: float):
    """Edges with length <= threshold in filtration order, plus the rank matrix."""
    N = D.shape[0]
    i, j = np.triu_indices(N, 1)
    lengths = D[i, j]
    keep = lengths <= threshold
    i, j, lengths = i[keep], j[keep], lengths[keep]
    order = np.lexsort((j, i, lengths))
    i, j, lengths = i[order], j[order], lengths[order]
    rank = np.full((N, N), -1, dtype=np.int64)
    r = np.arange(len(i), dtype=np.int64)
    rank[i, j] = r
    rank[j, i] = r
    return i.astype(np.int64), j.astype(np.int64), lengths, rank


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _kruskal(ea, eb, N):
    """Per-edge flag: True when the edge merges two components."""
    parent = np.arange(N)
    merges = np.zeros(ea.shape[0], np.bool_)
    for r in range(ea.shape[0]):
        a = _find(parent, ea[r])
        b = _find(parent, eb[r])
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
            merges[r] = True
    return merges


@njit(cache=True)
def _coboundary(a, b, r, rank, N):
    """Unsorted keys of the triangles containing edge r = (a, b)."""
    out = np.empty(N, np.int64)
    c = 0
    for k in range(N):
        if k == a or k == b:
            continue
        r1 = rank[a, k]
        r2 = rank[b, k]
        if r1 < 0 or r2 < 0:
            continue
        if r > r1 and r > r2:
            out[c] = r * N + k
        elif r1 > r2:
            out[c] = r1 * N + b
        else:
            out[c] = r2 * N + a
        c += 1
    return out[:c]


@njit(cache=True)
def _push(heap, size, key):
    if size == heap.shape[0]:
        bigger = np.empty(2 * heap.shape[0], np.int64)
        bigger[:size] = heap[:size]
        heap = bigger
    i = size
    heap[i] = key
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= key:
            break
        heap[i] = heap[parent]
        i = parent
    heap[i] = key
    return heap, size + 1


@njit(cache=True)
def _pop(heap, size):
    top = heap[0]
    size -= 1
    last = heap[size]
    i = 0
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and heap[child + 1] < heap[child]:
            child += 1
        if heap[child] >= last:
            break
        heap[i] = heap[child]
        i = child
    if size > 0:
        heap[i] = last
    return top, size


@njit(cache=True)
def _pivot(heap, size):
    """Smallest key that survives Z/2 cancellation, or -1 for a zero column."""
    while size > 0:
        top, size = _pop(heap, size)
        if size > 0 and heap[0] == top:
            _, size = _pop(heap, size)
            continue
        heap, size = _push(heap, size, top)
        return top, heap, size
    return -1, heap, size


@njit(cache=True)
def _dim1_pairs(ea, eb, rank, cleared, N):
    """(birth edge rank, death edge rank or -1) for every dim-1 class."""
    E = ea.shape[0]
    owner = Dict.empty(key_type=types.int64, value_type=types.int64)
    # reduction columns: the edges whose coboundaries sum to the reduced column
    stored = List.empty_list(types.int64[::1])
    slot = np.full(E, -1, np.int64)
    births = np.empty(E, np.int64)
    deaths = np.empty(E, np.int64)
    npairs = 0
    heap = np.empty(1024, np.int64)
    added = np.empty(64, np.int64)
    for r in range(E - 1, -1, -1):
        if cleared[r]:
            continue
        cob = _coboundary(ea[r], eb[r], r, rank, N)
        if cob.shape[0] > 0:
            first = cob.min()
            if first // N == r:
                # the pivot triangle has this edge as its longest edge: zero persistence
                owner[first] = r
                continue
        size = 0
        for key in cob:
            heap, size = _push(heap, size, key)
        nadded = 0
        piv, heap, size = _pivot(heap, size)
        while piv >= 0 and piv in owner:
            o = owner[piv]
            if slot[o] >= 0:
                vcol = stored[slot[o]]
            else:
                vcol = np.array([o], np.int64)
            for e in vcol:
                for key in _coboundary(ea[e], eb[e], e, rank, N):
                    heap, size = _push(heap, size, key)
                if nadded == added.shape[0]:
                    bigger = np.empty(2 * added.shape[0], np.int64)
                    bigger[:nadded] = added[:nadded]
                    added = bigger
                added[nadded] = e
                nadded += 1
            piv, heap, size = _pivot(heap, size)
        births[npairs] = r
        if piv < 0:
            deaths[npairs] = -1
        else:
            owner[piv] = r
            # keep r plus every edge added an odd number of times
            v = np.sort(added[:nadded])
            keep = np.empty(nadded + 1, np.int64)
            keep[0] = r
            c = 1
            i = 0
            while i < nadded:
                j = i
                while j < nadded and v[j] == v[i]:
                    j += 1
                if (j - i) % 2 == 1:
                    keep[c] = v[i]
                    c += 1
                i = j
            slot[r] = len(stored)
            stored.append(keep[:c].copy())
            deaths[npairs] = piv // N
        npairs += 1
    return births[:npairs], deaths[:npairs]


def rips_pairs(D: np.ndarray, max_dim: int = 1, threshold: float | None = None):
    """Raw (dim -> array of (birth, death)) persistence pairs, zero-length bars removed."""
    N = D.shape[0]
    out: dict[int, np.ndarray] = {}
    if N == 0:
        return {d: np.zeros((0, 2)) for d in range(max_dim + 1)}
    if threshold is None:
        threshold = enclosing_radius(D)
    ea, eb, lengths, rank = sorted_edges(D, threshold)
    merges = _kruskal(ea, eb, N)
    d0 = [(0.0, lengths[r]) for r in np.flatnonzero(merges) if lengths[r] > 0.0]
    n_components = N - int(merges.sum())
    d0 += [(0.0, np.inf)] * n_components
    out[0] = np.array(d0, dtype=np.float64).reshape(-1, 2)
    if max_dim >= 1:
        b, d = _dim1_pairs(ea, eb, rank, merges, N)
        births = lengths[b]
        deaths = np.where(d >= 0, lengths[np.maximum(d, 0)], np.inf)
        keep = deaths > births
        out[1] = np.stack([births[keep], deaths[keep]], axis=1).reshape(-1, 2)
    return out
