"""Plain boundary-matrix reduction for small complexes in any dimension.

Only used when persistence above dimension 1 is requested; the number of
simplices grows like N^(max_dim + 2), so keep N small.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

MAX_SIMPLICES = 2_000_000


def explicit_pairs(D: np.ndarray, max_dim: int, threshold: float) -> dict[int, np.ndarray]:
    N = D.shape[0]
    simplices = []
    for k in range(1, max_dim + 3):
        for s in combinations(range(N), k):
            diam = max((D[a, b] for a, b in combinations(s, 2)), default=0.0)
            if diam <= threshold:
                simplices.append((diam, k - 1, s))
            if len(simplices) > MAX_SIMPLICES:
                raise MemoryError("too many simplices for explicit reduction")
    simplices.sort()
    index = {s: i for i, (_, _, s) in enumerate(simplices)}
    low_owner: dict[int, int] = {}
    columns = []
    pairs: dict[int, list] = {d: [] for d in range(max_dim + 1)}
    paired = set()
    for j, (diam, dim, s) in enumerate(simplices):
        col = set()
        if dim > 0:
            col = {index[f] for f in combinations(s, dim)}
        while col:
            low = max(col)
            if low not in low_owner:
                break
            col ^= columns[low_owner[low]]
        columns.append(col)
        if col:
            low = max(col)
            low_owner[low] = j
            paired.update((low, j))
            bdiam, bdim, _ = simplices[low]
            if bdim <= max_dim and diam > bdiam:
                pairs[bdim].append((bdiam, diam))
    for j, (diam, dim, _) in enumerate(simplices):
        if j not in paired and dim <= max_dim and not columns[j]:
            pairs[dim].append((diam, np.inf))
    return {d: np.array(v, dtype=np.float64).reshape(-1, 2) for d, v in pairs.items()}
