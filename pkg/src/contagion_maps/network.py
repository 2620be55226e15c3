"""Kleinberg-like small-world networks on an n x n periodic lattice.

Nodes are the residue classes (x, y) of Z x Z / nZ x nZ, stored by the
integer index ``x * n + y``.  Every node has the same set of geometric
neighbours (all lattice offsets within Euclidean radius p) plus exactly
``q`` non-geometric edges obtained by matching stubs with weight
``mu_per(i, j) ** -gamma``.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

FORMAT_TAG = "torus-network"
FORMAT_VERSION = 1


class LatticeError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


def node_index(x: int, y: int, n: int) -> int:
    return (x % n) * n + (y % n)


def node_coords(i, n: int):
    """Inverse of :func:`node_index`; works elementwise on arrays."""
    return i // n, i % n


def _per(a, n):
    a = np.mod(a, n)
    return np.minimum(a, n - a)


def periodic_lattice_distance(i, j, n: int):
    """Sum of the two periodic coordinate residues between nodes i and j.

    ``i`` and ``j`` are (x, y) pairs.  Array coordinates broadcast.
    """
    if n < 2:
        raise LatticeError(f"lattice side must be >= 2, got {n}")
    (ix, iy), (jx, jy) = i, j
    d = _per(np.subtract(ix, jx), n) + _per(np.subtract(iy, jy), n)
    return int(d) if np.ndim(d) == 0 else d


def radius_squared(p: float) -> int | float:
    """p**2, snapped to an integer when p**2 is integral up to rounding."""
    r2 = float(p) * float(p)
    k = round(r2)
    if abs(r2 - k) < 1e-9:
        return int(k)
    return r2


def geometric_neighbor_offsets(p: float | None = None, *, p2=None) -> list[tuple[int, int]]:
    """All nonzero (dx, dy) with dx^2 + dy^2 <= p^2, sorted.

    Pass either the radius ``p`` or its square ``p2`` (preferred when p^2
    is an integer, so the boundary test is exact).
    """
    if p2 is None:
        if p is None:
            raise TypeError("need p or p2")
        p2 = radius_squared(p)
    if p2 <= 0:
        raise LatticeError("radius must be positive")
    r = math.isqrt(int(math.floor(p2)))
    return [
        (dx, dy)
        for dx in range(-r, r + 1)
        for dy in range(-r, r + 1)
        if (dx, dy) != (0, 0) and dx * dx + dy * dy <= p2
    ]


@dataclass(frozen=True, eq=False)
class Network:
    n: int
    p2: int | float
    q: int
    gamma: float
    rng_seed: int
    geometric_edges: np.ndarray = field(repr=False)
    nongeometric_edges: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.n * self.n

    @cached_property
    def dG(self) -> int:
        return len(geometric_neighbor_offsets(p2=self.p2))

    @property
    def degree(self) -> int:
        return self.dG + self.q

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) of the 0/1 adjacency, neighbours sorted."""
        edges = np.concatenate([self.geometric_edges, self.nongeometric_edges])
        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(self.N + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        return np.cumsum(indptr), dst.astype(np.int64)

    def neighbors(self, i: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[i]:indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.csr[0])

    def header(self) -> dict:
        g10 = round(self.gamma * 10)
        if abs(self.gamma * 10 - g10) > 1e-9:
            raise ValueError(f"gamma={self.gamma} is not a multiple of 0.1")
        if not isinstance(self.p2, int):
            raise ValueError("only integral p^2 can be serialized")
        return {"n": self.n, "p2": self.p2, "q": self.q, "gamma10": g10, "seed": self.rng_seed}

    def header_line(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.header().items())

    def same_edges(self, other: "Network") -> bool:
        return (np.array_equal(self.geometric_edges, other.geometric_edges)
                and np.array_equal(self.nongeometric_edges, other.nongeometric_edges))

    # serialization -------------------------------------------------------

    def dumps(self) -> str:
        buf = io.StringIO()
        buf.write(f"{FORMAT_TAG} v{FORMAT_VERSION}\n")
        buf.write(self.header_line() + "\n")
        for tag, edges in (("G", self.geometric_edges), ("NG", self.nongeometric_edges)):
            buf.write(f"{tag} {len(edges)}\n")
            for a, b in edges:
                buf.write(f"{a} {b}\n")
        return buf.getvalue()

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), newline="\n")

    @classmethod
    def loads(cls, text: str) -> "Network":
        lines = text.splitlines()
        if lines[0] != f"{FORMAT_TAG} v{FORMAT_VERSION}":
            raise ValueError(f"unrecognised network file header: {lines[0]!r}")
        hdr = dict(kv.split("=") for kv in lines[1].split())
        pos = 2
        sections = {}
        for _ in range(2):
            tag, count = lines[pos].split()
            count = int(count)
            body = lines[pos + 1:pos + 1 + count]
            arr = np.array([list(map(int, s.split())) for s in body], dtype=np.int64).reshape(-1, 2)
            sections[tag] = arr
            pos += 1 + count
        return cls(n=int(hdr["n"]), p2=int(hdr["p2"]), q=int(hdr["q"]),
                   gamma=int(hdr["gamma10"]) / 10, rng_seed=int(hdr["seed"]),
                   geometric_edges=sections["G"], nongeometric_edges=sections["NG"])

    @classmethod
    def load(cls, path) -> "Network":
        return cls.loads(Path(path).read_text())


def geometric_edges(n: int, p2) -> np.ndarray:
    """Sorted (a, b) pairs with a < b; depends on (n, p^2) only."""
    offsets = geometric_neighbor_offsets(p2=p2)
    wrapped = {(dx % n, dy % n) for dx, dy in offsets}
    if len(wrapped) != len(offsets) or (0, 0) in wrapped:
        raise LatticeError(f"n={n} too small for p^2={p2}: neighbourhoods wrap onto themselves")
    x, y = np.divmod(np.arange(n * n), n)
    pairs = []
    for dx, dy in offsets:
        j = ((x + dx) % n) * n + (y + dy) % n
        pairs.append(np.stack([np.arange(n * n), j], axis=1))
    e = np.concatenate(pairs)
    e = np.sort(e, axis=1)
    return np.unique(e, axis=0)


def _match_stubs(n, q, gamma, geo_adj, rng) -> np.ndarray | None:
    N = n * n
    x, y = np.divmod(np.arange(N), n)
    free = np.full(N, q, dtype=np.int64)
    partners = [set() for _ in range(N)]
    stubs = np.repeat(np.arange(N), q)
    rng.shuffle(stubs)
    edges = []
    for i in stubs:
        if free[i] == 0:
            continue  # already consumed as someone's partner
        w = free.astype(np.float64)
        w[i] = 0.0
        w[geo_adj[i]] = 0.0
        if partners[i]:
            w[list(partners[i])] = 0.0
        if gamma != 0:
            mu = _per(x - x[i], n) + _per(y - y[i], n)
            mu[i] = 1  # weight already zero
            w *= mu.astype(np.float64) ** -gamma
        cum = np.cumsum(w)
        total = cum[-1]
        if total <= 0:
            return None
        j = int(np.searchsorted(cum, rng.random() * total, side="right"))
        j = min(j, N - 1)
        while w[j] == 0:  # guard against landing on a zero-width bin at the top edge
            j -= 1
        free[i] -= 1
        free[j] -= 1
        partners[i].add(j)
        partners[j].add(i)
        edges.append((min(i, j), max(i, j)))
    if not edges:
        return np.zeros((0, 2), dtype=np.int64)
    return np.unique(np.array(edges, dtype=np.int64), axis=0)


def build_network(n: int, p: float | None = None, q: int = 0, gamma: float = 0.0,
                  rng_seed: int = 0, *, p2=None, max_restarts: int = 100) -> Network:
    """Build a network with geometric radius p and q non-geometric stubs per node.

    Stubs are visited in random order; each picks a partner stub with
    probability proportional to ``mu_per ** -gamma``, never creating a
    self-loop, a multi-edge, or a duplicate of a geometric edge.  A dead
    end restarts the whole matching from a derived seed.
    """
    if n < 2:
        raise LatticeError(f"lattice side must be >= 2, got {n}")
    if p2 is None:
        p2 = radius_squared(p)
    if q < 0 or gamma < 0:
        raise ValueError("q and gamma must be nonnegative")
    N = n * n
    geo = geometric_edges(n, p2)
    dG = len(geometric_neighbor_offsets(p2=p2))
    if (N * q) % 2:
        raise ConstructionError(f"odd total stub count N*q = {N * q}")
    if q > 0 and q >= N - 1 - dG:
        raise ConstructionError(f"q={q} too large for N={N}, dG={dG}")

    geo_adj = [[] for _ in range(N)]
    for a, b in geo:
        geo_adj[a].append(b)
        geo_adj[b].append(a)
    geo_adj = [np.array(a, dtype=np.int64) for a in geo_adj]

    ng = np.zeros((0, 2), dtype=np.int64)
    if q > 0:
        for attempt in range(max_restarts + 1):
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([rng_seed, attempt])))
            ng = _match_stubs(n, q, gamma, geo_adj, rng)
            if ng is not None:
                break
        else:
            raise ConstructionError(f"stub matching failed after {max_restarts} restarts")

    geo.setflags(write=False)
    ng.setflags(write=False)
    return Network(n=n, p2=p2, q=q, gamma=float(gamma), rng_seed=rng_seed,
                   geometric_edges=geo, nongeometric_edges=ng)


def nongeometric_lengths(net: Network) -> np.ndarray:
    """Periodic lattice lengths of the non-geometric edges."""
    a, b = net.nongeometric_edges.T
    return periodic_lattice_distance(node_coords(a, net.n), node_coords(b, net.n), net.n)
