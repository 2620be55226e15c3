"""Synchronous Watts threshold model with cluster seeding."""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

from .network import Network

log = logging.getLogger(__name__)

CACHE_MAGIC = b"ACTM1\n"


@dataclass(frozen=True)
class ContagionConfig:
    threshold: float
    sentinel: int | None = None  # defaults to 2N

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")

    def sentinel_for(self, N: int) -> int:
        s = 2 * N if self.sentinel is None else self.sentinel
        if s <= N:
            raise ValueError(f"sentinel {s} must exceed N={N}")
        return s


@njit(cache=True)
def _spread(indptr, indices, seed_nodes, threshold, sentinel, times, counts, mark):
    # times: filled with sentinel on entry; counts / mark: zeroed scratch
    N = indptr.shape[0] - 1
    frontier = np.empty(N, np.int64)
    nf = 0
    for s in seed_nodes:
        if times[s] != 0:
            times[s] = 0
            frontier[nf] = s
            nf += 1
    cand = np.empty(N, np.int64)
    t = 0
    while nf > 0:
        t += 1
        nc = 0
        for a in range(nf):
            u = frontier[a]
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if times[v] == sentinel:
                    counts[v] += 1
                    if mark[v] != t:
                        mark[v] = t
                        cand[nc] = v
                        nc += 1
        nf = 0
        for a in range(nc):
            v = cand[a]
            if counts[v] / (indptr[v + 1] - indptr[v]) > threshold:
                times[v] = t
                frontier[nf] = v
                nf += 1
    return times


@njit(cache=True)
def _all_cluster_runs(indptr, indices, threshold, sentinel):
    N = indptr.shape[0] - 1
    out = np.empty((N, N), np.int32)
    times = np.empty(N, np.int64)
    counts = np.zeros(N, np.int64)
    mark = np.zeros(N, np.int64)
    for j in range(N):
        times[:] = sentinel
        counts[:] = 0
        mark[:] = 0
        seed = np.empty(indptr[j + 1] - indptr[j] + 1, np.int64)
        seed[0] = j
        seed[1:] = indices[indptr[j]:indptr[j + 1]]
        _spread(indptr, indices, seed, threshold, sentinel, times, counts, mark)
        for i in range(N):
            out[j, i] = times[i]
    return out


def cluster_seed(net: Network, j: int) -> np.ndarray:
    """Node j together with all of its neighbours, sorted."""
    return np.sort(np.concatenate([[j], net.neighbors(j)]))


def run_contagion(net: Network, seed, cfg: ContagionConfig) -> np.ndarray:
    """Activation time of every node; nodes that never activate get the sentinel."""
    seed = np.unique(np.asarray(seed, dtype=np.int64))
    if seed.size == 0:
        raise ValueError("seed set must be nonempty")
    N = net.N
    sentinel = cfg.sentinel_for(N)
    indptr, indices = net.csr
    times = np.full(N, sentinel, dtype=np.int64)
    _spread(indptr, indices, seed, float(cfg.threshold), sentinel, times,
            np.zeros(N, np.int64), np.zeros(N, np.int64))
    return times


@dataclass(frozen=True, eq=False)
class ActivationMatrix:
    """``times[j, i]`` is the activation time of node i when seeded at cluster j."""
    times: np.ndarray
    sentinel: int

    @property
    def N(self) -> int:
        return self.times.shape[0]

    def has_sentinel(self) -> bool:
        return bool((self.times == self.sentinel).any())


def activation_matrix(net: Network, cfg: ContagionConfig) -> ActivationMatrix:
    sentinel = cfg.sentinel_for(net.N)
    indptr, indices = net.csr
    times = _all_cluster_runs(indptr, indices, float(cfg.threshold), sentinel)
    times.setflags(write=False)
    return ActivationMatrix(times=times, sentinel=sentinel)


# cache files ---------------------------------------------------------------

def cache_header(net: Network, cfg: ContagionConfig) -> str:
    t1000 = round(cfg.threshold * 1000)
    if abs(cfg.threshold * 1000 - t1000) > 1e-6:
        raise ValueError(f"threshold {cfg.threshold} is not a multiple of 0.001")
    return f"{net.header_line()} T1000={t1000} sentinel={cfg.sentinel_for(net.N)}"


def cache_path(cache_dir, header: str) -> Path:
    digest = hashlib.sha256(header.encode()).hexdigest()[:20]
    return Path(cache_dir) / f"act_{digest}.bin"


def save_activation_matrix(path, M: ActivationMatrix, header: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(header.encode() + b"\n")
        fh.write(np.ascontiguousarray(M.times, dtype="<i4").tobytes())
    tmp.replace(path)


def load_activation_matrix(path, header: str | None = None) -> ActivationMatrix | None:
    """Read a cache file; returns None when the stored header differs from ``header``."""
    with open(path, "rb") as fh:
        if fh.readline() != CACHE_MAGIC:
            raise ValueError(f"{path} is not an activation-matrix cache")
        stored = fh.readline().decode().rstrip("\n")
        if header is not None and stored != header:
            return None
        fields = dict(kv.split("=") for kv in stored.split())
        n = int(fields["n"])
        N = n * n
        times = np.frombuffer(fh.read(), dtype="<i4")
    if times.size != N * N:
        raise ValueError(f"{path}: expected {N * N} entries, found {times.size}")
    times = times.reshape(N, N).astype(np.int32)
    times.setflags(write=False)
    return ActivationMatrix(times=times, sentinel=int(fields["sentinel"]))


def cached_activation_matrix(net: Network, cfg: ContagionConfig, cache_dir=None) -> ActivationMatrix:
    if cache_dir is None:
        return activation_matrix(net, cfg)
    header = cache_header(net, cfg)
    path = cache_path(cache_dir, header)
    if path.exists():
        M = load_activation_matrix(path, header)
        if M is not None:
            return M
        log.warning("cache header mismatch at %s; recomputing", path)
    M = activation_matrix(net, cfg)
    save_activation_matrix(path, M, header)
    return M
