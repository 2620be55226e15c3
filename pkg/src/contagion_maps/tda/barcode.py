"""Barcodes, calibration, Wasserstein distances and the torus reference."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import pdist, squareform

from ..geometry import torus_cloud
from .explicit import explicit_pairs
from .rips import check_distance_matrix, enclosing_radius, rips_pairs

GROUND_METRICS = ("linf", "l2")


class CalibrationError(ValueError):
    pass


class IncomparableDiagramsError(ValueError):
    pass


class PersistencePair(NamedTuple):
    birth: float
    death: float
    dim: int

    @property
    def persistence(self) -> float:
        return self.death - self.birth


def _as_pairs(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64).reshape(-1, 2)
    a = a[a[:, 1] > a[:, 0]]
    return a[np.lexsort((a[:, 1], a[:, 0]))]


@dataclass(frozen=True, eq=False)
class Barcode:
    """Persistence pairs grouped by dimension (each an (k, 2) birth/death array)."""
    pairs: dict[int, np.ndarray] = field(default_factory=dict)
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "pairs", {int(d): _as_pairs(a) for d, a in self.pairs.items()})

    def __getitem__(self, dim: int) -> np.ndarray:
        return self.pairs.get(dim, np.zeros((0, 2)))

    @property
    def dims(self) -> list[int]:
        return sorted(self.pairs)

    def restrict(self, dim: int) -> "Barcode":
        return Barcode({dim: self[dim]}, self.scale)

    def scaled(self, s: float) -> "Barcode":
        return Barcode({d: a * s for d, a in self.pairs.items()}, self.scale)

    def finite(self, dim: int) -> np.ndarray:
        a = self[dim]
        return a[np.isfinite(a[:, 1])]

    def infinite(self, dim: int) -> np.ndarray:
        a = self[dim]
        return a[~np.isfinite(a[:, 1])]

    def persistences(self, dim: int) -> np.ndarray:
        a = self.finite(dim)
        return np.sort(a[:, 1] - a[:, 0])[::-1]

    def betti(self, dim: int, eps: float) -> int:
        a = self[dim]
        return int(np.sum((a[:, 0] <= eps) & (eps < a[:, 1])))

    def __iter__(self):
        for d in self.dims:
            for b, e in self.pairs[d]:
                yield PersistencePair(float(b), float(e), d)

    def __len__(self) -> int:
        return sum(len(a) for a in self.pairs.values())

    def equals(self, other: "Barcode") -> bool:
        dims = set(self.dims) | set(other.dims)
        return all(np.array_equal(self[d], other[d]) for d in dims)

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="\n") as fh:
            if self.scale != 1.0:
                fh.write(f"# scale={self.scale!r}\n")
            fh.write("dim,birth,death\n")
            for b, e, d in self:
                death = "inf" if math.isinf(e) else repr(e)
                fh.write(f"{d},{b!r},{death}\n")

    @classmethod
    def from_csv(cls, path) -> "Barcode":
        scale = 1.0
        rows: dict[int, list] = {}
        for line in Path(path).read_text().splitlines():
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                if key == "scale":
                    scale = float(val)
                continue
            if not line or line.startswith("dim"):
                continue
            d, b, e = line.split(",")
            rows.setdefault(int(d), []).append((float(b), float(e)))
        return cls({d: np.array(v) for d, v in rows.items()}, scale)


def vr_persistence(dist, max_dim: int = 1, threshold: float | None = None) -> Barcode:
    """Barcode of the Vietoris-Rips filtration of a distance matrix.

    The filtration runs up to the enclosing radius, past which the complex
    is a cone and carries no further homology.
    """
    D = check_distance_matrix(dist)
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    if threshold is None:
        threshold = enclosing_radius(D)
    if max_dim <= 1:
        return Barcode(rips_pairs(D, max_dim, threshold))
    return Barcode(explicit_pairs(D, max_dim, threshold))


def cloud_persistence(points, max_dim: int = 1) -> Barcode:
    X = np.asarray(getattr(points, "points", points), dtype=np.float64)
    return vr_persistence(squareform(pdist(X)), max_dim)


def reference_torus_barcode(n: int, max_dim: int = 1) -> Barcode:
    """Barcode of the n^2 regularly spaced points of the flat torus in R^4."""
    if n < 6:
        raise ValueError("reference torus needs n >= 6")
    return cloud_persistence(torus_cloud(n), max_dim)


def calibrate(b: Barcode) -> Barcode:
    """Divide every endpoint by the longest finite persistence (recorded in ``scale``)."""
    finite = [b.finite(d) for d in b.dims]
    pers = [a[:, 1] - a[:, 0] for a in finite if len(a)]
    if not pers:
        raise CalibrationError("barcode has no finite bars")
    longest = float(max(p.max() for p in pers))
    return Barcode({d: b[d] / longest for d in b.dims}, b.scale * longest)


def _ground(ground: str):
    if ground == "linf":
        return (lambda db, dd: np.maximum(np.abs(db), np.abs(dd))), 0.5
    if ground == "l2":
        return (lambda db, dd: np.hypot(db, dd)), 1.0 / math.sqrt(2.0)
    raise ValueError(f"unknown ground metric {ground!r}; expected one of {GROUND_METRICS}")


def _diagram_key(a: np.ndarray) -> tuple:
    return (a.shape[0], a.tobytes())


def wasserstein(D1, D2, dim: int = 1, q: float = 2.0, ground: str = "linf",
                infinite: str = "match") -> float:
    """q-Wasserstein distance between the dimension-``dim`` diagrams.

    Finite points may be matched to each other or to their nearest point
    on the diagonal.  Infinite bars (``infinite="match"``) are paired in
    order of birth and contribute |b1 - b2|^q; ``infinite="drop"`` ignores
    them.  Unequal infinite counts are an error in both modes.
    """
    if not q >= 1 or math.isinf(q):
        raise ValueError("q must be a finite number >= 1")
    A = D1[dim] if isinstance(D1, Barcode) else _as_pairs(D1)
    B = D2[dim] if isinstance(D2, Barcode) else _as_pairs(D2)
    if _diagram_key(A) > _diagram_key(B):
        A, B = B, A  # canonical order: the distance is exactly symmetric
    inf_a = np.sort(A[~np.isfinite(A[:, 1]), 0])
    inf_b = np.sort(B[~np.isfinite(B[:, 1]), 0])
    if inf_a.size != inf_b.size:
        raise IncomparableDiagramsError(
            f"diagrams have {inf_a.size} and {inf_b.size} infinite bars in dimension {dim}")
    costs = []
    if infinite == "match":
        costs.extend((np.abs(inf_a - inf_b) ** q).tolist())
    elif infinite != "drop":
        raise ValueError(f"unknown infinite-bar policy {infinite!r}")

    A = A[np.isfinite(A[:, 1])]
    B = B[np.isfinite(B[:, 1])]
    m, n = len(A), len(B)
    if m + n:
        metric, diag_factor = _ground(ground)
        C = np.zeros((m + n, m + n))
        C[:m, :n] = metric(A[:, None, 0] - B[None, :, 0], A[:, None, 1] - B[None, :, 1]) ** q
        C[:m, n:] = np.inf
        C[m:, :n] = np.inf
        C[np.arange(m), n + np.arange(m)] = (diag_factor * (A[:, 1] - A[:, 0])) ** q
        C[m + np.arange(n), np.arange(n)] = (diag_factor * (B[:, 1] - B[:, 0])) ** q
        rows, cols = linear_sum_assignment(C)
        costs.extend(C[rows, cols].tolist())
    return math.fsum(costs) ** (1.0 / q)


def topology_score(cloud, ref: Barcode, q: float = 2.0, ground: str = "linf") -> float:
    """W_q between the calibrated dimension-1 barcodes of ``cloud`` and ``ref``.

    A cloud without any dimension-1 bar is compared as the empty diagram.
    """
    ref1 = ref.restrict(1)
    if len(ref1.finite(1)) == 0:
        raise CalibrationError("reference barcode has no finite dimension-1 bars")
    ref_cal = calibrate(ref1)
    b = cloud if isinstance(cloud, Barcode) else cloud_persistence(cloud, max_dim=1)
    b1 = b.restrict(1)
    if len(b1.finite(1)):
        b1 = calibrate(b1)
    return wasserstein(b1, ref_cal, dim=1, q=q, ground=ground)
