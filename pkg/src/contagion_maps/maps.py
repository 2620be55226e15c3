"""Contagion maps: nodes -> points in R^N built from activation times."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

VARIANTS = ("regular", "reflected", "symmetric")


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    variant: str = "none"
    has_infinite: bool = False

    @property
    def N(self) -> int:
        return self.points.shape[0]

    def scaled(self, s: float) -> "PointCloud":
        return PointCloud(self.points * s, self.variant, self.has_infinite)

    def to_csv(self, path, n: int | None = None) -> None:
        """One row per node: node_x, node_y, then the coordinates."""
        N, D = self.points.shape
        if n is None:
            n = int(round(N ** 0.5))
        if n * n != N:
            raise ValueError(f"{N} points do not form an n x n lattice")
        x, y = np.divmod(np.arange(N), n)
        integral = np.all(self.points == np.round(self.points))
        with open(Path(path), "w", newline="\n") as fh:
            fh.write(",".join(["node_x", "node_y"] + [f"c{k}" for k in range(D)]) + "\n")
            for i in range(N):
                row = self.points[i]
                vals = [str(int(v)) for v in row] if integral else [repr(float(v)) for v in row]
                fh.write(f"{x[i]},{y[i]}," + ",".join(vals) + "\n")

    @classmethod
    def from_csv(cls, path, variant: str = "none") -> "PointCloud":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(points=data[:, 2:], variant=variant)


def build_map(M, variant: str = "symmetric") -> PointCloud:
    """Point cloud from an activation matrix (``times[j, i]``: seed j, node i)."""
    times = getattr(M, "times", M)
    times = np.asarray(times)
    if times.ndim != 2 or times.shape[0] != times.shape[1]:
        raise ValueError(f"activation matrix must be square, got shape {times.shape}")
    sentinel = getattr(M, "sentinel", 2 * times.shape[0])
    X = times.astype(np.float64)
    if variant == "regular":
        pts = X.T.copy()
    elif variant == "reflected":
        pts = X.copy()
    elif variant == "symmetric":
        pts = X + X.T
    else:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    pts.setflags(write=False)
    return PointCloud(points=pts, variant=variant, has_infinite=bool((times == sentinel).any()))
