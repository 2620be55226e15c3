"""Heatmap tables and images for sweep results."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bifurcation import RegimeQuery, q_max, t_anc, t_wfp
from .network import geometric_neighbor_offsets

log = logging.getLogger(__name__)

MEASURE_COLUMNS = {"geometry": "rho", "dimensionality": "P", "topology": "wasserstein",
                   "rho": "rho", "P": "P", "wasserstein": "wasserstein"}
COLORMAP = "viridis"
WHITE = "white"


class RaggedGridError(ValueError):
    pass


@dataclass
class HeatmapMatrix:
    measure: str
    T: list[float]           # descending
    dng: list[int]           # ascending
    values: np.ndarray       # NaN where white
    white: np.ndarray        # bool mask

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["T"] + [str(d) for d in self.dng])
            for r, T in enumerate(self.T):
                row = [repr(T)]
                for c in range(len(self.dng)):
                    if self.white[r, c]:
                        row.append(WHITE)
                    else:
                        v = self.values[r, c]
                        row.append(str(int(v)) if self.measure == "P" and math.isfinite(v) else repr(float(v)))
                w.writerow(row)


def heatmap_matrix(result, measure: str, gamma: float | None = None) -> HeatmapMatrix:
    """Rows are T descending, columns dNG ascending; ragged grids are rejected."""
    col = MEASURE_COLUMNS.get(measure)
    if col is None:
        raise ValueError(f"unknown measure {measure!r}")
    recs = result.records
    gammas = sorted({r["gamma"] for r in recs})
    if gamma is None:
        if len(gammas) != 1:
            raise ValueError(f"result spans gammas {gammas}; pick one")
        gamma = gammas[0]
    recs = [r for r in recs if r["gamma"] == gamma]
    if not recs:
        raise ValueError(f"no records at gamma={gamma}")
    Ts = sorted({r["T"] for r in recs}, reverse=True)
    dngs = sorted({r["dNG"] for r in recs})
    cells = {}
    for r in recs:
        key = (r["T"], r["dNG"])
        if key in cells:
            raise RaggedGridError(f"duplicate cell {key}")
        cells[key] = r
    if len(cells) != len(Ts) * len(dngs):
        raise RaggedGridError(f"{len(cells)} cells do not fill a {len(Ts)} x {len(dngs)} grid")
    values = np.full((len(Ts), len(dngs)), np.nan)
    white = np.zeros(values.shape, dtype=bool)
    for a, T in enumerate(Ts):
        for b, d in enumerate(dngs):
            r = cells[(T, d)]
            if r[col] is None:
                raise ValueError(f"measure {measure!r} was not computed in this sweep")
            if col == "wasserstein" and r["has_infinite"]:
                white[a, b] = True
            else:
                values[a, b] = float(r[col])
    return HeatmapMatrix(col, Ts, dngs, values, white)


def overlay_curves(dG: int, dng, N: int, q_t: int | None = None, w: int = 0) -> dict:
    """Bifurcation curve points (dNG, T) for the overlay; T^ANC skipped when undefined."""
    curves = {"t_wfp": [(d, t_wfp(dG, d)) for d in dng]}
    try:
        qt = q_max(N, dG) if q_t is None else q_t
        pts = []
        for d in dng:
            if d >= 1:
                anc = t_anc(RegimeQuery(dG=dG, dNG=d, N=N, q_t=qt, w=w))
                if not anc.no_anc:
                    pts.append((d, anc.value))
        curves["t_anc"] = pts
    except ValueError as exc:
        log.warning("no T^ANC overlay: %s", exc)
    return curves


def render_heatmap(result, measure: str, out_prefix, overlay: bool = True,
                   gamma: float | None = None) -> HeatmapMatrix:
    """Write ``<prefix>.csv`` and ``<prefix>.png``; returns the matrix."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    hm = heatmap_matrix(result, measure, gamma)
    out_prefix = Path(out_prefix)
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    hm.to_csv(out_prefix.with_suffix(".csv"))

    cmap = matplotlib.colormaps[COLORMAP].copy()
    cmap.set_bad("white")
    fig, ax = plt.subplots(figsize=(6, 4.5))
    data = np.ma.masked_invalid(hm.values[::-1])
    dng, Ts = np.array(hm.dng, float), np.array(hm.T[::-1], float)
    extent = [dng[0] - 0.5, dng[-1] + 0.5, Ts[0], Ts[-1]]
    if len(Ts) > 1:
        half = (Ts[-1] - Ts[0]) / (len(Ts) - 1) / 2
        extent[2:] = [Ts[0] - half, Ts[-1] + half]
    im = ax.imshow(data, origin="lower", aspect="auto", cmap=cmap, extent=extent,
                   interpolation="nearest")
    fig.colorbar(im, ax=ax, label=hm.measure)
    if overlay:
        cfg = result.config
        dG = len(geometric_neighbor_offsets(p2=cfg.p2))
        try:
            curves = overlay_curves(dG, hm.dng, cfg.n * cfg.n, cfg.anc_q_t, cfg.anc_width)
        except ValueError as exc:
            log.warning("no overlay: %s", exc)
            curves = {}
        styles = {"t_wfp": ("w-", "T^WFP"), "t_anc": ("r--", "T^ANC")}
        for name, pts in curves.items():
            if pts:
                x, y = zip(*pts)
                ax.plot(x, y, styles[name][0], lw=1.5, label=styles[name][1])
        if curves:
            ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel("dNG")
    ax.set_ylabel("T")
    fig.tight_layout()
    fig.savefig(out_prefix.with_suffix(".png"), dpi=120)
    plt.close(fig)
    return hm
