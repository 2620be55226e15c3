"""Grid sweeps over (gamma, dNG, T): build, spread, map, score, tabulate."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .config import ConfigError, SweepConfig
from .contagion import ContagionConfig, cached_activation_matrix
from .dimension import embedding_dimension
from .geometry import geometry_score
from .maps import build_map
from .network import build_network
from .tda import reference_torus_barcode, topology_score

log = logging.getLogger(__name__)

RESULT_COLUMNS = ("gamma", "dNG", "T", "rho", "P", "wasserstein", "has_infinite", "residuals")


def derived_seed(rng_seed: int, gamma: float, dNG: int) -> int:
    """Independent network seed for one (gamma, dNG) cell."""
    ss = np.random.SeedSequence([rng_seed, int(round(gamma * 1000)), dNG])
    return int(ss.generate_state(1)[0])


@dataclass
class SweepResult:
    config: SweepConfig
    records: list[dict]
    provenance: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in self.records:
            w.writerow([_fmt(r[c]) for c in RESULT_COLUMNS])
        return buf.getvalue()

    def digest(self) -> str:
        return hashlib.sha256(self.csv_text().encode()).hexdigest()

    def cell(self, gamma: float, dNG: int, T: float) -> dict:
        for r in self.records:
            if r["gamma"] == gamma and r["dNG"] == dNG and r["T"] == T:
                return r
        raise KeyError((gamma, dNG, T))

    def write(self, output_dir=None) -> Path:
        out = Path(output_dir or self.config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.csv").write_text(self.csv_text(), newline="\n")
        with open(out / "timings.csv", "w", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["gamma", "dNG", "T", "wallclock_s"])
            for r in self.records:
                w.writerow([_fmt(r["gamma"]), r["dNG"], _fmt(r["T"]), f"{r['wallclock']:.4f}"])
        write_manifest(out, self.config, extra={"results_sha256": self.digest(), **self.provenance})
        return out

    @classmethod
    def read_csv(cls, path, config: SweepConfig | None = None) -> "SweepResult":
        records = []
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                records.append({
                    "gamma": float(row["gamma"]),
                    "dNG": int(row["dNG"]),
                    "T": float(row["T"]),
                    "rho": _parse(row["rho"]),
                    "P": int(row["P"]) if row["P"] else None,
                    "wasserstein": _parse(row["wasserstein"]),
                    "has_infinite": row["has_infinite"] == "true",
                    "residuals": json.loads(row["residuals"]) if row["residuals"] else None,
                    "wallclock": math.nan,
                })
        return cls(config or SweepConfig(), records)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return json.dumps(v)
    return str(v)


def _parse(s: str):
    return float(s) if s else None


def versions() -> dict:
    import numba
    import scipy

    from . import __version__
    return {"contagion_maps": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "scipy": scipy.__version__, "numba": numba.__version__}


def write_manifest(out_dir, cfg: SweepConfig | None, extra: dict | None = None) -> Path:
    manifest = {"versions": versions()}
    if cfg is not None:
        manifest["config"] = asdict(cfg)
        manifest["config_hash"] = cfg.config_hash()
    manifest.update(extra or {})
    path = Path(out_dir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


@lru_cache(maxsize=4)
def _reference(n: int):
    return reference_torus_barcode(n, max_dim=1)


def score_cloud(cloud, n: int, measures, q: float = 2.0, ground: str = "linf") -> dict:
    out = {"rho": None, "P": None, "residuals": None, "wasserstein": None}
    if "geometry" in measures:
        try:
            out["rho"] = geometry_score(cloud, n)
        except ValueError as exc:
            log.warning("geometry undefined: %s", exc)
            out["rho"] = math.nan
    if "dimensionality" in measures:
        rep = embedding_dimension(cloud)
        out["P"] = rep.P
        out["residuals"] = [float(r) for r in rep.residuals]
    if "topology" in measures:
        out["wasserstein"] = topology_score(cloud, _reference(n), q=q, ground=ground)
    return out


def _run_cell_group(cfg: SweepConfig, gamma: float, dNG: int) -> list[dict]:
    """Every threshold for one (gamma, dNG) network."""
    seed = derived_seed(cfg.rng_seed, gamma, dNG)
    net = build_network(cfg.n, q=dNG, gamma=gamma, rng_seed=seed, p2=cfg.p2)
    records = []
    for T in cfg.T:
        t0 = time.perf_counter()
        M = cached_activation_matrix(net, ContagionConfig(T), cfg.cache_dir)
        cloud = build_map(M, cfg.variant)
        rec = {"gamma": float(gamma), "dNG": int(dNG), "T": float(T),
               "has_infinite": bool(cloud.has_infinite)}
        rec.update(score_cloud(cloud, cfg.n, cfg.measures, cfg.wasserstein_q, cfg.ground))
        rec["wallclock"] = time.perf_counter() - t0
        records.append(rec)
    return records


def _sort_key(r: dict):
    return (r["gamma"], r["dNG"], r["T"])


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Score every (gamma, dNG, T) cell; one network per (gamma, dNG)."""
    cfg.validate()
    groups = [(g, d) for g in cfg.gamma for d in cfg.dng]
    if len(set(groups)) != len(groups) or len(set(cfg.T)) != len(cfg.T):
        raise ConfigError("grid values must be unique")
    records: list[dict] = []
    if cfg.workers == 1:
        for g, d in groups:
            records.extend(_run_cell_group(cfg, g, d))
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_cell_group, cfg, g, d) for g, d in groups]
            for fut in futures:
                records.extend(fut.result())
    records.sort(key=_sort_key)
    prov = {"config_hash": cfg.config_hash(), "versions": versions()}
    return SweepResult(cfg, records, prov)


def run_gamma_study(cfg: SweepConfig) -> SweepResult:
    """Same engine as ``run_sweep`` with the gamma axis as the study variable."""
    if not cfg.gamma:
        raise ConfigError("gamma study needs a nonempty gamma list")
    return run_sweep(cfg)
