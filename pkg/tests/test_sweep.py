import json

import numpy as np
import pytest

from contagion_maps.cli import main
from contagion_maps.config import ConfigError, SweepConfig, gamma_study_defaults, grid
from contagion_maps.network import Network
from contagion_maps.render import RaggedGridError, heatmap_matrix, overlay_curves, render_heatmap
from contagion_maps.sweep import SweepResult, derived_seed, run_gamma_study, run_sweep

SMALL = dict(n=8, p2=2, dng=[0, 2], T=[0.2, 0.4], measures=["geometry", "dimensionality"])


def rec(gamma, dNG, T, **kw):
    r = {"gamma": gamma, "dNG": dNG, "T": T, "rho": None, "P": None, "wasserstein": None,
         "has_infinite": False, "residuals": None, "wallclock": 0.0}
    r.update(kw)
    return r


def test_config_validation():
    with pytest.raises(ConfigError):
        SweepConfig(measures=[]).validate()
    with pytest.raises(ConfigError):
        SweepConfig(measures=["vibes"]).validate()
    with pytest.raises(ConfigError):
        SweepConfig(T=[1.2]).validate()
    with pytest.raises(ConfigError):
        SweepConfig(dng=[]).validate()
    with pytest.raises(ConfigError):
        run_gamma_study(SweepConfig(gamma=[]))
    with pytest.raises(ConfigError):
        SweepConfig().updated(colour="red")


def test_default_grids():
    cfg = SweepConfig()
    assert cfg.dng == list(range(26)) and len(cfg.T) == 101 and cfg.T[37] == 0.37
    g = gamma_study_defaults()
    assert g.dng == [2] and g.T == [0.05, 0.25, 0.4] and len(g.gamma) == 31 and g.gamma[-1] == 3.0
    assert grid(0, 1, 0.1)[3] == 0.3


def test_config_json_round_trip(tmp_path):
    cfg = SweepConfig(**SMALL)
    cfg.to_json(tmp_path / "c.json")
    back = SweepConfig.from_json(tmp_path / "c.json")
    assert back == cfg and back.config_hash() == cfg.config_hash()
    assert cfg.updated(workers=4, output_dir="x").config_hash() == cfg.config_hash()
    assert cfg.updated(rng_seed=1).config_hash() != cfg.config_hash()


def test_derived_seeds_differ():
    seeds = {derived_seed(0, g, d) for g in (0.0, 0.1, 3.0) for d in range(5)}
    assert len(seeds) == 15
    assert derived_seed(0, 0.3, 2) == derived_seed(0, 0.1 + 0.2, 2)


@pytest.mark.slow
def test_lattice_sweep_example():
    r = run_sweep(SweepConfig(n=20, p2=2, dng=[0], T=[0.2, 0.4],
                              measures=["geometry", "dimensionality"]))
    assert len(r.records) == 2
    low, high = r.cell(0.0, 0, 0.2), r.cell(0.0, 0, 0.4)
    assert low["P"] == 4 and low["rho"] >= 0.9 and not low["has_infinite"]
    assert high["has_infinite"]


def test_grid_completeness_and_determinism(tmp_path):
    cfg = SweepConfig(**SMALL, gamma=[0.0, 1.0], output_dir=str(tmp_path / "a"))
    a = run_sweep(cfg)
    assert len(a.records) == 2 * 2 * 2
    assert [(r["gamma"], r["dNG"], r["T"]) for r in a.records] == sorted(
        (g, d, t) for g in (0.0, 1.0) for d in (0, 2) for t in (0.2, 0.4))
    b = run_sweep(cfg.updated(workers=2, output_dir=str(tmp_path / "b")))
    a.write()
    b.write()
    assert (tmp_path / "a/results.csv").read_bytes() == (tmp_path / "b/results.csv").read_bytes()
    manifest = json.loads((tmp_path / "a/manifest.json").read_text())
    assert manifest["config_hash"] == cfg.config_hash()
    assert {"numpy", "scipy", "numba", "contagion_maps"} <= set(manifest["versions"])


def test_cache_cold_and_warm_agree(tmp_path):
    cfg = SweepConfig(**SMALL, cache_dir=str(tmp_path / "cache"))
    cold = run_sweep(cfg)
    assert any((tmp_path / "cache").iterdir())
    warm = run_sweep(cfg)
    assert cold.csv_text() == warm.csv_text()
    plain = SweepConfig(**SMALL)
    assert run_sweep(plain).csv_text() == cold.csv_text()


def test_results_csv_round_trip(tmp_path):
    r = run_sweep(SweepConfig(**SMALL))
    r.write(tmp_path)
    text = (tmp_path / "results.csv").read_text()
    assert "\r" not in text and text.splitlines()[0].split(",")[:3] == ["gamma", "dNG", "T"]
    back = SweepResult.read_csv(tmp_path / "results.csv", r.config)
    assert back.csv_text() == r.csv_text()


def test_heatmap_two_by_two(tmp_path):
    recs = [rec(0.0, d, T, rho=v) for (d, T), v in
            {(0, 0.2): 0.5, (1, 0.2): 0.25, (0, 0.4): 0.125, (1, 0.4): 1.0}.items()]
    result = SweepResult(SweepConfig(n=20, p2=2), recs)
    hm = render_heatmap(result, "geometry", tmp_path / "rho")
    assert (tmp_path / "rho.png").stat().st_size > 0
    lines = (tmp_path / "rho.csv").read_text().splitlines()
    assert lines == ["T,0,1", "0.4,0.125,1.0", "0.2,0.5,0.25"]
    assert hm.values.shape == (2, 2)


def test_white_cells_for_infinite_topology(tmp_path):
    recs = [rec(0.0, 0, 0.2, wasserstein=0.5), rec(0.0, 0, 0.4, wasserstein=3.0, has_infinite=True)]
    hm = heatmap_matrix(SweepResult(SweepConfig(), recs), "topology")
    assert hm.white.tolist() == [[True], [False]]
    hm.to_csv(tmp_path / "w.csv")
    assert (tmp_path / "w.csv").read_text().splitlines()[1] == "0.4,white"
    # other measures keep the number
    recs[1]["rho"] = recs[0]["rho"] = 0.1
    assert not heatmap_matrix(SweepResult(SweepConfig(), recs), "geometry").white.any()


def test_ragged_grid_rejected():
    recs = [rec(0.0, 0, 0.2, rho=1.0), rec(0.0, 1, 0.2, rho=1.0), rec(0.0, 0, 0.4, rho=1.0)]
    with pytest.raises(RaggedGridError):
        heatmap_matrix(SweepResult(SweepConfig(), recs), "geometry")
    with pytest.raises(ValueError):
        heatmap_matrix(SweepResult(SweepConfig(), recs[:1]), "topology")


def test_overlay_points():
    curves = overlay_curves(8, [0, 1, 2, 3], 2500)
    assert (2, 0.3) in curves["t_wfp"]
    assert all(t > 0 for _, t in curves["t_anc"])


def test_cli_end_to_end(tmp_path, capsys):
    net = tmp_path / "net.txt"
    assert main(["net", "--n", "6", "--p2", "1", "--q", "2", "--seed", "3", "--out", str(net)]) == 0
    assert Network.load(net).q == 2
    assert main(["contagion", "--network", str(net), "--T", "0.2", "--out", str(tmp_path / "t.csv")]) == 0
    assert (tmp_path / "t.csv").read_text().startswith("node_x,node_y,time\n")
    assert main(["map", "--network", str(net), "--T", "0.2", "--out", str(tmp_path / "m.csv")]) == 0
    capsys.readouterr()
    assert main(["score", "--cloud", str(tmp_path / "m.csv"), "--measure", "geometry",
                 "--measure", "dimensionality"]) == 0
    scores = json.loads(capsys.readouterr().out)
    assert -1 <= scores["rho"] <= 1 and scores["P"] >= 1

    cfg = tmp_path / "cfg.json"
    SweepConfig(**SMALL).to_json(cfg)
    out = tmp_path / "sweep"
    assert main(["sweep", "--config", str(cfg), "--T", "0.2,0.3", "--out", str(out), "--render"]) == 0
    assert (out / "results.csv").exists() and (out / "manifest.json").exists()
    assert (out / "heatmap_geometry_gamma0.png").exists()
    assert main(["render", "--results", str(out), "--measure", "dimensionality",
                 "--out", str(tmp_path / "P")]) == 0
    assert (tmp_path / "P.csv").read_text().splitlines()[0] == "T,0,2"

    bif = tmp_path / "bif.csv"
    assert main(["bifurcation", "--dng", "0:3", "--out", str(bif)]) == 0
    lines = bif.read_text().splitlines()
    assert lines[0] == "dNG,t_wfp,anc_horizon,anc_lower_bound,t_anc,no_anc"
    assert lines[3].split(",")[:3] == ["2", "0.3", "0.2"]
    assert main(["sweep", "--config", str(cfg), "--measures", "", "--out", str(out)]) == 2
