"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line
that is printed in the pytest terminal summary (and immediately with -s)."""
import time

import numpy as np
import pytest
from scipy.spatial.distance import pdist, squareform

from contagion_maps.bifurcation import (
    RegimeQuery,
    anc_horizon,
    anc_lower_bound,
    d_in_cdf,
    q_max,
    t_anc,
    t_wfp,
)
from contagion_maps.config import SweepConfig, grid
from contagion_maps.contagion import ContagionConfig, activation_matrix, cluster_seed, run_contagion
from contagion_maps.dimension import embedding_dimension
from contagion_maps.geometry import geometry_score
from contagion_maps.maps import build_map
from contagion_maps.network import build_network
from contagion_maps.render import render_heatmap
from contagion_maps.sweep import run_gamma_study, run_sweep
from contagion_maps.tda import calibrate, cloud_persistence, reference_torus_barcode, vr_persistence, wasserstein
from oracles import brute_force_wasserstein, naive_vr_barcode

RESULTS: list[str] = []


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_bifurcation_exactness():
    t0 = time.perf_counter()
    values = (t_wfp(8, 2), t_wfp(4, 0), anc_horizon(8, 2), q_max(2500, 8))
    elapsed = time.perf_counter() - t0
    ok = values == (0.3, 0.25, 0.2, 988) and elapsed < 1.0
    report("bifurcation exactness", ok, f"values={values} time={elapsed:.3f}s")


@pytest.mark.slow
def test_pure_lattice_transition():
    t0 = time.perf_counter()
    net = build_network(20, q=0, p2=2)
    rows, ok = [], True
    for T in (0.30, 0.35):
        M = activation_matrix(net, ContagionConfig(T))
        cloud = build_map(M, "symmetric")
        rho, P = geometry_score(cloud, 20), embedding_dimension(cloud).P
        rows.append(f"T={T}: sentinel={M.has_sentinel()} P={P} rho={rho:.4f}")
        ok &= (not M.has_sentinel()) and P == 4 and rho >= 0.9
    for T in (0.38, 0.40):
        M = activation_matrix(net, ContagionConfig(T))
        rho = geometry_score(build_map(M, "symmetric"), 20)
        rows.append(f"T={T}: sentinel={M.has_sentinel()} rho={rho:.4f}")
        ok &= M.has_sentinel() and rho <= 0.2
    elapsed = time.perf_counter() - t0
    report("pure-lattice transition", ok and elapsed < 300, "; ".join(rows) + f"; time={elapsed:.1f}s")


def test_stalled_contagion_fixture():
    t0 = time.perf_counter()
    counts = {}
    for n in range(5, 31):
        net = build_network(n, q=0, p2=1)
        times = run_contagion(net, cluster_seed(net, 0), ContagionConfig(0.3))
        counts[n] = int((times < 2 * net.N).sum())
    elapsed = time.perf_counter() - t0
    ok = set(counts.values()) == {9} and elapsed < 1.0
    report("stalled-contagion fixture", ok, f"active counts n=5..30: {sorted(set(counts.values()))} time={elapsed:.3f}s")


def _random_clouds(count, max_points, seed):
    rng = np.random.default_rng(seed)
    for k in range(count):
        N = int(rng.integers(1, max_points + 1))
        dim = int(rng.integers(1, 4))
        X = rng.integers(0, 3, size=(N, dim)).astype(float) if k % 3 == 0 else rng.normal(size=(N, dim))
        yield squareform(pdist(X)) if N > 1 else np.zeros((1, 1))


def test_ph_oracle_equivalence():
    t0 = time.perf_counter()
    bad = 0
    for D in _random_clouds(200, 8, seed=2024):
        b = vr_persistence(D, max_dim=1)
        ref = naive_vr_barcode(D, 1)
        got = {d: sorted(map(tuple, b[d].tolist())) for d in (0, 1)}
        bad += got != ref
    elapsed = time.perf_counter() - t0
    report("PH oracle equivalence", bad == 0 and elapsed < 60, f"mismatches={bad}/200 time={elapsed:.1f}s")


def test_torus_topological_signature():
    t0 = time.perf_counter()
    b = reference_torus_barcode(10)
    p = b.persistences(1)
    n_inf = len(b.infinite(0))
    elapsed = time.perf_counter() - t0
    ok = p[0] >= 3 * p[2] and p[1] >= 3 * p[2] and n_inf == 1 and elapsed < 120
    report("torus topological signature", ok,
           f"top dim-1 persistences={np.round(p[:3], 4).tolist()} infinite dim-0={n_inf} time={elapsed:.1f}s")


def test_calibration_scale_invariance():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        X = rng.normal(size=(int(rng.integers(8, 40)), int(rng.integers(2, 5))))
        base = calibrate(cloud_persistence(X))
        for s in (0.1, 10.0):
            other = calibrate(cloud_persistence(s * X))
            worst = max(worst, wasserstein(base, other, dim=0), wasserstein(base, other, dim=1))
    report("calibration scale-invariance", worst <= 1e-9, f"max W2={worst:.3e}")


def test_wasserstein_metric_axioms():
    rng = np.random.default_rng(11)

    def diagram():
        k = int(rng.integers(0, 7))
        b = rng.uniform(0, 5, size=k)
        return np.stack([b, b + rng.uniform(0.01, 5, size=k)], axis=1).reshape(-1, 2)

    sym = ident = tri = brute = 0
    for _ in range(100):
        A, B, C = diagram(), diagram(), diagram()
        ab = wasserstein(A, B)
        sym += ab != wasserstein(B, A)
        ident += wasserstein(A, A) != 0.0
        tri += wasserstein(A, C) > ab + wasserstein(B, C) + 1e-9
        ref = brute_force_wasserstein(A, B, 2.0, "linf")
        brute += abs(ab - ref) > 1e-9 * max(1.0, ref)
    ok = sym == ident == tri == brute == 0
    report("Wasserstein metric axioms", ok,
           f"violations: symmetry={sym} identity={ident} triangle={tri} brute-force={brute}")


def test_t_anc_sandwich():
    t0 = time.perf_counter()
    bad = []
    for q_t in (494, 988):
        for w in (0, 8):
            for dNG in range(1, 26):
                q = RegimeQuery(dG=8, dNG=dNG, N=2500, q_t=q_t, w=w)
                v = t_anc(q).value
                if not anc_lower_bound(q) <= v < anc_horizon(8, dNG):
                    bad.append(f"(q_t={q_t},w={w},dNG={dNG}: {v:.4f} vs lower {anc_lower_bound(q):.4f})")
    elapsed = time.perf_counter() - t0
    report("T^ANC sandwich", not bad and elapsed < 1.0,
           f"{len(bad)}/100 violations {' '.join(bad)} time={elapsed:.3f}s")


def test_exact_vs_binomial_agreement():
    worst = 0.0
    for dNG in range(0, 11):
        for k in range(dNG + 1):
            worst = max(worst, abs(d_in_cdf(k, dNG, 988, 10 ** 6, "exact") - d_in_cdf(k, dNG, 988, 10 ** 6)))
    report("exact-vs-binomial d_in agreement", worst < 1e-4, f"max |diff|={worst:.3e}")


@pytest.mark.slow
def test_gamma_study_directionality():
    rho0, rho3, w0, w3 = [], [], [], []
    p_ok = 0
    for seed in range(10):
        r = run_gamma_study(SweepConfig(n=20, p2=2, dng=[2], T=[0.05], gamma=[0.0, 3.0], rng_seed=seed,
                                        measures=["geometry", "topology"]))
        rho0.append(r.cell(0.0, 2, 0.05)["rho"])
        rho3.append(r.cell(3.0, 2, 0.05)["rho"])
        w0.append(r.cell(0.0, 2, 0.05)["wasserstein"])
        w3.append(r.cell(3.0, 2, 0.05)["wasserstein"])
        p = run_gamma_study(SweepConfig(n=20, p2=2, dng=[2], T=[0.25], gamma=grid(0.0, 3.0, 0.1),
                                        rng_seed=seed, measures=["dimensionality"], workers=4))
        p_ok += all(rec["P"] == 4 for rec in p.records)
    m = [float(np.median(v)) for v in (rho0, rho3, w0, w3)]
    ok = m[1] > m[0] and m[3] < m[2] and p_ok > 5
    report("gamma-study directionality", ok,
           f"median rho {m[0]:.3f}->{m[1]:.3f}, median W2 {m[2]:.3f}->{m[3]:.3f}, P=4 for all gamma on {p_ok}/10 seeds")


def test_end_to_end_determinism(tmp_path):
    base = SweepConfig(n=8, p2=2, dng=[0, 1, 2], T=[0.1, 0.3, 0.5], gamma=[0.0, 2.0],
                       measures=["geometry", "dimensionality", "topology"])
    outputs = []
    for k, workers in enumerate((1, 1, 3)):
        out = tmp_path / f"run{k}"
        res = run_sweep(base.updated(workers=workers, output_dir=str(out)))
        res.write()
        for m in base.measures:
            render_heatmap(res, m, out / f"heat_{m}", gamma=0.0)
        outputs.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv")) if p.name != "timings.csv"})
    same = outputs[0] == outputs[1] == outputs[2]
    report("end-to-end determinism", same, f"files compared: {sorted(outputs[0])}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
