"""Command-line entry point: ``contagion-maps <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bifurcation import bifurcation_table
from .config import MEASURES, SweepConfig, gamma_study_defaults, grid
from .contagion import ContagionConfig, cached_activation_matrix, cluster_seed, run_contagion
from .maps import PointCloud, build_map
from .network import Network, build_network, node_coords, node_index
from .render import render_heatmap
from .sweep import SweepResult, run_gamma_study, run_sweep, score_cloud, write_manifest

FULL_SCALE_N = 50


def _floats(text: str) -> list[float]:
    """'0.1,0.2' or a range 'start:stop:step' (inclusive)."""
    if ":" in text:
        a, b, c = (float(v) for v in text.split(":"))
        return grid(a, b, c)
    return [float(v) for v in text.split(",") if v]


def _ints(text: str) -> list[int]:
    if ":" in text:
        a, b = (int(v) for v in text.split(":"))
        return list(range(a, b + 1))
    return [int(v) for v in text.split(",") if v]


def _network_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--network", help="load a serialized network instead of building one")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--p2", type=int, default=2, help="squared geometric radius (1, 2 or 4)")
    p.add_argument("--q", type=int, default=0, help="non-geometric degree")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)


def _network(args) -> Network:
    if args.network:
        return Network.load(args.network)
    return build_network(args.n, q=args.q, gamma=args.gamma, rng_seed=args.seed, p2=args.p2)


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_net(args) -> int:
    net = _network(args)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    net.save(out)
    write_manifest(out.parent, None, {"network": net.header()})
    print(net.header_line())
    return 0


def cmd_contagion(args) -> int:
    net = _network(args)
    x, y = (int(v) for v in args.seed_node.split(","))
    times = run_contagion(net, cluster_seed(net, node_index(x, y, net.n)), ContagionConfig(args.T))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_x", "node_y", "time"])
        xs, ys = node_coords(np.arange(net.N), net.n)
        for i in range(net.N):
            w.writerow([int(xs[i]), int(ys[i]), int(times[i])])
    write_manifest(out.parent, None, {"network": net.header(), "T": args.T,
                                      "seed_node": [x, y]})
    return 0


def cmd_map(args) -> int:
    net = _network(args)
    M = cached_activation_matrix(net, ContagionConfig(args.T), args.cache_dir)
    cloud = build_map(M, args.variant)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    cloud.to_csv(out, net.n)
    write_manifest(out.parent, None, {"network": net.header(), "T": args.T,
                                      "variant": args.variant, "has_infinite": cloud.has_infinite})
    print(json.dumps({"has_infinite": cloud.has_infinite}))
    return 0


def cmd_score(args) -> int:
    cloud = PointCloud.from_csv(args.cloud)
    n = int(round(cloud.N ** 0.5))
    res = score_cloud(cloud, n, args.measure, q=args.wq, ground=args.ground)
    print(json.dumps({k: v for k, v in res.items() if v is not None}))
    return 0


def _sweep_config(args, base: SweepConfig) -> SweepConfig:
    cfg = SweepConfig.from_json(args.config) if args.config else base
    overrides = {
        "n": FULL_SCALE_N if args.full_scale else args.n,
        "p2": args.p2,
        "dng": _ints(args.dng) if args.dng else None,
        "T": _floats(args.T) if args.T else None,
        "gamma": _floats(args.gamma) if args.gamma else None,
        "variant": args.variant,
        "rng_seed": args.seed,
        "measures": args.measures.split(",") if args.measures is not None else None,
        "ground": args.ground,
        "wasserstein_q": args.wq,
        "delta": args.delta,
        "output_dir": args.out,
        "cache_dir": args.cache_dir,
        "workers": args.workers,
    }
    return cfg.updated(**overrides).validate()


def _run(args, base, runner) -> int:
    cfg = _sweep_config(args, base)
    result = runner(cfg)
    out = result.write()
    if args.render:
        measures = cfg.measures
        for g in cfg.gamma if len(cfg.dng) > 1 else []:
            for m in measures:
                render_heatmap(result, m, out / f"heatmap_{m}_gamma{g:g}", gamma=g)
    print(out / "results.csv")
    return 0


def cmd_sweep(args) -> int:
    return _run(args, SweepConfig(), run_sweep)


def cmd_gamma(args) -> int:
    return _run(args, gamma_study_defaults(), run_gamma_study)


def cmd_bifurcation(args) -> int:
    q_t = args.q_t if args.q_t in ("max", "seed") else int(args.q_t)
    rows = bifurcation_table(args.dG, args.N, q_t, args.w, _ints(args.dng), args.mode, args.delta)
    out = _out_dir(Path(args.out).parent)
    with open(args.out, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        cols = ["dNG", "t_wfp", "anc_horizon", "anc_lower_bound", "t_anc", "no_anc"]
        w.writerow(cols)
        for r in rows:
            w.writerow([r["dNG"]] + [repr(r[c]) for c in cols[1:5]] + [str(r["no_anc"]).lower()])
    # a neighbourhood taken from the seed cluster is a deliberately degenerate setting
    write_manifest(out, None, {"dG": args.dG, "N": args.N, "q_t": args.q_t, "w": args.w,
                               "mode": args.mode, "pathological": q_t == "seed"})
    return 0


def cmd_render(args) -> int:
    path = Path(args.results)
    results_csv = path / "results.csv" if path.is_dir() else path
    manifest = results_csv.parent / "manifest.json"
    cfg = None
    if manifest.exists():
        data = json.loads(manifest.read_text()).get("config")
        cfg = SweepConfig().updated(**data) if data else None
    result = SweepResult.read_csv(results_csv, cfg)
    gamma = args.gamma_value
    hm = render_heatmap(result, args.measure, args.out, overlay=not args.no_overlay, gamma=gamma)
    print(f"{args.out}.csv {len(hm.T)}x{len(hm.dng)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contagion-maps")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("net", help="build and serialize a network")
    _network_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("contagion", help="one cluster-seeded run")
    _network_args(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--seed-node", default="0,0", help="lattice coordinates x,y")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_contagion)

    p = sub.add_parser("map", help="contagion-map point cloud as CSV")
    _network_args(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--variant", default="symmetric", choices=["regular", "reflected", "symmetric"])
    p.add_argument("--cache-dir")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("score", help="score a point-cloud CSV")
    p.add_argument("--cloud", required=True)
    p.add_argument("--measure", action="append", choices=MEASURES, required=True)
    p.add_argument("--ground", default="linf", choices=["linf", "l2"])
    p.add_argument("--wq", type=float, default=2.0)
    p.set_defaults(func=cmd_score)

    for name, func, helptext in (("sweep", cmd_sweep, "(dNG, T) grid"),
                                 ("gamma", cmd_gamma, "gamma study")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="JSON config; flags override it")
        p.add_argument("--n", type=int)
        p.add_argument("--full-scale", action="store_true", help=f"n={FULL_SCALE_N}")
        p.add_argument("--p2", type=int)
        p.add_argument("--dng", help="e.g. 0:25 or 0,2,4")
        p.add_argument("--T", help="e.g. 0:1:0.01 or 0.2,0.4")
        p.add_argument("--gamma", help="e.g. 0:3:0.1")
        p.add_argument("--variant", choices=["regular", "reflected", "symmetric"])
        p.add_argument("--seed", type=int)
        p.add_argument("--measures", help=f"comma list from {','.join(MEASURES)}")
        p.add_argument("--ground", choices=["linf", "l2"])
        p.add_argument("--wq", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--out")
        p.add_argument("--cache-dir")
        p.add_argument("--workers", type=int)
        p.add_argument("--render", action="store_true", help="also write heatmaps")
        p.set_defaults(func=func)

    p = sub.add_parser("bifurcation", help="analytic WFP/ANC curves as CSV")
    p.add_argument("--dG", type=int, default=8)
    p.add_argument("--N", type=int, default=2500)
    p.add_argument("--q-t", default="max", help="count, 'max' or 'seed'")
    p.add_argument("--w", type=int, default=0)
    p.add_argument("--dng", default="0:25")
    p.add_argument("--mode", default="binomial", choices=["binomial", "exact"])
    p.add_argument("--delta", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bifurcation)

    p = sub.add_parser("render", help="heatmap CSV + PNG from a results table")
    p.add_argument("--results", required=True, help="results.csv or its directory")
    p.add_argument("--measure", required=True, choices=list(MEASURES))
    p.add_argument("--gamma-value", type=float)
    p.add_argument("--no-overlay", action="store_true")
    p.add_argument("--out", required=True, help="output prefix (no extension)")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
