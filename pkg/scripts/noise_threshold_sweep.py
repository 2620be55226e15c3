"""(dNG, T) sweep on a gamma = 0 network with heatmaps and bifurcation overlays.

    python scripts/noise_threshold_sweep.py --n 20 --workers 4 --out runs/sweep
"""
import argparse
import logging

from contagion_maps.config import SweepConfig, grid
from contagion_maps.render import render_heatmap
from contagion_maps.sweep import run_sweep

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=20)
ap.add_argument("--p2", type=int, default=2)
ap.add_argument("--dng-max", type=int, default=25)
ap.add_argument("--t-step", type=float, default=0.01)
ap.add_argument("--topology", action="store_true", help="also compute W2 (slow)")
ap.add_argument("--workers", type=int, default=1)
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--out", default="runs/sweep")
args = ap.parse_args()
logging.basicConfig(level=logging.INFO)

measures = ["geometry", "dimensionality"] + (["topology"] if args.topology else [])
cfg = SweepConfig(n=args.n, p2=args.p2, dng=list(range(args.dng_max + 1)),
                  T=grid(0.0, 1.0, args.t_step), measures=measures, rng_seed=args.seed,
                  workers=args.workers, output_dir=args.out, cache_dir=f"{args.out}/cache")
result = run_sweep(cfg)
out = result.write()
for m in measures:
    render_heatmap(result, m, out / f"heatmap_{m}")
print(f"wrote {out}")
