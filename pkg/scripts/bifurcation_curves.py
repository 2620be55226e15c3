"""Analytic WFP / ANC curves for several (q_t, w) choices, as CSV and PNG.

Also lists where the lower bound of the ANC sandwich is violated.

    python scripts/bifurcation_curves.py --dG 8 --N 2500 --out runs/bifurcation
"""
import argparse
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from contagion_maps.bifurcation import bifurcation_table, q_max, sandwich_violations

ap = argparse.ArgumentParser()
ap.add_argument("--dG", type=int, default=8)
ap.add_argument("--N", type=int, default=2500)
ap.add_argument("--mode", default="binomial", choices=["binomial", "exact"])
ap.add_argument("--out", default="runs/bifurcation")
args = ap.parse_args()

out = Path(args.out)
out.mkdir(parents=True, exist_ok=True)
qm = q_max(args.N, args.dG)
settings = [("seed", 0), ("seed", args.dG // 2), (qm // 2, 0), (qm, 0), (qm, args.dG)]
dng = range(0, 26)

fig, ax = plt.subplots(figsize=(6, 4.5))
for k, (q_t, w) in enumerate(settings):
    rows = bifurcation_table(args.dG, args.N, q_t, w, dng, args.mode)
    with open(out / f"curves_qt{q_t}_w{w}.csv", "w", newline="\n") as fh:
        wr = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        wr.writeheader()
        wr.writerows(rows)
    if k == 0:
        ax.plot(dng, [r["t_wfp"] for r in rows], "k-", label="T^WFP")
        ax.plot(dng, [r["anc_horizon"] for r in rows], "k:", label="H^ANC")
    pts = [(r["dNG"], r["t_anc"]) for r in rows if not r["no_anc"]]
    if pts:
        ax.step(*zip(*pts), where="mid", label=f"T^ANC q_t={q_t} w={w}")
ax.set_xlabel("dNG")
ax.set_ylabel("T")
ax.set_ylim(0, 1)
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(out / "bifurcation.png", dpi=120)

bad = sandwich_violations(args.dG, args.N, [qm // 2, qm], [0, args.dG], mode=args.mode)
for v in bad:
    print("lower bound not met:", v)
print(f"wrote {out}; {len(bad)} sandwich violations")
