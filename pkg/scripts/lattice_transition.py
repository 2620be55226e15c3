"""Pure-lattice (q = 0) threshold scan: sentinels, rho and P against T.

    python scripts/lattice_transition.py --n 20 --p2 2
"""
import argparse

from contagion_maps.bifurcation import t_wfp
from contagion_maps.contagion import ContagionConfig, activation_matrix
from contagion_maps.dimension import embedding_dimension
from contagion_maps.geometry import geometry_score
from contagion_maps.maps import build_map
from contagion_maps.network import build_network

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=20)
ap.add_argument("--p2", type=int, default=2)
ap.add_argument("--variant", default="symmetric")
args = ap.parse_args()

net = build_network(args.n, q=0, p2=args.p2)
print(f"dG={net.dG}  T^WFP={t_wfp(net.dG, 0):.4f}")
print("T      sentinel  rho      P")
for T in (0.1, 0.2, 0.25, 0.3, 0.35, 0.37, 0.38, 0.4, 0.5):
    M = activation_matrix(net, ContagionConfig(T))
    cloud = build_map(M, args.variant)
    print(f"{T:<6} {str(M.has_sentinel()):<9} {geometry_score(cloud, args.n):.4f}  "
          f"{embedding_dimension(cloud).P}")
