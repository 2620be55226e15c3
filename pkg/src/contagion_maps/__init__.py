"""Contagion maps on noisy geometric lattices: networks, threshold dynamics,
geometry / dimension / topology scores, bifurcation curves and sweeps."""

__version__ = "0.1.0"

from .bifurcation import (
    RegimeQuery,
    anc_horizon,
    anc_lower_bound,
    bifurcation_table,
    d_in_cdf,
    d_in_pmf,
    q_max,
    t_anc,
    t_wfp,
)
from .config import ConfigError, SweepConfig
from .contagion import ActivationMatrix, ContagionConfig, activation_matrix, run_contagion
from .dimension import embedding_dimension, pca_project, residual_variance
from .geometry import geometry_score, pearson_correlation, torus_chordal_distance, torus_embedding
from .maps import PointCloud, build_map
from .network import Network, build_network, periodic_lattice_distance
