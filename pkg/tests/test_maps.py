import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from contagion_maps.contagion import ActivationMatrix, ContagionConfig, run_contagion
from contagion_maps.maps import PointCloud, build_map
from contagion_maps.network import build_network
from oracles import bfs_distances

square = st.integers(2, 7).flatmap(
    lambda N: arrays(np.int32, (N, N), elements=st.integers(0, 2 * N)))


def test_two_by_two_symmetric():
    cloud = build_map(np.array([[0, 3], [5, 0]]), "symmetric")
    assert cloud.points.tolist() == [[0, 8], [8, 0]]


def test_variant_orientation():
    M = np.array([[0, 3], [5, 0]])
    assert build_map(M, "regular").points.tolist() == [[0, 5], [3, 0]]
    assert build_map(M, "reflected").points.tolist() == [[0, 3], [5, 0]]


def test_non_square_rejected():
    with pytest.raises(ValueError):
        build_map(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        build_map(np.zeros((2, 2)), "sideways")


@given(square)
def test_symmetric_is_transpose_invariant_and_sums(M):
    sym = build_map(M, "symmetric").points
    assert np.array_equal(sym, sym.T)
    assert np.array_equal(build_map(M, "regular").points + build_map(M, "reflected").points, sym)


@given(square, st.randoms())
def test_permutation_equivariance(M, rnd):
    N = M.shape[0]
    perm = list(range(N))
    rnd.shuffle(perm)
    perm = np.array(perm)
    relabelled = M[np.ix_(perm, perm)]
    for variant in ("regular", "reflected", "symmetric"):
        a = build_map(M, variant).points
        b = build_map(relabelled, variant).points
        assert np.array_equal(b, a[np.ix_(perm, perm)])


def test_has_infinite_flag():
    M = ActivationMatrix(np.array([[0, 8], [1, 0]], dtype=np.int32), sentinel=8)
    assert build_map(M).has_infinite
    assert not build_map(ActivationMatrix(np.array([[0, 1], [1, 0]], dtype=np.int32), 8)).has_infinite


def test_zero_threshold_regular_map_is_graph_distance():
    net = build_network(6, q=2, gamma=0.0, rng_seed=2, p2=1)
    times = np.stack([run_contagion(net, [j], ContagionConfig(0.0)) for j in range(net.N)])
    cloud = build_map(times, "regular").points
    adj = [list(net.neighbors(i)) for i in range(net.N)]
    dist = np.array([bfs_distances(adj, j) for j in range(net.N)])
    assert np.array_equal(cloud, dist)


def test_csv_round_trip(tmp_path):
    cloud = build_map(np.arange(16).reshape(4, 4), "symmetric")
    cloud.to_csv(tmp_path / "c.csv")
    text = (tmp_path / "c.csv").read_text()
    assert text.splitlines()[0] == "node_x,node_y,c0,c1,c2,c3"
    back = PointCloud.from_csv(tmp_path / "c.csv")
    assert np.array_equal(back.points, cloud.points)
    frac = PointCloud(np.array([[0.1, 0.25], [1 / 3, 2.0], [0, 0], [1, 1]]))
    frac.to_csv(tmp_path / "f.csv")
    assert np.array_equal(PointCloud.from_csv(tmp_path / "f.csv").points, frac.points)
