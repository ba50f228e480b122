import numpy as np
import pytest
from hypothesis import given, settings

from conftest import networks
from mser.network import FULL, NetworkError, build_network, full_coupling, supra_matrices


def test_edges_are_normalized_and_deduplicated():
    net = build_network(4, 2, [(0, 2, 1), (0, 1, 2), (1, 3, 0)])
    assert net.intra == (frozenset({(1, 2)}), frozenset({(0, 3)}))
    assert net.edge_counts == (1, 1)
    assert net.edge_records() == [(0, 1, 2), (1, 0, 3)]


@pytest.mark.parametrize(
    "records, message",
    [
        ([(0, 1, 1)], "self-loop"),
        ([(2, 0, 1)], "layer 2 out of range"),
        ([(0, 0, 5)], "node 5 out of range"),
        ([(0, -1, 1)], "node -1 out of range"),
        ([(0, 0.5, 1)], "must be an integer"),
        ([(0, 1)], "must be \\(layer, u, v\\)"),
    ],
)
def test_bad_intra_records_name_the_record(records, message):
    with pytest.raises(NetworkError, match=message):
        build_network(4, 2, records)


@pytest.mark.parametrize(
    "coupling, message",
    [
        ([(0, 0, 1)], "single layer"),
        ([(0, 3, 1)], "layer 3 out of range"),
        ([(0, 1, 9)], "node 9 out of range"),
        ("SOME", "unknown coupling token"),
    ],
)
def test_bad_coupling_records(coupling, message):
    with pytest.raises(NetworkError, match=message):
        build_network(4, 2, [], coupling)


@pytest.mark.parametrize("n, L", [(0, 1), (1, 0), (-3, 2)])
def test_sizes_must_be_positive(n, L):
    with pytest.raises(NetworkError):
        build_network(n, L, [])


def test_label_count_is_checked():
    with pytest.raises(NetworkError, match="node labels"):
        build_network(3, 1, [], node_labels=["a", "b"])
    with pytest.raises(NetworkError, match="layer labels"):
        build_network(3, 1, [], layer_labels=["x", "y"])


def test_positional_labels_are_dropped():
    net = build_network(3, 2, [], node_labels=["0", "1", "2"], layer_labels=["a", "b"])
    assert net.node_labels is None
    assert net.layer_labels == ("a", "b")
    assert net.node_label(2) == "2"
    assert net.layer_label(1) == "b"


@pytest.mark.parametrize("n, L", [(1, 1), (5, 1), (3, 2), (4, 3)])
def test_full_coupling(n, L):
    net = build_network(n, L, [], FULL)
    assert net.num_couplings == net.max_couplings == n * L * (L - 1) // 2
    assert net.is_fully_coupled
    assert net.coupling == full_coupling(n, L)


def test_coupling_orientation_is_canonical():
    net = build_network(3, 3, [], [(2, 0, 1), (0, 2, 1)])
    assert net.coupling == frozenset({(0, 2, 1)})
    assert not net.is_fully_coupled


def test_dense_views_are_readonly_and_symmetric():
    net = build_network(4, 3, [(0, 0, 1), (2, 1, 3)], [(0, 2, 1)])
    adj, down = net.adjacency, net.down
    assert adj.shape == (3, 4, 4) and down.shape == (3, 3, 4)
    assert np.array_equal(adj, adj.transpose(0, 2, 1))
    assert np.array_equal(down, down.transpose(1, 0, 2))
    assert down[0, 2, 1] == down[2, 0, 1] == 1 and down.sum() == 2
    with pytest.raises(ValueError):
        adj[0, 0, 0] = 1


@given(networks())
@settings(max_examples=60, deadline=None)
def test_supra_matrices_match_the_network(net):
    sup = supra_matrices(net)
    n, L = net.n, net.L
    A, C = sup.A.toarray(), sup.C.toarray()
    assert A.shape == C.shape == (n * L, n * L)
    assert np.array_equal(A, A.T) and np.array_equal(C, C.T)
    assert A.sum() == 2 * sum(net.edge_counts)
    assert C.sum() == 2 * net.num_couplings
    for i, u, v in net.edge_records():
        assert A[i * n + u, i * n + v] == 1
    for i, j, u in net.coupling:
        assert C[i * n + u, j * n + u] == 1
    # no intra entries off the diagonal blocks and no inter entries on them
    for i in range(L):
        blk = slice(i * n, (i + 1) * n)
        assert not C[blk, blk].any()
        assert A[blk].sum() == A[blk, blk].sum()
    assert (sup.supra_adjacency.toarray() == A + C).all()


@given(networks(max_L=4))
@settings(max_examples=40, deadline=None)
def test_permuting_layers_twice_with_inverse_is_identity(net):
    perm = list(range(net.L))[::-1]
    inv = [perm.index(i) for i in range(net.L)]
    moved = net.permute_layers(perm)
    assert moved.edge_counts == tuple(reversed(net.edge_counts))
    assert moved.permute_layers(inv) == net


def test_permute_layers_rejects_non_permutations():
    net = build_network(3, 2, [])
    with pytest.raises(NetworkError):
        net.permute_layers([0, 0])


def test_without_coupling_keeps_layers():
    net = build_network(3, 2, [(0, 0, 1)])
    bare = net.without_coupling()
    assert bare.intra == net.intra and bare.num_couplings == 0
