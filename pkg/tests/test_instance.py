import numpy as np
import pytest

from relaxround.instance import (
    CoverageInstance,
    InstanceError,
    ParseError,
    build_symmetric_bipartite,
    describe,
    load_native,
    load_snap_edgelist,
    normalize_weights,
    save_native,
)

from conftest import random_instance


def test_from_edges_builds_both_adjacencies(small_instance):
    inst = small_instance
    assert (inst.n, inst.r, inst.m) == (3, 3, 5)
    assert inst.neighbors(0).tolist() == [0, 1]
    assert inst.neighbors(1).tolist() == [1, 2]
    assert inst.covered_by(1).tolist() == [0, 1]
    assert inst.covered_by(2).tolist() == [1, 2]
    np.testing.assert_allclose(inst.weights, [1 / 3] * 3)
    assert inst.degrees.tolist() == [2, 2, 1]
    assert inst.left_degrees.tolist() == [1, 2, 2]


def test_edge_order_does_not_matter(small_instance):
    edges = small_instance.edges()[::-1]
    again = CoverageInstance.from_edges(3, 3, edges)
    assert again == small_instance


def test_adjacency_constructor_matches_edges(small_instance):
    inst = CoverageInstance.from_adjacency(3, [[0, 1], [1, 2], [2]])
    assert inst == small_instance


def test_weights_are_normalized():
    inst = CoverageInstance.from_edges(2, 2, [(0, 0), (1, 1)], weights=[1.0, 3.0])
    np.testing.assert_allclose(inst.weights, [0.25, 0.75])


def test_arrays_are_read_only(small_instance):
    with pytest.raises(ValueError):
        small_instance.weights[0] = 1.0


def test_isolated_right_node_rejected():
    with pytest.raises(InstanceError, match="right node 1 has no neighbors"):
        CoverageInstance.from_edges(2, 2, [(0, 0)])


def test_dangling_left_index_rejected():
    with pytest.raises(InstanceError):
        CoverageInstance.from_edges(2, 1, [(5, 0)])
    with pytest.raises(InstanceError, match="dangling left index 7"):
        CoverageInstance.from_csr(3, [0, 1], [7])


def test_duplicate_neighbor_rejected():
    with pytest.raises(InstanceError, match="duplicate"):
        CoverageInstance.from_csr(3, [0, 2], [1, 1])


def test_negative_weight_rejected():
    with pytest.raises(InstanceError, match="negative weight"):
        CoverageInstance.from_edges(2, 2, [(0, 0), (1, 1)], weights=[1.0, -0.5])


def test_unnormalized_weights_rejected_without_normalize():
    with pytest.raises(InstanceError, match="sum to"):
        CoverageInstance.from_edges(2, 2, [(0, 0), (1, 1)], weights=[1.0, 1.0], normalize=False)


def test_normalize_weights_copy():
    inst = CoverageInstance.from_edges(2, 2, [(0, 0), (1, 1)], weights=[2.0, 6.0])
    assert normalize_weights(inst) == inst


def test_incidence_matches_edges(rng):
    inst = random_instance(rng, 9, 7)
    a = inst.incidence()
    assert a.sum() == inst.m
    for i, j in inst.edges():
        assert a[i, j] == 1


def test_native_round_trip(tmp_path, rng):
    inst = random_instance(rng, 12, 9)
    path = tmp_path / "g.inst"
    save_native(inst, path)
    assert load_native(path) == inst


def test_native_blank_weights_means_uniform(tmp_path):
    path = tmp_path / "u.inst"
    path.write_text("2 2\n\n2\n0 0\n1 1\n")
    inst = load_native(path)
    np.testing.assert_allclose(inst.weights, [0.5, 0.5])


@pytest.mark.parametrize(
    "text, exc",
    [
        ("2 2\n1 1 1\n2\n0 0\n1 1\n", InstanceError),
        ("2 2\n\n3\n0 0\n1 1\n", ParseError),
        ("2 2\n\n2\n0 0\n1 x\n", ParseError),
        ("2 2\n\n2\n0 0\n1 5\n", InstanceError),
        ("2 2\n\n2\n0 0\n9 1\n", InstanceError),
        ("2 2\n1 -1\n2\n0 0\n1 1\n", InstanceError),
        ("2\n", ParseError),
    ],
)
def test_native_malformed(tmp_path, text, exc):
    path = tmp_path / "bad.inst"
    path.write_text(text)
    with pytest.raises(exc):
        load_native(path)


def test_snap_toy_path(tmp_path):
    path = tmp_path / "toy.txt"
    path.write_text("# toy\n0 1\n")
    g = load_snap_edgelist(path)
    inst = build_symmetric_bipartite(g)
    assert (inst.n, inst.m) == (2, 4)


def test_snap_remaps_and_dedups(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# comment\n10 30\n30 10\n30 30\n10 20\n\n")
    g = load_snap_edgelist(path)
    assert g.num_nodes == 3
    assert g.original_ids.tolist() == [10, 20, 30]
    assert g.edges.tolist() == [[0, 1], [0, 2]]
    inst = build_symmetric_bipartite(g)
    # V + 2E
    assert inst.m == 3 + 2 * 2
    assert inst.neighbors(0).tolist() == [0, 1, 2]
    assert inst.neighbors(1).tolist() == [0, 1]


def test_snap_parse_error_reports_line(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("0 1\n1 two\n")
    with pytest.raises(ParseError) as info:
        load_snap_edgelist(path)
    assert info.value.lineno == 2


def test_describe(small_instance):
    d = describe(small_instance)
    assert d["m"] == 5 and d["max_degree"] == 2
    assert d["effective_degree"] == pytest.approx(5 / 3)
