import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cliqueclust import Graph, Partition, clique_score, cut, degree, subgraph, volume
from cliqueclust.errors import InvalidArgumentError, InvalidNodeError
from cliqueclust.graph import internal_edges

from conftest import complete_graph, disjoint_cliques
from oracles import random_edges

PATH3 = Graph(3, [(0, 1), (1, 2)])
STAR = Graph(4, [(0, 1), (0, 2), (0, 3)])


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen)


def test_degree():
    assert all(degree(complete_graph(3), i) == 2 for i in range(3))
    assert degree(Graph(4), 0) == 0
    assert degree(PATH3, 1) == 2
    with pytest.raises(InvalidNodeError):
        degree(PATH3, 3)


def test_volume():
    assert volume(complete_graph(3)) == 6
    assert volume(Graph(7)) == 0
    assert volume(PATH3) == 4


def test_cut():
    assert cut(complete_graph(4), [0, 1], [2, 3]) == 4
    assert cut(disjoint_cliques(3, 3), [0, 1, 2], [3, 4, 5]) == 0
    assert cut(STAR, [0], [1, 2, 3]) == 3
    with pytest.raises(InvalidArgumentError):
        cut(STAR, [0, 1], [1, 2])


def test_clique_score():
    # 10 nodes, 18 internal edges
    edges = [(i, j) for i in range(10) for j in range(i + 1, 10)][:18]
    assert clique_score(Graph(10, edges)) == pytest.approx(0.4)
    assert clique_score(complete_graph(6)) == 1.0
    assert clique_score(complete_graph(8), [1, 4, 6]) == 1.0
    assert clique_score(PATH3, [2]) == 1.0
    with pytest.raises(InvalidArgumentError):
        clique_score(PATH3, [])


def test_subgraph_examples(rng):
    h, labels = subgraph(complete_graph(4), [0, 2, 3])
    assert (h.n, h.m) == (3, 3)
    assert list(labels) == [0, 2, 3]
    h, _ = subgraph(complete_graph(4), [2])
    assert (h.n, h.m) == (1, 0)
    with pytest.raises(InvalidNodeError):
        subgraph(PATH3, [0, 5])

    edges = random_edges(rng, 12, 0.4)
    g = Graph(12, edges)
    s = [1, 3, 4, 7, 8, 11]
    h, labels = subgraph(g, s)
    expected = {(a, b) for a, b in edges if a in s and b in s}
    got = {tuple(sorted((int(labels[u]), int(labels[v])))) for u, v in h.edges()}
    assert got == expected


def test_graph_construction():
    g = Graph(4, [(1, 0), (0, 1), (2, 3)])
    assert g.m == 2
    assert list(g.neighbors(0)) == [1]
    with pytest.raises(InvalidArgumentError):
        Graph(3, [(1, 1)])
    with pytest.raises(InvalidNodeError):
        Graph(3, [(0, 3)])


@given(graphs())
def test_graph_invariants(g):
    A = g.to_dense()
    assert np.all(np.diag(A) == 0)
    assert np.array_equal(A, A.T)
    assert volume(g) == 2 * g.m == A.sum()


@given(graphs(), st.data())
def test_cut_volume_identity(g, data):
    mask = data.draw(st.lists(st.booleans(), min_size=g.n, max_size=g.n))
    s = [i for i in range(g.n) if mask[i]]
    t = [i for i in range(g.n) if not mask[i]]
    # every cut edge contributes one degree to each side
    assert 2 * cut(g, s, t) + 2 * internal_edges(g, s) + 2 * internal_edges(g, t) == volume(g)


@given(graphs())
def test_whole_graph_clique_score(g):
    if g.n >= 2:
        assert clique_score(g) == pytest.approx(g.m / (g.n * (g.n - 1) / 2))
        assert clique_score(g, range(g.n)) == pytest.approx(clique_score(g))


@settings(max_examples=50)
@given(graphs(), st.data())
def test_subgraph_composition(g, data):
    s = data.draw(st.lists(st.integers(0, g.n - 1), unique=True, min_size=1))
    h, labels = subgraph(g, s)
    local = data.draw(st.lists(st.integers(0, h.n - 1), unique=True, min_size=1))
    hh, _ = subgraph(h, local)
    direct, _ = subgraph(g, labels[local])
    assert np.array_equal(hh.to_dense(), direct.to_dense())


def test_partition():
    part = Partition.from_labels([5, 5, 2, 9, 2])
    assert list(part.membership) == [0, 0, 1, 2, 1]
    assert part.h == 3 and list(part.sizes) == [2, 2, 1]
    assert [list(c) for c in part.communities()] == [[0, 1], [2, 4], [3]]
    with pytest.raises(InvalidArgumentError):
        Partition([0, 2])
    with pytest.raises(InvalidArgumentError):
        Partition.from_communities([[0, 1], [1, 2]], 3)
    assert Partition.from_communities([[2], [0, 1]], 3) == Partition([1, 1, 0])
