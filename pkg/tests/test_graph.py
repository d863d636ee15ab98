"""Graph core: construction, embeddings, metric diagnostics."""

import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakfraisse.graph import (INFINITE, Graph, VertexMap, bowtie, complete, cycle, diameter, disjoint_union,
                               dominating_vertex, edges_not_in_triangle, empty, find_embedding,
                               find_weak_embedding, is_embedding, is_weak_embedding, iter_embeddings, linear,
                               near_path, path, petersen, star, strongly_regular_params, subdivision_of,
                               windmill33)


@st.composite
def graphs(draw, max_order=7):
    n = draw(st.integers(0, max_order))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges())
    return h


def brute_maps(p, h, induced):
    for img in itertools.permutations(range(h.order), p.order):
        m = VertexMap(p, h, img)
        if (is_embedding if induced else is_weak_embedding)(m):
            yield img


def test_rejects_bad_rows():
    with pytest.raises(ValueError):
        Graph(2, (0b10, 0))
    with pytest.raises(ValueError):
        Graph(1, (1,))
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(ValueError):
        empty(2).add_edges([(0, 5)])


def test_marks_do_not_affect_equality():
    g = star(3)
    assert g.marks["center"] == 0
    assert g == Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    with pytest.raises(ValueError):
        empty(2).with_marks({"p": 3})


def test_named_constructors():
    assert cycle(5).degrees() == [2] * 5
    assert complete(4).edge_count == 6
    assert linear(4).edge_count == 3 and path(3) == linear(4)
    assert bowtie().edge_count == 6 and bowtie().degree(0) == 4
    w = windmill33()
    assert w.order == 7 and w.edge_count == 9 and w.degree(w.marks["p"]) == 6
    assert near_path(3, 1).order == 5
    assert petersen().degrees() == [3] * 10
    s = subdivision_of(4, [1, 0, 0, 0, 0, 0])
    assert s.order == 5 and s.edge_count == 7
    with pytest.raises(ValueError):
        cycle(2)


@settings(max_examples=80, deadline=None)
@given(graphs(), st.data())
def test_induced_matches_networkx(g, data):
    vs = data.draw(st.lists(st.integers(0, max(g.order - 1, 0)), unique=True)) if g.order else []
    h = g.induced(vs)
    sub = nx.relabel_nodes(to_nx(g).subgraph(vs), {v: i for i, v in enumerate(vs)})
    assert sorted(h.edges()) == sorted(tuple(sorted(e)) for e in sub.edges())


@settings(max_examples=60, deadline=None)
@given(graphs(4), graphs(5))
def test_embedding_search_matches_brute_force(p, h):
    for induced in (False, True):
        got = set(iter_embeddings(p, h, induced=induced))
        assert got == set(brute_maps(p, h, induced))


def test_weak_versus_induced():
    # P3 sits weakly in a triangle but not as an induced subgraph
    assert find_weak_embedding(linear(3), complete(3)) is not None
    assert find_embedding(linear(3), complete(3)) is None
    m = find_embedding(cycle(5), petersen())
    assert m is not None and is_embedding(m)


def test_vertex_map_validation_and_compose():
    with pytest.raises(ValueError):
        VertexMap(linear(2), linear(3), (0, 0))
    f = VertexMap(linear(2), linear(3), (0, 1))
    g = VertexMap(linear(3), cycle(4), (1, 2, 3))
    assert f.compose(g).assignment == (1, 2)


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_metrics_match_networkx(g):
    h = to_nx(g)
    if g.order and nx.is_connected(h):
        assert diameter(g) == nx.diameter(h)
    elif g.order:
        assert diameter(g) is INFINITE
    assert len(g.components()) == (nx.number_connected_components(h) if g.order else 0)
    tri = {tuple(sorted((u, v))) for u, v in h.edges() if not set(h[u]) & set(h[v])}
    assert set(edges_not_in_triangle(g)) == tri
    dom = dominating_vertex(g)
    assert (dom is not None) == any(h.degree(v) == g.order - 1 for v in h)


def test_strongly_regular_params():
    assert strongly_regular_params(cycle(5)) == (2, 0, 1)
    assert strongly_regular_params(petersen()) == (3, 0, 1)
    assert strongly_regular_params(linear(4)) is None
    with pytest.raises(ValueError):
        strongly_regular_params(complete(4))


def test_disjoint_union_and_pickle():
    import pickle
    g = disjoint_union(cycle(3), linear(2))
    assert g.order == 5 and len(g.components()) == 2
    assert pickle.loads(pickle.dumps(star(2))) == star(2)
