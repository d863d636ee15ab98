"""Membership tests against weak-embedding and cycle-enumeration oracles."""

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakfraisse.classes import (all_graphs, bowtie_free, c4_free, check_hereditary, check_jep, circumference,
                                 class_catalog, cocycles, has_k4_subdivision, hom_closed, is_linear_forest,
                                 linear_forests, near_path_free, odd_cycles, parse_class, path_free,
                                 top_k4_free, triangle_free, windmill_free)
from weakfraisse.graph import (Graph, VertexMap, bowtie, complete, cycle, is_weak_embedding, linear, near_path,
                               path, petersen, subdivision_of, windmill33)


@st.composite
def graphs(draw, max_order=7):
    n = draw(st.integers(0, max_order))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def weakly_contains(host, pattern):
    return any(is_weak_embedding(VertexMap(pattern, host, img))
               for img in itertools.permutations(range(host.order), pattern.order))


def cycle_lengths(g):
    h = nx.Graph(g.edges())
    return {len(c) for c in nx.simple_cycles(h)} if g.edge_count else set()


def k4_subdivision_oracle(g):
    """Four branch vertices joined pairwise by internally disjoint paths, by backtracking."""
    for branch in itertools.combinations(range(g.order), 4):
        pairs = list(itertools.combinations(branch, 2))

        def route(i, used):
            if i == len(pairs):
                return True
            s, t = pairs[i]

            def walk(v, seen):
                for w in g.neighbors(v):
                    if w == t:
                        if route(i + 1, used | seen):
                            return True
                    elif w not in branch and w not in used and w not in seen:
                        if walk(w, seen | {w}):
                            return True
                return False

            return walk(s, frozenset())

        if route(0, frozenset()):
            return True
    return False


PATTERN_CLASSES = [(c4_free(), [cycle(4)]), (triangle_free(), [cycle(3)]), (windmill_free(), [windmill33()]),
                   (bowtie_free(), [bowtie()]), (path_free(3), [path(3)]),
                   (near_path_free(3, 1), [near_path(3, 1)]), (hom_closed([cycle(3)]), [cycle(3)])]


@pytest.mark.parametrize("k, forbidden", PATTERN_CLASSES, ids=lambda x: getattr(x, "name", ""))
@settings(max_examples=60, deadline=None)
@given(g=graphs())
def test_fast_tests_match_weak_embedding_oracle(k, forbidden, g):
    assert k.member(g) == (not any(weakly_contains(g, f) for f in forbidden))


@settings(max_examples=80, deadline=None)
@given(graphs(8))
def test_cycle_classes_match_cycle_enumeration(g):
    lengths = cycle_lengths(g)
    assert circumference(g) == max(lengths, default=0)
    assert cocycles(5).member(g) == (max(lengths, default=0) < 5)
    assert odd_cycles(2).member(g) == (not lengths & {3, 5})


@settings(max_examples=80, deadline=None)
@given(graphs(8))
def test_linear_forest_matches_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges())
    expected = nx.is_forest(h) and all(d <= 2 for _, d in h.degree()) if g.order else True
    assert is_linear_forest(g) == expected


def test_k4_subdivision_matches_path_oracle():
    rng = random.Random(11)
    for _ in range(150):
        n = rng.randint(4, 7)
        g = Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.45])
        assert has_k4_subdivision(g) == k4_subdivision_oracle(g)


def test_top_k4_examples():
    assert not top_k4_free().member(complete(4))
    assert not top_k4_free().member(subdivision_of(4, [1, 0, 2, 0, 0, 1]))
    assert not top_k4_free().member(petersen())
    assert top_k4_free().member(cycle(6))
    assert top_k4_free().member(complete(4).remove_edge(0, 1))


def test_named_examples():
    assert c4_free().member(cycle(5)) and not c4_free().member(complete(4))
    assert bowtie_free().member(complete(4)) and not bowtie_free().member(windmill33())
    assert windmill_free().member(bowtie()) and not windmill_free().member(complete(7))
    assert linear_forests().member(linear(5)) and not linear_forests().member(cycle(3))
    assert all_graphs().member(complete(6))


@pytest.mark.parametrize("k", class_catalog(), ids=lambda k: k.name)
def test_every_class_is_hereditary(k):
    assert check_hereditary(k, 6).ok


@pytest.mark.parametrize("k", [c4_free(), windmill_free(), linear_forests(), cocycles(5), path_free(3)],
                         ids=lambda k: k.name)
def test_joint_embedding(k):
    report = check_jep(k, 4)
    assert report.ok and report.pairs > 0


def test_vertex_tests_agree_with_full_membership():
    rng = random.Random(5)
    for k in (c4_free(), triangle_free(), all_graphs()):
        for _ in range(200):
            n = rng.randint(1, 8)
            g = Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.3])
            w = n - 1
            if k.member(g.delete_vertex(w)):
                assert k.member_after_vertex(g, w) == k.member(g)


def test_parse_class():
    assert parse_class("c4free") is c4_free()
    assert parse_class("cocycles:5").name == "cocycles:5"
    assert parse_class("near_path:3,1").member(path(2))
    for bad in ("nope", "cocycles:x", "cocycles:2"):
        with pytest.raises(ValueError):
            parse_class(bad)
