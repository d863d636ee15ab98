"""Amalgam search, bounded AP/CAP/WAP checks and refutation trees."""

import itertools
import random

import pytest

from weakfraisse.amalgamation import (Amalgam, AmalgamationProblem, build_refutation_tree, check_ap,
                                      check_cap_witness, find_amalgam, find_amalgam_brute, free_amalgam,
                                      refute_wap_at, verify_wap_witness)
from weakfraisse.canonical import certificate
from weakfraisse.classes import (all_graphs, bowtie_free, c4_free, cocycles, linear_forests, path_free,
                                 triangle_free, windmill_free)
from weakfraisse.constructions import c4_refuter
from weakfraisse.enumeration import extension_partition
from weakfraisse.graph import Graph, VertexMap, complete, cycle, empty, is_embedding, linear


def uv_problem():
    """Two isolated vertices u, v; B adds the path u-b-v, C the path u-c1-c2-v."""
    a = empty(2)
    b = Graph.from_edges(3, [(0, 2), (1, 2)])
    c = Graph.from_edges(4, [(0, 2), (2, 3), (3, 1)])
    return AmalgamationProblem.over_prefix(a, b, c)


def random_extension(rng, a, k, extra):
    for _ in range(200):
        n = a.order + rng.randint(0, extra)
        new = [(u, v) for u, v in itertools.combinations(range(n), 2) if v >= a.order and rng.random() < 0.4]
        h = Graph.from_edges(n, a.edges() + new)
        if k.member(h):
            return h
    return a


def random_problem(rng, k, max_order=6):
    for _ in range(200):
        m = rng.randint(0, 3)
        a = Graph.from_edges(m, [e for e in itertools.combinations(range(m), 2) if rng.random() < 0.5])
        if k.member(a):
            break
    b = random_extension(rng, a, k, max_order - a.order)
    c = random_extension(rng, a, k, max_order - a.order)
    return AmalgamationProblem.over_prefix(a, b, c)


def test_free_amalgam_over_an_edge():
    tri = complete(3)
    d = free_amalgam(AmalgamationProblem.over_prefix(linear(2), tri, tri)).result
    assert d == complete(4).remove_edge(2, 3)


def test_free_amalgam_degenerate():
    a = cycle(5)
    am = free_amalgam(AmalgamationProblem.over_prefix(a, a, a))
    assert am.result == a and am.left_map == am.right_map == tuple(range(5))


def test_free_amalgam_of_uv_paths_is_a_pentagon():
    d = free_amalgam(uv_problem()).result
    assert d.order == 5 and d.degrees() == [2] * 5 and d.is_connected()


def test_c4_free_needs_identification():
    a = empty(2)
    b = Graph.from_edges(3, [(0, 2), (1, 2)])
    p = AmalgamationProblem.over_prefix(a, b, b)
    assert not c4_free().member(free_amalgam(p).result)
    am = find_amalgam(p, c4_free())
    assert am is not None and am.identified == {2: 2} and am.result.order == 3


def test_linear_forest_uv_failure_is_exhaustive():
    p = uv_problem()
    assert find_amalgam(p, linear_forests()) is None
    assert find_amalgam(p, linear_forests(), allow_cross_edges=True) is None
    assert find_amalgam_brute(p, linear_forests()) is None


def test_trivial_side():
    a = linear(2)
    c = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    am = find_amalgam(AmalgamationProblem.over_prefix(a, a, c), c4_free())
    assert am is not None and am.result == c


def test_amalgam_validates_its_maps():
    p = AmalgamationProblem.over_prefix(linear(2), complete(3), complete(3))
    with pytest.raises(ValueError):
        Amalgam(p, complete(3), (0, 1, 2), (1, 0, 2))
    with pytest.raises(ValueError):
        AmalgamationProblem(linear(2), empty(2), empty(2), (0, 1), (0, 1))


@pytest.mark.parametrize("k", [c4_free(), bowtie_free(), triangle_free(), linear_forests(), path_free(3),
                               cocycles(5), windmill_free()], ids=lambda k: k.name)
def test_search_agrees_with_brute_force(k):
    rng = random.Random(k.name)
    for _ in range(40):
        p = random_problem(rng, k, 6)
        fast = find_amalgam(p, k)
        slow = find_amalgam_brute(p, k)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert k.member(fast.result)
            assert is_embedding(VertexMap(p.left, fast.result, fast.left_map))
            assert is_embedding(VertexMap(p.right, fast.result, fast.right_map))


@pytest.mark.parametrize("k", [c4_free(), bowtie_free(), linear_forests()], ids=lambda k: k.name)
def test_cross_edges_never_needed(k):
    rng = random.Random(2)
    for _ in range(40):
        p = random_problem(rng, k, 5)
        assert (find_amalgam(p, k) is None) == (find_amalgam(p, k, allow_cross_edges=True) is None)


def test_propagation_refused_outside_c4_free_classes():
    with pytest.raises(ValueError):
        find_amalgam(uv_problem(), all_graphs(), propagate=True)
    # linear forests contain no 4-cycle, so the rule is allowed there
    assert find_amalgam(uv_problem(), linear_forests(), propagate=True) is None


@pytest.mark.parametrize("k", [all_graphs(), triangle_free()], ids=lambda k: k.name)
def test_free_amalgam_classes_have_ap(k):
    assert check_ap(k, 4).ok


def test_linear_forest_ap_sweep_finds_uv_failure():
    report = check_ap(linear_forests(), 4)
    assert not report.ok
    p = uv_problem()
    part_b = extension_partition(2, 3, "pointwise")
    part_c = extension_partition(2, 4, "pointwise")
    want = (certificate(p.left, part_b), certificate(p.right, part_c))
    found = set()
    for a, b, c in report.failures:
        if a == empty(2):
            found.add((certificate(b, extension_partition(2, b.order, "pointwise")),
                       certificate(c, extension_partition(2, c.order, "pointwise"))))
    assert want in found


def test_wap_trivial_for_ap_classes():
    a = linear(3)
    cert = verify_wap_witness(all_graphs(), a, a, 2)
    assert cert.verified and cert.pairs_checked > 0


def test_cap_witness_for_linear_forests():
    # a length-2 path with the base vertex in the middle
    cert = check_cap_witness(linear_forests(), empty(1), linear(3).relabel([1, 0, 2]), 1)
    assert cert.verified
    # with the isolated base vertex as its own witness, a side can take both of its free slots
    assert check_cap_witness(linear_forests(), empty(1), empty(1), 2).verified


def test_cap_implies_wap():
    for k, base, witness in [(linear_forests(), empty(1), linear(3).relabel([1, 0, 2])),
                             (triangle_free(), linear(2), linear(2)),
                             (c4_free(), empty(1), linear(2))]:
        cap = check_cap_witness(k, base, witness, 2)
        if cap.verified:
            assert verify_wap_witness(k, base, witness, 2).verified


def test_wap_refutation_carries_a_counterexample():
    cert = verify_wap_witness(linear_forests(), empty(2), empty(2), 2)
    assert cert.kind == "refuted"
    w, b, c = cert.counterexample
    assert find_amalgam_brute(AmalgamationProblem.over_prefix(empty(2), b, c), linear_forests()) is None


def test_pentagon_witness_survives_small_extensions():
    cert = verify_wap_witness(c4_free(), cycle(5), cycle(5), 2)
    assert cert.verified


@pytest.mark.slow
def test_pentagon_witness_survives_three_new_vertices():
    cert = verify_wap_witness(c4_free(), cycle(5), cycle(5), 3)
    assert cert.verified and cert.pairs_checked == 74760


def test_refute_wap_at_with_gadget_refuter():
    out = refute_wap_at(c4_free(), cycle(5), 1, refuter=c4_refuter)
    assert out is not None and len(out) == 4


def test_refute_wap_at_fails_for_ap_class():
    assert refute_wap_at(all_graphs(), linear(2), 1, ext_extra=1) is None


def test_refute_wap_at_linear_forests_small_bounds():
    # the bare base is refuted but a witness joining u and v survives
    assert refute_wap_at(linear_forests(), empty(2), 1, ext_extra=2) is None


def test_refutation_tree_shape():
    t0 = build_refutation_tree(c4_free(), cycle(5), c4_refuter, 0)
    assert list(t0.nodes) == [""] and t0.leaves == [""]
    t1 = build_refutation_tree(c4_free(), cycle(5), c4_refuter, 1)
    assert len(t1.leaves) == 2 and t1.certified == {"": True}
    assert t1.replay(c4_free(), propagate=False)
    with pytest.raises(ValueError):
        build_refutation_tree(c4_free(), cycle(5), c4_refuter, 7)
