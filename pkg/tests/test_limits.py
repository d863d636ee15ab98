"""Extension chains, extension-property diagnostics and checkpoints."""

import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakfraisse.classes import all_graphs, c4_free, linear_forests, triangle_free
from weakfraisse.graph import complete, disjoint_union, empty, find_embedding, linear
from weakfraisse.limits import (chain_step, diagnose, extension_property_report, load_chain, resume, run_chain,
                                save_chain, start_chain, universal_linear_forest)


def test_first_step_adds_one_vertex():
    chain = start_chain(all_graphs())
    chain_step(chain, all_graphs())
    assert chain.orders == [0, 1] and chain.graph.order == 1


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 1000), st.sampled_from(["all", "c3free", "c4free"]))
def test_stages_are_nested_members(seed, name):
    k = {"all": all_graphs(), "c3free": triangle_free(), "c4free": c4_free()}[name]
    chain = run_chain(k, 25, seed=seed)
    stages = chain.stages
    for s, t in zip(stages, stages[1:]):
        assert t.induced(range(s.order)) == s
        assert k.member(t)


def test_chains_are_deterministic():
    a = run_chain(all_graphs(), 40, seed=3)
    b = run_chain(all_graphs(), 40, seed=3)
    c = run_chain(all_graphs(), 40, seed=4)
    assert a.graph == b.graph and [d.realized_at for d in a.demands] == [d.realized_at for d in b.demands]
    assert a.graph != c.graph


def test_realized_demands_have_witnesses():
    chain = run_chain(c4_free(), 40, seed=1)
    for d in chain.demands:
        if d.realized_at is None:
            continue
        g = chain.stage(d.realized_at)
        w = d.witness
        assert w not in d.support and w < g.order
        assert all(g.has_edge(w, v) == (v in d.neighbors) for v in d.support)


def test_triangle_demands_never_enqueued():
    chain = run_chain(triangle_free(), 30, seed=2)
    for d in chain.demands:
        for u, v in itertools.combinations(d.neighbors, 2):
            assert not chain.graph.has_edge(u, v)


def test_back_and_forth_between_seeds():
    a = run_chain(all_graphs(), 120, seed=0)
    b = run_chain(all_graphs(), 120, seed=1)
    assert find_embedding(a.stage(5), b.graph) is not None
    assert find_embedding(b.stage(5), a.graph) is not None


def test_witness_guided_step_validates_the_witness():
    chain = start_chain(linear_forests(), initial=linear(3))
    with pytest.raises(ValueError):
        chain_step(chain, linear_forests(), witness=lambda g: complete(3))
    chain_step(chain, linear_forests(), witness=lambda g: g.add_vertex([g.order - 1]))
    assert linear_forests().member(chain.graph) and chain.graph.induced(range(3)) == linear(3)


def test_chain_rejects_other_class():
    chain = start_chain(all_graphs())
    with pytest.raises(ValueError):
        chain_step(chain, c4_free())


def test_extension_property_examples():
    k3 = complete(3)
    r = extension_property_report(k3, 1)
    assert r.total == 6 and r.satisfied == 3
    assert ((0,), ()) not in r.failures and ((), (0,)) in r.failures
    assert extension_property_report(empty(0), 2).fraction == 1.0


def test_extension_property_matches_brute_force():
    g = run_chain(all_graphs(), 30, seed=5).graph
    r = extension_property_report(g, 2)
    total = sat = 0
    for size in (1, 2):
        for uv in itertools.combinations(range(g.order), size):
            for mask in range(1 << size):
                u = [x for i, x in enumerate(uv) if mask >> i & 1]
                v = [x for i, x in enumerate(uv) if not mask >> i & 1]
                total += 1
                sat += any(z not in uv and all(g.has_edge(z, x) for x in u) and not any(g.has_edge(z, x) for x in v)
                           for z in range(g.order))
    assert (r.total, r.satisfied) == (total, sat)


def test_universal_linear_forest_examples():
    assert universal_linear_forest(1, 1) == linear(3)
    assert universal_linear_forest(2, 2) == disjoint_union(linear(5), linear(5))
    with pytest.raises(ValueError):
        universal_linear_forest(0, 1)


@pytest.mark.parametrize("n, r", [(1, 1), (2, 2), (3, 3), (3, 1)])
def test_universal_linear_forest_embeds_small_forests(n, r):
    u = universal_linear_forest(n, r)
    for comps in range(1, n + 1):
        for sizes in itertools.combinations_with_replacement(range(1, 2 * r + 2), comps):
            f = disjoint_union(*[linear(s) for s in sizes])
            assert find_embedding(f, u) is not None
    # one component too long, or one too many
    assert find_embedding(linear(2 * r + 2), u) is None
    assert find_embedding(empty(n * (2 * r + 1) + 1), u) is None


def test_checkpoint_resume_matches_uninterrupted_run(tmp_path):
    full = run_chain(c4_free(), 30, seed=7)
    part = run_chain(c4_free(), 12, seed=7)
    save_chain(part, tmp_path)
    resumed = resume(tmp_path, 18)
    assert resumed.graph == full.graph and resumed.orders == full.orders
    assert [d.realized_at for d in resumed.demands] == [d.realized_at for d in full.demands]
    assert load_chain(tmp_path).graph == full.graph
    assert diagnose(tmp_path, 1).total > 0


def test_checkpoint_rejects_newer_schema(tmp_path):
    save_chain(run_chain(all_graphs(), 3), tmp_path)
    ledger = json.loads((tmp_path / "ledger.json").read_text())
    ledger["schema_version"] = 99
    (tmp_path / "ledger.json").write_text(json.dumps(ledger))
    with pytest.raises(ValueError):
        load_chain(tmp_path)


def test_initial_stage_must_be_a_member():
    with pytest.raises(ValueError):
        start_chain(triangle_free(), initial=complete(3))
