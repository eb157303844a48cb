from collections import Counter

from hypothesis import given, settings

from braidcluster.braid import DoubleBraidWord, order_table
from braidcluster.cycles import (
    all_cycles,
    check_against_aps,
    classes_of,
    intersection_matrix,
    mutate_cycles,
    propagate,
)
from braidcluster.graph3d import build_graph
from braidcluster.perm import simple
from braidcluster.quiver import mutate, seed_quiver

from conftest import instances


def boundary(chain, edges):
    out = Counter()
    for eid, k in chain.items():
        a, b = edges[eid]
        out[b] += k
        out[a] -= k
    return {v: k for v, k in out.items() if k}


@given(instances())
def test_cycles_are_closed_exactly_at_mutable_crossings(inst):
    u, beta = inst
    g = build_graph(u, beta)
    table = order_table(u, beta)
    cyc = all_cycles(g)
    assert set(cyc) == set(table.solid)
    for d, c in cyc.items():
        assert c.mutable == (d in table.mutable)
        steps = [step for walk in c.walks for step in walk]
        assert any(e == ("b", d) for e, _, _ in steps)
        if c.mutable:
            assert c.walks[0][0][0] == ("b", d)


@given(instances())
def test_mutable_cycles_walk_continuously_and_have_no_boundary(inst):
    g = build_graph(*inst)
    for c in all_cycles(g).values():
        for walk in c.walks:
            for (_, _, b), (_, a, _) in zip(walk, walk[1:]):
                assert a == b
        if c.mutable:
            (walk,) = c.walks
            assert walk[-1][2] == walk[0][1]
            assert boundary(c.edge_chain(), g.edges) == {}


@given(instances())
def test_propagation_matches_the_subexpressions(inst):
    u, beta = inst
    g = build_graph(u, beta)
    for d in order_table(u, beta).solid:
        assert check_against_aps(g, propagate(g, d))


@given(instances())
@settings(max_examples=60)
def test_intersection_form_is_skew_on_mutable_pairs(inst):
    g = build_graph(*inst)
    cyc = all_cycles(g)
    form = intersection_matrix(g, cyc)
    for (c, d), k in form.items():
        if cyc[c].mutable and cyc[d].mutable:
            assert form[(d, c)] == -k


@given(instances())
@settings(max_examples=60)
def test_cycle_mutation_reproduces_quiver_mutation(inst):
    u, beta = inst
    g = build_graph(u, beta)
    classes = classes_of(g, all_cycles(g))
    q = seed_quiver(u, beta)
    for d in q.mutable:
        mu_classes, mu_q = mutate_cycles(classes, d), mutate(q, d)
        for c in q.vertices:
            for e in q.mutable:
                assert mu_classes.pairing(c, e) == mu_q.b(c, e)


def test_double_cycle_mutation_returns_pairing_not_classes():
    # classes come back only up to a multiple of C_d; the pairing is restored
    u, beta = simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3)
    g = build_graph(u, beta)
    classes = classes_of(g, all_cycles(g))
    for d in classes.mutable:
        twice = mutate_cycles(mutate_cycles(classes, d), d)
        for c in classes.keys:
            for e in classes.mutable:
                assert twice.pairing(c, e) == classes.pairing(c, e)
