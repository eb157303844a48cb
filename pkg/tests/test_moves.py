import pytest
from hypothesis import given, settings

from braidcluster.braid import DoubleBraidWord, order_table
from braidcluster.moves import (
    InapplicableMove,
    MoveInstance,
    apply,
    conjugation_move,
    enumerate_applicable,
    find_move,
    transported_chart,
    verify_invariance,
    verify_transport,
)
from braidcluster.perm import identity, length, longest, simple
from braidcluster.quiver import seed_quiver

from conftest import instances


@given(instances(n_max=3, m_max=6))
@settings(max_examples=80)
def test_every_applicable_move_preserves_the_quiver_as_predicted(inst):
    u, beta = inst
    for mv in enumerate_applicable(u, beta):
        assert verify_invariance(u, beta, mv).passed


@given(instances(n_max=3, m_max=6))
@settings(max_examples=60)
def test_moves_keep_the_instance_admissible(inst):
    u, beta = inst
    solid = len(order_table(u, beta).solid)
    for mv in enumerate_applicable(u, beta):
        u2, beta2, _ = apply(u, beta, mv)
        assert beta2.m == beta.m
        assert len(order_table(u2, beta2).solid) == solid


@given(instances(n_max=3, m_max=5))
@settings(max_examples=40)
def test_transport_reproduces_the_chart_outside_the_window(inst):
    u, beta = inst
    for mv in enumerate_applicable(u, beta):
        assert verify_transport(u, beta, mv) in (True, None)


def test_fully_solid_b3_mutates_then_swaps_outer_labels():
    beta = DoubleBraidWord((1, 2, 1), 3)
    mv = find_move(identity(3), beta, "B3", 3)
    assert mv.fully_solid and mv.mutation
    _, beta2, eff = apply(identity(3), beta, mv)
    assert beta2.letters == (2, 1, 2)
    assert (eff.kind, eff.vertex, eff.mapping) == ("mutate", 3, {1: 2, 2: 1})


def test_worked_example_moves():
    beta = DoubleBraidWord((-2, 1, 2, 1, -1), 3)
    found = [(mv.kind, mv.position) for mv in enumerate_applicable(simple(2, 3), beta)]
    assert found == [("B1", 2), ("B3", 4), ("B1", 5), ("B5", 1)]


def test_inapplicable_move_is_rejected():
    with pytest.raises(InapplicableMove):
        find_move(identity(3), DoubleBraidWord((1, 2), 3), "B3", 2)
    with pytest.raises(InapplicableMove):
        transported_chart(longest(2), DoubleBraidWord((1, 1, 1), 2), MoveInstance("B5", 1))


def test_conjugation_rotates_the_word_for_w0():
    beta = DoubleBraidWord((1, 1, 1), 2)
    out, steps = conjugation_move(longest(2), beta)
    assert steps[0].kind == "B5" and steps[-1].kind == "B4"
    assert out.m == beta.m
    q, q2 = seed_quiver(longest(2), beta), seed_quiver(longest(2), out)
    assert len(q.mutable) == len(q2.mutable)
    with pytest.raises(InapplicableMove):
        conjugation_move(identity(2), beta)
