from hypothesis import given, settings, strategies as st

from braidcluster.braid import DoubleBraidWord
from braidcluster.graph3d import build_graph
from braidcluster.perm import simple
from braidcluster.quiver import (
    Certificate,
    Unknown,
    check_certificate,
    from_arrows,
    from_dot,
    from_json,
    is_sink_recurrent,
    mutate,
    quiver_from_cycles,
    really_full_rank,
    seed_quiver,
    to_dot,
    to_json,
)

from conftest import instances


@st.composite
def ice_quivers(draw):
    k = draw(st.integers(1, 6))
    verts = list(range(1, k + 1))
    frozen = draw(st.sets(st.sampled_from(verts), max_size=k - 1))
    arrows = []
    for a in verts:
        for b in verts:
            if a < b and not (a in frozen and b in frozen):
                m = draw(st.integers(-2, 2))
                if m:
                    arrows.append((a, b, m) if m > 0 else (b, a, -m))
    return from_arrows(verts, frozen, arrows)


@given(ice_quivers(), st.data())
def test_mutation_is_an_involution(q, data):
    d = data.draw(st.sampled_from(q.mutable))
    assert mutate(mutate(q, d), d) == q


@given(ice_quivers())
def test_json_and_dot_round_trip(q):
    assert from_json(to_json(q)) == q
    assert from_dot(to_dot(q)) == q


def test_worked_example_quiver():
    q = seed_quiver(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))
    assert q.vertices == (1, 2, 4, 5)
    assert q.frozen == {1, 2}
    assert sorted(q.arrows()) == [(1, 4, 1), (4, 2, 1), (5, 2, 1)]


@given(instances(n_max=3, m_max=5))
@settings(max_examples=80)
def test_half_arrows_agree_with_intersection_numbers(inst):
    u, beta = inst
    assert quiver_from_cycles(build_graph(u, beta)) == seed_quiver(u, beta)


@given(instances(n_max=3, m_max=6))
@settings(max_examples=60)
def test_seed_quivers_are_sink_recurrent_and_full_rank(inst):
    q = seed_quiver(*inst)
    cert = is_sink_recurrent(q)
    assert not isinstance(cert, Unknown)
    assert check_certificate(q, cert)
    assert really_full_rank(q)


def test_tampered_certificate_is_rejected():
    q = from_arrows([1, 2, 3], [], [(1, 2, 1), (2, 3, 1)])
    cert = is_sink_recurrent(q)
    assert check_certificate(q, cert)
    assert not check_certificate(q, Certificate(cert.mutations + (1,), cert.sink,
                                                cert.without_sink, cert.without_in)) or cert.sink is None
    assert not check_certificate(q, Certificate((), 1, Certificate(()), Certificate(())))


def test_budget_exhaustion_is_reported():
    q = from_arrows([1, 2, 3], [], [(1, 2, 2), (2, 3, 2), (3, 1, 2)])
    assert isinstance(is_sink_recurrent(q, budget=1), Unknown)


def test_kronecker_exchange_matrix_is_not_really_full_rank():
    assert not really_full_rank(from_arrows([1, 2], [], [(1, 2, 2)]))
    assert really_full_rank(from_arrows([1, 2], [], [(1, 2, 1)]))
