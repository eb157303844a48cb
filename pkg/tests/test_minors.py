from hypothesis import given, settings

from braidcluster.braid import DoubleBraidWord, order_table
from braidcluster.laurent import parse_polynomial
from braidcluster.minors import (
    build_chart,
    cluster_variables,
    determinant,
    from_ints,
    mutated_variable,
    rank_profile,
    permutation_profile,
    verify_chart_validity,
    verify_minor_identities,
    verify_mutation_regularity,
)
from braidcluster.perm import Permutation, signed_matrix, simple
from braidcluster.quiver import seed_quiver

from conftest import instances, permutations

EXAMPLE = (simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))


def test_worked_example_cluster_variables():
    xs = cluster_variables(build_chart(*EXAMPLE))
    want = {1: "t1*t4 + 1", 2: "t2*t4*t5 - 1", 4: "t4", 5: "t5"}
    assert {d: x for d, x in xs.items()} == {d: parse_polynomial(s) for d, s in want.items()}


def test_worked_example_mutation_is_laurent():
    xs = cluster_variables(build_chart(*EXAMPLE))
    q = seed_quiver(*EXAMPLE)
    for d in q.mutable:
        x = mutated_variable(xs, q, d)
        assert x * xs[d] != 0


@given(permutations())
def test_permutation_matrix_profile(w):
    rows = [[abs(x) for x in r] for r in signed_matrix(w)]
    assert rank_profile(rows, 101) == permutation_profile(w)
    assert determinant(from_ints(signed_matrix(w))) == 1


@given(instances(n_max=3, m_max=5))
@settings(max_examples=50)
def test_minor_identities_hold(inst):
    reps = verify_minor_identities(*inst)
    assert all(r.passed for r in reps.values()), {k: r.failures for k, r in reps.items()}


@given(instances(n_max=3, m_max=5))
@settings(max_examples=30)
def test_chart_lands_in_the_expected_cells(inst):
    assert verify_chart_validity(build_chart(*inst), trials=1).passed


@given(instances(n_max=3, m_max=6))
@settings(max_examples=40)
def test_exchange_relations_divide_exactly(inst):
    u, beta = inst
    for d in order_table(u, beta).mutable:
        assert verify_mutation_regularity(u, beta, d).passed
