import pytest
from hypothesis import given, settings, strategies as st

from braidcluster.braid import DoubleBraidWord, order_table
from braidcluster.count import (
    BudgetExceeded,
    LinkWord,
    QPolynomial,
    Q_MINUS_ONE,
    deodhar_count,
    fq_brute_force,
    homfly,
    link_word,
    point_count_function,
    positive_form,
    top_a_term,
    verify_thm_pc,
)
from braidcluster.laurent import InexactDivision, var
from braidcluster.moves import enumerate_applicable, apply
from braidcluster.perm import identity, length, longest, simple

from conftest import instances

A, Z = var("a"), var("z")


def braid_words(n_max=4, m_max=6):
    return st.integers(2, n_max).flatmap(lambda n: st.lists(
        st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i))),
        min_size=1, max_size=m_max).map(lambda w: LinkWord(tuple(w), n)))


@given(instances(n_max=3, m_max=5))
@settings(max_examples=40)
def test_walk_count_matches_brute_force(inst):
    u, beta = inst
    walk = deodhar_count(u, beta)
    for q in (2, 3):
        assert walk(q) == fq_brute_force(u, beta, q)


@given(instances(n_max=4, m_max=7))
def test_walk_count_value_at_one_and_leading_term(inst):
    u, beta = inst
    walk = deodhar_count(u, beta)
    assert walk.coeffs[-1] == 1
    assert walk.degree == beta.m - length(u)


@given(instances(n_max=3, m_max=5))
@settings(max_examples=40)
def test_positive_form_preserves_the_count(inst):
    u, beta = inst
    pos = positive_form(u, beta)
    assert all(a > 0 for a in pos.letters)
    assert deodhar_count(u, pos) == deodhar_count(u, beta)


@given(instances(n_max=3, m_max=6))
@settings(max_examples=60)
def test_moves_preserve_the_count(inst):
    u, beta = inst
    walk = deodhar_count(u, beta)
    for mv in enumerate_applicable(u, beta):
        u2, beta2, _ = apply(u, beta, mv)
        assert deodhar_count(u2, beta2) == walk


def test_count_is_not_always_divisible_by_the_frozen_power():
    # u = id, beta = (1, 1): one frozen crossing, count q^2 - q + 1
    u, beta = identity(2), DoubleBraidWord((1, 1), 2)
    walk = deodhar_count(u, beta)
    assert walk == QPolynomial((1, -1, 1))
    assert len(order_table(u, beta).frozen) == 1
    with pytest.raises(InexactDivision):
        walk.divide_by_q_minus_one(1)
    r = point_count_function(u, beta)
    assert not r.is_polynomial


def test_brute_force_rejects_composite_q_and_small_budget():
    u, beta = longest(3), DoubleBraidWord((1, 2, 1, 2, 1), 3)
    with pytest.raises(ValueError):
        fq_brute_force(u, beta, 4)
    with pytest.raises(BudgetExceeded):
        fq_brute_force(u, beta, 5, budget=10)


@given(braid_words(), st.data())
@settings(max_examples=60)
def test_homfly_skein_relation(link, data):
    k = data.draw(st.integers(0, len(link.letters) - 1))
    i = abs(link.letters[k])
    pre, post = link.letters[:k], link.letters[k + 1:]
    plus = LinkWord(pre + (i,) + post, link.n)
    minus = LinkWord(pre + (-i,) + post, link.n)
    zero = LinkWord(pre + post, link.n)
    assert A * homfly(plus) - A ** -1 * homfly(minus) == Z * homfly(zero)


@given(braid_words())
@settings(max_examples=60)
def test_homfly_markov_moves(link):
    rot = LinkWord(link.letters[1:] + link.letters[:1], link.n)
    assert homfly(rot) == homfly(link)
    for sign in (1, -1):
        stab = LinkWord(link.letters + (sign * link.n,), link.n + 1)
        assert homfly(stab) == homfly(link)


def test_homfly_of_small_links():
    assert homfly(LinkWord((1,), 2)) == 1
    hopf = A ** -1 * Z + A ** -1 * Z ** -1 - A ** -3 * Z ** -1
    assert homfly(LinkWord((1, 1), 2)) == hopf
    assert top_a_term(hopf)[0] == -1


@pytest.mark.parametrize("u, letters", [
    (longest(2), (1,)),
    (longest(2), (1, 1)),
    (identity(2), (1, 1)),
    (longest(2), (1, 1, 1)),
    (longest(3), (1, 2, 1)),
    (longest(3), (1, 2, 1, 2)),
])
def test_point_count_matches_homfly_top_term(u, letters):
    assert verify_thm_pc(u, DoubleBraidWord(letters, u.n)).passed


def test_link_word_closes_with_u_inverse():
    lw = link_word(simple(1, 2), DoubleBraidWord((1, 1), 2))
    assert lw.letters == (1, 1, -1)
    assert lw.writhe == 1
