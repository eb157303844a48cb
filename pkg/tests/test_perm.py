from hypothesis import given, strategies as st

from braidcluster.perm import (
    Permutation,
    all_permutations,
    bruhat_leq,
    compose,
    demazure_product,
    demazure_quotient,
    from_word,
    identity,
    length,
    longest,
    parse_permutation,
    reduced_word,
    signed_matrix,
    simple,
)
import pytest

from conftest import permutations


@given(permutations())
def test_reduced_word_round_trip(w):
    word = reduced_word(w)
    assert len(word) == length(w)
    assert from_word(word, w.n) == w


@given(permutations(), permutations())
def test_bruhat_subword_criterion_agrees_with_ranks(u, w):
    # u <= w iff u is the product of a subword of a reduced word of w
    if u.n != w.n:
        return
    word = reduced_word(w)
    reach = {identity(w.n)}
    for a in word:
        reach |= {compose(x, simple(a, w.n)) for x in reach}
    assert bruhat_leq(u, w) == (u in reach)


@given(permutations(4), st.integers(1, 3), st.sampled_from(["left", "right"]))
def test_demazure_pair_brackets_u(u, i, side):
    if i >= u.n:
        return
    lo, hi = demazure_quotient(u, i, side), demazure_product(u, i, side)
    assert length(lo) <= length(u) <= length(hi)
    assert {lo, hi} == {u, compose(simple(i, u.n), u) if side == "left" else compose(u, simple(i, u.n))}


def test_longest_is_top_of_bruhat_order():
    for u in all_permutations(4):
        assert bruhat_leq(u, longest(4))
        assert bruhat_leq(identity(4), u)


@given(permutations())
def test_signed_matrix_is_a_signed_permutation_matrix(w):
    mat = signed_matrix(w)
    for j in range(w.n):
        col = [mat[i][j] for i in range(w.n)]
        assert sorted(map(abs, col)) == [0] * (w.n - 1) + [1]
        assert col[w(j + 1) - 1] != 0


def test_parse_forms():
    assert parse_permutation("s1 s2", 3) == from_word((1, 2), 3)
    assert parse_permutation("w0", 3) == longest(3)
    assert parse_permutation("3,1,2") == Permutation((3, 1, 2))
    with pytest.raises(ValueError):
        parse_permutation("s1 t2", 3)
    with pytest.raises(ValueError):
        parse_permutation("1,1,2")
