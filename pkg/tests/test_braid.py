import random

import pytest
from hypothesis import given

from braidcluster.braid import (
    DoubleBraidWord,
    NotAdmissible,
    ParseError,
    act,
    compute_aps,
    compute_pds,
    le_diagram_to_pair,
    order_table,
    parse_le_diagram,
    parse_word,
    random_le_diagram,
)
from braidcluster.perm import compose, identity, length, longest, simple

from conftest import instances

EXAMPLE = (simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))


def test_example_solid_and_frozen():
    table = order_table(*EXAMPLE)
    assert table.solid == (1, 2, 4, 5)
    assert table.frozen == frozenset({1, 2})
    assert table.mutable == (4, 5)


@given(instances())
def test_pds_is_a_walk_from_identity_to_u(inst):
    u, beta = inst
    rec = compute_pds(u, beta)
    assert rec.pds[0] == identity(beta.n) and rec.pds[-1] == u
    for c in range(1, beta.m + 1):
        prev, cur = rec.pds[c - 1], rec.pds[c]
        if c in rec.solid:
            assert prev == cur
        else:
            assert cur == act(prev, beta.letter(c)) and length(cur) == length(prev) + 1
    assert len(rec.solid) == beta.m - length(u)


@given(instances())
def test_aps_starts_at_identity_only_for_frozen(inst):
    u, beta = inst
    table = order_table(u, beta)
    for d in table.solid:
        aps = compute_aps(u, beta, d)
        assert aps.frozen == (d in table.frozen)


def test_not_admissible():
    with pytest.raises(NotAdmissible):
        compute_pds(longest(3), DoubleBraidWord((1, 2), 3))


def test_parse_word_offsets():
    with pytest.raises(ParseError, match="offset 3"):
        parse_word("1, x", 3)
    with pytest.raises(ParseError):
        parse_word("3", 3)


def test_le_diagram_round_trip():
    rng = random.Random(3)
    for _ in range(30):
        d = random_le_diagram(rng, rng.randint(1, 3), rng.randint(1, 4))
        u, beta = le_diagram_to_pair(d)
        empty = sum(1 for row in d.rows for dot in row if not dot)
        assert length(u) == empty
        assert all(a > 0 for a in beta.letters)


def test_le_condition_enforced():
    with pytest.raises(ValueError):
        le_diagram_to_pair(parse_le_diagram("++/+.", 4))
