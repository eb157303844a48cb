from __future__ import annotations

from hypothesis import settings, strategies as st

from braidcluster.braid import DoubleBraidWord, demazure_product_of_word
from braidcluster.perm import Permutation, all_permutations, bruhat_leq

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@st.composite
def words(draw, n_max: int = 4, m_max: int = 6, positive: bool = False):
    n = draw(st.integers(2, n_max))
    letter = st.integers(1, n - 1) if positive else st.integers(1, n - 1).flatmap(
        lambda i: st.sampled_from((i, -i)))
    letters = draw(st.lists(letter, max_size=m_max))
    return DoubleBraidWord(tuple(letters), n)


@st.composite
def instances(draw, n_max: int = 4, m_max: int = 6, positive: bool = False):
    beta = draw(words(n_max, m_max, positive))
    top = demazure_product_of_word(beta)
    below = [u for u in all_permutations(beta.n) if bruhat_leq(u, top)]
    return draw(st.sampled_from(below)), beta


@st.composite
def permutations(draw, n_max: int = 5):
    n = draw(st.integers(1, n_max))
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, 9):
        terminalreporter.write_line(module.VERDICTS.get(k, f"criterion {k}: NOT RUN"))
