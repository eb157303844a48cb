"""
Point counts of braid Richardson varieties over finite fields, the point-count
rational function and the HOMFLY top-term comparison.

Two independent counts are provided: a transfer-matrix walk over S_n and a
brute-force enumeration of matrices over a prime field.

>>> from braidcluster.perm import identity, longest
>>> str(deodhar_count(identity(2), DoubleBraidWord((1,), 2)))
'q - 1'
>>> fq_brute_force(identity(2), DoubleBraidWord((1,), 2), 3)
2
>>> str(point_count_function(longest(2), DoubleBraidWord((1, 1), 2)))
'1'
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .braid import DoubleBraidWord, NotAdmissible, compute_pds, demazure_product_of_word, order_table, act
from .laurent import InexactDivision, LaurentPolynomial, var
from .perm import (
    Permutation,
    bruhat_leq,
    compose,
    identity,
    length,
    longest,
    reduced_word,
    signed_matrix,
    simple,
)


class BudgetExceeded(RuntimeError):
    """The requested computation is larger than the allowed budget."""


# one-variable polynomials -------------------------------------------------------

@dataclass(frozen=True)
class QPolynomial:
    """Integer polynomial in q, coefficients in ascending degree.

    >>> p = QPolynomial((-1, 1)) * QPolynomial((-1, 1))
    >>> str(p), p(3)
    ('q^2 - 2*q + 1', 4)
    >>> p.divide_by_q_minus_one(2)
    QPolynomial(coeffs=(1,))
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def const(c: int) -> "QPolynomial":
        return QPolynomial((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        k = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (k - len(self.coeffs))
        b = other.coeffs + (0,) * (k - len(other.coeffs))
        return QPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other: "QPolynomial") -> "QPolynomial":
        if not self.coeffs or not other.coeffs:
            return QPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return QPolynomial(tuple(out))

    def __call__(self, q: int) -> int:
        return sum(c * q ** k for k, c in enumerate(self.coeffs))

    def divide_by_q_minus_one(self, k: int = 1) -> "QPolynomial":
        """Exact quotient by (q-1)^k; raises InexactDivision otherwise."""
        cs = list(self.coeffs)
        for _ in range(k):
            if not cs:
                break
            # synthetic division by (q - 1)
            quot = [0] * (len(cs) - 1)
            carry = 0
            for d in range(len(cs) - 1, 0, -1):
                carry += cs[d]
                quot[d - 1] = carry
            if carry + cs[0] != 0:
                raise InexactDivision(f"(q-1) does not divide {QPolynomial(tuple(cs))}")
            cs = quot
        return QPolynomial(tuple(cs))

    def to_s(self) -> LaurentPolynomial:
        """The same polynomial in s = q^(1/2)."""
        s = var("s")
        return sum((c * s ** (2 * k) for k, c in enumerate(self.coeffs) if c), LaurentPolynomial({}))

    def to_json(self) -> list[list[int]]:
        return [[k, c] for k, c in enumerate(self.coeffs) if c]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            mag = abs(c)
            body = f"{mag}" if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            parts.append(("-" if c < 0 else "") + body if not parts else f" {sign} {body}")
        return "".join(parts)


Q_ONE = QPolynomial((1,))
Q_VAR = QPolynomial((0, 1))
Q_MINUS_ONE = QPolynomial((-1, 1))


# transfer-matrix walk -----------------------------------------------------------

def _check_admissible(u: Permutation, beta: DoubleBraidWord) -> None:
    if not bruhat_leq(u, demazure_product_of_word(beta)):
        raise NotAdmissible(f"{u} is not below the Demazure product of {beta}")


def deodhar_count(u: Permutation, beta: DoubleBraidWord) -> QPolynomial:
    """Number of F_q points as a polynomial in q.

    Walks v_0 = id, ..., v_m = u move by the letter's simple reflection.  A
    letter that shortens v forces the move with weight q; one that lengthens
    it either moves (weight 1) or stays (weight q - 1).

    >>> str(deodhar_count(longest(2), DoubleBraidWord((1, 1), 2)))
    'q - 1'
    >>> str(deodhar_count(longest(3), DoubleBraidWord((1, 2, 1), 3)))
    '1'
    """
    _check_admissible(u, beta)
    states: dict[Permutation, QPolynomial] = {identity(beta.n): Q_ONE}
    for a in beta.letters:
        nxt: dict[Permutation, QPolynomial] = {}

        def add(w, weight):
            nxt[w] = nxt.get(w, QPolynomial(())) + weight

        for v, wt in states.items():
            moved = act(v, a)
            if length(moved) < length(v):
                add(moved, wt * Q_VAR)
            else:
                add(moved, wt)
                add(v, wt * Q_MINUS_ONE)
        states = nxt
    return states.get(u, QPolynomial(()))


def greedy_walk_degree(u: Permutation, beta: DoubleBraidWord) -> int:
    """Exponent of (q - 1) carried by the rightmost-subexpression walk."""
    return len(compute_pds(u, beta).solid)


# brute force over F_p -------------------------------------------------------------

def positive_form(u: Permutation, beta: DoubleBraidWord) -> DoubleBraidWord:
    """All-red word reached by moving blue letters to the front and flipping them.

    Each blue letter is carried left past red letters by swaps of opposite
    colours, then its sign is flipped at the first position.

    >>> positive_form(Permutation((1, 3, 2)), DoubleBraidWord((-2, 1, 2, 1, -1), 3)).letters
    (1, 2, 1, 2, 1)
    """
    from . import moves

    cur = beta
    while any(a < 0 for a in cur.letters):
        p = next(c for c in range(1, cur.m + 1) if cur.letter(c) < 0)
        if p == 1:
            mv = moves.find_move(u, cur, "B5", 1)
        else:
            mv = moves.find_move(u, cur, "B1", p)
        _, cur, _ = moves.apply(u, cur, mv)
    return cur


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p ** 0.5) + 1))


def _batched_det(mats: np.ndarray, rows, cols, p: int) -> np.ndarray:
    k = len(rows)
    total = np.zeros(mats.shape[0], dtype=np.int64)
    for perm in itertools.permutations(range(k)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
        term = np.ones(mats.shape[0], dtype=np.int64)
        for a in range(k):
            term = term * mats[:, rows[a], cols[perm[a]]] % p
        total = (total - term) % p if inv % 2 else (total + term) % p
    return total


def _batched_rank(mats: np.ndarray, rows, cols, p: int) -> np.ndarray:
    rank = np.zeros(mats.shape[0], dtype=np.int64)
    for r in range(1, min(len(rows), len(cols)) + 1):
        hit = np.zeros(mats.shape[0], dtype=bool)
        for rs in itertools.combinations(rows, r):
            for cs in itertools.combinations(cols, r):
                hit |= _batched_det(mats, rs, cs, p) != 0
        rank = np.where(hit, r, rank)
    return rank


def _in_cell(mats: np.ndarray, w: Permutation, p: int) -> np.ndarray:
    """Mask of matrices whose lower-left rank profile equals that of w."""
    n = w.n
    ok = np.ones(mats.shape[0], dtype=bool)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            want = sum(1 for k in range(1, j + 1) if w(k) >= i)
            got = _batched_rank(mats, list(range(i - 1, n)), list(range(j)), p)
            ok &= got == want
    return ok


def _apply_z(mats: np.ndarray, i: int, t: np.ndarray, p: int) -> np.ndarray:
    # right multiplication by z_i(t) = [[t, -1], [1, 0]] on columns i, i+1
    out = mats.copy()
    ci, cj = mats[:, :, i - 1], mats[:, :, i]
    out[:, :, i - 1] = (ci * t[:, None] + cj) % p
    out[:, :, i] = (-ci) % p
    return out


def fq_brute_force(u: Permutation, beta: DoubleBraidWord, q: int,
                   budget: int = 10 ** 7, chunk: int = 1 << 16) -> int:
    """Count t in F_q^m with w0^-1 z(t_1)...z(t_m) in the cell of w0 u.

    Blue letters are first removed with the moves in :func:`positive_form`.

    >>> fq_brute_force(identity(2), DoubleBraidWord((), 2), 5)
    1
    >>> fq_brute_force(longest(2), DoubleBraidWord((1, 1), 2), 5)
    4
    """
    if not _is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    _check_admissible(u, beta)
    word = positive_form(u, beta)
    m, n = word.m, word.n
    if q ** m > budget:
        raise BudgetExceeded(f"{q}^{m} evaluations exceed the budget {budget}")
    target = compose(longest(n), u)
    w0_inv = np.array(signed_matrix(longest(n)), dtype=np.int64).T % q
    # vectorize over the trailing parameters, loop over the leading ones
    tail = 0
    while tail < m and q ** (tail + 1) <= chunk:
        tail += 1
    head = m - tail
    tails = np.array(list(itertools.product(range(q), repeat=tail)), dtype=np.int64).reshape(q ** tail, tail)
    total = 0
    for lead in itertools.product(range(q), repeat=head):
        mats = w0_inv[None, :, :].copy()
        for a, t in zip(word.letters[:head], lead):
            mats = _apply_z(mats, a, np.array([t], dtype=np.int64), q)
        mats = np.repeat(mats, tails.shape[0], axis=0)
        for k, a in enumerate(word.letters[head:]):
            mats = _apply_z(mats, a, tails[:, k], q)
        total += int(_in_cell(mats, target, q).sum())
    return total


# point-count rational function ---------------------------------------------------

@dataclass(frozen=True)
class PointCountFunction:
    """The rational function numerator / (q - 1)^power in lowest terms."""

    numerator: QPolynomial
    power: int

    @property
    def is_polynomial(self) -> bool:
        return self.power == 0

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_json(), "q_minus_one_power": -self.power}

    def __str__(self) -> str:
        if self.power == 0:
            return str(self.numerator)
        den = "(q - 1)" if self.power == 1 else f"(q - 1)^{self.power}"
        return f"({self.numerator}) / {den}"


def point_count_function(u: Permutation, beta: DoubleBraidWord) -> PointCountFunction:
    """R = count / (q - 1)^#frozen, with common factors of q - 1 cancelled.

    The quotient is a polynomial in many cases but not always:

    >>> str(point_count_function(identity(2), DoubleBraidWord((1,), 2)))
    '1'
    >>> str(point_count_function(identity(2), DoubleBraidWord((1, 1), 2)))
    '(q^2 - q + 1) / (q - 1)'
    """
    frozen = len(order_table(u, beta).frozen)
    num = deodhar_count(u, beta)
    power = frozen
    while power and num.coeffs and num(1) == 0:
        num = num.divide_by_q_minus_one(1)
        power -= 1
    return PointCountFunction(num, power)


def is_palindromic(p: QPolynomial) -> bool:
    """Coefficients read the same backwards, after dropping a power of q."""
    cs = list(p.coeffs)
    while cs and cs[0] == 0:
        cs.pop(0)
    return cs == cs[::-1]


# links and HOMFLY ------------------------------------------------------------------

@dataclass(frozen=True)
class LinkWord:
    """A braid on n strands; letter k > 0 is sigma_k, -k its inverse."""

    letters: tuple[int, ...]
    n: int

    @property
    def writhe(self) -> int:
        return sum(1 if a > 0 else -1 for a in self.letters)

    def to_json(self) -> dict:
        return {"n": self.n, "letters": list(self.letters), "writhe": self.writhe}


def link_word(u: Permutation, beta: DoubleBraidWord) -> LinkWord:
    """The braid beta * (positive lift of u)^-1 with beta made all-red.

    >>> link_word(longest(2), DoubleBraidWord((1, 1), 2)).letters
    (1, 1, -1)
    """
    word = positive_form(u, beta)
    lift = reduced_word(u)
    return LinkWord(word.letters + tuple(-a for a in reversed(lift)), beta.n)


A, Z = var("a"), var("z")
DELTA_NUM = A - A ** -1  # the 2-component unlink is DELTA_NUM / z


def _hecke_times_generator(elem: dict, i: int, inverse: bool) -> dict:
    """Right multiplication by g_i (or its inverse g_i - z) in the Hecke algebra.

    Basis g_w with g_i^2 = z g_i + 1, the quadratic form of the skein relation.
    """
    n = next(iter(elem)).n
    s = simple(i, n)
    out: dict[Permutation, LaurentPolynomial] = {}

    def add(w, c):
        out[w] = out.get(w, LaurentPolynomial({})) + c

    for w, c in elem.items():
        ws = compose(w, s)
        if length(ws) > length(w):
            add(ws, c)
        else:
            add(w, c * Z)
            add(ws, c)
        if inverse:
            add(w, -c * Z)
    return {w: c for w, c in out.items() if not c.is_zero()}


@lru_cache(maxsize=None)
def _trace(w: Permutation) -> LaurentPolynomial:
    """delta^(n-1) times the Markov trace of g_w, delta the unlink factor.

    Values are Laurent in a and z after multiplying by z^(n-1); see homfly.
    """
    n = w.n
    if n == 1:
        return LaurentPolynomial.const(1)
    if w(n) == n:
        return DELTA_NUM * _trace(Permutation(w.images[:-1]))
    # w = x s_{n-1} s_{n-2} ... s_k with x fixing n and k = w^-1(n)
    k = w.inverse()(n)
    coset = identity(n)
    for j in range(n - 1, k - 1, -1):
        coset = compose(coset, simple(j, n))
    x = compose(w, coset.inverse())
    elem = {Permutation(x.images[:-1]): LaurentPolynomial.const(1)}
    for j in range(n - 2, k - 1, -1):
        elem = _hecke_times_generator(elem, j, False)
    total = LaurentPolynomial({})
    for v, c in elem.items():
        total = total + c * _trace(v)
    # the removed g_{n-1} contributes a, one fewer unlink factor: z * a / z
    return A * Z * total


def homfly(link: LinkWord, budget: int = 200_000) -> LaurentPolynomial:
    """HOMFLY polynomial with a P(L+) - a^-1 P(L-) = z P(L0) and unknot 1.

    >>> str(homfly(LinkWord((1, -1), 2)))
    'a*z^-1 - a^-1*z^-1'
    >>> homfly(LinkWord((1, 1, 1), 2)) == homfly(LinkWord((1, 1, 1, 2), 3))
    True
    """
    n = link.n
    elem = {identity(n): LaurentPolynomial.const(1)}
    for a in link.letters:
        elem = _hecke_times_generator(elem, abs(a), a < 0)
        if sum(len(c.terms) for c in elem.values()) > budget:
            raise BudgetExceeded("HOMFLY expansion exceeds the budget")
    total = LaurentPolynomial({})
    for w, c in elem.items():
        total = total + c * _trace(w)
    # _trace carries an extra factor z^(n-1)
    return A ** -link.writhe * total * Z ** (1 - n)


def top_a_term(p: LaurentPolynomial) -> tuple[int, LaurentPolynomial]:
    """Highest a-degree and its coefficient as a Laurent polynomial in z."""
    top = max(dict(mono).get("a", 0) for mono in p.terms)
    coeff = LaurentPolynomial({tuple((v, e) for v, e in mono if v != "a"): c
                               for mono, c in p.terms.items() if dict(mono).get("a", 0) == top})
    return top, coeff


@dataclass(frozen=True)
class PointCountReport:
    """Both sides of R(q) = (q - 1)^(c - 1) P_top(q), cleared of denominators."""

    u: Permutation
    beta: DoubleBraidWord
    rational_function: PointCountFunction
    components: int
    homfly: LaurentPolynomial
    top_degree: int
    top_coefficient: LaurentPolynomial
    lhs: LaurentPolynomial
    rhs: LaurentPolynomial

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "u": list(self.u.images),
            "beta": list(self.beta.letters),
            "R": self.rational_function.to_json(),
            "components": self.components,
            "homfly": self.homfly.to_json(),
            "top_a_degree": self.top_degree,
            "top_coefficient": self.top_coefficient.to_json(),
            "passed": self.passed,
        }


def verify_thm_pc(u: Permutation, beta: DoubleBraidWord) -> PointCountReport:
    """Compare the point-count function with the HOMFLY top term in s = q^(1/2).

    With a = s^-1 and z = s - s^-1, both sides are multiplied by z^K to clear
    the negative z-powers of the top coefficient and by (q - 1)^k to clear
    the denominator of R.

    >>> verify_thm_pc(longest(2), DoubleBraidWord((1,), 2)).passed
    True
    """
    from .graph3d import build_graph, components

    R = point_count_function(u, beta)
    c = components(build_graph(u, beta))
    P = homfly(link_word(u, beta))
    top, coeff = top_a_term(P)
    s = var("s")
    zs = s - s ** -1
    K = max(0, -min(dict(mono).get("z", 0) for mono in coeff.terms))
    rhs = LaurentPolynomial({})
    for mono, k in coeff.terms.items():
        rhs = rhs + k * zs ** (dict(mono).get("z", 0) + K)
    rhs = rhs * s ** (-top) * (s ** 2 - 1) ** (c - 1 + R.power)
    lhs = R.numerator.to_s() * zs ** K
    return PointCountReport(u, beta, R, c, P, top, coeff, lhs, rhs)
