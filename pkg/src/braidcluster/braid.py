"""
Double braid words, the rightmost (positive distinguished) subexpression,
almost positive sequences and the order table.

A letter ``i > 0`` (red) acts on the right of a permutation by s_i, a letter
``-i`` (blue) acts on the left by s_i.  Crossings are numbered 1..m.

>>> from braidcluster.perm import simple
>>> beta = DoubleBraidWord((-2, 1, 2, 1, -1), 3)
>>> compute_pds(simple(2, 3), beta).solid
(1, 2, 4, 5)
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .perm import (
    Permutation,
    compose,
    demazure_product,
    demazure_quotient,
    identity,
    length,
    longest,
    simple,
)


class NotAdmissible(ValueError):
    """u is not below the Demazure product of the word."""


class ParseError(ValueError):
    """Malformed textual input."""


@dataclass(frozen=True)
class DoubleBraidWord:
    """A word in the letters +-1..+-(n-1)."""

    letters: tuple[int, ...]
    n: int

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        for a in letters:
            if a == 0 or abs(a) >= self.n:
                raise ValueError(f"letter {a} out of range for rank {self.n}")
        object.__setattr__(self, "letters", letters)

    @property
    def m(self) -> int:
        return len(self.letters)

    def letter(self, c: int) -> int:
        """The letter at crossing c (1-based)."""
        return self.letters[c - 1]

    def __str__(self) -> str:
        return " ".join(map(str, self.letters))


def parse_word(text: str, n: int) -> DoubleBraidWord:
    """Parse whitespace- or comma-separated signed integers.

    >>> parse_word("-2 1 2 1 -1", 3).letters
    (-2, 1, 2, 1, -1)
    >>> parse_word("", 2).m
    0
    """
    tokens = text.replace(",", " ").split()
    letters = []
    pos = 0
    for tok in tokens:
        pos = text.find(tok, pos)
        try:
            letters.append(int(tok))
        except ValueError:
            raise ParseError(f"bad letter {tok!r} at offset {pos}") from None
        pos += len(tok)
    try:
        return DoubleBraidWord(tuple(letters), n)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def step_quotient(w: Permutation, a: int) -> Permutation:
    """One Demazure-quotient step s^- |> w <| s^+ for the letter a."""
    return demazure_quotient(w, abs(a), "left" if a < 0 else "right")


def step_product(w: Permutation, a: int) -> Permutation:
    return demazure_product(w, abs(a), "left" if a < 0 else "right")


def act(w: Permutation, a: int) -> Permutation:
    """Multiply by s_|a| on the side given by the sign of the letter."""
    s = simple(abs(a), w.n)
    return compose(s, w) if a < 0 else compose(w, s)


def demazure_product_of_word(beta: DoubleBraidWord) -> Permutation:
    """The Demazure product s^-_{i_m} * ... * s^-_{i_1} * s^+_{i_1} * ... * s^+_{i_m}.

    >>> demazure_product_of_word(DoubleBraidWord((-2, 1, 2, 1, -1), 3)) == longest(3)
    True
    >>> demazure_product_of_word(DoubleBraidWord((1, 1), 2)) == simple(1, 2)
    True
    """
    w = identity(beta.n)
    for a in beta.letters:
        w = step_product(w, a)
    return w


@dataclass(frozen=True)
class SubexpressionRecord:
    """The rightmost u-subexpression u_(0), ..., u_(m) and its solid set."""

    u: Permutation
    beta: DoubleBraidWord
    pds: tuple[Permutation, ...]
    solid: tuple[int, ...]

    @cached_property
    def hollow(self) -> tuple[int, ...]:
        js = set(self.solid)
        return tuple(c for c in range(1, self.beta.m + 1) if c not in js)

    def is_solid(self, c: int) -> bool:
        return c in self._solid_set

    @cached_property
    def _solid_set(self) -> frozenset[int]:
        return frozenset(self.solid)

    def at(self, c: int) -> Permutation:
        return self.pds[c]


@lru_cache(maxsize=4096)
def compute_pds(u: Permutation, beta: DoubleBraidWord) -> SubexpressionRecord:
    """Iterated Demazure quotients from u_(m) = u down to u_(0).

    >>> compute_pds(identity(2), DoubleBraidWord((1, 1), 2)).solid
    (1, 2)
    >>> compute_pds(longest(3), DoubleBraidWord((1, 2, 1), 3)).solid
    ()
    """
    if u.n != beta.n:
        raise ValueError(f"rank mismatch: u in S_{u.n}, word of rank {beta.n}")
    seq = [u]
    w = u
    for a in reversed(beta.letters):
        w = step_quotient(w, a)
        seq.append(w)
    seq.reverse()
    if not seq[0].is_identity():
        raise NotAdmissible(f"u = {u} is not below the Demazure product of ({beta})")
    solid = tuple(c for c in range(1, beta.m + 1) if seq[c] == seq[c - 1])
    return SubexpressionRecord(u, beta, tuple(seq), solid)


@dataclass(frozen=True)
class AlmostPositiveSequence:
    """The sequence v^(d)_(0..m) with one Demazure product at crossing d."""

    d: int
    seq: tuple[Permutation, ...]

    @property
    def frozen(self) -> bool:
        return not self.seq[0].is_identity()


def compute_aps(u: Permutation, beta: DoubleBraidWord, d: int,
                record: SubexpressionRecord | None = None) -> AlmostPositiveSequence:
    """Almost positive sequence for the solid crossing d.

    >>> compute_aps(identity(2), DoubleBraidWord((1,), 2), 1).frozen
    True
    >>> from braidcluster.perm import simple
    >>> compute_aps(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3), 4).frozen
    False
    """
    record = record or compute_pds(u, beta)
    if not record.is_solid(d):
        raise ValueError(f"crossing {d} is not solid")
    seq = [u]
    w = u
    for c in range(beta.m, 0, -1):
        a = beta.letter(c)
        w = step_product(w, a) if c == d else step_quotient(w, a)
        seq.append(w)
    seq.reverse()
    return AlmostPositiveSequence(d, tuple(seq))


@dataclass(frozen=True)
class OrderTable:
    """Vanishing-order table: ``q[d][c][h]`` in {0, 1} for h in +-[1..n-1]."""

    solid: tuple[int, ...]
    m: int
    n: int
    q: dict[int, tuple[dict[int, int], ...]]
    frozen: frozenset[int]

    def __call__(self, d: int, c: int, h: int) -> int:
        return self.q[d][c][h]

    @property
    def mutable(self) -> tuple[int, ...]:
        return tuple(d for d in self.solid if d not in self.frozen)

    def chamber_matrix(self, letters: tuple[int, ...]) -> list[list[int]]:
        """M[c][d] = q[d][c-1][i_c] over solid c, d (row c, column d)."""
        return [[self.q[d][c - 1][letters[c - 1]] for d in self.solid] for c in self.solid]


def differs(u: Permutation, v: Permutation, h: int) -> int:
    """1 if the prefix sets of u, v (or their inverses for h < 0) differ at |h|."""
    if h > 0:
        return int(u.prefix_set(h) != v.prefix_set(h))
    return int(u.inverse().prefix_set(-h) != v.inverse().prefix_set(-h))


def signed_levels(n: int) -> tuple[int, ...]:
    return tuple(range(1, n)) + tuple(-h for h in range(1, n))


def _prefix_profile(w: Permutation) -> dict[int, frozenset[int]]:
    """Prefix sets of w at every positive level and of w^-1 at every negative one."""
    inv = w.inverse()
    out = {h: w.prefix_set(h) for h in range(1, w.n)}
    out.update({-h: inv.prefix_set(h) for h in range(1, w.n)})
    return out


def order_table(u: Permutation, beta: DoubleBraidWord,
                record: SubexpressionRecord | None = None) -> OrderTable:
    """Compare the PDS with every almost positive sequence.

    >>> from braidcluster.perm import simple
    >>> t = order_table(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))
    >>> [t(d, 3, 1) for d in t.solid]
    [0, 0, 1, 1]
    """
    if record is None:
        return _cached_order_table(u, beta)
    return _order_table(u, beta, record)


@lru_cache(maxsize=4096)
def _cached_order_table(u: Permutation, beta: DoubleBraidWord) -> OrderTable:
    return _order_table(u, beta, compute_pds(u, beta))


def _order_table(u: Permutation, beta: DoubleBraidWord, record: SubexpressionRecord) -> OrderTable:
    q: dict[int, tuple[dict[int, int], ...]] = {}
    frozen = set()
    levels = signed_levels(beta.n)
    profiles: dict[Permutation, dict[int, frozenset[int]]] = {}

    def profile(w):
        if w not in profiles:
            profiles[w] = _prefix_profile(w)
        return profiles[w]

    for d in record.solid:
        aps = compute_aps(u, beta, d, record)
        if aps.frozen:
            frozen.add(d)
        rows = []
        for c in range(beta.m + 1):
            a, b = profile(record.pds[c]), profile(aps.seq[c])
            rows.append({h: int(a[h] != b[h]) for h in levels})
        q[d] = tuple(rows)
    return OrderTable(record.solid, beta.m, beta.n, q, frozenset(frozen))


def admissible_pairs(n: int, m: int, letters: tuple[int, ...] | None = None):
    """Yield every (u, word) with u below the word, for words of length exactly m."""
    import itertools

    from .perm import all_permutations, bruhat_leq

    alphabet = letters or tuple(a for i in range(1, n) for a in (i, -i))
    perms = all_permutations(n)
    for word in itertools.product(alphabet, repeat=m):
        beta = DoubleBraidWord(word, n)
        top = demazure_product_of_word(beta)
        for u in perms:
            if bruhat_leq(u, top):
                yield u, beta


# Le-diagrams ---------------------------------------------------------------

@dataclass(frozen=True)
class LeDiagram:
    """Dots in a Young diagram inside a k x (n-k) box, English notation.

    ``rows[r][c]`` is True when box (r+1, c+1) carries a dot.
    """

    rows: tuple[tuple[bool, ...], ...]
    k: int
    n: int

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    def violations(self) -> list[tuple[int, int]]:
        bad = []
        for r, row in enumerate(self.rows):
            for c, dot in enumerate(row):
                if dot:
                    continue
                above = any(self.rows[r2][c] for r2 in range(r))
                left = any(row[c2] for c2 in range(c))
                if above and left:
                    bad.append((r + 1, c + 1))
        return bad


def parse_le_diagram(text: str, n: int | None = None) -> LeDiagram:
    """Rows of '.' (empty) and '+' (dot), separated by '/' or newlines.

    >>> parse_le_diagram("++/+.", 4).shape
    (2, 2)
    """
    lines = [ln.strip() for ln in text.replace("/", "\n").splitlines() if ln.strip()]
    rows = []
    for ln in lines:
        if set(ln) - {".", "+"}:
            raise ParseError(f"Le-diagram rows use '.' and '+' only: {ln!r}")
        rows.append(tuple(ch == "+" for ch in ln))
    if any(len(rows[r]) < len(rows[r + 1]) for r in range(len(rows) - 1)):
        raise ParseError("row lengths must weakly decrease")
    k = len(rows)
    width = len(rows[0]) if rows else 0
    n = n if n is not None else k + width
    if width > n - k:
        raise ParseError(f"diagram does not fit in a {k} x {n - k} box")
    return LeDiagram(tuple(rows), k, n)


def le_diagram_to_pair(diagram: LeDiagram) -> tuple[Permutation, DoubleBraidWord]:
    """The pair (u, reduced word for w) whose hollow crossings are the empty boxes.

    Box (r, c) carries the letter n - k + r - c; boxes are read bottom row
    first, each row right to left, so the corner box (1, 1) is last.

    >>> u, w = le_diagram_to_pair(parse_le_diagram("++/++", 4))
    >>> u.is_identity(), w.letters
    (True, (2, 3, 1, 2))
    """
    bad = diagram.violations()
    if bad:
        raise ValueError(f"Le-condition violated at boxes {bad}")
    n, k = diagram.n, diagram.k
    letters, dots = [], []
    for r in range(k, 0, -1):
        for c in range(len(diagram.rows[r - 1]), 0, -1):
            letters.append(n - k + r - c)
            dots.append(diagram.rows[r - 1][c - 1])
    beta = DoubleBraidWord(tuple(letters), n)
    u = identity(n)
    for a, dot in zip(letters, dots):
        if not dot:
            u = compose(u, simple(a, n))
    record = compute_pds(u, beta)
    expected = tuple(c for c, dot in enumerate(dots, start=1) if dot)
    if record.solid != expected or length(u) != len(letters) - len(expected):
        raise ValueError("hollow crossings do not match the empty boxes")
    return u, beta


def random_le_diagram(rng, k: int, width: int, density: float = 0.6) -> LeDiagram:
    """Random Le-diagram: random shape, dots filled in to satisfy the Le-condition."""
    shape = sorted((rng.randint(1, width) for _ in range(k)), reverse=True)
    rows = [[rng.random() < density for _ in range(lam)] for lam in shape]
    changed = True
    while changed:
        changed = False
        for r in range(k):
            for c in range(shape[r]):
                if not rows[r][c] and any(rows[r2][c] for r2 in range(r)) and any(rows[r][:c]):
                    rows[r][c] = True
                    changed = True
    return LeDiagram(tuple(tuple(r) for r in rows), k, k + width)


def random_instance(rng, n_max: int, m_max: int, n_min: int = 2) -> tuple:
    """A random admissible (u, word): random letters, then u uniform below the word.

    >>> import random
    >>> u, beta = random_instance(random.Random(1), 3, 4)
    >>> u.n == beta.n
    True
    """
    from .perm import all_permutations, bruhat_leq

    n = rng.randint(n_min, n_max)
    m = rng.randint(0, m_max)
    letters = tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(m))
    beta = DoubleBraidWord(letters, n)
    top = demazure_product_of_word(beta)
    below = [u for u in all_permutations(n) if bruhat_leq(u, top)]
    return rng.choice(below), beta
