"""
Exact permutation algebra for S_n in one-line notation.

Permutations are 1-based: ``Permutation((2, 1, 3))`` sends 1 -> 2, 2 -> 1,
3 -> 3.  Composition follows ``compose(x, y)(i) == x(y(i))``.

>>> s1, s2 = simple(1, 3), simple(2, 3)
>>> compose(s1, s2)
Permutation(images=(2, 3, 1))
>>> length(longest(4))
6
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence


class RankMismatch(ValueError):
    """Two permutations of different rank were combined."""


@dataclass(frozen=True, slots=True)
class Permutation:
    """A bijection of {1..n} stored by its images."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation in one-line notation: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __lt__(self, other: "Permutation") -> bool:
        return self != other and bruhat_leq(self, other)

    def __le__(self, other: "Permutation") -> bool:
        return bruhat_leq(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return Permutation(tuple(inv))

    def prefix_set(self, h: int) -> frozenset[int]:
        """The set {w(1), ..., w(h)}.

        >>> sorted(Permutation((3, 1, 2)).prefix_set(2))
        [1, 3]
        """
        return frozenset(self.images[:h])

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return ",".join(map(str, self.images))


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def simple(i: int, n: int) -> Permutation:
    """The simple transposition s_i of S_n.

    >>> simple(2, 4)
    Permutation(images=(1, 3, 2, 4))
    """
    if not 1 <= i < n:
        raise ValueError(f"simple index {i} out of range for S_{n}")
    imgs = list(range(1, n + 1))
    imgs[i - 1], imgs[i] = imgs[i], imgs[i - 1]
    return Permutation(tuple(imgs))


def longest(n: int) -> Permutation:
    return Permutation(tuple(range(n, 0, -1)))


def _check_rank(x: Permutation, y: Permutation) -> None:
    if x.n != y.n:
        raise RankMismatch(f"rank mismatch: S_{x.n} vs S_{y.n}")


def compose(x: Permutation, y: Permutation) -> Permutation:
    """Return x*y with (x*y)(i) = x(y(i)).

    >>> compose(identity(2), simple(1, 2)) == simple(1, 2)
    True
    >>> compose(longest(3), longest(3)).is_identity()
    True
    """
    _check_rank(x, y)
    return Permutation(tuple(x.images[y.images[i] - 1] for i in range(x.n)))


def length(w: Permutation) -> int:
    """Number of inversions."""
    imgs = w.images
    return sum(1 for a in range(len(imgs)) for b in range(a + 1, len(imgs)) if imgs[a] > imgs[b])


def _rank_table(w: Permutation) -> list[list[int]]:
    # r[i][j] = #{a <= j : w(a) >= i}, 1-based i, j
    n = w.n
    r = [[0] * (n + 1) for _ in range(n + 2)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            r[i][j] = r[i][j - 1] + (1 if w(j) >= i else 0)
    return r


def bruhat_leq(u: Permutation, w: Permutation) -> bool:
    """Bruhat comparison via the rank criterion.

    >>> bruhat_leq(identity(3), longest(3))
    True
    >>> bruhat_leq(simple(1, 3), simple(2, 3))
    False
    """
    _check_rank(u, w)
    ru, rw = _rank_table(u), _rank_table(w)
    n = u.n
    return all(ru[i][j] <= rw[i][j] for i in range(1, n + 1) for j in range(1, n + 1))


def demazure_quotient(u: Permutation, i: int, side: str) -> Permutation:
    """Apply s_i on the given side if that shortens u, else return u.

    >>> demazure_quotient(from_word([1, 2], 3), 2, "right") == simple(1, 3)
    True
    >>> demazure_quotient(identity(3), 1, "left").is_identity()
    True
    """
    s = simple(i, u.n)
    v = compose(s, u) if side == "left" else compose(u, s)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return v if length(v) < length(u) else u


def demazure_product(u: Permutation, i: int, side: str) -> Permutation:
    """Apply s_i on the given side if that lengthens u, else return u.

    >>> demazure_product(simple(1, 2), 1, "right") == simple(1, 2)
    True
    """
    s = simple(i, u.n)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    v = compose(s, u) if side == "left" else compose(u, s)
    return v if length(v) > length(u) else u


def right_descents(w: Permutation) -> list[int]:
    return [i for i in range(1, w.n) if w(i) > w(i + 1)]


def left_descents(w: Permutation) -> list[int]:
    return right_descents(w.inverse())


def reduced_word(w: Permutation) -> tuple[int, ...]:
    """Reduced word found by repeatedly stripping the smallest right descent.

    >>> reduced_word(longest(3))
    (1, 2, 1)
    >>> from_word(reduced_word(Permutation((3, 1, 4, 2))), 4)
    Permutation(images=(3, 1, 4, 2))
    """
    word: list[int] = []
    while True:
        d = right_descents(w)
        if not d:
            break
        word.append(d[0])
        w = compose(w, simple(d[0], w.n))
    return tuple(reversed(word))


def from_word(word: Iterable[int], n: int) -> Permutation:
    """Product s_{a_1} s_{a_2} ... of simple transpositions."""
    return functools.reduce(compose, (simple(i, n) for i in word), identity(n))


def star(i: int, n: int) -> int:
    """The index i* = n - i, keeping the sign of a negative letter.

    >>> star(1, 5), star(-1, 5)
    (4, -4)
    """
    return -(n + i) if i < 0 else n - i


def signed_matrix(w: Permutation) -> tuple[tuple[int, ...], ...]:
    """The signed lift of w: entry (i, j) is nonzero iff i = w(j).

    >>> signed_matrix(simple(1, 2))
    ((0, -1), (1, 0))
    """
    n = w.n
    rows = [[0] * n for _ in range(n)]
    for j in range(1, n + 1):
        k = sum(1 for a in range(1, j) if w(a) > w(j))
        rows[w(j) - 1][j - 1] = -1 if k % 2 else 1
    return tuple(tuple(r) for r in rows)


def parse_permutation(text: str, n: int | None = None) -> Permutation:
    """Parse one-line notation "2,1,3" or a word like "s1 s2" / "s2".

    A word needs the rank n.

    >>> parse_permutation("2,1,3")
    Permutation(images=(2, 1, 3))
    >>> parse_permutation("s2", 3)
    Permutation(images=(1, 3, 2))
    >>> parse_permutation("id", 2)
    Permutation(images=(1, 2))
    """
    t = text.strip()
    if t.startswith("s") or t in ("id", "e", ""):
        if n is None:
            raise ValueError("rank n is required to parse a word in simple transpositions")
        if t in ("id", "e", ""):
            return identity(n)
        parts = t.replace("*", " ").replace(",", " ").split()
        letters: list[int] = []
        for p in parts:
            if not p.startswith("s") or not p[1:].isdigit():
                raise ValueError(f"bad simple transposition {p!r}")
            letters.append(int(p[1:]))
        return from_word(letters, n)
    if t == "w0":
        if n is None:
            raise ValueError("rank n is required for w0")
        return longest(n)
    images = tuple(int(x) for x in t.replace(" ", "").split(","))
    w = Permutation(images)
    if n is not None and w.n != n:
        raise RankMismatch(f"expected rank {n}, got {w.n}")
    return w


def all_permutations(n: int) -> list[Permutation]:
    import itertools

    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def index_of(seq: Sequence[int], x: int) -> int:
    return list(seq).index(x)
