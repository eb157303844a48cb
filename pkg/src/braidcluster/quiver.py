"""
Ice quivers on the solid crossings: two independent constructions, mutation,
sink-recurrence certificates, the really-full-rank test and export.

>>> from braidcluster.perm import simple
>>> from braidcluster.braid import DoubleBraidWord
>>> q = seed_quiver(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))
>>> q.vertices, sorted(q.frozen)
((1, 2, 4, 5), [1, 2])
>>> q.arrows()
[(1, 4, 1), (4, 2, 1), (5, 2, 1)]
>>> q == quiver_from_half_arrows(order_table(q_u := simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3)),
...                              (-2, 1, 2, 1, -1))
True
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .braid import DoubleBraidWord, OrderTable, order_table
from .perm import Permutation


class OddHalfArrowSum(AssertionError):
    """Half-arrows between two vertices did not pair up; this indicates a bug."""


class FrozenVertex(ValueError):
    pass


@dataclass(frozen=True)
class IceQuiver:
    """Vertices with frozen flags and a skew-symmetric arrow matrix.

    ``matrix[a][b] = k > 0`` means k arrows from ``vertices[a]`` to ``vertices[b]``.
    Entries between two frozen vertices are always 0.
    """

    vertices: tuple[int, ...]
    frozen: frozenset[int]
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.vertices)
        for a in range(k):
            for b in range(k):
                if self.matrix[a][b] != -self.matrix[b][a]:
                    raise ValueError("arrow matrix is not skew-symmetric")
                if self.vertices[a] in self.frozen and self.vertices[b] in self.frozen and self.matrix[a][b]:
                    raise ValueError("arrow between two frozen vertices")

    @property
    def mutable(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if v not in self.frozen)

    def index(self, v: int) -> int:
        return self.vertices.index(v)

    def b(self, x: int, y: int) -> int:
        return self.matrix[self.index(x)][self.index(y)]

    def exchange_matrix(self) -> list[list[int]]:
        """Rows: all vertices; columns: mutable vertices."""
        cols = [self.index(v) for v in self.mutable]
        return [[row[c] for c in cols] for row in self.matrix]

    def arrows(self) -> list[tuple[int, int, int]]:
        """(source, target, multiplicity) for every arrow bundle."""
        out = []
        for a, x in enumerate(self.vertices):
            for b, y in enumerate(self.vertices):
                if self.matrix[a][b] > 0:
                    out.append((x, y, self.matrix[a][b]))
        return out

    def in_neighbors(self, v: int) -> set[int]:
        j = self.index(v)
        return {x for a, x in enumerate(self.vertices) if self.matrix[a][j] > 0}

    def out_neighbors(self, v: int) -> set[int]:
        j = self.index(v)
        return {x for a, x in enumerate(self.vertices) if self.matrix[j][a] > 0}

    def relabel(self, mapping: dict[int, int]) -> "IceQuiver":
        """Rename vertices; the result is sorted by new label."""
        pairs = sorted((mapping.get(v, v), a) for a, v in enumerate(self.vertices))
        order = [a for _, a in pairs]
        return IceQuiver(tuple(x for x, _ in pairs),
                         frozenset(mapping.get(v, v) for v in self.frozen),
                         tuple(tuple(self.matrix[a][b] for b in order) for a in order))

    def delete(self, removed: Iterable[int]) -> "IceQuiver":
        removed = set(removed)
        keep = [a for a, v in enumerate(self.vertices) if v not in removed]
        return IceQuiver(tuple(self.vertices[a] for a in keep), self.frozen - removed,
                         tuple(tuple(self.matrix[a][b] for b in keep) for a in keep))

    def mutable_part(self) -> "IceQuiver":
        return self.delete(self.frozen)

    def is_isolated(self) -> bool:
        return not any(any(r) for r in self.matrix)

    def sinks(self) -> list[int]:
        return [v for a, v in enumerate(self.vertices)
                if v not in self.frozen and all(x <= 0 for x in self.matrix[a])]

    def key(self) -> tuple:
        return (self.vertices, tuple(sorted(self.frozen)), self.matrix)


def from_arrows(vertices: Iterable[int], frozen: Iterable[int],
                arrows: Iterable[tuple[int, int, int]]) -> IceQuiver:
    """Build a quiver from (source, target, multiplicity) triples.

    >>> q = from_arrows([1, 2], [], [(1, 2, 1)])
    >>> q.b(1, 2), q.b(2, 1)
    (1, -1)
    """
    vertices = tuple(sorted(vertices))
    pos = {v: a for a, v in enumerate(vertices)}
    mat = [[0] * len(vertices) for _ in vertices]
    for x, y, k in arrows:
        mat[pos[x]][pos[y]] += k
        mat[pos[y]][pos[x]] -= k
    return IceQuiver(vertices, frozenset(frozen), tuple(map(tuple, mat)))


def mutate(q: IceQuiver, d: int) -> IceQuiver:
    """Quiver mutation at a mutable vertex.

    >>> q = from_arrows([1, 2, 3], [], [(1, 2, 1), (2, 3, 1)])
    >>> mutate(q, 2).arrows()
    [(1, 3, 1), (2, 1, 1), (3, 2, 1)]
    >>> mutate(mutate(q, 2), 2) == q
    True
    """
    if d in q.frozen:
        raise FrozenVertex(f"cannot mutate at frozen vertex {d}")
    k = q.index(d)
    B = q.matrix
    size = len(q.vertices)
    out = [[0] * size for _ in range(size)]
    for a in range(size):
        for b in range(size):
            if a == k or b == k:
                out[a][b] = -B[a][b]
            elif q.vertices[a] in q.frozen and q.vertices[b] in q.frozen:
                out[a][b] = 0
            else:
                out[a][b] = B[a][b] + (abs(B[a][k]) * B[k][b] + B[a][k] * abs(B[k][b])) // 2
    return IceQuiver(q.vertices, q.frozen, tuple(map(tuple, out)))


def mutate_sequence(q: IceQuiver, seq: Iterable[int]) -> IceQuiver:
    for d in seq:
        q = mutate(q, d)
    return q


# constructions -------------------------------------------------------------------

def quiver_from_cycles(g) -> IceQuiver:
    """Arrows c -> d counted by the intersection number <C_c, C_d>, d mutable."""
    from .cycles import all_cycles, intersection_matrix

    cycles = all_cycles(g)
    form = intersection_matrix(g, cycles)
    vertices = tuple(sorted(cycles))
    frozen = frozenset(d for d, c in cycles.items() if not c.mutable)
    pos = {v: a for a, v in enumerate(vertices)}
    mat = [[0] * len(vertices) for _ in vertices]
    for (c, d), k in form.items():
        if c == d:
            if k:
                raise AssertionError(f"cycle {d} has nonzero self-intersection {k}")
            continue
        if c not in frozen and mat[pos[c]][pos[d]] not in (0, k):
            raise AssertionError(f"intersection form is not skew-symmetric at ({c}, {d})")
        mat[pos[c]][pos[d]] = k
        mat[pos[d]][pos[c]] = -k
    return IceQuiver(vertices, frozen, tuple(map(tuple, mat)))


HALF_ARROW_PAIRS = (("A", "B"), ("B", "D"), ("D", "A"), ("C", "B"), ("B", "D"), ("D", "C"))


def half_arrow_counts(table: OrderTable, letters: tuple[int, ...]) -> dict[tuple[int, int], int]:
    """Half-arrow counts around every bridge, keyed by (tail, head)."""
    n = table.n
    counts: dict[tuple[int, int], int] = {}

    def nabla(c: int, h: int) -> list[int]:
        if h == 0 or abs(h) >= n:
            return []
        return [d for d in table.solid if table.q[d][c][h] == 1]

    for c in table.solid:
        letter = letters[c - 1]
        i, sign = abs(letter), (1 if letter > 0 else -1)
        faces = {
            "D": nabla(c - 1, sign * i),
            "B": nabla(c, sign * i),
            "A": nabla(c, sign * (i + 1)),
            "C": nabla(c, sign * (i - 1)),
        }
        for x_face, y_face in HALF_ARROW_PAIRS:
            for x in faces[x_face]:
                for y in faces[y_face]:
                    key = (x, y) if sign > 0 else (y, x)
                    counts[key] = counts.get(key, 0) + 1
    return counts


def quiver_from_half_arrows(table: OrderTable, letters: tuple[int, ...]) -> IceQuiver:
    """Sum signed half-arrows around bridges and halve; loops and 2-cycles cancel."""
    counts = half_arrow_counts(table, letters)
    vertices = tuple(table.solid)
    pos = {v: a for a, v in enumerate(vertices)}
    mat = [[0] * len(vertices) for _ in vertices]
    for x in vertices:
        for y in vertices:
            if x >= y:
                continue
            net = counts.get((x, y), 0) - counts.get((y, x), 0)
            if x in table.frozen and y in table.frozen:
                continue
            if net % 2:
                raise OddHalfArrowSum(f"odd half-arrow total {net} between {x} and {y}")
            mat[pos[x]][pos[y]] = net // 2
            mat[pos[y]][pos[x]] = -net // 2
    return IceQuiver(vertices, table.frozen, tuple(map(tuple, mat)))


def seed_quiver(u: Permutation, beta: DoubleBraidWord) -> IceQuiver:
    """The ice quiver of (u, beta) by the fast half-arrow route."""
    return quiver_from_half_arrows(order_table(u, beta), beta.letters)


# sink recurrence --------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Mutate by ``mutations``, then the quiver is isolated or has the given sink."""

    mutations: tuple[int, ...]
    sink: int | None = None
    without_sink: "Certificate | None" = None
    without_in: "Certificate | None" = None

    def to_json(self) -> dict:
        out: dict = {"mutations": list(self.mutations)}
        if self.sink is not None:
            out.update(sink=self.sink, without_sink=self.without_sink.to_json(),
                       without_in=self.without_in.to_json())
        return out

    @staticmethod
    def from_json(data: dict) -> "Certificate":
        if "sink" not in data:
            return Certificate(tuple(data["mutations"]))
        return Certificate(tuple(data["mutations"]), data["sink"],
                           Certificate.from_json(data["without_sink"]),
                           Certificate.from_json(data["without_in"]))


@dataclass(frozen=True)
class Unknown:
    """The search budget ran out before a certificate was found."""

    explored: int


def check_certificate(q: IceQuiver, cert: Certificate) -> bool:
    """Independently re-verify a sink-recurrence certificate on the mutable part.

    >>> q = from_arrows([1, 2], [], [(1, 2, 1)])
    >>> check_certificate(q, Certificate((), 2, Certificate(()), Certificate(())))
    True
    >>> check_certificate(q, Certificate((), 1, Certificate(()), Certificate(())))
    False
    """
    q = q.mutable_part()
    try:
        q = mutate_sequence(q, cert.mutations)
    except (FrozenVertex, ValueError):
        return False
    if cert.sink is None:
        return q.is_isolated()
    s = cert.sink
    if s not in q.vertices or s not in q.sinks():
        return False
    if cert.without_sink is None or cert.without_in is None:
        return False
    return (check_certificate(q.delete({s}), cert.without_sink)
            and check_certificate(q.delete(q.in_neighbors(s) | {s}), cert.without_in))


def _components(q: IceQuiver) -> list[set[int]]:
    seen: set[int] = set()
    comps = []
    for v in q.vertices:
        if v in seen:
            continue
        comp, stack = set(), [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.add(x)
            for y in q.in_neighbors(x) | q.out_neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


class _Budget:
    def __init__(self, limit: int):
        self.limit, self.used = limit, 0

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def is_sink_recurrent(q: IceQuiver, budget: int = 20000, depth: int = 6) -> Certificate | Unknown:
    """Search for a certificate on the mutable part.

    Sinks are tried before any mutation.  Only when no sink works does the
    search mutate, breadth first up to ``depth`` steps.  Results are memoized
    per quiver.

    >>> q = from_arrows([1, 2, 3], [], [(1, 2, 2), (2, 3, 2), (3, 1, 2)])
    >>> isinstance(is_sink_recurrent(q, budget=200, depth=3), Unknown)
    True
    >>> isinstance(is_sink_recurrent(from_arrows([1, 2, 3], [], [(1, 2, 1), (2, 3, 1), (3, 1, 1)])), Certificate)
    True
    """
    memo: dict[tuple, Certificate | None] = {}
    tracker = _Budget(budget)
    result = _certify(q.mutable_part(), memo, tracker, depth)
    return result if result is not None else Unknown(tracker.used)


def _certify_plain(q: IceQuiver, memo, tracker, depth) -> Certificate | None:
    """Certificate without leading mutations, if some sink works directly."""
    if q.is_isolated():
        return Certificate(())
    for s in q.sinks():
        a = _certify(q.delete({s}), memo, tracker, depth)
        if a is None:
            continue
        b = _certify(q.delete(q.in_neighbors(s) | {s}), memo, tracker, depth)
        if b is not None:
            return Certificate((), s, a, b)
    return None


def _certify(q: IceQuiver, memo, tracker, depth) -> Certificate | None:
    key = q.key()
    if key in memo:
        return memo[key]
    memo[key] = None  # guards against cycles in the recursion
    if not tracker.spend():
        del memo[key]
        return None
    found = _certify_plain(q, memo, tracker, depth)
    if found is None:
        frontier = deque([((), q)])
        seen = {key}
        while frontier and found is None:
            seq, cur = frontier.popleft()
            if len(seq) >= depth:
                continue
            for v in cur.vertices:
                if seq and seq[-1] == v:
                    continue
                nxt = mutate(cur, v)
                if nxt.key() in seen:
                    continue
                seen.add(nxt.key())
                if not tracker.spend():
                    frontier.clear()
                    break
                inner = _certify_plain(nxt, memo, tracker, depth - len(seq) - 1)
                if inner is not None:
                    found = Certificate(seq + (v,), inner.sink, inner.without_sink, inner.without_in)
                    break
                frontier.append((seq + (v,), nxt))
    memo[key] = found
    return found


# full rank ---------------------------------------------------------------------

def elementary_divisors(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix.

    >>> elementary_divisors([[2, 0], [0, 3]])
    [1, 6]
    """
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import invariant_factors

    if not rows or not rows[0]:
        return []
    dm = DomainMatrix([[ZZ(x) for x in r] for r in rows], (len(rows), len(rows[0])), ZZ)
    return [int(abs(x)) for x in invariant_factors(dm) if x != 0]


def really_full_rank(q: IceQuiver) -> bool:
    """True iff the rows of the exchange matrix span the integer lattice on mutable vertices.

    >>> really_full_rank(from_arrows([1], [], []))
    False
    >>> really_full_rank(from_arrows([1, 2], [1], [(1, 2, 1)]))
    True
    """
    mut = q.mutable
    if not mut:
        return True
    divisors = elementary_divisors(q.exchange_matrix())
    return len(divisors) == len(mut) and all(x == 1 for x in divisors)


# export ---------------------------------------------------------------------------

def to_json(q: IceQuiver) -> dict:
    return {"schema": 1, "vertices": list(q.vertices), "frozen": sorted(q.frozen),
            "arrows": [list(a) for a in q.arrows()]}


def from_json(data: dict | str) -> IceQuiver:
    """Inverse of :func:`to_json`.

    >>> q = from_arrows([1, 2, 3], [3], [(1, 2, 2), (3, 1, 1)])
    >>> from_json(json.dumps(to_json(q))) == q
    True
    """
    if isinstance(data, str):
        data = json.loads(data)
    return from_arrows(data["vertices"], data["frozen"], [tuple(a) for a in data["arrows"]])


def to_dot(q: IceQuiver, name: str = "quiver") -> str:
    """Graphviz text; frozen vertices are boxes and multiplicities are edge labels.

    >>> print(to_dot(from_arrows([1, 2], [], [(1, 2, 1)])))
    digraph quiver {
      1 [shape=circle];
      2 [shape=circle];
      1 -> 2;
    }
    """
    lines = [f"digraph {name} {{"]
    for v in q.vertices:
        lines.append(f"  {v} [shape={'box' if v in q.frozen else 'circle'}];")
    for x, y, k in q.arrows():
        lines.append(f"  {x} -> {y};" if k == 1 else f'  {x} -> {y} [label="{k}"];')
    lines.append("}")
    return "\n".join(lines)


def from_dot(text: str) -> IceQuiver:
    """Parse the output of :func:`to_dot`."""
    import re

    vertices, frozen, arrows = [], [], []
    for line in text.splitlines():
        m = re.fullmatch(r"\s*(-?\d+) \[shape=(box|circle)\];", line)
        if m:
            vertices.append(int(m.group(1)))
            if m.group(2) == "box":
                frozen.append(int(m.group(1)))
            continue
        m = re.fullmatch(r'\s*(-?\d+) -> (-?\d+)(?: \[label="(\d+)"\])?;', line)
        if m:
            arrows.append((int(m.group(1)), int(m.group(2)), int(m.group(3) or 1)))
    return from_arrows(vertices, frozen, arrows)


# plane face quiver ------------------------------------------------------------------

def face_quiver(t, labels: dict[int, int]) -> IceQuiver:
    """Quiver on labelled faces of a trimmed all-red graph.

    Each edge joining a white and a black vertex gives an arrow from the face
    on the left of white-to-black to the face on its right; opposite arrows
    cancel.  Only faces present in ``labels`` become vertices.
    """
    from .graph3d import plane_faces

    faces = plane_faces(t)
    side = {}
    for k, f in enumerate(faces):
        for eid, a, b, _ in f.boundary:
            side[(eid, a, b)] = k
    arrows = []
    for eid, (a, b) in t.edges.items():
        ca, cb = t.vertex_color(a), t.vertex_color(b)
        if ca is None or cb is None or ca == cb:
            continue
        white, black = (a, b) if ca == "white" else (b, a)
        left, right = side[(eid, white, black)], side[(eid, black, white)]
        if left in labels and right in labels:
            arrows.append((labels[left], labels[right], 1))
    return from_arrows(labels.values(), [], arrows)
