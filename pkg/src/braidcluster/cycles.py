"""
Monotone multicurves propagated right to left, the relative cycles they
sweep out, and the intersection form on the conjugate surface.

A curve is stored by its endpoint strands and the strands strictly inside its
bounding box that lie below it.  Every solid crossing may cut curves, every
hollow crossing moves dots while keeping each strand on its side.

>>> from braidcluster.perm import simple
>>> from braidcluster.braid import DoubleBraidWord
>>> from braidcluster.graph3d import build_graph
>>> g = build_graph(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))
>>> cyc = cycle_of(g, 4)
>>> cyc.mutable, cyc.bridge_coefficients()
(True, {4: 1, 1: -1, 2: -1})
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Iterable

from .braid import compute_aps
from .graph3d import EdgeId, PlabicGraph3D, Vertex
from .perm import Permutation

Pos = dict[int, tuple[int, int]]


@dataclass(frozen=True)
class Curve:
    """A monotone curve from strand ``start`` to strand ``end``."""

    start: int
    end: int
    below: frozenset[int]
    ident: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MonotoneMulticurve:
    time: int
    curves: tuple[Curve, ...]


def inside_box(curve: Curve, pos: Pos) -> list[int]:
    (xp, yp), (xq, yq) = pos[curve.start], pos[curve.end]
    return [s for s, (x, y) in pos.items() if xp < x < xq and yp < y < yq]


def status(curve: Curve, pos: Pos, strand: int) -> str | None:
    """Side of the curve a dot lies on: 'above', 'below', 'on', or None if undetermined.

    Dots outside the box are above when north or west of it and below when
    south or east of it; dots south-west or north-east of the box are undetermined.
    """
    if strand in (curve.start, curve.end):
        return "on"
    (xp, yp), (xq, yq) = pos[curve.start], pos[curve.end]
    x, y = pos[strand]
    in_cols, in_rows = xp < x < xq, yp < y < yq
    if in_cols and in_rows:
        return "below" if strand in curve.below else "above"
    if (in_rows and x < xp) or (in_cols and y > yq) or (x < xp and y > yq):
        return "above"
    if (in_rows and x > xq) or (in_cols and y < yp) or (x > xq and y < yp):
        return "below"
    return None


def is_valid(curve: Curve, pos: Pos) -> bool:
    (xp, yp), (xq, yq) = pos[curve.start], pos[curve.end]
    if not (xp < xq and yp < yq):
        return False
    box = inside_box(curve, pos)
    if not curve.below <= set(box):
        return False
    for b in curve.below:
        xb, yb = pos[b]
        for e in box:
            xe, ye = pos[e]
            if xe >= xb and ye <= yb and e not in curve.below:
                return False
    return True


def sigma_swap_curve(curve: Curve, dots: set[tuple[int, int]], pos: Pos) -> set[tuple[int, int]]:
    """Replace the dots on the boundary of the skew shape around the curve by its outer corners.

    >>> pos = {1: (1, 1), 2: (2, 2)}
    >>> sorted(sigma_swap_curve(Curve(1, 2, frozenset()), {(1, 1), (2, 2)}, pos))
    [(1, 2), (2, 1)]
    """
    p, q = pos[curve.start], pos[curve.end]
    box = inside_box(curve, pos)
    below = [pos[s] for s in box if s in curve.below]
    above = [pos[s] for s in box if s not in curve.below]
    low = sorted(b for b in below if not any(o != b and o[0] <= b[0] and o[1] >= b[1] for o in below))
    high = sorted(a for a in above if not any(o != a and o[0] >= a[0] and o[1] <= a[1] for o in above))
    lower_chain = [p, *low, q]
    upper_chain = [p, *high, q]
    corners = {(lower_chain[k + 1][0], lower_chain[k][1]) for k in range(len(lower_chain) - 1)}
    corners |= {(upper_chain[k][0], upper_chain[k + 1][1]) for k in range(len(upper_chain) - 1)}
    removed = set(lower_chain) | set(upper_chain)
    if not removed <= dots:
        raise ValueError("malformed curve: boundary dots are missing from the diagram")
    return (dots - removed) | corners


def dots_to_perm(dots: Iterable[tuple[int, int]], n: int) -> Permutation:
    images = [0] * n
    for x, y in dots:
        images[y - 1] = x
    return Permutation(tuple(images))


def sigma_swap(multicurve: MonotoneMulticurve, pos: Pos, n: int) -> Permutation:
    """Apply the swap of every curve, rightmost curve first."""
    dots = set(pos.values())
    for curve in reversed(multicurve.curves):
        dots = sigma_swap_curve(curve, dots, pos)
    return dots_to_perm(dots, n)


@dataclass
class CurveLife:
    """Lifetime of one curve: born at a bridge time, dies at a cut or at t = 0."""

    curve: Curve
    born: float
    died: float = 0.0
    cut_by: int | None = None
    pieces: tuple[int | None, int | None] = (None, None)


@dataclass
class Propagation:
    d: int
    slices: dict[int, MonotoneMulticurve]
    lives: dict[int, CurveLife]
    root: int


def _cut(curve: Curve, pos: Pos, bridge) -> bool:
    (xp, yp), (xq, yq) = pos[curve.start], pos[curve.end]
    lo, hi = bridge.start, bridge.end
    if bridge.color == "red":
        j = pos[lo][1]
        if not (yp <= j and j + 1 <= yq):
            return False
        return status(curve, pos, lo) in ("on", "below") and status(curve, pos, hi) in ("on", "above")
    i = pos[lo][0]
    if not (xp <= i and i + 1 <= xq):
        return False
    return status(curve, pos, lo) in ("on", "above") and status(curve, pos, hi) in ("on", "below")


def propagate(g: PlabicGraph3D, d: int) -> Propagation:
    """Multicurves gamma^(d, r) for r = d-1 down to 0."""
    if d not in g.bridges:
        raise ValueError(f"crossing {d} is not solid")
    ids = count(1)
    b = g.bridges[d]
    root = Curve(b.start, b.end, frozenset(), next(ids))
    lives = {root.ident: CurveLife(root, b.time)}
    current = [root]
    slices = {d - 1: MonotoneMulticurve(d - 1, tuple(current))}
    for r in range(d - 1, 0, -1):
        pos, new_pos = g.positions[r], g.positions[r - 1]
        nxt: list[Curve] = []
        if r in g.bridges:
            br = g.bridges[r]
            for cv in current:
                if not _cut(cv, pos, br):
                    nxt.append(cv)
                    continue
                life = lives[cv.ident]
                life.died, life.cut_by = br.time, r
                pieces: list[int | None] = []
                for a, z in ((cv.start, br.start), (br.end, cv.end)):
                    if a == z:
                        pieces.append(None)
                        continue
                    piece = Curve(a, z, frozenset(), next(ids))
                    piece = Curve(a, z, frozenset(s for s in inside_box(piece, pos) if s in cv.below), piece.ident)
                    lives[piece.ident] = CurveLife(piece, br.time)
                    nxt.append(piece)
                    pieces.append(piece.ident)
                life.pieces = (pieces[0], pieces[1])
        else:
            for cv in current:
                probe = Curve(cv.start, cv.end, frozenset())
                below = set()
                for s in inside_box(probe, new_pos):
                    side = status(cv, pos, s)
                    if side is None:
                        raise AssertionError(f"strand {s} enters the box of a curve from an undetermined side")
                    if side == "below":
                        below.add(s)
                moved = Curve(cv.start, cv.end, frozenset(below), cv.ident)
                lives[cv.ident].curve = moved
                nxt.append(moved)
        for cv in nxt:
            if not is_valid(cv, new_pos):
                raise AssertionError(f"propagation produced an invalid curve at time {r - 1}")
        current = nxt
        slices[r - 1] = MonotoneMulticurve(r - 1, tuple(current))
    for cv in current:
        lives[cv.ident].died = 0.0
    return Propagation(d, slices, lives, root.ident)


def check_against_aps(g: PlabicGraph3D, prop: Propagation) -> bool:
    """The swap of every multicurve reproduces the almost positive sequence."""
    aps = compute_aps(g.u, g.beta, prop.d, g.record)
    return all(sigma_swap(prop.slices[c], g.positions[c], g.n) == aps.seq[c] for c in prop.slices)


def disk_membership(g: PlabicGraph3D, prop: Propagation, c: int, h: int) -> int:
    """1 if the face (c, |h| + 1/2) of the red (h > 0) or blue (h < 0) projection lies in the disk."""
    if c not in prop.slices:
        return 0
    pos = g.positions[c]
    for cv in prop.slices[c].curves:
        (xp, yp), (xq, yq) = pos[cv.start], pos[cv.end]
        if h > 0 and yp <= h < yq:
            return 1
        if h < 0 and xp <= -h < xq:
            return 1
    return 0


# relative cycles ----------------------------------------------------------------

Step = tuple[EdgeId, Vertex, Vertex]


@dataclass(frozen=True)
class RelativeCycle:
    """Boundary of the swept disk of b_d as oriented edge walks.

    A mutable cycle is one closed walk; a frozen one is a list of walks between
    marked points.  The first walk starts with b_d traversed start to end.
    """

    d: int
    walks: tuple[tuple[Step, ...], ...]
    closed: bool

    @property
    def mutable(self) -> bool:
        return self.closed

    def bridge_coefficients(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for walk in self.walks:
            for eid, a, b in walk:
                if eid[0] == "b":
                    out[eid[1]] = out.get(eid[1], 0) + (1 if a[2] == 1 else -1)
        return {c: k for c, k in out.items() if k}

    def edge_chain(self) -> dict[EdgeId, int]:
        """Signed edge coefficients, + when an edge is walked left to right or start to end."""
        out: dict[EdgeId, int] = {}
        for walk in self.walks:
            for eid, a, b in walk:
                forward = (a[2] == 1) if eid[0] == "b" else _is_forward(a, b)
                out[eid] = out.get(eid, 0) + (1 if forward else -1)
        return {e: k for e, k in out.items() if k}

    def to_json(self) -> dict:
        return {"d": self.d, "closed": self.closed,
                "walks": [[[list(e), list(a), list(b)] for e, a, b in w] for w in self.walks]}


def _is_forward(a: Vertex, b: Vertex) -> bool:
    def t(v):
        if v[0] == "m":
            return 0.0
        if v[0] == "e":
            return float("inf")
        return v[1] - 0.5
    return t(a) < t(b)


def cycle_of(g: PlabicGraph3D, d: int, prop: Propagation | None = None) -> RelativeCycle:
    """Trace the boundary of the disk swept by the curves of b_d."""
    prop = prop or propagate(g, d)
    lives = prop.lives
    BREAK = ("break",)

    def walk(ident: int) -> list:
        life = lives[ident]
        cv = life.curve
        out: list = [("run", cv.end, life.born, life.died)]
        if life.cut_by is None:
            out.append(BREAK)
        else:
            left, right = life.pieces
            if right is not None:
                out += walk(right)
            out.append(("bridge", life.cut_by, 2, 1))
            if left is not None:
                out += walk(left)
        out.append(("run", cv.start, life.died, life.born))
        return out

    items = [("bridge", d, 1, 2)] + walk(prop.root)
    pieces: list[list] = [[]]
    for it in items:
        if it == BREAK:
            pieces.append([])
        else:
            pieces[-1].append(it)
    closed = len(pieces) == 1
    if not closed:
        pieces = [pieces[-1] + pieces[0]] + pieces[1:-1]
    walks = tuple(tuple(_to_steps(g, _merge_runs(p))) for p in pieces)
    if closed:
        # rotate so the walk starts with b_d
        w = walks[0]
        k = next(i for i, (e, a, _) in enumerate(w) if e == ("b", d) and a[2] == 1)
        walks = (w[k:] + w[:k],)
    return RelativeCycle(d, walks, closed)


def _merge_runs(items: list) -> list:
    out: list = []
    for it in items:
        if it[0] == "run" and it[2] == it[3]:
            continue
        if it[0] == "run" and out and out[-1][0] == "run" and out[-1][1] == it[1] and out[-1][3] == it[2]:
            prev = out.pop()
            if prev[2] != it[3]:
                out.append(("run", it[1], prev[2], it[3]))
            continue
        out.append(it)
    return out


def _to_steps(g: PlabicGraph3D, items: list) -> list[Step]:
    steps: list[Step] = []
    for it in items:
        if it[0] == "bridge":
            _, c, a, b = it
            steps.append((("b", c), ("b", c, a), ("b", c, b)))
        else:
            _, s, t1, t2 = it
            steps.extend(g.strand_run(s, t1, t2))
    for (e1, a1, b1), (e2, a2, b2) in zip(steps, steps[1:]):
        if b1 != a2:
            raise AssertionError("relative cycle walk is not connected")
    return steps


def all_cycles(g: PlabicGraph3D) -> dict[int, RelativeCycle]:
    return {d: cycle_of(g, d) for d in sorted(g.bridges)}


# intersection form --------------------------------------------------------------

def _passes(cycle: RelativeCycle) -> list[tuple[Vertex, EdgeId, EdgeId]]:
    """(vertex, incoming edge, outgoing edge) for every interior visit of a walk."""
    out = []
    for walk in cycle.walks:
        pairs = list(zip(walk, walk[1:]))
        if cycle.closed:
            pairs.append((walk[-1], walk[0]))
        for (e1, _, v), (e2, _, _) in pairs:
            out.append((v, e1, e2))
    return out


def _side(order: tuple[EdgeId, ...], a: EdgeId, b: EdgeId, x: EdgeId, x_is_in: bool) -> int:
    """1 if the pushed-off copy near half-edge x lies left of the path a -> b, else 0."""
    if x == a or x == b:
        path_in = x == a
        return 0 if path_in == x_is_in else 1
    k = len(order)
    ib = order.index(b)
    # half-edges met going counterclockwise from b before reaching a are on the left
    j = (ib + 1) % k
    while order[j] != a:
        if order[j] == x:
            return 1
        j = (j + 1) % k
    return 0


def local_contributions(g: PlabicGraph3D, c1: RelativeCycle, c2: RelativeCycle) -> list[tuple[Vertex, int]]:
    """Per-vertex signed crossings of c1 with c2 pushed off to its right."""
    ribbon = g.ribbon
    out = []
    p1 = _passes(c1)
    by_vertex: dict[Vertex, list[tuple[EdgeId, EdgeId]]] = {}
    for v, a, b in _passes(c2):
        by_vertex.setdefault(v, []).append((a, b))
    for v, a, b in p1:
        for a2, b2 in by_vertex.get(v, ()):
            order = ribbon[v]
            val = _side(order, a, b, b2, False) - _side(order, a, b, a2, True)
            if val:
                out.append((v, val))
    return out


def shared_paths(c1: RelativeCycle, c2: RelativeCycle) -> list[list[Vertex]]:
    """Maximal paths of vertices visited by both cycles, joined along shared edges."""
    v1 = {v for v, _, _ in _passes(c1)}
    v2 = {v for v, _, _ in _passes(c2)}
    common = v1 & v2
    e1 = {frozenset((a, b)) for w in c1.walks for _, a, b in w}
    e2 = {frozenset((a, b)) for w in c2.walks for _, a, b in w}
    adj: dict[Vertex, set[Vertex]] = {v: set() for v in common}
    for e in e1 & e2:
        a, b = tuple(e)
        if a in common and b in common:
            adj[a].add(b)
            adj[b].add(a)
    seen, paths = set(), []
    for v in common:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        paths.append(comp)
    return paths


INTERSECTION_SIGN = -1


def intersection_number(g: PlabicGraph3D, c1: RelativeCycle, c2: RelativeCycle) -> int:
    """Algebraic intersection <c1, c2>; c2 must be a closed (mutable) cycle.

    Shared paths of the two cycles are resolved by pushing c2 off itself
    consistently to one side on the surface; each maximal shared path then
    contributes -1, 0 or 1 according to how c2 enters and leaves c1.
    """
    if not c2.mutable:
        raise ValueError("the second cycle must be mutable")
    contrib = dict()
    for v, val in local_contributions(g, c1, c2):
        contrib[v] = contrib.get(v, 0) + val
    total = 0
    for path in shared_paths(c1, c2):
        total += sum(contrib.get(v, 0) for v in path)
    return INTERSECTION_SIGN * total


def bridge_pairing_matrix(cycles: dict[int, RelativeCycle]) -> list[list[int]]:
    """Rows: cycles C_c; columns: dual bridges b*_d; both ordered by crossing."""
    keys = sorted(cycles)
    coeffs = {c: cycles[c].bridge_coefficients() for c in keys}
    return [[coeffs[c].get(d, 0) for d in keys] for c in keys]


def intersection_matrix(g: PlabicGraph3D, cycles: dict[int, RelativeCycle]) -> dict[tuple[int, int], int]:
    """<C_c, C_d> for all c and mutable d."""
    out = {}
    for d, cd in cycles.items():
        if not cd.mutable:
            continue
        for c, cc in cycles.items():
            out[(c, d)] = intersection_number(g, cc, cd)
    return out


@dataclass(frozen=True)
class CycleClasses:
    """Homology classes as integer combinations of the original cycles."""

    keys: tuple[int, ...]
    mutable: frozenset[int]
    combos: dict[int, dict[int, int]]
    form: dict[tuple[int, int], int]

    def pairing(self, a: int, b: int) -> int:
        """<class a, class b> by bilinearity; class b must be mutable."""
        total = 0
        for x, cx in self.combos[a].items():
            for y, cy in self.combos[b].items():
                total += cx * cy * self.form[(x, y)]
        return total

    def bridge_vector(self, cycles: dict[int, RelativeCycle], a: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for x, cx in self.combos[a].items():
            for r, k in cycles[x].bridge_coefficients().items():
                out[r] = out.get(r, 0) + cx * k
        return {r: k for r, k in out.items() if k}


def classes_of(g: PlabicGraph3D, cycles: dict[int, RelativeCycle]) -> CycleClasses:
    keys = tuple(sorted(cycles))
    mut = frozenset(d for d in keys if cycles[d].mutable)
    return CycleClasses(keys, mut, {k: {k: 1} for k in keys}, intersection_matrix(g, cycles))


def mutate_cycles(classes: CycleClasses, d: int) -> CycleClasses:
    """C_c += max(<C_c, C_d>, 0) C_d for c != d, and C_d -> -C_d."""
    if d not in classes.mutable:
        raise ValueError(f"cannot mutate at frozen vertex {d}")
    new = {}
    for c in classes.keys:
        if c == d:
            new[c] = {x: -k for x, k in classes.combos[d].items()}
            continue
        k = max(classes.pairing(c, d), 0)
        combo = dict(classes.combos[c])
        for x, cx in classes.combos[d].items():
            combo[x] = combo.get(x, 0) + k * cx
        new[c] = {x: v for x, v in combo.items() if v}
    return CycleClasses(classes.keys, classes.mutable, new, classes.form)


# plane specialization -------------------------------------------------------------

def face_labels(g: PlabicGraph3D, cycles: dict[int, RelativeCycle] | None = None) -> dict[int, int]:
    """Bounded face index -> the mutable cycle walking its boundary counterclockwise.

    Faces are those of :func:`plane_faces` on the trimmed graph; a bounded face
    with no matching cycle is left out.
    """
    from .graph3d import plane_faces, trim

    cycles = cycles or all_cycles(g)
    chains = {d: c.edge_chain() for d, c in cycles.items() if c.mutable}
    out = {}
    for k, f in enumerate(plane_faces(trim(g))):
        if f.bounded:
            hit = [d for d, ch in chains.items() if ch == f.edge_chain()]
            if len(hit) == 1:
                out[k] = hit[0]
    return out


@dataclass(frozen=True)
class PlaneReport:
    """Outcome of the plane checks for an all-red graph."""

    planar: bool
    bounded_faces: int
    mutable_cycles: int
    labelled_faces: int
    quiver_matches: bool

    @property
    def bijective(self) -> bool:
        return self.bounded_faces == self.mutable_cycles == self.labelled_faces

    @property
    def passed(self) -> bool:
        return self.planar and self.bijective and self.quiver_matches

    def to_json(self) -> dict:
        return {"planar": self.planar, "bounded_faces": self.bounded_faces,
                "mutable_cycles": self.mutable_cycles, "bijective": self.bijective,
                "quiver_matches": self.quiver_matches, "passed": self.passed}


def plane_check(g: PlabicGraph3D) -> PlaneReport:
    """Planarity, faces versus mutable cycles, and the face quiver.

    >>> from braidcluster.braid import le_diagram_to_pair, parse_le_diagram
    >>> from braidcluster.graph3d import build_graph
    >>> plane_check(build_graph(*le_diagram_to_pair(parse_le_diagram("+++/+++", 5)))).to_json()["passed"]
    True
    """
    from .graph3d import is_plane_embedding, plane_faces, trim
    from .quiver import face_quiver, quiver_from_cycles

    t = trim(g)
    cycles = all_cycles(g)
    labels = face_labels(g, cycles)
    mutable = [d for d, c in cycles.items() if c.mutable]
    bounded = sum(f.bounded for f in plane_faces(t))
    fq = face_quiver(t, labels)
    q = quiver_from_cycles(g)
    matches = all(q.b(x, y) == fq.b(x, y) for x in fq.vertices for y in fq.vertices)
    return PlaneReport(is_plane_embedding(t), bounded, len(mutable), len(set(labels.values())),
                       matches and set(fq.vertices) == set(mutable))
