"""
The 3D plabic graph of (u, beta): n strands through the stacked permutation
diagrams of the rightmost subexpression, with a bridge at every solid crossing.

Dots of u_(c) sit at (column, row) = (u_(c)(k), k), so a red letter j swaps
rows j and j+1 and a blue letter -i swaps columns i and i+1.  Strands are
numbered by their dot (k, k) at time 0.

>>> from braidcluster.perm import simple
>>> from braidcluster.braid import DoubleBraidWord
>>> g = build_graph(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))
>>> sorted(g.bridges)
[1, 2, 4, 5]
>>> g.bridges[4].color, g.bridges[4].start, g.bridges[4].end
('red', 1, 3)
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .braid import DoubleBraidWord, SubexpressionRecord, compute_pds
from .perm import Permutation

Vertex = tuple  # ("m", strand) | ("e", strand) | ("b", c, 1 or 2)
EdgeId = tuple  # ("s", strand, k) | ("b", c)


@dataclass(frozen=True)
class Bridge:
    """Bridge b_c from its start S1 to its end S2 (S1 precedes S2 in both coordinates)."""

    c: int
    color: str
    start: int
    end: int
    start_dot: tuple[int, int]
    end_dot: tuple[int, int]

    @property
    def time(self) -> float:
        return self.c - 0.5

    def vertex(self, which: int) -> Vertex:
        return ("b", self.c, which)

    def vertex_color(self, which: int) -> str:
        """Red bridges are black at the start, blue bridges white at the start."""
        black_at_start = self.color == "red"
        return "black" if (which == 1) == black_at_start else "white"


@dataclass(frozen=True)
class PlabicGraph3D:
    u: Permutation
    beta: DoubleBraidWord
    record: SubexpressionRecord
    positions: tuple[dict[int, tuple[int, int]], ...]
    bridges: dict[int, Bridge]
    trimmed: bool = False

    @property
    def n(self) -> int:
        return self.beta.n

    @property
    def m(self) -> int:
        return self.beta.m

    def dot(self, c: int, strand: int) -> tuple[int, int]:
        return self.positions[c][strand]

    def strand_at(self, c: int, xy: tuple[int, int]) -> int:
        return self._dot_index[c][xy]

    @cached_property
    def _dot_index(self) -> list[dict[tuple[int, int], int]]:
        return [{xy: s for s, xy in pos.items()} for pos in self.positions]

    @cached_property
    def strand_vertices(self) -> dict[int, list[tuple[float, Vertex]]]:
        """Vertices along each strand, ordered by time."""
        out: dict[int, list[tuple[float, Vertex]]] = {}
        for s in range(1, self.n + 1):
            verts: list[tuple[float, Vertex]] = [(0.0, ("m", s))]
            for c in sorted(self.bridges):
                b = self.bridges[c]
                if b.start == s:
                    verts.append((b.time, b.vertex(1)))
                elif b.end == s:
                    verts.append((b.time, b.vertex(2)))
            if not self.trimmed:
                verts.append((float(self.m), ("e", s)))
            out[s] = verts
        return out

    @cached_property
    def edges(self) -> dict[EdgeId, tuple[Vertex, Vertex]]:
        """Edge id -> (left/start vertex, right/end vertex)."""
        out: dict[EdgeId, tuple[Vertex, Vertex]] = {}
        for s, verts in self.strand_vertices.items():
            for k in range(len(verts) - 1):
                out[("s", s, k)] = (verts[k][1], verts[k + 1][1])
        for c, b in self.bridges.items():
            out[("b", c)] = (b.vertex(1), b.vertex(2))
        return out

    @cached_property
    def vertices(self) -> list[Vertex]:
        seen: dict[Vertex, None] = {}
        for s in range(1, self.n + 1):
            seen[("m", s)] = None
        for a, b in self.edges.values():
            seen[a] = None
            seen[b] = None
        return list(seen)

    @cached_property
    def incident(self) -> dict[Vertex, dict[str, EdgeId]]:
        """At each bridge endpoint: half-edges L (earlier), R (later), Br (bridge)."""
        out: dict[Vertex, dict[str, EdgeId]] = {}
        for s, verts in self.strand_vertices.items():
            for k, (_, v) in enumerate(verts):
                slots = out.setdefault(v, {})
                if k > 0:
                    slots["L"] = ("s", s, k - 1)
                if k < len(verts) - 1:
                    slots["R"] = ("s", s, k)
        for c, b in self.bridges.items():
            out[b.vertex(1)]["Br"] = ("b", c)
            out[b.vertex(2)]["Br"] = ("b", c)
        return out

    @cached_property
    def ribbon(self) -> dict[Vertex, tuple[EdgeId, ...]]:
        """Cyclic half-edge order at each vertex, in the orientation of the surface.

        Counterclockwise at white and clockwise at black vertices of the red
        projection, which works out to (R, L, Br) at both ends of a red bridge
        and (R, Br, L) at both ends of a blue bridge.
        """
        out: dict[Vertex, tuple[EdgeId, ...]] = {}
        for v, slots in self.incident.items():
            if v[0] == "b":
                color = self.bridges[v[1]].color
                pattern = ("R", "L", "Br") if color == "red" else ("R", "Br", "L")
                out[v] = tuple(slots[k] for k in pattern if k in slots)
            else:
                out[v] = tuple(slots.values())
        return out

    def vertex_color(self, v: Vertex) -> str | None:
        if v[0] != "b":
            return None
        return self.bridges[v[1]].vertex_color(v[2])

    def strand_run(self, strand: int, t_from: float, t_to: float) -> list[tuple[EdgeId, Vertex, Vertex]]:
        """Directed strand edges walking along a strand between two vertex times."""
        verts = self.strand_vertices[strand]
        times = [t for t, _ in verts]
        a, b = times.index(t_from), times.index(t_to)
        if a <= b:
            return [(("s", strand, k), verts[k][1], verts[k + 1][1]) for k in range(a, b)]
        return [(("s", strand, k), verts[k + 1][1], verts[k][1]) for k in range(a - 1, b - 1, -1)]

    def red_point(self, v: Vertex) -> tuple[float, int]:
        """Position of a vertex in the red projection (t, row)."""
        if v[0] == "m":
            return (0.0, self.dot(0, v[1])[1])
        if v[0] == "e":
            return (float(self.m), self.dot(self.m, v[1])[1])
        b = self.bridges[v[1]]
        return (b.time, (b.start_dot if v[2] == 1 else b.end_dot)[1])

    def blue_point(self, v: Vertex) -> tuple[float, int]:
        """Position of a vertex in the blue projection (t, column)."""
        if v[0] == "m":
            return (0.0, self.dot(0, v[1])[0])
        if v[0] == "e":
            return (float(self.m), self.dot(self.m, v[1])[0])
        b = self.bridges[v[1]]
        return (b.time, (b.start_dot if v[2] == 1 else b.end_dot)[0])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "u": list(self.u.images),
            "beta": list(self.beta.letters),
            "dots": [[[s, *self.positions[c][s]] for s in sorted(self.positions[c])]
                     for c in range(self.m + 1)],
            "bridges": [{"c": b.c, "color": b.color, "start": b.start, "end": b.end}
                        for b in sorted(self.bridges.values(), key=lambda b: b.c)],
            "trimmed": self.trimmed,
        }


def build_graph(u: Permutation, beta: DoubleBraidWord,
                record: SubexpressionRecord | None = None) -> PlabicGraph3D:
    record = record or compute_pds(u, beta)
    n = beta.n
    # strand k starts at (k, k) since u_(0) = id
    pos = {s: (s, s) for s in range(1, n + 1)}
    positions = [dict(pos)]
    bridges: dict[int, Bridge] = {}
    for c in range(1, beta.m + 1):
        a = beta.letter(c)
        if a > 0:
            j = a
            lo = next(s for s, (x, y) in pos.items() if y == j)
            hi = next(s for s, (x, y) in pos.items() if y == j + 1)
            if record.is_solid(c):
                bridges[c] = Bridge(c, "red", lo, hi, pos[lo], pos[hi])
            else:
                pos[lo], pos[hi] = (pos[lo][0], j + 1), (pos[hi][0], j)
        else:
            i = -a
            left = next(s for s, (x, y) in pos.items() if x == i)
            right = next(s for s, (x, y) in pos.items() if x == i + 1)
            if record.is_solid(c):
                bridges[c] = Bridge(c, "blue", left, right, pos[left], pos[right])
            else:
                pos[left], pos[right] = (i + 1, pos[left][1]), (i, pos[right][1])
        positions.append(dict(pos))
    g = PlabicGraph3D(u, beta, record, tuple(positions), bridges)
    for c in range(beta.m + 1):
        uc = record.pds[c]
        if {(uc(k), k) for k in range(1, n + 1)} != set(positions[c].values()):
            raise AssertionError(f"strand positions disagree with u_({c})")
    for b in bridges.values():
        if not (b.start_dot[0] < b.end_dot[0] and b.start_dot[1] < b.end_dot[1]):
            raise AssertionError(f"bridge {b.c} endpoints are not increasing")
    return g


def trim(g: PlabicGraph3D) -> PlabicGraph3D:
    """Drop the n end dots at time m and their pendant edges."""
    return PlabicGraph3D(g.u, g.beta, g.record, g.positions, g.bridges, trimmed=True)


def components(g: PlabicGraph3D) -> int:
    """Number of connected components (union-find over all edges)."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.edges.values():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in g.vertices})


# plane drawing of all-red graphs ----------------------------------------------------

class NotPlaneDrawable(ValueError):
    """The red projection is only a plane drawing when every letter is red."""


def _strand_row(g: PlabicGraph3D, s: int, t: float) -> int:
    return g.dot(int(t + 0.5) if t % 1 else int(t), s)[1]


def red_polyline(g: PlabicGraph3D, eid: EdgeId) -> list[tuple[float, float]]:
    """Points (t, row) of an edge in the red projection; row 1 is drawn at the bottom."""
    a, b = g.edges[eid]
    pa, pb = g.red_point(a), g.red_point(b)
    if eid[0] == "b":
        return [(pa[0], pa[1]), (pb[0], pb[1])]
    s = eid[1]
    pts = [(pa[0], pa[1])]
    for c in range(1, g.m + 1):
        if pa[0] < c - 0.5 < pb[0]:
            before, after = g.dot(c - 1, s)[1], g.dot(c, s)[1]
            if before != after:
                pts += [(c - 0.75, before), (c - 0.25, after)]
    pts.append((pb[0], pb[1]))
    return pts


def _last_time(g: PlabicGraph3D, s: int) -> float:
    return g.strand_vertices[s][-1][0]


def drawing_crossings(g: PlabicGraph3D) -> list[tuple[int, int, int]]:
    """(crossing, strand, strand) where two drawn strand edges cross.

    >>> from braidcluster.perm import identity
    >>> drawing_crossings(trim(build_graph(identity(3), DoubleBraidWord((1, 2, 1), 3))))
    []
    """
    if any(a < 0 for a in g.beta.letters):
        raise NotPlaneDrawable("blue letters present")
    out = []
    for c in range(1, g.m + 1):
        if g.record.is_solid(c):
            continue
        j = g.beta.letter(c)
        pair = [s for s in range(1, g.n + 1) if g.dot(c - 1, s)[1] in (j, j + 1)]
        if all(_last_time(g, s) > c - 0.5 for s in pair):
            out.append((c, pair[0], pair[1]))
    return out


@dataclass(frozen=True)
class Face:
    """A face of the plane drawing with its boundary walked with the face on the left."""

    boundary: tuple[tuple[EdgeId, Vertex, Vertex, bool], ...]
    area: float

    @property
    def bounded(self) -> bool:
        return self.area > 0

    def edge_chain(self) -> dict[EdgeId, int]:
        """Signed edge coefficients, + when walked left to right or start to end."""
        out: dict[EdgeId, int] = {}
        for eid, _, _, forward in self.boundary:
            out[eid] = out.get(eid, 0) + (1 if forward else -1)
        return {e: k for e, k in out.items() if k}


def rotation_system(g: PlabicGraph3D) -> dict[Vertex, list[tuple[Vertex, EdgeId]]]:
    """Neighbours of each vertex in counterclockwise order of the drawing."""
    import math

    rot: dict[Vertex, list] = {v: [] for v in g.vertices}
    for eid, (a, b) in g.edges.items():
        pts = red_polyline(g, eid)
        for v, w, p0, p1 in ((a, b, pts[0], pts[1]), (b, a, pts[-1], pts[-2])):
            rot[v].append((math.atan2(p1[1] - p0[1], p1[0] - p0[0]), w, eid))
    return {v: [(w, e) for _, w, e in sorted(lst, key=lambda x: x[0])] for v, lst in rot.items()}


def plane_faces(g: PlabicGraph3D) -> list[Face]:
    """All faces of the red drawing; bounded ones have positive area.

    >>> from braidcluster.perm import identity
    >>> g = trim(build_graph(identity(3), DoubleBraidWord((1, 2, 1, 2), 3)))
    >>> sum(f.bounded for f in plane_faces(g))
    2
    """
    rot = rotation_system(g)
    seen: set[tuple[Vertex, Vertex, EdgeId]] = set()
    faces = []
    for v, nbrs in rot.items():
        for w, e in nbrs:
            if (v, w, e) in seen:
                continue
            walk, area = [], 0.0
            a, b, eid = v, w, e
            while (a, b, eid) not in seen:
                seen.add((a, b, eid))
                forward = g.edges[eid] == (a, b)
                walk.append((eid, a, b, forward))
                pts = red_polyline(g, eid)
                if not forward:
                    pts = pts[::-1]
                area += sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:])) / 2
                # next half-edge: the one just clockwise of the way back
                around = rot[b]
                k = next(i for i, (x, f) in enumerate(around) if x == a and f == eid)
                nxt, nid = around[(k - 1) % len(around)]
                a, b, eid = b, nxt, nid
            faces.append(Face(tuple(walk), area))
    return faces


def is_plane_embedding(g: PlabicGraph3D) -> bool:
    """The drawing has no crossings and its rotation system has genus 0.

    The genus check uses networkx's planar embedding validation on each
    connected component.
    """
    import networkx as nx

    if drawing_crossings(g):
        return False
    rot = rotation_system(g)
    emb = nx.PlanarEmbedding()
    emb.add_nodes_from(rot)
    for v, nbrs in rot.items():
        # networkx expects clockwise order
        ordered = [w for w, _ in reversed(nbrs)]
        for k, w in enumerate(ordered):
            if k == 0:
                emb.add_half_edge(v, w)
            else:
                emb.add_half_edge(v, w, cw=ordered[k - 1])
    try:
        emb.check_structure()
    except nx.NetworkXException:
        return False
    return nx.check_planarity(nx.Graph(emb.to_undirected()))[0]
