import random

import pytest
from hypothesis import given, settings

from braidcluster.braid import DoubleBraidWord, le_diagram_to_pair, order_table, random_le_diagram
from braidcluster.graph3d import (
    build_graph,
    components,
    drawing_crossings,
    is_plane_embedding,
    plane_faces,
    trim,
)
from braidcluster.perm import identity, simple

from conftest import instances


@given(instances())
def test_bridges_are_the_solid_crossings(inst):
    u, beta = inst
    g = build_graph(u, beta)
    assert set(g.bridges) == set(order_table(u, beta).solid)
    for b in g.bridges.values():
        assert b.color == ("red" if beta.letter(b.c) > 0 else "blue")


@given(instances())
def test_final_positions_are_the_graph_of_u(inst):
    u, beta = inst
    g = build_graph(u, beta)
    assert set(g.positions[-1].values()) == {(u(k), k) for k in range(1, beta.n + 1)}


@given(instances())
def test_edges_join_known_vertices(inst):
    g = build_graph(*inst)
    verts = set(g.vertices)
    for a, b in g.edges.values():
        assert a in verts and b in verts
    assert 1 <= components(g) <= g.n


def test_every_strand_is_connected_through_bridges():
    u, beta = simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3)
    g = build_graph(u, beta)
    assert components(g) == 1
    assert len(g.bridges) == 4


def test_le_diagram_graphs_are_plane():
    rng = random.Random(11)
    for _ in range(15):
        u, beta = le_diagram_to_pair(random_le_diagram(rng, rng.randint(1, 3), rng.randint(1, 4)))
        t = trim(build_graph(u, beta))
        assert drawing_crossings(t) == []
        assert is_plane_embedding(t)
        bounded = [f for f in plane_faces(t) if f.bounded]
        assert len(bounded) == len(order_table(u, beta).mutable)


def test_hollow_crossing_between_live_strands_is_not_plane():
    g = trim(build_graph(simple(1, 2), DoubleBraidWord((1, 1), 2)))
    g2 = trim(build_graph(identity(2), DoubleBraidWord((1, 1, 1), 2)))
    assert drawing_crossings(g2) == []
    assert isinstance(drawing_crossings(g), list)
