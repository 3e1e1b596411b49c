import math

import pytest
from hypothesis import given, settings, strategies as st

from clumsy.copies import enumerate_copies
from clumsy.graph import (
    Graph,
    GraphFormatError,
    GridSpec,
    lattice_points,
    make_complete,
    make_cycle,
    make_grid_section,
    make_hypercube,
    make_monotonicity_gadget,
    make_path,
    make_turan,
    parse_graph,
    serialize_graph,
    turan_edge_count,
)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


@given(graphs())
def test_edge_index_is_dense_bijection(g):
    assert sorted(g.edge_index.values()) == list(range(g.m))
    for (u, v), i in g.edge_index.items():
        assert u < v and g.edges[i] == (u, v)
    for v in range(g.n):
        for u in g.neighbors(v):
            assert g.has_edge(u, v)
    assert sum(g.degrees()) == 2 * g.m


@pytest.mark.parametrize("n,m", [(1, 0), (6, 15), (14, 91)])
def test_complete(n, m):
    assert make_complete(n).m == m


@pytest.mark.parametrize("n,verts,edges", [(3, 8, 12), (0, 1, 0), (5, 32, 80)])
def test_hypercube_examples(n, verts, edges):
    q = make_hypercube(n)
    assert (q.n, q.m) == (verts, edges)


@pytest.mark.parametrize("n", range(11))
def test_hypercube_regular(n):
    q = make_hypercube(n)
    assert q.m == n * 2 ** max(n - 1, 0)
    assert all(d == n for d in q.degrees())
    for u, v in q.edges:
        assert (u ^ v).bit_count() == 1


def test_hypercube_cap():
    with pytest.raises(ValueError):
        make_hypercube(17)
    with pytest.raises(ValueError):
        make_hypercube(5, cap=4)


def test_turan_examples():
    g, parts = make_turan(5, 2)
    assert g.m == 6 and sorted(map(len, parts)) == [2, 3]
    assert make_turan(6, 2)[0].m == 9
    assert make_turan(6, 6)[0].edges == make_complete(6).edges
    with pytest.raises(ValueError):
        make_turan(3, 4)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_turan_is_clique_free(k):
    for n in range(k, 13):
        g, parts = make_turan(n, k)
        assert g.m == turan_edge_count(n, k)
        assert max(map(len, parts)) - min(map(len, parts)) <= 1
        if n >= k + 1:
            assert len(enumerate_copies(g, make_complete(k + 1))) == 0


def test_grid_small_sections():
    g = make_grid_section(GridSpec(4, 3))
    assert (g.n, g.m) == (9, 12)
    sq = make_grid_section(GridSpec(4, 2))
    assert (sq.n, sq.m) == (4, 4) and all(d == 2 for d in sq.degrees())
    with pytest.raises(ValueError):
        GridSpec(5, 3)


def _bounded_faces(g):
    """Faces of the straight-line embedding given by g.coords, outer face removed."""
    pos = g.coords
    rot = {}
    for v in range(g.n):
        rot[v] = sorted(g.neighbors(v), key=lambda u: math.atan2(pos[u][1] - pos[v][1], pos[u][0] - pos[v][0]))
    seen, faces = set(), []
    for u, v in g.edges:
        for a, b in ((u, v), (v, u)):
            if (a, b) in seen:
                continue
            face = []
            x, y = a, b
            while (x, y) not in seen:
                seen.add((x, y))
                face.append(x)
                r = rot[y]
                # next half-edge: turn to the neighbour just clockwise of x around y
                z = r[(r.index(x) - 1) % len(r)]
                x, y = y, z
            faces.append(face)

    def area(f):
        return sum(pos[f[i]][0] * pos[f[(i + 1) % len(f)]][1] - pos[f[(i + 1) % len(f)]][0] * pos[f[i]][1]
                   for i in range(len(f))) / 2

    return [f for f in faces if area(f) > 1e-9], area


@pytest.mark.parametrize("k,n", [(3, 4), (3, 6), (4, 5), (6, 6), (6, 8)])
def test_grid_faces_are_unit_cells(k, n):
    g = make_grid_section(GridSpec(k, n))
    faces, area = _bounded_faces(g)
    assert faces
    cell = {3: math.sqrt(3) / 4, 4: 1.0, 6: 3 * math.sqrt(3) / 2}[k]
    for f in faces:
        assert len(f) == k
        assert area(f) == pytest.approx(cell)
    for u, v in g.edges:
        (x1, y1), (x2, y2) = g.coords[u], g.coords[v]
        assert math.hypot(x1 - x2, y1 - y2) == pytest.approx(1.0)


def test_grid_anchor_edge():
    for k in (3, 4, 6):
        g = make_grid_section(GridSpec(k, 4))
        where = {tuple(round(c, 9) for c in p): i for i, p in enumerate(g.coords)}
        assert g.has_edge(where[(0.0, 0.0)], where[(1.0, 0.0)])


@pytest.mark.parametrize("k", [3, 4, 6])
def test_grid_sections_nest(k):
    big = make_grid_section(GridSpec(k, 9))
    pts_big = lattice_points(GridSpec(k, 9))
    index = {p: i for i, p in enumerate(pts_big)}
    for small_n in (3, 5, 8):
        small = make_grid_section(GridSpec(k, small_n))
        pts = lattice_points(GridSpec(k, small_n))
        ids = [index[p] for p in pts]
        sub = big.induced_subgraph(ids)
        relabel = {old: new for new, old in enumerate(ids)}
        mapped = sorted(tuple(sorted((relabel[ids[u]], relabel[ids[v]]))) for u, v in small.edges)
        assert small.n == sub.n and mapped == sorted(sub.edges)


def test_gadget_counts():
    gp, g = make_monotonicity_gadget(4)
    assert gp.m == 16 and g.m == 15
    gp3, _ = make_monotonicity_gadget(3)
    assert gp3.m == 3 + 3 * 2
    with pytest.raises(ValueError):
        make_monotonicity_gadget(2)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_gadget_every_cycle_meets_f0(k):
    gp, _ = make_monotonicity_gadget(k)
    f0 = {gp.edge_id(i, (i + 1) % k) for i in range(k)}
    table = enumerate_copies(gp, make_cycle(k))
    assert len(table) == k + 1
    for c in table.copies:
        assert f0 & set(c)


def test_paths_and_cycles():
    assert make_path(3).m == 2 and make_path(2).m == 1
    with pytest.raises(ValueError):
        make_path(1)
    assert make_cycle(5).m == 5
    with pytest.raises(ValueError):
        make_cycle(2)


def test_parse_triangle():
    g = parse_graph("p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n")
    assert g.m == 3 and g.edges == ((0, 1), (0, 2), (1, 2))


def test_parse_without_header_and_comments():
    g = parse_graph("c a triangle\ne 1 2\ne 1 3\ne 2 3\n")
    assert g.m == 3


@pytest.mark.parametrize("text,where", [
    ("p edge 3 3\ne 1 2\ne 2 1\n", "line 3"),
    ("p edge 2 1\ne 1 3\n", "line 2"),
    ("p edge x 1\n", "line 1"),
    ("p edge 3 2\ne 1 2\n", None),
    ("q 1 2\n", "line 1"),
])
def test_parse_errors(text, where):
    with pytest.raises(GraphFormatError) as err:
        parse_graph(text)
    if where:
        assert where in str(err.value)


@given(graphs())
def test_round_trip(g):
    text = serialize_graph(g)
    h = parse_graph(text)
    assert h.n == g.n and h.edges == g.edges
    assert serialize_graph(h) == text


def test_round_trip_keeps_coords():
    g = make_grid_section(GridSpec(6, 4))
    h = parse_graph(serialize_graph(g))
    assert h.edges == g.edges
    for a, b in zip(g.coords, h.coords):
        assert a == pytest.approx(b)


@settings(max_examples=30)
@given(graphs(max_n=7))
def test_edge_subgraph_keeps_ids_meaningful(g):
    keep = list(range(0, g.m, 2))
    sub = g.edge_subgraph(keep)
    assert sorted(sub.edges) == sorted(g.edges[i] for i in keep)
