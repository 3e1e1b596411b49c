"""Immutable simple graphs, the generator families used for clumsy packings,
and the plain-text edge-list format.

Vertices are ``0..n-1``; edges are stored as ``(u, v)`` with ``u < v`` and
receive dense ids in lexicographic order, so ids survive a round trip
through :func:`serialize_graph` / :func:`parse_graph`.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Optional, Sequence

HYPERCUBE_CAP = 16


class GraphFormatError(ValueError):
    """Raised for malformed edge-list text; the message names the line."""


class Graph:
    __slots__ = ("n", "edges", "edge_index", "adjacency", "coords", "family", "_adjsets")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        coords: Optional[Sequence[tuple[float, float]]] = None,
        family: Optional[tuple] = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            pair = (u, v) if u < v else (v, u)
            if pair in norm:
                raise ValueError(f"duplicate edge {pair}")
            norm.add(pair)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(norm))
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency = tuple(tuple(sorted(a)) for a in adj)
        self._adjsets = tuple(frozenset(a) for a in self.adjacency)
        if coords is not None and len(coords) != n:
            raise ValueError("coords must have one entry per vertex")
        self.coords = tuple(coords) if coords is not None else None
        # (name, *params) for generator families whose automorphisms we know
        self.family = family

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        tag = f" {self.family[0]}" if self.family else ""
        return f"<Graph{tag} n={self.n} m={self.m}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjsets[u]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(self.n) if not self.adjacency[v]]

    def edge_subgraph(self, edge_ids: Iterable[int]) -> "Graph":
        """Spanning subgraph keeping only the given edge ids."""
        return Graph(self.n, (self.edges[i] for i in edge_ids), coords=self.coords)

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, vertices relabelled in increasing order."""
        vs = sorted(set(vertices))
        relabel = {v: i for i, v in enumerate(vs)}
        es = [(relabel[u], relabel[v]) for u, v in self.edges if u in relabel and v in relabel]
        coords = [self.coords[v] for v in vs] if self.coords else None
        return Graph(len(vs), es, coords=coords)


# ---------------------------------------------------------------------------
# generators


def make_complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("K_n needs n >= 1")
    return Graph(n, combinations(range(n), 2), family=("complete", n))


def make_empty(n: int) -> Graph:
    return Graph(n, ())


def make_path(k: int) -> Graph:
    """Path on k vertices (k-1 edges)."""
    if k < 2:
        raise ValueError("path needs at least 2 vertices")
    return Graph(k, ((i, i + 1) for i in range(k - 1)))


def make_cycle(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycle needs k >= 3")
    return Graph(k, ((i, (i + 1) % k) for i in range(k)))


def make_hypercube(n: int, cap: int = HYPERCUBE_CAP) -> Graph:
    """Q_n on vertex ids equal to the integer value of their bit strings."""
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    if n > cap:
        raise ValueError(f"hypercube dimension {n} exceeds cap {cap}")
    N = 1 << n
    edges = [(v, v | (1 << i)) for v in range(N) for i in range(n) if not v >> i & 1]
    return Graph(N, edges, family=("hypercube", n))


def hypercube_vertex_bits(n: int, v: int) -> str:
    """Bit string of vertex v, most significant coordinate first."""
    return format(v, f"0{n}b") if n else ""


def hypercube_weight(v: int) -> int:
    return v.bit_count()


def hypercube_edge_layer(u: int, v: int) -> int:
    """Index i of the edge layer L_i (endpoints of weight i-1 and i)."""
    return max(u.bit_count(), v.bit_count())


def turan_partition(n: int, k: int) -> list[list[int]]:
    """Equitable partition of range(n) into k consecutive blocks, largest first."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    q, r = divmod(n, k)
    parts, start = [], 0
    for i in range(k):
        size = q + (1 if i < r else 0)
        parts.append(list(range(start, start + size)))
        start += size
    return parts


def make_turan(n: int, k: int) -> tuple[Graph, list[list[int]]]:
    """Turán graph T(n, k) together with its partite sets."""
    parts = turan_partition(n, k)
    part_of = {v: i for i, p in enumerate(parts) for v in p}
    edges = [(u, v) for u, v in combinations(range(n), 2) if part_of[u] != part_of[v]]
    return Graph(n, edges), parts


def turan_edge_count(n: int, k: int) -> int:
    sizes = [len(p) for p in turan_partition(n, k)]
    return (n * n - sum(s * s for s in sizes)) // 2


def make_monotonicity_gadget(k: int) -> tuple[Graph, Graph]:
    """Return ``(G_prime, G)`` for the cycle-length-k non-monotonicity example.

    ``G_prime`` is a k-cycle F_0 on vertices 0..k-1 whose i-th edge
    ``(i, i+1 mod k)`` also lies on its own k-cycle F_i; the F_i are
    otherwise on fresh vertices and pairwise edge-disjoint.  ``G`` drops
    F_0's edge ``(0, 1)``.
    """
    if k < 3:
        raise ValueError("gadget needs k >= 3")
    edges = []
    nxt = k
    for i in range(k):
        a, b = i, (i + 1) % k
        edges.append((a, b))
        path = [b] + list(range(nxt, nxt + k - 2)) + [a]
        nxt += k - 2
        edges.extend(zip(path, path[1:]))
    g_prime = Graph(nxt, edges)
    g = Graph(nxt, [e for e in g_prime.edges if e != (0, 1)])
    return g_prime, g


# ---------------------------------------------------------------------------
# planar tiling sections
#
# Triangular and hexagonal lattices use integer "half-unit" coordinates
# (X, Y) for the point (X/2, Y*sqrt(3)/2).  The square lattice uses (x, y).

SQRT3 = math.sqrt(3.0)


class GridSpec:
    """A finite section R_k(n): tiling vertices inside [0, n) x [0, n)."""

    __slots__ = ("k", "n")

    def __init__(self, k: int, n: int):
        if k not in (3, 4, 6):
            raise ValueError(f"tiling kind must be 3, 4 or 6, got {k}")
        if n < 1:
            raise ValueError("section side must be positive")
        self.k = k
        self.n = n

    def __repr__(self) -> str:
        return f"GridSpec(k={self.k}, n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GridSpec) and (self.k, self.n) == (other.k, other.n)

    def __hash__(self) -> int:
        return hash((self.k, self.n))


def _inside_half_units(X: int, Y: int, n: int) -> bool:
    # X/2 in [0, n) and Y*sqrt(3)/2 in [0, n), exactly
    return 0 <= X < 2 * n and Y >= 0 and 3 * Y * Y < 4 * n * n


def lattice_points(spec: GridSpec) -> list[tuple[int, int]]:
    """Integer lattice coordinates of the section's vertices, row-major
    (sorted by (Y, X)); list position is the vertex id."""
    n = spec.n
    if spec.k == 4:
        return [(x, y) for y in range(n) for x in range(n)]
    ymax = 0
    while 3 * (ymax + 1) ** 2 < 4 * n * n:
        ymax += 1
    pts = []
    for Y in range(ymax + 1):
        for X in range(2 * n):
            if (X + Y) % 2:
                continue
            if spec.k == 3 or _is_honeycomb_vertex(X, Y):
                pts.append((X, Y))
    return [p for p in pts if _inside_half_units(p[0], p[1], n)]


def _is_honeycomb_vertex(X: int, Y: int) -> bool:
    # Triangular lattice points (X+Y even) minus hexagon centres, which sit at
    # (1,1) + a*(3,1) + b*(0,2).  That is X ≡ 1 (mod 3) with the right parity.
    if (X - 1) % 3:
        return True
    a = (X - 1) // 3
    return (Y - 1 - a) % 2 != 0


def lattice_neighbors(k: int, p: tuple[int, int]) -> list[tuple[int, int]]:
    X, Y = p
    if k == 4:
        return [(X + 1, Y), (X - 1, Y), (X, Y + 1), (X, Y - 1)]
    tri = [(X + 2, Y), (X - 2, Y), (X + 1, Y + 1), (X - 1, Y + 1), (X + 1, Y - 1), (X - 1, Y - 1)]
    if k == 3:
        return tri
    return [q for q in tri if _is_honeycomb_vertex(*q)]


def planar_position(k: int, p: tuple[int, int]) -> tuple[float, float]:
    if k == 4:
        return (float(p[0]), float(p[1]))
    return (p[0] / 2.0, p[1] * SQRT3 / 2.0)


def make_grid_section(spec: GridSpec) -> Graph:
    """Induced subgraph of the tiling R_k on vertices inside [0, n)^2, with
    the unit edge (0,0)-(1,0) present.  ``coords`` holds planar positions."""
    pts = lattice_points(spec)
    index = {p: i for i, p in enumerate(pts)}
    edges = []
    for i, p in enumerate(pts):
        for q in lattice_neighbors(spec.k, p):
            j = index.get(q)
            if j is not None and i < j:
                edges.append((i, j))
    coords = [planar_position(spec.k, p) for p in pts]
    return Graph(len(pts), edges, coords=coords, family=("grid", spec.k, spec.n))


# ---------------------------------------------------------------------------
# edge-list text format


def serialize_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    if g.coords is not None:
        lines.extend(f"x coord {v + 1} {x!r} {y!r}" for v, (x, y) in enumerate(g.coords))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the ``p edge`` / ``e u v`` format (1-indexed vertices).

    A missing header is tolerated when every line is an edge line; the
    vertex count is then the largest label seen.
    """
    n = m = None
    pairs: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    coords: dict[int, tuple[float, float]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: second header line")
            if len(tok) != 4 or tok[1] != "edge":
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(tok[2]), int(tok[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}") from None
            if n < 0 or m < 0:
                raise GraphFormatError(f"line {lineno}: negative counts in header")
        elif tok[0] == "e":
            if len(tok) != 3:
                raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}")
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer vertex in {line!r}") from None
            if u < 1 or v < 1 or (n is not None and (u > n or v > n)):
                raise GraphFormatError(f"line {lineno}: vertex out of range in {line!r}")
            if u == v:
                raise GraphFormatError(f"line {lineno}: self-loop {line!r}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"line {lineno}: duplicate edge {u} {v} (first on line {seen[key]})")
            seen[key] = lineno
            pairs.append((u - 1, v - 1))
        elif tok[0] == "x":
            if len(tok) != 5 or tok[1] != "coord":
                raise GraphFormatError(f"line {lineno}: malformed coordinate line {line!r}")
            try:
                v, x, y = int(tok[2]), float(tok[3]), float(tok[4])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed coordinate line {line!r}") from None
            if v < 1 or (n is not None and v > n):
                raise GraphFormatError(f"line {lineno}: vertex out of range in {line!r}")
            coords[v - 1] = (x, y)
        else:
            raise GraphFormatError(f"line {lineno}: unknown line type {tok[0]!r}")
    if n is None:
        n = max((max(p) + 1 for p in pairs), default=0)
    if m is not None and m != len(pairs):
        raise GraphFormatError(f"header declares {m} edges but {len(pairs)} were given")
    if coords and len(coords) != n:
        raise GraphFormatError(f"coordinates given for {len(coords)} of {n} vertices")
    return Graph(n, pairs, coords=[coords[v] for v in range(n)] if coords else None)
