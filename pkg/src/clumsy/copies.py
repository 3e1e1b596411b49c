"""Enumeration of the copies of a pattern graph H inside a host graph G.

A copy is identified with its edge set (automorphic images of H collapse to
one copy).  Copies are kept in lexicographic order of their sorted edge-id
tuples so that copy ids are reproducible.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb
from typing import Iterable, Optional, Sequence

from .graph import HYPERCUBE_CAP, Graph, make_hypercube

DEFAULT_COPY_BUDGET = 5_000_000


class CopyBudgetExceeded(RuntimeError):
    def __init__(self, found: int, budget: int):
        super().__init__(f"copy enumeration exceeded budget: found {found} > {budget} copies")
        self.found = found
        self.budget = budget


class CopyTable:
    """All copies of ``pattern`` in ``host``.

    ``copies[i]`` is a sorted tuple of host edge ids, ``masks[i]`` the same
    set as an int bitmask, and ``incidence[e]`` the sorted copy ids using
    edge ``e``.
    """

    def __init__(self, host: Graph, pattern: Optional[Graph], copies: Iterable[Sequence[int]]):
        self.host = host
        self.pattern = pattern
        cs = sorted({tuple(sorted(c)) for c in copies})
        self.copies: tuple[tuple[int, ...], ...] = tuple(cs)
        sizes = {len(c) for c in cs}
        if len(sizes) > 1:
            raise ValueError("copies must all have the same number of edges")
        self.copy_size = sizes.pop() if sizes else (pattern.m if pattern is not None else 0)
        inc: list[list[int]] = [[] for _ in range(host.m)]
        for i, c in enumerate(cs):
            for e in c:
                inc[e].append(i)
        self.incidence = tuple(tuple(x) for x in inc)
        self.masks = tuple(_mask(c) for c in cs)
        self._index = {c: i for i, c in enumerate(cs)}
        self._closed_nbr: Optional[tuple[int, ...]] = None

    def __len__(self) -> int:
        return len(self.copies)

    def __repr__(self) -> str:
        return f"<CopyTable {len(self.copies)} copies of size {self.copy_size} in {self.host!r}>"

    def index_of(self, edge_ids: Iterable[int]) -> int:
        return self._index[tuple(sorted(edge_ids))]

    def find(self, edge_ids: Iterable[int]) -> Optional[int]:
        return self._index.get(tuple(sorted(edge_ids)))

    def incidence_masks(self) -> tuple[int, ...]:
        """Per edge: bitmask over copies containing it."""
        return tuple(_mask(x) for x in self.incidence)

    def closed_neighborhoods(self) -> tuple[int, ...]:
        """Per copy: bitmask of copies sharing at least one edge with it
        (the copy itself included)."""
        if self._closed_nbr is None:
            inc = self.incidence_masks()
            out = []
            for c in self.copies:
                m = 0
                for e in c:
                    m |= inc[e]
                out.append(m)
            self._closed_nbr = tuple(out)
        return self._closed_nbr

    def restrict(self, keep: Iterable[int]) -> "CopyTable":
        """Sub-table on a subset of copy ids (ids are renumbered)."""
        return CopyTable(self.host, self.pattern, [self.copies[i] for i in keep])

    def vertex_set(self, i: int) -> frozenset[int]:
        es = self.host.edges
        return frozenset(v for e in self.copies[i] for v in es[e])


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def mask_to_ids(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------------------
# generic subgraph enumeration


def _search_order(h: Graph) -> list[int]:
    """Pattern vertices ordered so each vertex after the first in its
    component has an earlier neighbour; high degree first."""
    order: list[int] = []
    placed = set()
    remaining = sorted(range(h.n), key=lambda v: (-h.degree(v), v))
    while remaining:
        root = remaining[0]
        order.append(root)
        placed.add(root)
        while True:
            frontier = [v for v in remaining if v not in placed and any(u in placed for u in h.neighbors(v))]
            if not frontier:
                break
            # most constrained next
            frontier.sort(key=lambda v: (-sum(u in placed for u in h.neighbors(v)), -h.degree(v), v))
            order.append(frontier[0])
            placed.add(frontier[0])
        remaining = [v for v in remaining if v not in placed]
    return order


def enumerate_copies(g: Graph, h: Graph, budget: int = DEFAULT_COPY_BUDGET) -> CopyTable:
    """Every subgraph of ``g`` isomorphic to ``h``, as edge sets."""
    if h.m < 1:
        raise ValueError("pattern must have at least one edge")
    if h.isolated_vertices():
        raise ValueError("pattern graphs with isolated vertices are not supported")
    order = _search_order(h)
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[u] for u in h.neighbors(v) if pos[u] < i] for i, v in enumerate(order)]
    h_edges = [(pos[u], pos[v]) for u, v in h.edges]
    gdeg = g.degrees()
    need_deg = [h.degree(v) for v in order]
    image = [-1] * h.n
    used = [False] * g.n
    found: set[tuple[int, ...]] = set()
    eid = g.edge_index

    def extend(i: int) -> None:
        if i == h.n:
            c = tuple(sorted(eid[(a, b) if a < b else (b, a)] for a, b in ((image[x], image[y]) for x, y in h_edges)))
            if c not in found:
                found.add(c)
                if len(found) > budget:
                    raise CopyBudgetExceeded(len(found), budget)
            return
        if back[i]:
            anchor = image[back[i][0]]
            cands = g.neighbors(anchor)
            rest = back[i][1:]
        else:
            cands = range(g.n)
            rest = ()
        nd = need_deg[i]
        for v in cands:
            if used[v] or gdeg[v] < nd:
                continue
            if any(not g.has_edge(v, image[j]) for j in rest):
                continue
            image[i] = v
            used[v] = True
            extend(i + 1)
            used[v] = False
        image[i] = -1

    extend(0)
    return CopyTable(g, h, found)


# ---------------------------------------------------------------------------
# subcubes of hypercubes


def subcube_vectors(n: int, d: int) -> list[str]:
    """All length-n strings over {0,1,*} with exactly d stars."""
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    out = []
    for stars in combinations(range(n), d):
        fixed = [i for i in range(n) if i not in stars]
        for bits in product("01", repeat=n - d):
            s = ["*"] * n
            for i, b in zip(fixed, bits):
                s[i] = b
            out.append("".join(s))
    return out


def subcube_vertices(vec: str) -> list[int]:
    """Vertex ids (as integers, leftmost character = most significant bit)."""
    n = len(vec)
    base = 0
    free = []
    for i, ch in enumerate(vec):
        bit = n - 1 - i
        if ch == "1":
            base |= 1 << bit
        elif ch == "*":
            free.append(bit)
        elif ch != "0":
            raise ValueError(f"bad subcube character {ch!r}")
    verts = []
    for sel in range(1 << len(free)):
        v = base
        for j, b in enumerate(free):
            if sel >> j & 1:
                v |= 1 << b
        verts.append(v)
    return sorted(verts)


def subcube_edge_ids(q: Graph, vec: str) -> list[int]:
    vs = set(subcube_vertices(vec))
    ids = []
    for v in vs:
        for b in range(len(vec)):
            w = v | (1 << b)
            if w != v and w in vs:
                ids.append(q.edge_index[(v, w)])
    return sorted(ids)


def enumerate_subcubes(n: int, d: int, host: Optional[Graph] = None, cap: int = HYPERCUBE_CAP) -> CopyTable:
    """Copies of Q_d in Q_n built from star vectors (no search)."""
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    if n > cap:
        raise ValueError(f"hypercube dimension {n} exceeds cap {cap}")
    q = host if host is not None else make_hypercube(n, cap=cap)
    return CopyTable(q, make_hypercube(d), (subcube_edge_ids(q, s) for s in subcube_vectors(n, d)))


def count_subcubes(n: int, d: int) -> int:
    return 2 ** (n - d) * comb(n, d)


def edge_subcube_degree(n: int, d: int) -> int:
    return comb(n - 1, d - 1)


# ---------------------------------------------------------------------------
# text export


def export_copy_table(t: CopyTable) -> str:
    lines = [f"p copies {len(t)} {t.copy_size} {t.host.m}"]
    lines.extend("k " + " ".join(map(str, (i,) + c)) for i, c in enumerate(t.copies))
    return "\n".join(lines) + "\n"


def parse_copy_table(text: str, host: Graph, pattern: Optional[Graph] = None) -> CopyTable:
    copies: dict[int, tuple[int, ...]] = {}
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "p":
            if len(tok) != 5 or tok[1] != "copies":
                raise ValueError(f"line {lineno}: malformed copy-table header")
            declared = int(tok[2])
            if int(tok[4]) != host.m:
                raise ValueError(f"line {lineno}: table is for a host with {tok[4]} edges, got {host.m}")
        elif tok[0] == "k":
            ids = [int(x) for x in tok[1:]]
            if len(ids) < 2:
                raise ValueError(f"line {lineno}: copy line without edges")
            if any(not 0 <= e < host.m for e in ids[1:]):
                raise ValueError(f"line {lineno}: edge id out of range")
            copies[ids[0]] = tuple(ids[1:])
        else:
            raise ValueError(f"line {lineno}: unknown line type {tok[0]!r}")
    t = CopyTable(host, pattern, copies.values())
    if declared is not None and declared != len(t):
        raise ValueError(f"header declares {declared} copies, found {len(t)}")
    for i, c in copies.items():
        if t.copies[i] != tuple(sorted(c)):
            raise ValueError(f"copy {i} is not in canonical order")
    return t
