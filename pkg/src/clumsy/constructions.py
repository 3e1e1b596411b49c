"""Explicit maximal packings: Turán-partition packings of K_n, layered
square packings of Q_n, and periodic patterns on tiling sections.

Every construction ends with greedy completion and a maximality
certificate; predicted sizes are reported next to what was achieved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

from .copies import CopyTable, enumerate_copies, enumerate_subcubes
from .graph import (
    Graph,
    GridSpec,
    lattice_points,
    make_complete,
    make_cycle,
    make_grid_section,
    turan_edge_count,
    turan_partition,
)
from .packing import (
    Certificate,
    Packing,
    check_maximal,
    check_packing,
    covered_fraction,
    greedy_maximalize,
    max_gain_order,
)
from .solvers import Budget, solve_cl, solve_pp

TURAN_CLIQUE = "turan_clique"
HYPERCUBE_LAYERS = "hypercube_layers"
GRID_PATTERN = "grid_pattern"

# node budget for exact sub-packings when the caller gives none
SUBPACKING_NODES = 500_000


class ConstructionError(RuntimeError):
    pass


@dataclass
class ConstructionReport:
    packing: Packing
    predicted_size: Fraction
    construction: str
    parameters: dict
    boundary_added: int
    certificate: Certificate
    details: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.packing)

    def to_json(self) -> dict:
        return {
            "construction": self.construction,
            "parameters": dict(self.parameters),
            "size": self.size,
            "predicted_size": str(self.predicted_size),
            "boundary_added": self.boundary_added,
            "covered_fraction": str(covered_fraction(self.packing)) if self.packing.table.host.m else None,
            "certificate": self.certificate.to_json(),
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


COMPLETIONS = ("lex", "max_gain")


def _finish(table: CopyTable, seed: Sequence[int], construction: str, predicted, params, details,
            completion: str = "lex") -> ConstructionReport:
    base = Packing(table, seed)
    cert = check_packing(base)
    if not cert.ok:
        raise ConstructionError(f"{construction}: seed copies overlap: {cert.witness}")
    if completion == "lex":
        order = None
    elif completion == "max_gain":
        order = max_gain_order(base)
    else:
        raise ValueError(f"unknown completion {completion!r}; expected one of {COMPLETIONS}")
    full = greedy_maximalize(base, order)
    cert = check_maximal(full)
    if not cert.ok:
        raise ConstructionError(f"{construction}: completion is not maximal: {cert.witness}")
    return ConstructionReport(full, Fraction(predicted), construction, params, len(full) - len(base), cert, details)


# ---------------------------------------------------------------------------
# divisibility


@dataclass(frozen=True)
class DivisibilityReport:
    gcd_H: int
    gcd_G: int
    edges_H: int
    edges_G: int

    @property
    def divisible(self) -> bool:
        g_ok = self.gcd_G % self.gcd_H == 0 if self.gcd_H else self.gcd_G == 0
        return g_ok and self.edges_H > 0 and self.edges_G % self.edges_H == 0


def degree_gcd(g: Graph) -> int:
    return reduce(math.gcd, g.degrees(), 0)


def check_divisibility(g: Graph, h: Graph) -> DivisibilityReport:
    return DivisibilityReport(degree_gcd(h), degree_gcd(g), h.m, g.m)


# ---------------------------------------------------------------------------
# K_n with K_m


def construct_kn_km(n: int, m: int, budget: Optional[Budget] = None) -> ConstructionReport:
    """Pack K_m inside each part of the Turán partition into m-1 parts, then
    complete greedily over all of K_n.

    Each part is packed with the exact max-packing solver; a part whose
    solve runs out of budget keeps the best packing found.
    """
    if not 2 <= m <= n:
        raise ValueError(f"need 2 <= m <= n, got m={m}, n={n}")
    g = make_complete(n)
    km = make_complete(m)
    table = enumerate_copies(g, km)
    parts = turan_partition(n, m - 1)
    part_of = {v: i for i, p in enumerate(parts) for v in p}
    seed: list[int] = []
    per_part = []
    for i, part in enumerate(parts):
        inside = [c for c in range(len(table)) if {part_of[v] for v in table.vertex_set(c)} == {i}]
        sub = table.restrict(inside)
        r = solve_pp(sub, budget)
        chosen = [table.index_of(sub.copies[j]) for j in r.witness]
        seed.extend(chosen)
        part_edges = len(part) * (len(part) - 1) // 2
        per_part.append({
            "size": len(part),
            "packed": len(chosen),
            "status": r.status,
            "uncovered_edges": part_edges - len(chosen) * km.m,
        })
    predicted = Fraction(g.m - turan_edge_count(n, m - 1), km.m)
    return _finish(table, seed, TURAN_CLIQUE, predicted, {"n": n, "m": m}, {"parts": per_part})


# ---------------------------------------------------------------------------
# Q_n with Q_2


def square_bottom_layer(table: CopyTable, i: int) -> int:
    """Layer index j such that square i lies in L_j ∪ L_{j+1}."""
    return min(v.bit_count() for v in table.vertex_set(i)) + 1


def construct_qn_q2_layers(n: int, residue: Optional[int] = None, budget: Optional[Budget] = None,
                           completion: str = "max_gain") -> ConstructionReport:
    """Densely pack the layer pairs L_j ∪ L_{j+1}, j ≡ residue (mod 3), with
    squares lying inside them, then complete greedily.

    Layer pairs are packed with the exact max-packing solver (budgeted;
    the greedy packing is the fallback incumbent).  ``residue=None`` tries
    all three alignments and keeps the smallest packing; at small n the
    alignment decides how many layers are left to the greedy step.
    ``completion`` picks the greedy order: ``"max_gain"`` or plain ``"lex"``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    table = enumerate_subcubes(n, 2)
    budget = budget or Budget(nodes=SUBPACKING_NODES)
    if residue is not None:
        return _layers_once(table, n, residue % 3, budget, completion)
    reports = [_layers_once(table, n, r, budget, completion) for r in range(3)]
    best = min(reports, key=lambda rep: (rep.size, rep.parameters["residue"]))
    best.details["sizes_by_residue"] = [rep.size for rep in reports]
    return best


def _layers_once(table: CopyTable, n: int, residue: int, budget, completion) -> ConstructionReport:
    by_layer: dict[int, list[int]] = {}
    for i in range(len(table)):
        by_layer.setdefault(square_bottom_layer(table, i), []).append(i)
    seed: list[int] = []
    layers = []
    for j in sorted(by_layer):
        if j % 3 != residue:
            continue
        sub = table.restrict(by_layer[j])
        r = solve_pp(sub, budget)
        seed.extend(table.index_of(sub.copies[k]) for k in r.witness)
        layer_edges = sum(1 for u, v in table.host.edges if max(u.bit_count(), v.bit_count()) in (j, j + 1))
        layers.append({"j": j, "squares": len(r.witness), "status": r.status,
                       "uncovered_edges": layer_edges - 4 * len(r.witness)})
    target = Fraction(2, 3) * Fraction(table.host.m, 4)
    params = {"n": n, "residue": residue, "completion": completion}
    rep = _finish(table, seed, HYPERCUBE_LAYERS, target, params, {"layers": layers}, completion)
    rep.details["ratio_to_perfect"] = Fraction(rep.size * 4, table.host.m)
    return rep


# ---------------------------------------------------------------------------
# tiling patterns


def pattern_graph(k: int, d: int = 2) -> Graph:
    """The packed shape: C_3, C_6, or the d x d square grid R_4(d)."""
    if k == 4:
        return make_grid_section(GridSpec(4, d))
    return make_cycle(k)


def pattern_density(k: int, d: int = 2) -> Fraction:
    """Covered-edge fraction of the infinite periodic pattern."""
    if k == 3:
        return Fraction(1, 2)
    if k == 6:
        return Fraction(2, 7)
    if k == 4:
        return Fraction(d * d - d, 4 * d * d - 8 * d + 5)
    raise ValueError(f"tiling kind must be 3, 4 or 6, got {k}")


def gadget_lower_bound(k: int, d: int = 2) -> Fraction:
    """Covered-edge fraction forced on every maximal packing of the tiling
    (weighted gadget count; for k=4 the corner-position count)."""
    if k == 3:
        return Fraction(3, 6)
    if k == 6:
        return Fraction(6, 21)
    if k == 4:
        if d < 2:
            raise ValueError("block side must be at least 2")
        return Fraction(d * d - d, 4 * d * d - 4 * d - 3)
    raise ValueError(f"tiling kind must be 3, 4 or 6, got {k}")


def _in_lattice(p, basis) -> bool:
    (a, b), (c, d) = basis
    det = a * d - b * c
    x, y = p
    return (x * d - y * c) % det == 0 and (a * y - b * x) % det == 0


HEX_NEIGHBORHOOD = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
HEX_LATTICE_DEFAULT = ((3, 1), (-1, 2))


def _tiles_neighborhood(basis) -> bool:
    pts = HEX_NEIGHBORHOOD
    return all(not _in_lattice((p[0] - q[0], p[1] - q[1]), basis) for i, p in enumerate(pts) for q in pts[:i])


def _index7_sublattices():
    # Hermite normal forms of index-7 sublattices of Z^2
    yield ((7, 0), (0, 1))
    for t in range(7):
        yield ((1, t), (0, 7))


def hexagon_flower_lattice() -> tuple[tuple[int, int], tuple[int, int]]:
    """Index-7 sublattice of hexagon centres (axial coordinates) whose
    translates of a closed hexagon neighbourhood tile the plane."""
    if _tiles_neighborhood(HEX_LATTICE_DEFAULT):
        return HEX_LATTICE_DEFAULT
    for basis in _index7_sublattices():
        if _tiles_neighborhood(basis):
            return basis
    raise ConstructionError("no index-7 sublattice tiles the hexagon neighbourhood")


def _pattern_tiles(spec: GridSpec, d: int):
    """Yield vertex-coordinate tuples of the pattern's tiles (all of them,
    whether or not they fit inside the section)."""
    n = spec.n
    if spec.k == 4:
        s = 2 * d - 2
        basis = ((s, 1), (1, -s))
        for x in range(n):
            for y in range(n):
                if _in_lattice((x, y), basis):
                    yield [(x + i, y + j) for i in range(d) for j in range(d)]
        return
    pts = lattice_points(spec)
    if spec.k == 3:
        # scaled-by-2 tiling: central down triangle of each big up triangle
        # (lower-left (a,b) both even) and central up triangle of each big
        # down triangle (lower-left both odd); lattice (a,b) -> (2a+b, b)
        seen = set()
        for X, Y in pts:
            a, b = (X - Y) // 2, Y
            for a0, b0 in ((a, b), (a - 1, b), (a, b - 1), (a - 1, b - 1)):
                if (a0, b0) in seen:
                    continue
                seen.add((a0, b0))
                if a0 % 2 == 0 and b0 % 2 == 0:
                    tri = [(a0 + 1, b0), (a0, b0 + 1), (a0 + 1, b0 + 1)]
                elif a0 % 2 and b0 % 2:
                    tri = [(a0, b0), (a0 + 1, b0), (a0, b0 + 1)]
                else:
                    continue
                yield [(2 * u + v, v) for u, v in tri]
        return
    basis = hexagon_flower_lattice()
    X_max = 2 * n
    Y_max = max(Y for _, Y in pts) + 2 if pts else 0
    offsets = ((2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1))
    for q in range(-2, X_max // 3 + 2):
        for r in range(-q - 2, Y_max):
            if not _in_lattice((q, r), basis):
                continue
            cx, cy = 1 + 3 * q, 1 + q + 2 * r
            if not (-2 <= cx <= X_max + 2 and -1 <= cy <= Y_max + 1):
                continue
            yield [(cx + dx, cy + dy) for dx, dy in offsets]


def pattern_seed(spec: GridSpec, table: CopyTable, d: int = 2) -> list[int]:
    """Copy ids of the pattern tiles that lie entirely inside the section."""
    pts = lattice_points(spec)
    index = {p: i for i, p in enumerate(pts)}
    host = table.host
    seed = set()
    for tile in _pattern_tiles(spec, d):
        vs = [index.get(p) for p in tile]
        if any(v is None for v in vs):
            continue
        vset = set(vs)
        es = [i for i, (u, v) in enumerate(host.edges) if u in vset and v in vset] if spec.k == 4 else None
        if spec.k != 4:
            cyc = vs + vs[:1] if spec.k == 3 else _hex_cycle(vs)
            es = []
            for a, b in zip(cyc, cyc[1:]):
                if not host.has_edge(a, b):
                    es = None
                    break
                es.append(host.edge_id(a, b))
            if es is None:
                continue
        c = table.find(es)
        if c is not None:
            seed.add(c)
    return sorted(seed)


def _hex_cycle(vs):
    # offsets were listed counter-clockwise
    return list(vs) + [vs[0]]


def central_window_fraction(p: Packing, n: int) -> Fraction:
    """Covered fraction among edges whose midpoint lies in the central
    [n/4, 3n/4)^2 window."""
    host = p.table.host
    if host.coords is None:
        raise ValueError("host graph has no coordinates")
    lo, hi = n / 4.0, 3.0 * n / 4.0
    tot = cov = 0
    for e, (u, v) in enumerate(host.edges):
        (x1, y1), (x2, y2) = host.coords[u], host.coords[v]
        mx, my = (x1 + x2) / 2.0, (y1 + y2) / 2.0
        if lo <= mx < hi and lo <= my < hi:
            tot += 1
            cov += p.covered >> e & 1
    if tot == 0:
        raise ValueError("central window contains no edges")
    return Fraction(cov, tot)


def construct_grid_pattern(spec: GridSpec, d: int = 2, budget: Optional[Budget] = None,
                           table: Optional[CopyTable] = None, completion: str = "lex") -> ConstructionReport:
    """Periodic maximal C_k packing (R_4(d) blocks for k=4) of a tiling
    section, completed greedily at the boundary.

    Sections too small to hold a single pattern tile are solved exactly.
    """
    if spec.k == 4 and d < 2:
        raise ValueError("block side must be at least 2")
    host = make_grid_section(spec)
    h = pattern_graph(spec.k, d)
    if table is None:
        table = enumerate_copies(host, h)
    params = {"k": spec.k, "n": spec.n}
    if spec.k == 4:
        params["d"] = d
    seed = pattern_seed(spec, table, d)
    density = pattern_density(spec.k, d)
    predicted = density * host.m / h.m
    if not seed:
        r = solve_cl(table, budget)
        rep = _finish(table, r.witness, GRID_PATTERN, predicted, params,
                      {"fallback": "exact_solver", "solver_status": r.status})
        rep.boundary_added = 0
        return rep
    rep = _finish(table, seed, GRID_PATTERN, predicted, params, {"pattern_copies": len(seed)}, completion)
    rep.details["pattern_density"] = density
    rep.details["lower_bound_density"] = gadget_lower_bound(spec.k, d)
    if host.m:
        rep.details["covered_fraction"] = covered_fraction(rep.packing)
    try:
        rep.details["central_window_fraction"] = central_window_fraction(rep.packing, spec.n)
    except ValueError:
        rep.details["central_window_fraction"] = None
    return rep


# ---------------------------------------------------------------------------
# rendering


def render_svg(p: Packing, scale: float = 24.0) -> str:
    """Edges of a planar host drawn grey, covered edges in colour."""
    host = p.table.host
    if host.coords is None:
        raise ValueError("host graph has no coordinates")
    xs = [x for x, _ in host.coords] or [0.0]
    ys = [y for _, y in host.coords] or [0.0]
    pad = 1.0
    w = (max(xs) - min(xs) + 2 * pad) * scale
    hgt = (max(ys) - min(ys) + 2 * pad) * scale

    def pt(v):
        x, y = host.coords[v]
        return (x - min(xs) + pad) * scale, hgt - (y - min(ys) + pad) * scale

    palette = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    colour = {}
    for k, c in enumerate(p.members):
        for e in p.table.copies[c]:
            colour[e] = palette[k % len(palette)]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{hgt:.0f}">']
    for e, (u, v) in enumerate(host.edges):
        (x1, y1), (x2, y2) = pt(u), pt(v)
        stroke = colour.get(e, "#cccccc")
        width = 3 if e in colour else 1
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke="{stroke}" stroke-width="{width}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
