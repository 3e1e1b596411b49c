"""Closed-form bounds and per-instance reports tying them to solver output."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

from .copies import CopyTable, enumerate_copies, enumerate_subcubes
from .graph import Graph, serialize_graph, turan_edge_count
from .solvers import Budget, SolveResult, solve_cl, solve_cov, solve_ex, solve_pp

EXACT_SOLVER = "exact_solver"
TURAN_FORMULA = "turan_formula"
EXTERNAL_CONSTANT = "external_constant"
SOLVER_BOUND = "solver_bound"

CHROMATIC_VERTEX_CAP = 12

# recorded, never computed: see README
ANNOTATIONS = {
    "ex_Qn_Q2_upper_density": {"value": "0.6068", "kind": EXTERNAL_CONSTANT,
                               "meaning": "ex(Q_n,Q_2) <= 0.6068 ||Q_n|| (1+o(1)) (Baber)"},
    "ex_Qn_Q2_conjectured_density": {"value": "1/2", "kind": EXTERNAL_CONSTANT,
                                     "meaning": "Erdos: ex(Q_n,Q_2) = ||Q_n||/2 (1+o(1))"},
    "cl_Qn_Q2_lower_density": {"value": "0.3932", "kind": EXTERNAL_CONSTANT,
                               "meaning": "liminf ||Q_2|| cl(Q_n,Q_2)/||Q_n|| >= 1 - 0.6068"},
    "cl_Qn_Q2_upper_density": {"value": "2/3", "kind": EXTERNAL_CONSTANT,
                               "meaning": "limsup ||Q_2|| cl(Q_n,Q_2)/||Q_n|| <= 2/3"},
    "transversal_density_bracket": {"value": "Omega(log d/(d 2^d)) <= c(d) <= C/d^2", "kind": EXTERNAL_CONSTANT,
                                    "meaning": "c(d) = lim (||Q_n|| - ex(Q_n,Q_d))/||Q_n|| (Alon-Krech-Szabo)"},
}


class ChainViolation(AssertionError):
    pass


def eq1_lower_bound(edges_g: int, ex_value: int, edges_h: int) -> int:
    """ceil((||G|| - ex) / ||H||): every copy must lose an edge, and at least
    ||G|| - ex edges have to go."""
    if edges_h < 1:
        raise ValueError("pattern must have edges")
    if not 0 <= ex_value <= edges_g:
        raise ValueError(f"ex value {ex_value} outside [0, {edges_g}]")
    return -(-(edges_g - ex_value) // edges_h)


def hypercube_counting_lower_bound(n: int, d: int) -> Fraction:
    """Copies of Q_d over (copies per edge x edges per copy)."""
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    return Fraction(2 ** (n - d) * comb(n, d), comb(n - 1, d - 1) * d * 2 ** (d - 1))


def hypercube_neighborhood_lower_bound(n: int, d: int) -> Fraction:
    """Copies of Q_d over the largest number any one copy can block (itself
    plus, for each of its edges, the other copies through that edge)."""
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    blocked = 1 + d * 2 ** (d - 1) * (comb(n - 1, d - 1) - 1)
    return Fraction(2 ** (n - d) * comb(n, d), blocked)


def chromatic_number(h: Graph, cap: int = CHROMATIC_VERTEX_CAP) -> int:
    """Exact chromatic number by backtracking over colourings."""
    if h.n > cap:
        raise ValueError(f"colouring limited to {cap} vertices, got {h.n}")
    if h.n == 0:
        return 0
    if h.m == 0:
        return 1
    order = sorted(range(h.n), key=lambda v: (-h.degree(v), v))

    def colourable(k: int) -> bool:
        col = [-1] * h.n

        def place(i: int, used: int) -> bool:
            if i == len(order):
                return True
            v = order[i]
            taken = {col[u] for u in h.neighbors(v) if col[u] >= 0}
            # a fresh colour is interchangeable with any other fresh one
            for c in range(min(k, used + 1)):
                if c in taken:
                    continue
                col[v] = c
                if place(i + 1, max(used, c + 1)):
                    return True
            col[v] = -1
            return False

        return place(0, 0)

    k = 1
    while not colourable(k):
        k += 1
    return k


def chromatic_ratio(h: Graph) -> Optional[Fraction]:
    """Limit of cl(K_n,H)/pp(K_n,H): 1/(chi(H)-1) when chi(H) >= 3, else None."""
    if h.m == 0:
        raise ValueError("pattern must have edges")
    chi = chromatic_number(h)
    return Fraction(1, chi - 1) if chi >= 3 else None


# ---------------------------------------------------------------------------
# reports


def _is_complete(h: Graph) -> bool:
    return h.m == h.n * (h.n - 1) // 2


def hypercube_dimension(h: Graph) -> Optional[int]:
    """d if h is (recognisably) Q_d: a hypercube-family graph, K_2 or C_4."""
    if h.family and h.family[0] == "hypercube":
        return h.family[1]
    if h.n == 2 and h.m == 1:
        return 1
    if h.n == 4 and h.m == 4 and all(deg == 2 for deg in h.degrees()):
        return 2
    return None


def graph_hash(g: Graph) -> str:
    return hashlib.sha256(serialize_graph(g).encode()).hexdigest()[:16]


@dataclass
class ExValue:
    value: int
    provenance: str
    exact: bool


@dataclass
class BoundsReport:
    instance: str
    edges_G: int
    edges_H: int
    copies: int
    ex: Optional[ExValue]
    eq1_lower: Optional[int]
    counting_lower: Optional[Fraction]
    chi_H: Optional[int]
    ratio_limit: Optional[Fraction]
    solver: dict = field(default_factory=dict)
    constructions: dict = field(default_factory=dict)
    unavailable: dict = field(default_factory=dict)
    annotations: dict = field(default_factory=dict)

    def value(self, quantity: str) -> Optional[int]:
        r = self.solver.get(quantity)
        return r.value if r is not None and r.optimal else None

    def to_json(self, timing: bool = False) -> dict:
        def frac(x):
            return None if x is None else str(x)

        return {
            "instance": self.instance,
            "edges_G": self.edges_G,
            "edges_H": self.edges_H,
            "copies": self.copies,
            "ex": None if self.ex is None else {"value": self.ex.value, "provenance": self.ex.provenance,
                                                "exact": self.ex.exact},
            "eq1_lower": self.eq1_lower,
            "counting_lower": frac(self.counting_lower),
            "chi_H": self.chi_H,
            "ratio_limit": frac(self.ratio_limit),
            "solver": {q: r.to_json(timing=timing) for q, r in self.solver.items()},
            "constructions": dict(self.constructions),
            "unavailable": dict(self.unavailable),
            "annotations": dict(self.annotations),
        }

    def check_chain(self) -> None:
        """eq1 <= cov <= cl <= pp, on the proven bounds of each quantity."""
        lo = {q: r.lo for q, r in self.solver.items()}
        hi = {q: r.hi for q, r in self.solver.items()}
        if self.eq1_lower is not None and "cov" in hi and self.eq1_lower > hi["cov"]:
            raise ChainViolation(f"eq1 bound {self.eq1_lower} exceeds cov <= {hi['cov']}")
        for a, b in (("cov", "cl"), ("cl", "pp")):
            if a in lo and b in hi and lo[a] > hi[b]:
                raise ChainViolation(f"{a} >= {lo[a]} exceeds {b} <= {hi[b]}")
        cl = self.solver.get("cl")
        if cl is not None:
            for name, size in self.constructions.items():
                if size < cl.lo:
                    raise ChainViolation(f"construction {name} of size {size} beats cl >= {cl.lo}")


def build_report(g: Graph, h: Graph, budget: Optional[Budget] = None, symmetry: bool = False,
                 constructions: bool = True, table: Optional[CopyTable] = None,
                 instance: Optional[str] = None) -> BoundsReport:
    """Solve all four quantities and attach every closed-form bound that
    applies to the instance; asserts the bound chain before returning."""
    fam = g.family or ()
    host_dim = fam[1] if fam and fam[0] == "hypercube" else None
    pat_dim = hypercube_dimension(h)
    if table is None:
        if host_dim is not None and pat_dim is not None and pat_dim <= host_dim:
            table = enumerate_subcubes(host_dim, pat_dim, host=g)
        else:
            table = enumerate_copies(g, h)
    sym_ok = symmetry and fam and fam[0] in ("complete", "hypercube")

    solver: dict[str, SolveResult] = {
        "ex": solve_ex(table, budget),
        "cov": solve_cov(table, budget, symmetry=sym_ok),
        "cl": solve_cl(table, budget, symmetry=sym_ok),
        "pp": solve_pp(table, budget),
    }
    unavailable: dict[str, str] = {}

    ex_r = solver["ex"]
    ex_val: Optional[ExValue]
    if ex_r.optimal:
        ex_val = ExValue(ex_r.value, EXACT_SOLVER, True)
    elif fam and fam[0] == "complete" and _is_complete(h) and h.n >= 2:
        ex_val = ExValue(turan_edge_count(g.n, h.n - 1) if g.n >= h.n - 1 else g.m, TURAN_FORMULA, True)
    else:
        # upper bound on ex gives a valid (weaker) eq1 bound
        ex_val = ExValue(ex_r.hi, SOLVER_BOUND, False)
    if ex_val.exact:
        eq1 = eq1_lower_bound(g.m, ex_val.value, h.m)
    else:
        eq1 = None
        unavailable["eq1_lower"] = "ex not solved exactly; only a bound is known"
    if ex_r.optimal and fam and fam[0] == "complete" and _is_complete(h) and h.n >= 2 and g.n >= h.n - 1:
        if ex_r.value != turan_edge_count(g.n, h.n - 1):
            raise ChainViolation("solver ex disagrees with the Turán number")

    counting = None
    if host_dim is not None and pat_dim is not None and pat_dim <= host_dim:
        counting = hypercube_counting_lower_bound(host_dim, pat_dim)
    else:
        unavailable["counting_lower"] = "host/pattern not a hypercube/subcube pair"

    chi = ratio = None
    try:
        chi = chromatic_number(h)
        ratio = Fraction(1, chi - 1) if chi >= 3 else None
        if ratio is None:
            unavailable["ratio_limit"] = "pattern is bipartite"
    except ValueError as exc:
        unavailable["chi_H"] = str(exc)

    built: dict[str, int] = {}
    if constructions:
        from . import constructions as cons

        if fam and fam[0] == "complete" and _is_complete(h) and 2 <= h.n <= g.n:
            built[cons.TURAN_CLIQUE] = cons.construct_kn_km(g.n, h.n, budget).size
        elif host_dim is not None and pat_dim == 2 and host_dim >= 2:
            built[cons.HYPERCUBE_LAYERS] = cons.construct_qn_q2_layers(host_dim, budget=budget).size
        elif fam and fam[0] == "grid":
            from .graph import GridSpec

            k, n = fam[1], fam[2]
            d = int(round(h.n ** 0.5)) if k == 4 else 2
            built[cons.GRID_PATTERN] = cons.construct_grid_pattern(GridSpec(k, n), d, budget, table=table).size
        else:
            unavailable["constructions"] = "no construction family for this instance"

    annotations = {}
    if host_dim is not None and pat_dim is not None:
        annotations = dict(ANNOTATIONS)
    report = BoundsReport(
        instance=instance or f"{graph_hash(g)}/{graph_hash(h)}",
        edges_G=g.m,
        edges_H=h.m,
        copies=len(table),
        ex=ex_val,
        eq1_lower=eq1,
        counting_lower=counting,
        chi_H=chi,
        ratio_limit=ratio,
        solver=solver,
        constructions=built,
        unavailable=unavailable,
        annotations=annotations,
    )
    report.check_chain()
    return report
