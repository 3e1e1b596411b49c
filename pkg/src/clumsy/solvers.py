"""Exact solvers for cl, pp, cov and ex on a copy table, plus an exhaustive
oracle used to cross-check them.

cl, cov and ex are all covering problems over the copies: each copy must be
"hit" by something chosen.

* cl  - choose copies; a chosen copy hits every copy it shares an edge with;
        chosen copies must be pairwise edge-disjoint.
* cov - as cl without the disjointness requirement.
* ex  - choose edges; an edge hits the copies through it.  ex = ||G|| - tau.

They share :func:`_threshold_search`, which decides "is there a cover of size
<= t?".  Minimisers call it for t = lower bound, lower bound + 1, ...; every
exhausted threshold raises the proven lower bound by one, so an interrupted
run still reports honest bounds.  pp is a plain max-independent-set
branch and bound on the copy conflict graph.
"""

from __future__ import annotations

import os
import random
import sys
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence, Union

from .copies import CopyTable, mask_to_ids
from .packing import Packing, greedy_maximalize
from .symmetry import Symmetry, orbit_representatives, set_stabilizer

OPTIMAL = "optimal"
BOUNDS_ONLY = "bounds_only"
BUDGET_EXCEEDED = "budget_exceeded"

QUANTITIES = ("cl", "pp", "cov", "ex")

DEFAULT_NODE_BUDGET = 50_000_000
ORACLE_CAP = 1 << 22
# hitting-set search spent on the root bound of cl / cov
TRANSVERSAL_NODES = 20_000


def default_node_budget() -> int:
    return int(os.environ.get("CLUMSY_NODE_BUDGET", DEFAULT_NODE_BUDGET))


@dataclass(frozen=True)
class Budget:
    nodes: Optional[int] = None
    seconds: Optional[float] = None

    @classmethod
    def default(cls) -> "Budget":
        return cls(nodes=default_node_budget())


@dataclass
class SolveResult:
    quantity: str
    value: int
    status: str
    lo: int
    hi: int
    witness: list[int]
    nodes: int = 0
    elapsed: float = 0.0
    info: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def packing(self, table: CopyTable) -> Packing:
        if self.quantity == "ex":
            raise ValueError("ex witnesses are edge sets, not packings")
        return Packing(table, self.witness)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "quantity": self.quantity,
            "value": self.value,
            "status": self.status,
            "lo": self.lo,
            "hi": self.hi,
            "witness": list(self.witness),
            "nodes": self.nodes,
        }
        if self.info:
            out["info"] = dict(self.info)
        if timing:
            out["millis"] = round(self.elapsed * 1000, 3)
        return out


class _OutOfBudget(Exception):
    pass


class _Clock:
    def __init__(self, budget: Optional[Budget]):
        budget = budget or Budget.default()
        self.max_nodes = budget.nodes
        self.start = time.monotonic()
        self.deadline = self.start + budget.seconds if budget.seconds is not None else None
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _OutOfBudget
        if self.deadline is not None and not self.nodes & 255 and time.monotonic() > self.deadline:
            raise _OutOfBudget

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.start


def _bits(mask: int) -> list[int]:
    return mask_to_ids(mask)


# ---------------------------------------------------------------------------
# covering search shared by cl / cov / ex


class _Cover:
    """``cover[j]``: items hit by chooser j; ``cand[x]``: choosers hitting
    item x; ``conflict[j]``: choosers made unavailable by choosing j (j
    included).  ``perms``: chooser permutations of a symmetry group."""

    def __init__(self, n_items, cover, cand, conflict, perms=None):
        self.n_items = n_items
        self.cover = cover
        self.cand = cand
        self.conflict = conflict
        self.perms = perms


def _lower_bound(p: _Cover, U: int, A: int) -> Optional[int]:
    """Number of further choosers needed to hit U using choosers in A, or
    None if some item cannot be hit at all."""
    if not U:
        return 0
    items = _bits(U)
    counts = []
    for x in items:
        cx = p.cand[x] & A
        if not cx:
            return None
        counts.append((cx.bit_count(), x, cx))
    # items with pairwise disjoint candidate sets need distinct choosers
    counts.sort()
    used = 0
    disjoint = 0
    for _, _, cx in counts:
        if not cx & used:
            used |= cx
            disjoint += 1
    # the k largest gains must add up to |U|
    gains = sorted(((p.cover[j] & U).bit_count() for j in _bits(A)), reverse=True)
    need = len(items)
    k = s = 0
    for gval in gains:
        if s >= need:
            break
        s += gval
        k += 1
    if s < need:
        return None
    return max(disjoint, k)


def _threshold_search(p: _Cover, t: int, clock: _Clock, sym_depth: int = 0) -> Optional[list[int]]:
    cover, cand, conflict, perms = p.cover, p.cand, p.conflict, p.perms
    use_sym = bool(perms) and sym_depth > 0

    def rec(chosen: list[int], U: int, A: int, symmetric: bool) -> Optional[list[int]]:
        clock.tick()
        if not U:
            return list(chosen)
        left = t - len(chosen)
        if left <= 0:
            return None
        x = -1
        best = None
        for y in _bits(U):
            cnt = (cand[y] & A).bit_count()
            if cnt == 0:
                return None
            if best is None or cnt < best:
                best, x = cnt, y
                if cnt == 1:
                    break
        if left == 1:
            # one chooser must hit everything
            return next(([*chosen, j] for j in _bits(cand[x] & A) if not U & ~cover[j]), None)
        lb = _lower_bound(p, U, A)
        if lb is None or lb > left:
            return None
        cands = sorted(_bits(cand[x] & A), key=lambda j: (-(cover[j] & U).bit_count(), j))
        if symmetric and use_sym and len(chosen) < sym_depth:
            stab = set_stabilizer(perms, chosen)
            for j in orbit_representatives(stab, cands):
                r = rec([*chosen, j], U & ~cover[j], A & ~conflict[j], True)
                if r is not None:
                    return r
            return None
        for j in cands:
            r = rec([*chosen, j], U & ~cover[j], A & ~conflict[j], False)
            if r is not None:
                return r
            A &= ~(1 << j)
        return None

    if sys.getrecursionlimit() < t + 200:
        sys.setrecursionlimit(t + 200)
    return rec([], (1 << p.n_items) - 1, (1 << len(cover)) - 1, True)


def _greedy_cover(p: _Cover) -> list[int]:
    """Repeatedly take the available chooser hitting the most unhit items."""
    U = (1 << p.n_items) - 1
    A = (1 << len(p.cover)) - 1
    chosen = []
    while U:
        best_j, best_g = -1, 0
        for j in _bits(A):
            gj = (p.cover[j] & U).bit_count()
            if gj > best_g:
                best_j, best_g = j, gj
        if best_j < 0:
            raise RuntimeError("greedy cover got stuck")
        chosen.append(best_j)
        U &= ~p.cover[best_j]
        A &= ~p.conflict[best_j]
    return chosen


def _minimize(quantity: str, p: _Cover, start: list[int], budget: Optional[Budget],
              sym_depth: int = 0, extra_lb: int = 0) -> SolveResult:
    clock = _Clock(budget)
    best = sorted(start)
    full_U = (1 << p.n_items) - 1
    root = _lower_bound(p, full_U, (1 << len(p.cover)) - 1)
    if root is None:
        raise ValueError("instance has no feasible cover")
    root = max(root, extra_lb)
    lo = root
    status = OPTIMAL
    try:
        t = lo
        while t < len(best):
            r = _threshold_search(p, t, clock, sym_depth)
            if r is not None:
                best = sorted(r)
                break
            lo = t + 1
            t += 1
    except _OutOfBudget:
        status = BOUNDS_ONLY
    if lo >= len(best):
        status = OPTIMAL
        lo = len(best)
    return SolveResult(quantity, len(best), status, lo, len(best), best, clock.nodes, clock.elapsed,
                       {"root_lower_bound": root})


def _symmetry_perms(table: CopyTable, symmetry, kind: str):
    if not symmetry:
        return None
    sym = symmetry if isinstance(symmetry, Symmetry) else Symmetry(table)
    return sym.copy_perms if kind == "copy" else sym.edge_perms


def heuristic_cl(table: CopyTable, tries: int = 32, seed: int = 0) -> list[int]:
    """Best maximal packing among max-gain greedy, id-order greedy and
    ``tries`` seeded random greedy orders."""
    nbr = table.closed_neighborhoods()
    p = _Cover(len(table), nbr, nbr, nbr)
    best = _greedy_cover(p)
    empty = Packing(table)
    rng = random.Random(seed)
    order = list(range(len(table)))
    for i in range(tries + 1):
        got = greedy_maximalize(empty, order).members
        if len(got) < len(best):
            best = list(got)
        rng.shuffle(order)
    return sorted(best)


def transversal_lower_bound(table: CopyTable, nodes: int = TRANSVERSAL_NODES) -> int:
    """ceil(tau / ||H||) for a proven lower bound tau on the fewest edges
    meeting every copy.  Both a maximal packing and a blocking set of
    copies cover such an edge set, at most ||H|| edges per copy."""
    if len(table) == 0:
        return 0
    tau = table.host.m - solve_ex(table, Budget(nodes=nodes)).hi
    return -(-tau // table.copy_size)


def solve_cl(table: CopyTable, budget: Optional[Budget] = None,
             symmetry: Union[bool, Symmetry, None] = False, sym_depth: int = 3,
             incumbent: Optional[Sequence[int]] = None) -> SolveResult:
    """Minimum size of a maximal packing.

    ``symmetry`` enables orbit pruning with the host automorphism group
    (K_n and Q_n hosts only) for the first ``sym_depth`` levels.
    """
    if len(table) == 0:
        return SolveResult("cl", 0, OPTIMAL, 0, 0, [])
    nbr = table.closed_neighborhoods()
    perms = _symmetry_perms(table, symmetry, "copy")
    p = _Cover(len(table), nbr, nbr, nbr, perms)
    start = heuristic_cl(table)
    if incumbent is not None and len(incumbent) < len(start):
        inc = Packing(table, incumbent)
        if not (inc.is_disjoint() and all(m & inc.covered for m in table.masks)):
            raise ValueError("incumbent is not a maximal packing")
        start = list(inc.members)
    return _minimize("cl", p, start, budget, sym_depth if perms else 0, transversal_lower_bound(table))


def solve_cov(table: CopyTable, budget: Optional[Budget] = None,
              symmetry: Union[bool, Symmetry, None] = False, sym_depth: int = 3) -> SolveResult:
    """Fewest copies (overlaps allowed) meeting every copy in an edge."""
    if len(table) == 0:
        return SolveResult("cov", 0, OPTIMAL, 0, 0, [])
    nbr = table.closed_neighborhoods()
    selfs = [1 << i for i in range(len(table))]
    perms = _symmetry_perms(table, symmetry, "copy")
    p = _Cover(len(table), nbr, nbr, selfs, perms)
    return _minimize("cov", p, _greedy_cover(p), budget, sym_depth if perms else 0,
                     transversal_lower_bound(table))


def solve_ex(table: CopyTable, budget: Optional[Budget] = None,
             symmetry: Union[bool, Symmetry, None] = False, sym_depth: int = 3) -> SolveResult:
    """Largest H-free edge subset, via a minimum edge set hitting all copies.

    The witness lists the kept edges.
    """
    m = table.host.m
    if len(table) == 0:
        return SolveResult("ex", m, OPTIMAL, m, m, list(range(m)))
    inc = table.incidence_masks()
    perms = _symmetry_perms(table, symmetry, "edge")
    p = _Cover(len(table), list(inc), list(table.masks), [1 << e for e in range(m)], perms)
    r = _minimize("ex", p, _greedy_cover(p), budget, sym_depth if perms else 0)
    hit = set(r.witness)
    kept = [e for e in range(m) if e not in hit]
    info = dict(r.info, hitting_set=sorted(hit))
    return SolveResult("ex", m - r.value, r.status, m - r.hi, m - r.lo, kept, r.nodes, r.elapsed, info)


# ---------------------------------------------------------------------------
# maximum packing


def _color_classes(P: int, conflict: Sequence[int]) -> tuple[list[int], list[int]]:
    """Greedy partition of P into classes of pairwise-conflicting copies.

    Returns copies in class order and, for each, the number of classes up
    to and including its own.  A packing drawn from a prefix of this list
    can use at most one copy per class.
    """
    order, colors = [], []
    k = 0
    while P:
        k += 1
        Q = P
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            P &= ~low
            Q &= conflict[v] & ~low
            order.append(v)
            colors.append(k)
    return order, colors


def solve_pp(table: CopyTable, budget: Optional[Budget] = None) -> SolveResult:
    """Maximum number of pairwise edge-disjoint copies.

    Maximum clique in the compatibility graph (copies adjacent when
    edge-disjoint), with greedy colouring bounds.
    """
    C = len(table)
    if C == 0:
        return SolveResult("pp", 0, OPTIMAL, 0, 0, [])
    clock = _Clock(budget)
    nbr = table.closed_neighborhoods()
    masks = table.masks
    h = table.copy_size
    full = (1 << C) - 1
    conflict = [nbr[c] & ~(1 << c) for c in range(C)]
    compat = [full & ~nbr[c] for c in range(C)]

    def edge_bound(P: int) -> int:
        union = 0
        for c in _bits(P):
            union |= masks[c]
        return union.bit_count() // h

    best = list(greedy_maximalize(Packing(table)).members)
    order0, col0 = _color_classes(full, conflict)
    root_ub = min(col0[-1], edge_bound(full))

    def expand(chosen: list[int], P: int) -> None:
        nonlocal best
        clock.tick()
        if len(chosen) + edge_bound(P) <= len(best):
            return
        order, colors = _color_classes(P, conflict)
        for i in range(len(order) - 1, -1, -1):
            if len(chosen) + colors[i] <= len(best) or len(best) >= root_ub:
                return
            v = order[i]
            chosen.append(v)
            sub = P & compat[v]
            if sub:
                expand(chosen, sub)
            elif len(chosen) > len(best):
                best = list(chosen)
            chosen.pop()
            P &= ~(1 << v)

    status = OPTIMAL
    if sys.getrecursionlimit() < C + 200:
        sys.setrecursionlimit(C + 200)
    try:
        expand([], full)
    except _OutOfBudget:
        status = BOUNDS_ONLY
    hi = len(best) if status == OPTIMAL else root_ub
    if hi == len(best):
        status = OPTIMAL
    return SolveResult("pp", len(best), status, len(best), hi, sorted(best), clock.nodes, clock.elapsed,
                       {"root_upper_bound": root_ub})


def solve(table: CopyTable, quantity: str, budget: Optional[Budget] = None, symmetry=False) -> SolveResult:
    if quantity == "cl":
        return solve_cl(table, budget, symmetry=symmetry)
    if quantity == "cov":
        return solve_cov(table, budget, symmetry=symmetry)
    if quantity == "ex":
        return solve_ex(table, budget, symmetry=symmetry)
    if quantity == "pp":
        return solve_pp(table, budget)
    raise ValueError(f"unknown quantity {quantity!r}")


# ---------------------------------------------------------------------------
# exhaustive oracle


class OracleCapExceeded(RuntimeError):
    pass


def oracle_enumerate(table: CopyTable, quantity: str, cap: int = ORACLE_CAP) -> SolveResult:
    """Ground truth by trying subsets in order of size, straight from the
    definitions (edge sets as Python sets, no shared code with the solvers).

    ``cap`` bounds the number of subsets examined.
    """
    t0 = time.monotonic()
    copies = [frozenset(c) for c in table.copies]
    C = len(copies)
    examined = 0

    def tick():
        nonlocal examined
        examined += 1
        if examined > cap:
            raise OracleCapExceeded(f"oracle examined more than {cap} subsets")

    def disjoint(sub):
        seen = set()
        for i in sub:
            if seen & copies[i]:
                return False
            seen |= copies[i]
        return True

    def blocks_all(sub):
        cov = set().union(*(copies[i] for i in sub)) if sub else set()
        return all(c & cov for c in copies)

    def done(value, witness):
        return SolveResult(quantity, value, OPTIMAL, value, value, sorted(witness), examined,
                           time.monotonic() - t0, {"oracle": True})

    if quantity in ("cl", "cov"):
        for k in range(C + 1):
            for sub in combinations(range(C), k):
                tick()
                if (quantity == "cov" or disjoint(sub)) and blocks_all(sub):
                    return done(k, sub)
        raise AssertionError("no maximal packing found")
    if quantity == "pp":
        if C == 0:
            return done(0, ())
        top = min(C, table.host.m // table.copy_size)
        for k in range(top, 0, -1):
            for sub in combinations(range(C), k):
                tick()
                if disjoint(sub):
                    return done(k, sub)
        return done(0, ())
    if quantity == "ex":
        m = table.host.m
        relevant = sorted(set().union(*copies)) if copies else []
        for k in range(len(relevant) + 1):
            for hs in combinations(relevant, k):
                tick()
                s = set(hs)
                if all(c & s for c in copies):
                    kept = [e for e in range(m) if e not in s]
                    r = done(m - k, kept)
                    r.info["hitting_set"] = sorted(s)
                    return r
    raise ValueError(f"unknown quantity {quantity!r}")
