"""The acceptance battery: one function per criterion, each returning a
:class:`CriterionResult`.  ``clumsy suite --acceptance`` and
``tests/test_acceptance.py`` both run it."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Optional

from .bounds import eq1_lower_bound, hypercube_counting_lower_bound
from .constructions import construct_grid_pattern, construct_kn_km, construct_qn_q2_layers
from .copies import count_subcubes, edge_subcube_degree, enumerate_copies, enumerate_subcubes
from .graph import (
    Graph,
    GridSpec,
    make_complete,
    make_cycle,
    make_grid_section,
    make_hypercube,
    make_monotonicity_gadget,
    make_path,
    make_turan,
)
from .packing import check_maximal
from .solvers import QUANTITIES, Budget, oracle_enumerate, solve, solve_cl


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"criterion {self.number} {'PASS' if self.passed else 'FAIL'} ({self.seconds:.1f}s) {self.title}: {self.detail}"

    def to_json(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed, "detail": self.detail,
                "data": self.data}


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


# ---------------------------------------------------------------------------


def criterion_1(seed: int = 0) -> CriterionResult:
    want = {3: 2, 4: 3}
    got, times = {}, {}
    for n in want:
        t0 = time.monotonic()
        r = solve_cl(enumerate_subcubes(n, 2), Budget(seconds=60))
        times[n] = time.monotonic() - t0
        got[n] = r.value if r.optimal else None
    ok = got == want and all(t <= 60 for t in times.values())
    detail = ", ".join(f"cl(Q{n},Q2)={got[n]} in {times[n]:.2f}s" for n in want)
    return CriterionResult(1, "exact hypercube values", ok, detail, data={"values": got})


def criterion_2(seed: int = 0) -> CriterionResult:
    table = enumerate_subcubes(5, 2)
    layers = construct_qn_q2_layers(5)
    r = solve_cl(table, Budget(seconds=3600), symmetry=True)
    counting = hypercube_counting_lower_bound(5, 2)
    best = min(layers.size, r.hi)
    # the solver witness is itself a certified maximal packing
    cert = check_maximal(r.packing(table)) if r.witness else layers.certificate
    ok = best <= 8 and cert.ok and r.lo >= counting
    detail = (f"construction {layers.size}, solver {r.status} lo={r.lo} hi={r.hi} "
              f"(counting bound {counting}), witness {cert.kind}")
    return CriterionResult(2, "Q5 frontier", ok, detail,
                           data={"construction": layers.size, "lo": r.lo, "hi": r.hi, "status": r.status})


def oracle_instances(seed: int = 0, limit: int = 20) -> list[tuple[str, Graph, Graph]]:
    """Instances with between 1 and ``limit`` copies, deterministic in seed."""
    out = []

    def add(name, g, h, least=1):
        t = enumerate_copies(g, h)
        if least <= len(t) <= limit:
            out.append((name, g, h, t))

    for n in range(3, 7):
        for m in range(3, n + 1):
            add(f"K{n}/K{m}", make_complete(n), make_complete(m))
    add("K5/C4", make_complete(5), make_cycle(4))
    add("K4/P3", make_complete(4), make_path(3))
    for k, n in ((4, 3), (4, 4), (3, 3), (3, 4), (6, 4), (6, 5)):
        spec = GridSpec(k, n)
        add(f"R{k}({n})/C{k}", make_grid_section(spec), make_cycle(k))
    add("R4(3)/P3", make_grid_section(GridSpec(4, 3)), make_path(3))
    for k in range(3, 7):
        gp, g = make_monotonicity_gadget(k)
        add(f"gadget{k}'/C{k}", gp, make_cycle(k))
        add(f"gadget{k}/C{k}", g, make_cycle(k))
    add("Q3/Q2", make_hypercube(3), make_hypercube(2))
    add("T(6,2)/C4", make_turan(6, 2)[0], make_cycle(4))
    rng = random.Random(seed)
    patterns = [make_complete(3), make_cycle(4), make_path(3), make_cycle(5)]
    tries = 0
    while len(out) < 60 and tries < 5000:
        tries += 1
        n = rng.randint(4, 8)
        h = patterns[tries % len(patterns)]
        # random instances with a handful of copies at least, so they branch
        add(f"G({n},{tries})/{h.n}v{h.m}e", random_graph(n, rng.uniform(0.2, 0.7), rng), h, least=4)
    return out


def criterion_3(seed: int = 0) -> CriterionResult:
    insts = oracle_instances(seed)
    bad = []
    for name, g, h, t in insts:
        for q in QUANTITIES:
            a = solve(t, q)
            b = oracle_enumerate(t, q)
            if not a.optimal or a.value != b.value:
                bad.append(f"{name} {q}: solver {a.value} ({a.status}) oracle {b.value}")
    ok = len(insts) >= 50 and not bad
    detail = f"{len(insts)} instances x 4 quantities, {len(bad)} mismatches"
    if bad:
        detail += "; first: " + bad[0]
    return CriterionResult(3, "oracle equivalence", ok, detail, data={"instances": len(insts), "mismatches": bad})


def criterion_4(seed: int = 0, graphs: int = 200) -> CriterionResult:
    rng = random.Random(seed + 4)
    patterns = {"K3": make_complete(3), "C4": make_cycle(4), "P3": make_path(3)}
    violations, inexact, checked = [], 0, 0
    for i in range(graphs):
        g = random_graph(rng.randint(4, 11), rng.uniform(0.15, 0.55), rng)
        for name, h in patterns.items():
            t = enumerate_copies(g, h)
            res = {q: solve(t, q) for q in QUANTITIES}
            if not all(r.optimal for r in res.values()):
                inexact += 1
                continue
            checked += 1
            eq1 = eq1_lower_bound(g.m, res["ex"].value, h.m)
            chain = (eq1, res["cov"].value, res["cl"].value, res["pp"].value)
            if not chain[0] <= chain[1] <= chain[2] <= chain[3]:
                violations.append(f"graph {i} / {name}: {chain}")
    ok = not violations and not inexact
    detail = f"{checked} instances, {len(violations)} violations, {inexact} not solved exactly"
    return CriterionResult(4, "bound chain", ok, detail, data={"violations": violations})


def criterion_5(seed: int = 0) -> CriterionResult:
    want = {6: 2, 14: 14}
    parts, ok = [], True
    for n, size in want.items():
        rep = construct_kn_km(n, 3)
        cert = check_maximal(rep.packing)
        good = rep.size == size and rep.boundary_added == 0 and cert.ok
        parts.append(f"K{n}: {rep.size} (boundary {rep.boundary_added}, {cert.kind})")
        ok &= good
    r = solve_cl(enumerate_copies(make_complete(6), make_complete(3)))
    ok &= r.optimal and r.value == 2
    parts.append(f"cl(K6,K3)={r.value}")
    return CriterionResult(5, "Turán construction", ok, ", ".join(parts))


def criterion_6(seed: int = 0) -> CriterionResult:
    got, ok = {}, True
    t0 = time.monotonic()
    for k in (4, 5, 6):
        gp, g = make_monotonicity_gadget(k)
        h = make_cycle(k)
        a = solve_cl(enumerate_copies(gp, h))
        b = solve_cl(enumerate_copies(g, h))
        got[k] = (a.value, b.value)
        ok &= a.optimal and b.optimal and a.value == 1 and b.value == k - 1
    ok &= time.monotonic() - t0 <= 300
    detail = ", ".join(f"k={k}: cl(G')={a}, cl(G)={b}" for k, (a, b) in got.items())
    return CriterionResult(6, "non-monotonicity", ok, detail)


def criterion_7(seed: int = 0, n: int = 30) -> CriterionResult:
    parts, ok, data = [], True, {}
    for k in (3, 4, 6):
        rep = construct_grid_pattern(GridSpec(k, n), 2)
        frac = rep.details["central_window_fraction"]
        target = Fraction(2, k + 1)
        good = rep.certificate.ok and abs(frac - target) <= Fraction(1, 20)
        if k == 4:
            good &= abs(rep.size - n * n / 5) <= 0.1 * n * n / 5
        ok &= good
        data[k] = {"size": rep.size, "fraction": float(frac)}
        parts.append(f"k={k}: {rep.size} copies, window {float(frac):.4f} vs {float(target):.4f}")
    return CriterionResult(7, "grid densities", ok, "; ".join(parts), data=data)


def criterion_8(seed: int = 0) -> CriterionResult:
    bad = []
    for n in range(1, 7):
        for d in range(1, min(n, 3) + 1):
            t = enumerate_subcubes(n, d)
            if len(t) != 2 ** (n - d) * comb(n, d) or len(t) != count_subcubes(n, d):
                bad.append(f"count({n},{d})")
            deg = comb(n - 1, d - 1)
            if deg != edge_subcube_degree(n, d) or any(len(inc) != deg for inc in t.incidence):
                bad.append(f"degree({n},{d})")
    return CriterionResult(8, "counting formulas", not bad, "all exact" if not bad else ", ".join(bad))


def criterion_9(seed: int = 0) -> CriterionResult:
    parts, ok = [], True
    for n in (4, 5, 6):
        rep = construct_qn_q2_layers(n)
        ratio = Fraction(rep.size * 4, n * 2 ** (n - 1))
        ok &= rep.certificate.ok and ratio <= Fraction(3, 4)
        parts.append(f"Q{n}: {rep.size} ({float(ratio):.3f})")
    return CriterionResult(9, "layer construction", ok, ", ".join(parts))


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    t0 = time.monotonic()
    try:
        r = CRITERIA[number](seed)
    except Exception as exc:  # a crash is a failure with a reason, not an abort of the battery
        r = CriterionResult(number, "error", False, f"{type(exc).__name__}: {exc}")
    r.seconds = time.monotonic() - t0
    return r


def run_all(only: Optional[list[int]] = None, seed: int = 0) -> list[CriterionResult]:
    return [run_criterion(i, seed) for i in (only or sorted(CRITERIA))]
