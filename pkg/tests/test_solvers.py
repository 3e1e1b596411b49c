import json
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import Bounds, LinearConstraint, milp

from clumsy.copies import enumerate_copies, enumerate_subcubes
from clumsy.graph import (
    Graph,
    GridSpec,
    make_complete,
    make_cycle,
    make_grid_section,
    make_monotonicity_gadget,
    make_path,
    make_turan,
)
from clumsy.packing import Packing, check_maximal, check_packing
from clumsy.solvers import (
    BOUNDS_ONLY,
    OPTIMAL,
    QUANTITIES,
    Budget,
    OracleCapExceeded,
    heuristic_cl,
    oracle_enumerate,
    solve,
    solve_cl,
    solve_cov,
    solve_ex,
    solve_pp,
    transversal_lower_bound,
)

# an 11-vertex graph where cl(G,P3)=10 but the covering bounds alone give 5;
# the optimum was confirmed once with milp_value and frozen (HiGHS needs ~15 s)
HARD_P3_CL = 10
HARD_P3_COV = 10
# largest square-free subgraph of Q5, also from milp_value
EX_Q5_Q2 = 56
HARD_P3 = Graph(11, [(0, 1), (0, 2), (0, 4), (0, 5), (0, 6), (0, 7), (1, 2), (1, 5), (1, 6), (2, 3), (2, 4),
                     (2, 5), (2, 6), (2, 10), (3, 4), (3, 5), (3, 7), (4, 6), (4, 8), (4, 9), (4, 10), (5, 6),
                     (5, 7), (5, 8), (5, 10)])


def milp_value(table, quantity):
    """Independent optimum via a 0/1 integer program (HiGHS)."""
    N, m = len(table), table.host.m
    if quantity == "ex":
        # minimum edge set hitting every copy
        A = np.zeros((N, m))
        for i, c in enumerate(table.copies):
            A[i, list(c)] = 1
        res = milp(np.ones(m), constraints=LinearConstraint(A, 1, np.inf), integrality=np.ones(m),
                   bounds=Bounds(0, 1))
        return m - round(res.fun)
    nbr = table.closed_neighborhoods()
    dom = np.array([[nbr[i] >> j & 1 for j in range(N)] for i in range(N)], dtype=float)
    inc = np.zeros((m, N))
    for e in range(m):
        inc[e, list(table.incidence[e])] = 1
    cons = []
    if quantity in ("cl", "cov"):
        cons.append(LinearConstraint(dom, 1, np.inf))
    if quantity in ("cl", "pp"):
        cons.append(LinearConstraint(inc, 0, 1))
    sign = -1 if quantity == "pp" else 1
    res = milp(sign * np.ones(N), constraints=cons, integrality=np.ones(N), bounds=Bounds(0, 1))
    return round(sign * res.fun)


def check_witness(table, r):
    """Re-verify a solver witness from scratch."""
    if r.quantity == "cl":
        p = r.packing(table)
        assert len(p) == r.hi
        assert check_packing(p).ok and check_maximal(p).ok
    elif r.quantity == "pp":
        p = r.packing(table)
        assert len(p) == r.lo and check_packing(p).ok
    elif r.quantity == "cov":
        chosen = set(r.witness)
        assert len(chosen) == r.hi
        hit = set().union(*(table.copies[i] for i in chosen)) if chosen else set()
        assert all(hit & set(c) for c in table.copies)
    else:
        kept = table.host.edge_subgraph(r.witness)
        assert len(r.witness) == r.lo
        assert len(enumerate_copies(kept, table.pattern)) == 0


def test_hypercube_values():
    q3, q4 = enumerate_subcubes(3, 2), enumerate_subcubes(4, 2)
    assert solve_cl(q3).value == 2
    assert solve_cl(q4).value == 3
    # Q3 is 3-regular and a square uses two edges at each corner, so at most
    # one square per corner pair: pp(Q3,Q2) = 2, not 12/4
    assert solve_pp(q3).value == 2 == oracle_enumerate(q3, "pp").value
    assert solve_cov(q3).value == 2
    assert solve_ex(q3).value == 9 == oracle_enumerate(q3, "ex").value


def test_complete_graph_values():
    k4 = enumerate_copies(make_complete(4), make_complete(3))
    assert [solve(k4, q).value for q in ("cl", "pp", "cov")] == [1, 1, 1]
    assert solve_ex(enumerate_copies(make_complete(5), make_complete(3))).value == 6
    assert solve_ex(enumerate_copies(make_complete(6), make_complete(3))).value == 9
    k7 = enumerate_copies(make_complete(7), make_complete(3))
    assert solve_pp(k7).value == 7
    # independent: maximum clique of the compatibility graph
    comp = nx.complement(nx.Graph([(i, j) for i in range(len(k7)) for j in range(i + 1, len(k7))
                                   if set(k7.copies[i]) & set(k7.copies[j])]))
    assert max(len(c) for c in nx.find_cliques(comp)) == 7


def test_triangle_free_host():
    t = enumerate_copies(make_turan(6, 2)[0], make_complete(3))
    for q in ("cl", "pp", "cov"):
        r = solve(t, q)
        assert r.value == 0 and r.status == OPTIMAL
    assert solve_ex(t).value == 9


@pytest.mark.parametrize("k", [4, 5, 6])
def test_gadget(k):
    gp, g = make_monotonicity_gadget(k)
    h = make_cycle(k)
    assert solve_cl(enumerate_copies(gp, h)).value == 1
    assert solve_cl(enumerate_copies(g, h)).value == k - 1
    assert oracle_enumerate(enumerate_copies(g, h), "cl").value == k - 1


@st.composite
def instances(draw):
    n = draw(st.integers(3, 8))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    g = Graph(n, draw(st.lists(st.sampled_from(pairs), unique=True)))
    h = draw(st.sampled_from([make_complete(3), make_cycle(4), make_path(3), make_cycle(5), make_path(4)]))
    return g, h


@settings(max_examples=80, deadline=None)
@given(instances())
def test_solvers_match_oracle(inst):
    g, h = inst
    t = enumerate_copies(g, h)
    if len(t) > 20:
        return
    for q in QUANTITIES:
        r = solve(t, q)
        assert r.status == OPTIMAL
        assert r.value == oracle_enumerate(t, q).value
        check_witness(t, r)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_solvers_match_milp(seed):
    rng = random.Random(seed)
    n = rng.randint(5, 9)
    g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.45])
    h = rng.choice([make_complete(3), make_cycle(4), make_path(3)])
    t = enumerate_copies(g, h)
    if not len(t):
        return
    for q in QUANTITIES:
        r = solve(t, q)
        assert r.optimal and r.value == milp_value(t, q)
        check_witness(t, r)


@settings(max_examples=40, deadline=None)
@given(instances())
def test_chain(inst):
    g, h = inst
    t = enumerate_copies(g, h)
    v = {q: solve(t, q).value for q in QUANTITIES}
    eq1 = -(-(g.m - v["ex"]) // h.m)
    assert eq1 <= v["cov"] <= v["cl"] <= v["pp"]
    assert transversal_lower_bound(t) <= v["cov"]


def test_hard_p3_instance():
    t = enumerate_copies(HARD_P3, make_path(3))
    r = solve_cl(t)
    assert r.optimal and r.value == HARD_P3_CL
    assert transversal_lower_bound(t) == 10


def test_q5_closed():
    t = enumerate_subcubes(5, 2)
    plain = solve_cl(t)
    sym = solve_cl(t, symmetry=True)
    assert plain.optimal and sym.optimal and plain.value == sym.value == 8
    assert sym.nodes < plain.nodes
    check_witness(t, sym)
    assert solve_cov(t, symmetry=True).value == 8


def test_q5_against_milp():
    t = enumerate_subcubes(5, 2)
    assert milp_value(t, "cl") == 8
    assert milp_value(t, "cov") == 8
    assert milp_value(t, "ex") == EX_Q5_Q2


@pytest.mark.parametrize("quantity", ["cl", "cov", "ex"])
def test_tiny_budget_gives_honest_bounds(quantity):
    t = enumerate_copies(HARD_P3, make_path(3)) if quantity != "ex" else enumerate_subcubes(5, 2)
    r = solve(t, quantity, Budget(nodes=5))
    exact = {"cl": HARD_P3_CL, "cov": HARD_P3_COV, "ex": EX_Q5_Q2}[quantity]
    assert r.lo <= exact <= r.hi
    if r.status == BOUNDS_ONLY:
        assert r.lo < r.hi
    check_witness(t, r)


def test_pp_budget():
    t = enumerate_subcubes(5, 2)
    r = solve_pp(t, Budget(nodes=3))
    assert r.lo <= 16 <= r.hi
    check_witness(t, r)


def test_symmetry_needs_known_group():
    t = enumerate_copies(HARD_P3, make_path(3))
    with pytest.raises(Exception):
        solve_cl(t, symmetry=True)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_symmetry_agrees_on_complete(n):
    t = enumerate_copies(make_complete(n), make_complete(3))
    for solver in (solve_cl, solve_cov):
        assert solver(t, symmetry=True).value == solver(t).value


def test_deterministic():
    t = enumerate_copies(make_grid_section(GridSpec(4, 4)), make_cycle(4))
    a = [solve(t, q).to_json(timing=False) for q in QUANTITIES]
    b = [solve(t, q).to_json(timing=False) for q in QUANTITIES]
    assert json.dumps(a) == json.dumps(b)


def test_result_json():
    r = solve_cl(enumerate_subcubes(3, 2))
    d = r.to_json()
    assert {"quantity", "value", "status", "lo", "hi", "witness", "nodes", "millis"} <= set(d)
    assert "millis" not in r.to_json(timing=False)


def test_incumbent():
    t = enumerate_subcubes(4, 2)
    best = solve_cl(t)
    assert solve_cl(t, incumbent=best.witness).value == best.value
    with pytest.raises(ValueError):
        solve_cl(t, incumbent=[0])


def test_heuristic_is_maximal():
    t = enumerate_copies(HARD_P3, make_path(3))
    p = Packing(t, heuristic_cl(t))
    assert check_maximal(p).ok


def test_oracle_cap():
    t = enumerate_copies(make_complete(7), make_complete(3))
    with pytest.raises(OracleCapExceeded):
        oracle_enumerate(t, "cl", cap=100)
    assert oracle_enumerate(enumerate_subcubes(3, 2), "cl").info["oracle"]
