from fractions import Fraction

import pytest

from clumsy.constructions import (
    GRID_PATTERN,
    HYPERCUBE_LAYERS,
    TURAN_CLIQUE,
    _in_lattice,
    _pattern_tiles,
    _tiles_neighborhood,
    check_divisibility,
    construct_grid_pattern,
    construct_kn_km,
    construct_qn_q2_layers,
    gadget_lower_bound,
    hexagon_flower_lattice,
    pattern_density,
    pattern_seed,
    render_svg,
)
from clumsy.copies import enumerate_copies, enumerate_subcubes
from clumsy.graph import GridSpec, make_complete, make_cycle, make_grid_section, make_hypercube
from clumsy.packing import Packing, check_maximal, check_packing
from clumsy.solvers import solve_cl


def assert_certified(rep):
    assert check_packing(rep.packing).ok
    assert check_maximal(rep.packing).ok
    assert rep.certificate.ok


def test_divisibility():
    r = check_divisibility(make_complete(7), make_complete(3))
    assert r.divisible and (r.gcd_G, r.gcd_H, r.edges_G, r.edges_H) == (6, 2, 21, 3)
    assert not check_divisibility(make_complete(6), make_complete(3)).divisible
    for m in (3, 4):
        for n in range(m, 40):
            if n % (m * (m - 1)) == 1:
                assert check_divisibility(make_complete(n), make_complete(m)).divisible


@pytest.mark.parametrize("n,size", [(6, 2), (14, 14)])
def test_turan_construction_exact(n, size):
    rep = construct_kn_km(n, 3)
    assert_certified(rep)
    assert rep.construction == TURAN_CLIQUE
    assert rep.size == size == rep.predicted_size
    assert rep.boundary_added == 0
    assert all(p["uncovered_edges"] == 0 for p in rep.details["parts"])


def test_turan_construction_with_surplus():
    rep = construct_kn_km(7, 3)
    assert_certified(rep)
    assert rep.predicted_size == Fraction(21 - 12, 3)
    assert rep.boundary_added > 0
    assert rep.size >= solve_cl(enumerate_copies(make_complete(7), make_complete(3))).value


@pytest.mark.parametrize("n,m", [(5, 3), (6, 4), (8, 3), (9, 4)])
def test_turan_construction_is_upper_bound(n, m):
    rep = construct_kn_km(n, m)
    assert_certified(rep)
    # divisible-part instances hit the prediction exactly
    if all(p["uncovered_edges"] == 0 for p in rep.details["parts"]):
        assert rep.boundary_added == 0 and rep.size == rep.predicted_size
    if n <= 7:
        assert rep.size >= solve_cl(enumerate_copies(make_complete(n), make_complete(m))).value


def test_layers_small():
    rep = construct_qn_q2_layers(2)
    assert rep.size == 1 and rep.packing.covered.bit_count() == 4
    rep4 = construct_qn_q2_layers(4)
    assert_certified(rep4)
    assert rep4.construction == HYPERCUBE_LAYERS
    assert rep4.size >= solve_cl(enumerate_subcubes(4, 2)).value == 3


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_layers_ratio(n):
    rep = construct_qn_q2_layers(n)
    assert_certified(rep)
    edges = make_hypercube(n).m
    ratio = Fraction(rep.size * 4, edges)
    assert rep.details["ratio_to_perfect"] == ratio
    if n >= 4:
        assert ratio <= Fraction(3, 4)
    # (2/3) ||Q_6|| / ||Q_2|| = 32 and the construction meets it with no slack
    if n == 6:
        assert rep.size == 32


@pytest.mark.parametrize("residue", [0, 1, 2])
def test_layers_fixed_residue(residue):
    rep = construct_qn_q2_layers(5, residue=residue)
    assert_certified(rep)
    assert rep.parameters["residue"] == residue


def test_gadget_bounds():
    assert gadget_lower_bound(3) == Fraction(1, 2)
    assert gadget_lower_bound(6) == Fraction(2, 7)
    assert gadget_lower_bound(4, 2) == Fraction(2, 5) == pattern_density(4, 2)
    for d in range(3, 8):
        # the two bounds separate once d > 2
        assert gadget_lower_bound(4, d) < pattern_density(4, d)
    for k in (3, 6):
        assert pattern_density(k) == Fraction(2, k + 1) == gadget_lower_bound(k)


def test_square_lattice_density():
    for d in (2, 3, 4):
        s = 2 * d - 2
        det = s * s + 1
        basis = ((s, 1), (1, -s))
        for x0, y0 in ((0, 0), (3, 7), (-5, 2)):
            pts = sum(_in_lattice((x, y), basis) for x in range(x0, x0 + det) for y in range(y0, y0 + det))
            assert pts == det
    # d = 2: one block per 5 unit cells, counted on the n=20 section interior
    corners = [t[0] for t in _pattern_tiles(GridSpec(4, 20), 2)]
    window = [c for c in corners if 5 <= c[0] < 15 and 5 <= c[1] < 15]
    assert len(window) == 20


def test_hexagon_lattice():
    basis = hexagon_flower_lattice()
    assert _tiles_neighborhood(basis)
    (a, b), (c, d) = basis
    assert abs(a * d - b * c) == 7


def test_triangular_tiles_disjoint_and_blocking():
    spec = GridSpec(3, 12)
    host = make_grid_section(spec)
    table = enumerate_copies(host, make_cycle(3))
    seed = Packing(table, pattern_seed(spec, table))
    assert check_packing(seed).ok
    # every unit triangle away from the boundary meets a chosen one
    for i, c in enumerate(table.copies):
        xs = [host.coords[v] for v in table.vertex_set(i)]
        if all(2 <= x <= 10 and 2 <= y <= 10 * 0.866 for x, y in xs):
            assert table.masks[i] & seed.covered


@pytest.mark.parametrize("k", [3, 4, 6])
def test_grid_pattern_density(k):
    rep = construct_grid_pattern(GridSpec(k, 20), 2)
    assert_certified(rep)
    assert rep.construction == GRID_PATTERN
    frac = rep.details["central_window_fraction"]
    assert abs(frac - Fraction(2, k + 1)) <= Fraction(1, 20)
    if k == 4:
        assert abs(rep.size - 80) <= 8


@pytest.mark.parametrize("d", [3, 4])
def test_square_blocks_larger(d):
    rep = construct_grid_pattern(GridSpec(4, 24), d)
    assert_certified(rep)
    assert rep.details["pattern_density"] == pattern_density(4, d)
    assert rep.details["lower_bound_density"] == gadget_lower_bound(4, d)
    assert rep.details["central_window_fraction"] >= gadget_lower_bound(4, d) - Fraction(1, 20)


@pytest.mark.parametrize("k,n", [(4, 3), (4, 4), (6, 4), (3, 3)])
def test_grid_pattern_small_is_upper_bound(k, n):
    rep = construct_grid_pattern(GridSpec(k, n), 2)
    assert_certified(rep)
    t = enumerate_copies(make_grid_section(GridSpec(k, n)), make_cycle(k))
    assert rep.size >= solve_cl(t).value


def test_tiny_section_falls_back_to_solver():
    rep = construct_grid_pattern(GridSpec(4, 2), 3)
    assert_certified(rep)
    assert rep.details.get("fallback") == "exact_solver"


def test_completion_orders_certified():
    for completion in ("lex", "max_gain"):
        assert_certified(construct_grid_pattern(GridSpec(6, 10), completion=completion))
        assert_certified(construct_qn_q2_layers(4, completion=completion))


def test_report_json_and_svg():
    rep = construct_grid_pattern(GridSpec(6, 8))
    d = rep.to_json()
    assert d["construction"] == GRID_PATTERN and d["certificate"]["kind"] == "maximal"
    svg = render_svg(rep.packing)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_bad_parameters():
    with pytest.raises(ValueError):
        construct_kn_km(3, 4)
    with pytest.raises(ValueError):
        construct_grid_pattern(GridSpec(4, 10), 1)
