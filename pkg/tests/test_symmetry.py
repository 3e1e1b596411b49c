from math import factorial

import pytest

from clumsy.copies import enumerate_copies, enumerate_subcubes
from clumsy.graph import Graph, make_complete, make_cycle, make_hypercube
from clumsy.symmetry import (
    Symmetry,
    SymmetryUnavailable,
    group_order,
    orbit_representatives,
    set_stabilizer,
    vertex_automorphisms,
)


@pytest.mark.parametrize("g,order", [(make_complete(4), 24), (make_complete(6), 720),
                                     (make_hypercube(3), 48), (make_hypercube(4), 384)])
def test_groups_are_automorphisms(g, order):
    perms = vertex_automorphisms(g)
    assert len(perms) == len(set(perms)) == order == group_order(g)
    edges = set(g.edges)
    for p in perms:
        assert sorted(p) == list(range(g.n))
        assert {tuple(sorted((p[u], p[v]))) for u, v in g.edges} == edges


def test_hyperoctahedral_order():
    for n in range(1, 6):
        assert group_order(make_hypercube(n)) == factorial(n) * 2 ** n


def test_unavailable():
    with pytest.raises(SymmetryUnavailable):
        vertex_automorphisms(Graph(4, [(0, 1), (1, 2), (2, 3)]))
    with pytest.raises(SymmetryUnavailable):
        vertex_automorphisms(make_complete(9))


def test_copy_action():
    t = enumerate_subcubes(4, 2)
    sym = Symmetry(t)
    assert len(sym) == 384
    for p in sym.copy_perms:
        assert sorted(p) == list(range(len(t)))
    assert sym.is_transitive_on_copies()
    # the action respects edge membership
    for ep, cp in zip(sym.edge_perms[:50], sym.copy_perms[:50]):
        for i, c in enumerate(t.copies):
            assert sorted(ep[e] for e in c) == list(t.copies[cp[i]])


def test_k5_c4_transitive():
    sym = Symmetry(enumerate_copies(make_complete(5), make_cycle(4)))
    assert sym.is_transitive_on_copies()


def test_stabilizer_and_orbits():
    sym = Symmetry(enumerate_subcubes(3, 2))
    perms = sym.copy_perms
    assert orbit_representatives(perms, list(range(6))) == [0]
    stab = set_stabilizer(perms, [0])
    assert len(stab) == 8
    reps = orbit_representatives(stab, list(range(1, 6)))
    # fixing one face leaves its opposite face and the four adjacent ones
    assert len(reps) == 2
