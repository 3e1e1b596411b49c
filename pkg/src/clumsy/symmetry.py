"""Host automorphisms for vertex-transitive generator families.

Only K_n (symmetric group) and Q_n (hyperoctahedral group) are supported;
their groups are known in closed form, so no automorphism search is done.
Groups are materialised as explicit permutation lists, which is practical
up to a few tens of thousands of elements.
"""

from __future__ import annotations

from itertools import permutations
from math import factorial
from typing import Optional

from .copies import CopyTable
from .graph import Graph

DEFAULT_GROUP_CAP = 50_000


class SymmetryUnavailable(ValueError):
    pass


def group_order(g: Graph) -> Optional[int]:
    fam = g.family
    if not fam:
        return None
    if fam[0] == "complete":
        return factorial(fam[1])
    if fam[0] == "hypercube":
        return factorial(fam[1]) << fam[1]
    return None


def vertex_automorphisms(g: Graph, cap: int = DEFAULT_GROUP_CAP) -> list[tuple[int, ...]]:
    order = group_order(g)
    if order is None:
        raise SymmetryUnavailable(f"no known automorphism group for {g!r}")
    if order > cap:
        raise SymmetryUnavailable(f"group of order {order} exceeds cap {cap}")
    name, n = g.family[0], g.family[1]
    if name == "complete":
        return [tuple(p) for p in permutations(range(n))]
    out = []
    N = 1 << n
    for sigma in permutations(range(n)):
        base = []
        for v in range(N):
            w = 0
            for i in range(n):
                if v >> i & 1:
                    w |= 1 << sigma[i]
            base.append(w)
        for flip in range(N):
            out.append(tuple(b ^ flip for b in base))
    return out


class Symmetry:
    """A host automorphism group acting on edge ids and copy ids of a table."""

    def __init__(self, table: CopyTable, cap: int = DEFAULT_GROUP_CAP):
        host = table.host
        vperms = vertex_automorphisms(host, cap)
        eidx = host.edge_index
        self.edge_perms: list[tuple[int, ...]] = []
        self.copy_perms: list[tuple[int, ...]] = []
        for p in vperms:
            ep = tuple(eidx[(p[u], p[v]) if p[u] < p[v] else (p[v], p[u])] for u, v in host.edges)
            cp = []
            for c in table.copies:
                j = table.find(ep[e] for e in c)
                if j is None:
                    raise SymmetryUnavailable("copy table is not invariant under the host group")
                cp.append(j)
            self.edge_perms.append(ep)
            self.copy_perms.append(tuple(cp))

    def __len__(self) -> int:
        return len(self.copy_perms)

    def is_transitive_on_copies(self) -> bool:
        if not self.copy_perms:
            return True
        return len({p[0] for p in self.copy_perms}) == len(self.copy_perms[0])


def set_stabilizer(perms: list[tuple[int, ...]], chosen: list[int]) -> list[tuple[int, ...]]:
    s = set(chosen)
    return [p for p in perms if all(p[c] in s for c in chosen)]


def orbit_representatives(perms: list[tuple[int, ...]], candidates: list[int]) -> list[int]:
    """First candidate of every orbit that meets ``candidates`` (order kept)."""
    seen: set[int] = set()
    reps = []
    for c in candidates:
        if c in seen:
            continue
        reps.append(c)
        seen.update(p[c] for p in perms)
    return reps
