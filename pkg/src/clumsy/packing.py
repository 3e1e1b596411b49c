"""Packings, validity/maximality certificates and greedy completion."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .copies import CopyTable, mask_to_ids

VALID = "valid_packing"
INVALID = "invalid_overlap"
MAXIMAL = "maximal"
NOT_MAXIMAL = "not_maximal"


class PackingError(ValueError):
    pass


class Packing:
    """A set of copy ids from ``table`` with its covered-edge mask.

    Construction does not insist on edge-disjointness so that invalid
    packings can be read from files and certified as such.
    """

    __slots__ = ("table", "members", "covered")

    def __init__(self, table: CopyTable, members: Iterable[int] = ()):
        ms = tuple(sorted(set(members)))
        for i in ms:
            if not 0 <= i < len(table):
                raise PackingError(f"copy index {i} out of range (table has {len(table)} copies)")
        self.table = table
        self.members = ms
        cov = 0
        for i in ms:
            cov |= table.masks[i]
        self.covered = cov

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, i) -> bool:
        return i in self.members

    def __repr__(self) -> str:
        return f"<Packing {len(self.members)} copies, {self.covered.bit_count()} edges covered>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Packing) and other.table is self.table and other.members == self.members

    def __hash__(self) -> int:
        return hash(self.members)

    def is_disjoint(self) -> bool:
        return self.covered.bit_count() == len(self.members) * self.table.copy_size

    def covered_edges(self) -> list[int]:
        return mask_to_ids(self.covered)

    def with_members(self, extra: Iterable[int]) -> "Packing":
        return Packing(self.table, self.members + tuple(extra))


@dataclass(frozen=True)
class Certificate:
    kind: str
    witness: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.kind in (VALID, MAXIMAL)

    def to_json(self) -> dict:
        return {"kind": self.kind, "witness": dict(self.witness)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def check_packing(p: Packing) -> Certificate:
    owner: dict[int, int] = {}
    for i in p.members:
        for e in p.table.copies[i]:
            j = owner.get(e)
            if j is not None:
                return Certificate(INVALID, {"members": [j, i], "edge": e})
            owner[e] = i
    return Certificate(VALID)


def check_maximal(p: Packing) -> Certificate:
    """``maximal`` iff every copy in the table shares an edge with a member.

    Only copies through uncovered edges can be disjoint from the packing,
    so those are the only ones inspected.
    """
    cert = check_packing(p)
    if not cert.ok:
        raise PackingError(f"not a valid packing: {cert.witness}")
    t, cov = p.table, p.covered
    checked = set()
    for e in range(t.host.m):
        if cov >> e & 1:
            continue
        for c in t.incidence[e]:
            if c in checked:
                continue
            checked.add(c)
            if not t.masks[c] & cov:
                return Certificate(NOT_MAXIMAL, {"copy": c, "edges": list(t.copies[c])})
    return Certificate(MAXIMAL)


def recheck_certificate(p: Packing, cert: Certificate) -> bool:
    """Verify a certificate's witness directly against the table."""
    t = p.table
    if cert.kind == INVALID:
        a, b = cert.witness["members"]
        e = cert.witness["edge"]
        return a in p and b in p and a != b and e in t.copies[a] and e in t.copies[b]
    if cert.kind == NOT_MAXIMAL:
        c = cert.witness["copy"]
        return c not in p and not t.masks[c] & p.covered
    if cert.kind == VALID:
        return p.is_disjoint()
    if cert.kind == MAXIMAL:
        return p.is_disjoint() and all(m & p.covered for m in t.masks)
    return False


def greedy_maximalize(p: Packing, order: Optional[Sequence[int]] = None) -> Packing:
    """Extend ``p`` by scanning ``order`` (default: copy id order) and adding
    each copy disjoint from everything chosen so far."""
    if not check_packing(p).ok:
        raise PackingError("greedy completion needs a valid packing")
    t = p.table
    if order is None:
        order = range(len(t))
    elif sorted(order) != list(range(len(t))):
        raise PackingError("order must be a permutation of the copy ids")
    cov = p.covered
    added = []
    for c in order:
        m = t.masks[c]
        if not m & cov:
            cov |= m
            added.append(c)
    return p.with_members(added) if added else p


def max_gain_order(p: Packing) -> list[int]:
    """A copy order for :func:`greedy_maximalize` that mimics adaptive
    selection: repeatedly take the addable copy blocking the most
    still-addable copies (ties to the lowest id), then list the rest."""
    t = p.table
    nbr = t.closed_neighborhoods()
    open_ = 0
    for i, m in enumerate(t.masks):
        if not m & p.covered:
            open_ |= 1 << i
    picks = []
    while open_:
        best, gain = -1, -1
        for c in mask_to_ids(open_):
            g = (nbr[c] & open_).bit_count()
            if g > gain:
                best, gain = c, g
        picks.append(best)
        open_ &= ~nbr[best]
    chosen = set(picks)
    return picks + [c for c in range(len(t)) if c not in chosen]


def covered_fraction(p: Packing) -> Fraction:
    m = p.table.host.m
    if m == 0:
        raise ZeroDivisionError("host graph has no edges")
    return Fraction(p.covered.bit_count(), m)


def export_packing(p: Packing) -> str:
    return "".join(f"m {i}\n" for i in p.members)


def parse_packing(text: str, table: CopyTable) -> Packing:
    members = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] != "m" or len(tok) != 2:
            raise PackingError(f"line {lineno}: expected 'm <copy_id>', got {raw.strip()!r}")
        try:
            members.append(int(tok[1]))
        except ValueError:
            raise PackingError(f"line {lineno}: non-integer copy id") from None
    if len(set(members)) != len(members):
        raise PackingError("packing file lists a copy twice")
    return Packing(table, members)
