"""The heapification / groupification functor pair on finite structures.

heapify sends a group to the ternary product x * y^-1 * z pointed at the
identity; groupify recovers a group from a pointed heap via [x, e, y] and
[e, x, e].  On finite structures the two are mutually inverse on the nose,
and basepoint-preserving heap homomorphisms coincide with group
homomorphisms.
"""

from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .core import (
    FiniteSemiheap,
    LawError,
    PointedSemiheap,
    TernaryTable,
    is_biunitary,
    is_heap,
    is_homomorphism,
)
from .groups import FiniteGroup, is_group_hom


class BudgetExceeded(RuntimeError):
    """Raised instead of returning a partial enumeration result."""


def heapify(g):
    """The pointed heap of a group: [x,y,z] = x * y^-1 * z, basepoint e."""
    m1 = g.mul[:, g.inv]                      # m1[x,y] = x * y^-1
    cube = g.mul[m1]                          # cube[x,y,z] = (x * y^-1) * z
    s = FiniteSemiheap(TernaryTable(cube), _certified=True)
    assert is_heap(s), "heapification of a validated group must be a heap"
    return PointedSemiheap(s, g.e)


@dataclass(frozen=True)
class GroupAxiomWitness:
    """Diagnostic for groupify on inputs that are not heaps."""

    axiom: str
    witness: tuple


def _groupify_tables(h):
    t = h.table.entries
    e = h.basepoint
    mul = t[:, e, :]
    inv = t[e, :, e]
    return mul, inv


def groupify(h, require_heap=True):
    """The group [x,e,y] with inverse [e,x,e] on a pointed heap.

    With require_heap (the default) the input must be a heap; the output
    always passes full group validation.
    """
    if require_heap and not is_heap(h.semiheap):
        bad = next(x for x in range(h.n) if not is_biunitary(h.semiheap, x))
        raise LawError(f"groupify requires a heap; element {bad} is not biunitary", bad)
    mul, inv = _groupify_tables(h)
    return FiniteGroup(mul, h.basepoint, inv)


def groupify_diagnose(h):
    """Attempt groupification without the heap precondition.

    Returns a FiniteGroup when the construction happens to satisfy the
    group axioms, else a GroupAxiomWitness naming the first failure.
    """
    mul, inv = _groupify_tables(h)
    n = h.n
    e = h.basepoint
    ar = np.arange(n)
    if not (np.array_equal(mul[e], ar) and np.array_equal(mul[:, e], ar)):
        x = next(int(x) for x in range(n) if mul[e, x] != x or mul[x, e] != x)
        return GroupAxiomWitness("identity", (e, x, int(mul[e, x]), int(mul[x, e])))
    bad = mul[mul] != mul[ar[:, None, None], mul[None, :, :]]
    if bad.any():
        a, b, c = np.unravel_index(int(np.argmax(bad)), bad.shape)
        return GroupAxiomWitness("associativity", (int(a), int(b), int(c)))
    for x in range(n):
        if mul[x, inv[x]] != e or mul[inv[x], x] != e:
            return GroupAxiomWitness("inverse", (x, int(inv[x])))
    return FiniteGroup(mul, e, inv)


def transport_group_hom(mapping, g, g2):
    """A group homomorphism reused verbatim as a pointed-heap hom.

    Returns True iff the map is simultaneously a group hom G -> G' and a
    basepoint-preserving semiheap hom between the heapifications.
    """
    f = np.asarray(mapping, dtype=np.int64)
    if not is_group_hom(f, g, g2):
        return False
    h, h2 = heapify(g), heapify(g2)
    return int(f[h.basepoint]) == h2.basepoint and is_homomorphism(f, h.semiheap, h2.semiheap)


@dataclass(frozen=True)
class FullyFaithfulReport:
    """Exhaustive comparison of hom sets between G, G' and their heapifications."""

    maps_checked: int
    group_homs: tuple
    pointed_heap_homs: tuple
    unpointed_heap_homs: tuple

    @property
    def bijective(self):
        return set(self.group_homs) == set(self.pointed_heap_homs)


def check_fully_faithful(g, g2, budget=1_000_000):
    """Enumerate every map G -> G' and classify it.

    The set of group homomorphisms must equal the set of basepoint-
    preserving semiheap homomorphisms between the heapifications; a
    mismatch is an implementation bug, so it raises.  Unpointed semiheap
    homs are reported as well: there are generally more of them.
    """
    total = g2.n ** g.n
    if total > budget:
        raise BudgetExceeded(f"{total} maps exceed the budget of {budget}")
    h, h2 = heapify(g), heapify(g2)
    g_homs, p_homs, u_homs = [], [], []
    for f in iproduct(range(g2.n), repeat=g.n):
        arr = np.array(f, dtype=np.int64)
        if is_group_hom(arr, g, g2):
            g_homs.append(f)
        if is_homomorphism(arr, h.semiheap, h2.semiheap):
            u_homs.append(f)
            if f[h.basepoint] == h2.basepoint:
                p_homs.append(f)
    report = FullyFaithfulReport(total, tuple(g_homs), tuple(p_homs), tuple(u_homs))
    assert report.bijective, "heapification must be fully faithful on pointed homs"
    return report
