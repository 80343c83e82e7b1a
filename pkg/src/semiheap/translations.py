"""Left, right and centric translations as explicit endomaps.

Every translation is materialized as a length-n index array, so endomap
equality and composition are plain array operations: compose(f, g) is
f[g].  The composition laws

    R_{x3 x4} . R_{x1 x2} = R_{x1, [x2,x3,x4]}
    L_{x1 x2} . L_{x3 x4} = L_{[x1,x2,x3], x4}
    L_{x1 x2} . R_{x3 x4} = R_{x3 x4} . L_{x1 x2}

are theorems for any semiheap; the checkers here re-derive them tuple by
tuple as an independent code path.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LawCounterexample:
    law: str
    params: tuple
    point: int
    lhs: int
    rhs: int


def right_endomap(s, x1, x2):
    """R_{x1 x2}: x -> [x, x1, x2]."""
    return s.table.entries[:, x1, x2].copy()


def left_endomap(s, x1, x2):
    """L_{x1 x2}: x -> [x1, x2, x]."""
    return s.table.entries[x1, x2, :].copy()


def centric_endomap(s, x1, x2):
    """C_{x1 x2}: x -> [x1, x, x2]."""
    return s.table.entries[x1, :, x2].copy()


def _first_endomap_diff(law, params, lhs, rhs):
    diff = np.nonzero(lhs != rhs)[0]
    if diff.size == 0:
        return None
    p = int(diff[0])
    return LawCounterexample(law, params, p, int(lhs[p]), int(rhs[p]))


def right_compose_law(s, assert_associativity=True):
    """Check R_{x3x4} . R_{x1x2} = R_{x1,[x2,x3,x4]} over all quadruples.

    Returns None (certificate) or the first counterexample.  Composition
    associativity is automatic for endomaps but asserted anyway, on all
    sextuples for n <= 4 and on a fixed sample above that.
    """
    n = s.n
    t = s.table.entries
    rights = {(a, b): t[:, a, b] for a in range(n) for b in range(n)}
    for x1 in range(n):
        for x2 in range(n):
            r12 = rights[(x1, x2)]
            for x3 in range(n):
                for x4 in range(n):
                    lhs = rights[(x3, x4)][r12]
                    rhs = rights[(x1, int(t[x2, x3, x4]))]
                    bad = _first_endomap_diff("right-compose", (x1, x2, x3, x4), lhs, rhs)
                    if bad is not None:
                        return bad
    if assert_associativity:
        _assert_composition_associative(list(rights.values()), n)
    return None


def left_compose_law(s):
    """Check L_{x1x2} . L_{x3x4} = L_{[x1,x2,x3],x4} over all quadruples."""
    n = s.n
    t = s.table.entries
    for x1 in range(n):
        for x2 in range(n):
            l12 = t[x1, x2, :]
            for x3 in range(n):
                for x4 in range(n):
                    lhs = l12[t[x3, x4, :]]
                    rhs = t[int(t[x1, x2, x3]), x4, :]
                    bad = _first_endomap_diff("left-compose", (x1, x2, x3, x4), lhs, rhs)
                    if bad is not None:
                        return bad
    return None


def lr_commute(s):
    """Check L_{x1x2} . R_{x3x4} = R_{x3x4} . L_{x1x2} over all quadruples."""
    n = s.n
    t = s.table.entries
    for x1 in range(n):
        for x2 in range(n):
            l12 = t[x1, x2, :]
            for x3 in range(n):
                for x4 in range(n):
                    r34 = t[:, x3, x4]
                    bad = _first_endomap_diff("lr-commute", (x1, x2, x3, x4), l12[r34], r34[l12])
                    if bad is not None:
                        return bad
    return None


def _assert_composition_associative(endomaps, n, sample=1000):
    maps = endomaps
    k = len(maps)
    if k == 0:
        return
    if n <= 4:
        triples = ((a, b, c) for a in range(k) for b in range(k) for c in range(k))
    else:
        rng = np.random.default_rng(0)
        triples = (tuple(rng.integers(0, k, size=3)) for _ in range(sample))
    for a, b, c in triples:
        f, g, h = maps[a], maps[b], maps[c]
        assert np.array_equal(f[g][h], f[g[h]]), "endomap composition must associate"


def centric_nonclosure_witness(semiheaps, max_results=1):
    """Search the given semiheaps for C . C compositions that are not centric.

    Returns a list of (semiheap, (x1, x2), (x3, x4)) witnesses, at most
    max_results long, in deterministic scan order; empty if the centric
    translations of every input happen to be closed under composition.
    """
    found = []
    for s in semiheaps:
        n = s.n
        t = s.table.entries
        centrics = {tuple(int(v) for v in t[a, :, b]) for a in range(n) for b in range(n)}
        for a in range(n):
            for b in range(n):
                cab = t[a, :, b]
                for c in range(n):
                    for d in range(n):
                        comp = t[c, :, d][cab]
                        if tuple(int(v) for v in comp) not in centrics:
                            found.append((s, (a, b), (c, d)))
                            if len(found) >= max_results:
                                return found
    return found


def is_biunital(ps):
    """True iff the basepoint is biunitary against all elements."""
    t = ps.table.entries
    x0 = ps.basepoint
    ar = np.arange(ps.n)
    return bool(np.array_equal(t[:, x0, x0], ar) and np.array_equal(t[x0, x0, :], ar))


def left_monoid_check(ps):
    """On a biunital pointed semiheap, L_{x0 x0} is the unit of L(S).

    Checks that L_{x0x0} is the identity endomap and a two-sided unit for
    composition against every left translation.  Returns None or a
    counterexample.
    """
    n = ps.n
    t = ps.table.entries
    x0 = ps.basepoint
    unit = t[x0, x0, :]
    bad = _first_endomap_diff("left-unit-id", (x0, x0), unit, np.arange(n))
    if bad is not None:
        return bad
    for a in range(n):
        for b in range(n):
            lab = t[a, b, :]
            bad = _first_endomap_diff("left-unit-post", (a, b), unit[lab], lab)
            if bad is None:
                bad = _first_endomap_diff("left-unit-pre", (a, b), lab[unit], lab)
            if bad is not None:
                return bad
    return None


def reachability_check(ps):
    """Every x must satisfy L_{x, x0}(x0) = x.  Returns None or a witness."""
    t = ps.table.entries
    x0 = ps.basepoint
    for x in range(ps.n):
        if int(t[x, x0, x0]) != x:
            return LawCounterexample("reachability", (x, x0), x0, int(t[x, x0, x0]), x)
    return None


def left_invariant_functions(ps):
    """Solve f . L = f for all left translations over the rationals.

    The constraints are pure equalities f(x) = f(L_{ab}(x)), so the
    solution space is spanned by the indicator functions of the connected
    components of the constraint graph.  Returns (dimension, component
    label array).  Biunital inputs must come out with dimension 1: the
    constants.
    """
    n = ps.n
    t = ps.table.entries
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for a in range(n):
        for b in range(n):
            for x in range(n):
                union(x, int(t[a, b, x]))
    labels = np.array([find(x) for x in range(n)], dtype=np.int64)
    roots = sorted(set(labels.tolist()))
    relabel = {r: i for i, r in enumerate(roots)}
    comps = np.array([relabel[int(v)] for v in labels], dtype=np.int64)
    return len(roots), comps
