"""Desk-scale semiheap bundles over finite bases.

A bundle is a finite total space with a projection, a fiberwise semiheap
action, and per-chart trivializations that are equivariant for right
translation on the structure semiheap.  Charts are arbitrary base subsets;
there is no topology on a finite base.  Transitivity of the fiber action
is not part of the bundle axioms — it is required only of the principal
bundles fed to heapify_principal.
"""

from dataclasses import dataclass

import numpy as np

from .actions import FiniteAction, action_compat_witness, group_action_witness
from .core import (
    FiniteSemiheap,
    InvalidTable,
    LawError,
    SemiheapHom,
    induce_via_bijection,
    is_homomorphism,
)
from .functors import heapify
from .groups import FiniteGroup, group_hom_witness


@dataclass(frozen=True)
class BundleFailure:
    axiom: str
    witness: tuple


@dataclass(frozen=True)
class DiscreteSemiheapBundle:
    """Raw bundle data; run verify_bundle to certify it."""

    base_size: int
    projection: np.ndarray          # (P,) base index per total-space point
    structure: FiniteSemiheap
    action: FiniteAction            # of structure on the total space
    cover: tuple                    # tuple of frozensets of base indices
    charts: tuple                   # per chart, dict p -> (base index, fiber label)

    def __post_init__(self):
        proj = np.asarray(self.projection, dtype=np.int64).copy()
        proj.flags.writeable = False
        object.__setattr__(self, "projection", proj)
        object.__setattr__(self, "cover", tuple(frozenset(u) for u in self.cover))
        object.__setattr__(self, "charts", tuple(dict(c) for c in self.charts))

    @property
    def total_size(self):
        return self.projection.shape[0]

    def fiber(self, m):
        return [int(p) for p in np.nonzero(self.projection == m)[0]]


def verify_bundle(b):
    """Check every bundle axiom exhaustively; None means certified.

    The action's compatibility law is re-checked here as well, so a
    corrupted action table is always caught through this single entry
    point.  Checks run in a fixed order and report the first failure.
    """
    n = b.structure.n
    total = b.total_size
    proj = b.projection
    if total and (proj.min() < 0 or proj.max() >= b.base_size):
        raise InvalidTable("projection value outside base")
    if b.action.table.shape != (total, n, n):
        raise InvalidTable(f"action table must be ({total}, {n}, {n})")
    if b.action.semiheap.key() != b.structure.key():
        raise InvalidTable("action is not an action of the structure semiheap")
    if len(b.charts) != len(b.cover):
        raise InvalidTable("one trivialization per cover set required")

    compat = action_compat_witness(b.action.table, b.structure)
    if compat is not None:
        return BundleFailure("action-compatibility", (compat.point, *compat.quadruple))

    hit = set(int(v) for v in proj)
    missing = [m for m in range(b.base_size) if m not in hit]
    if missing:
        return BundleFailure("projection-surjective", (missing[0],))

    act = b.action.table
    if total and n:
        pr = proj[act]
        bad = pr != proj[:, None, None]
        if bad.any():
            p, x, y = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return BundleFailure("fiber-preservation", (int(p), int(x), int(y), int(act[p, x, y])))

    covered = set().union(*b.cover) if b.cover else set()
    uncovered = [m for m in range(b.base_size) if m not in covered]
    if uncovered:
        return BundleFailure("cover", (uncovered[0],))

    for i, (u, chart) in enumerate(zip(b.cover, b.charts)):
        domain = {p for p in range(total) if int(proj[p]) in u}
        if set(chart) != domain:
            off = sorted(set(chart) ^ domain)[0]
            return BundleFailure("chart-domain", (i, off))
        seen = set()
        for p in sorted(domain):
            bm, s = chart[p]
            if bm != int(proj[p]):
                return BundleFailure("chart-triangle", (i, p, bm, int(proj[p])))
            if not 0 <= s < n:
                return BundleFailure("chart-range", (i, p, s))
            if (bm, s) in seen:
                return BundleFailure("chart-injective", (i, p, bm, s))
            seen.add((bm, s))
        if len(seen) != len(u) * n:
            return BundleFailure("chart-bijective", (i, len(seen), len(u) * n))
        t = b.structure.table.entries
        for p in sorted(domain):
            bm, s = chart[p]
            for x in range(n):
                for y in range(n):
                    q = int(act[p, x, y])
                    if chart[q] != (bm, int(t[s, x, y])):
                        return BundleFailure("chart-equivariance", (i, p, x, y, chart[q], (bm, int(t[s, x, y]))))
    return None


def trivial_bundle(base_size, s):
    """The product bundle M x S with the right-translation action.

    Total-space index is m * n + x, matching the pair encoding used for
    semiheap products.
    """
    n = s.n
    total = base_size * n
    proj = np.arange(total) // n if total else np.zeros(0, dtype=np.int64)
    table = np.empty((total, n, n), dtype=np.int64)
    t = s.table.entries
    for p in range(total):
        m, x = divmod(p, n)
        table[p] = m * n + t[x]
    action = FiniteAction(s, table, verify=False)
    chart = {p: (p // n, p % n) for p in range(total)}
    b = DiscreteSemiheapBundle(base_size, proj, s, action, (frozenset(range(base_size)),), (chart,))
    failure = verify_bundle(b)
    assert failure is None, f"trivial bundle must verify, got {failure}"
    return b


def fiber_semiheap(b, m, i):
    """The semiheap induced on the fiber over m by chart i.

    Returns (semiheap on the re-indexed fiber, the fiber points in order).
    For every other chart containing m, the transition map passes the
    homomorphism check between the two induced structures; a failure
    there would contradict the induced-structure proposition, so it is
    asserted.
    """
    if m not in b.cover[i]:
        raise InvalidTable(f"base point {m} not in chart {i}")
    fiber = b.fiber(m)
    labels = np.array([b.charts[i][p][1] for p in fiber], dtype=np.int64)
    induced = induce_via_bijection(labels, b.structure)
    for j in range(len(b.cover)):
        if j == i or m not in b.cover[j]:
            continue
        other = np.array([b.charts[j][p][1] for p in fiber], dtype=np.int64)
        induced_j = induce_via_bijection(other, b.structure)
        inv_j = {int(s): a for a, s in enumerate(other)}
        transition = np.array([inv_j[int(s)] for s in labels], dtype=np.int64)
        assert is_homomorphism(transition, induced, induced_j), \
            "cross-chart fiber structures must be isomorphic"
    return induced, fiber


@dataclass(frozen=True)
class FinitePrincipalBundle:
    """A finite principal bundle: free, fiber-transitive right G-action
    with G-equivariant charts."""

    group: FiniteGroup
    base_size: int
    projection: np.ndarray          # (P,)
    action: np.ndarray              # (P, |G|) right action table
    cover: tuple
    charts: tuple                   # per chart, dict p -> (base index, group label)

    def __post_init__(self):
        proj = np.asarray(self.projection, dtype=np.int64).copy()
        act = np.asarray(self.action, dtype=np.int64).copy()
        proj.flags.writeable = False
        act.flags.writeable = False
        object.__setattr__(self, "projection", proj)
        object.__setattr__(self, "action", act)
        object.__setattr__(self, "cover", tuple(frozenset(u) for u in self.cover))
        object.__setattr__(self, "charts", tuple(dict(c) for c in self.charts))
        self._validate()

    @property
    def total_size(self):
        return self.projection.shape[0]

    def _validate(self):
        g = self.group
        total = self.total_size
        proj = self.projection
        act = self.action
        if act.shape != (total, g.n):
            raise InvalidTable(f"action table must be ({total}, {g.n})")
        bad = group_action_witness(act, g)
        if bad is not None:
            raise LawError(f"not a right group action: {bad[0]}", bad)
        if set(int(v) for v in proj) != set(range(self.base_size)):
            raise LawError("projection must be surjective")
        if not np.array_equal(proj[act], np.broadcast_to(proj[:, None], act.shape)):
            raise LawError("group action must preserve fibers")
        for p in range(total):
            fixed = np.nonzero(act[p] == p)[0]
            if fixed.tolist() != [g.e]:
                raise LawError(f"action is not free at point {p}", (p, fixed.tolist()))
        for m in range(self.base_size):
            fiber = np.nonzero(proj == m)[0]
            for p in fiber:
                if set(int(v) for v in act[p]) != set(int(v) for v in fiber):
                    raise LawError(f"action is not transitive on the fiber over {m}", (m, int(p)))
        covered = set().union(*self.cover) if self.cover else set()
        if covered != set(range(self.base_size)):
            raise LawError("cover must union to the base")
        for i, (u, chart) in enumerate(zip(self.cover, self.charts)):
            domain = {p for p in range(total) if int(proj[p]) in u}
            if set(chart) != domain:
                raise LawError(f"chart {i} domain mismatch")
            images = set()
            for p in sorted(domain):
                bm, gp = chart[p]
                if bm != int(proj[p]) or not 0 <= gp < g.n:
                    raise LawError(f"chart {i} ill-formed at {p}")
                images.add((bm, gp))
            if len(images) != len(u) * g.n:
                raise LawError(f"chart {i} not bijective")
            for p in sorted(domain):
                bm, gp = chart[p]
                for h in range(g.n):
                    if chart[int(act[p, h])] != (bm, int(g.mul[gp, h])):
                        raise LawError(f"chart {i} not G-equivariant at ({p},{h})")


def heapify_principal(pb):
    """The semiheap bundle canonically associated with a principal bundle.

    The structure is the heapification of G and the action is
    p <| (g1, g2) = a(p, g1^-1 g2).  The output passing verify_bundle is
    implied by the principal axioms, so it is asserted, not returned.
    """
    g = pb.group
    word = g.mul[g.inv]                          # word[g1,g2] = g1^-1 * g2
    table = pb.action[:, word]
    structure = heapify(g).semiheap
    action = FiniteAction(structure, table, verify=False)
    b = DiscreteSemiheapBundle(pb.base_size, pb.projection, structure, action, pb.cover, pb.charts)
    failure = verify_bundle(b)
    assert failure is None, f"heapified principal bundle must verify, got {failure}"
    return b


def trivial_principal_bundle(base_size, g):
    """The product principal bundle M x G with right multiplication."""
    n = g.n
    total = base_size * n
    proj = np.arange(total) // n
    act = np.empty((total, n), dtype=np.int64)
    for p in range(total):
        m, x = divmod(p, n)
        act[p] = m * n + g.mul[x]
    chart = {p: (p // n, p % n) for p in range(total)}
    return FinitePrincipalBundle(g, base_size, proj, act, (frozenset(range(base_size)),), (chart,))


@dataclass(frozen=True)
class BundleHom:
    """Candidate semiheap-bundle homomorphism data."""

    total_map: np.ndarray       # P -> P'
    base_map: np.ndarray        # M -> M'
    structure_hom: SemiheapHom


def verify_bundle_hom(h, b, b2):
    """Check the two bundle-hom identities exhaustively; None on success."""
    phi = np.asarray(h.total_map, dtype=np.int64)
    base = np.asarray(h.base_map, dtype=np.int64)
    psi = h.structure_hom
    if phi.shape != (b.total_size,) or (phi.size and (phi.min() < 0 or phi.max() >= b2.total_size)):
        raise InvalidTable("total map malformed")
    if base.shape != (b.base_size,) or (base.size and (base.min() < 0 or base.max() >= b2.base_size)):
        raise InvalidTable("base map malformed")
    if psi.source.key() != b.structure.key() or psi.target.key() != b2.structure.key():
        raise InvalidTable("structure hom endpoints do not match the bundles")
    if not np.array_equal(b2.projection[phi], base[b.projection]):
        p = int(np.nonzero(b2.projection[phi] != base[b.projection])[0][0])
        return BundleFailure("hom-projection", (p,))
    lhs = phi[b.action.table]
    rhs = b2.action.table[phi][:, psi.mapping, :][:, :, psi.mapping]
    bad = lhs != rhs
    if bad.any():
        p, x, y = np.unravel_index(int(np.argmax(bad)), bad.shape)
        return BundleFailure("hom-equivariance", (int(p), int(x), int(y)))
    return None


@dataclass(frozen=True)
class PrincipalBundleHom:
    """Candidate principal-bundle homomorphism data."""

    total_map: np.ndarray
    base_map: np.ndarray
    group_hom: np.ndarray       # G -> G' as an index array


def verify_principal_hom(h, pb, pb2):
    """Check Phi(a_g(p)) = a'_{psi(g)}(Phi(p)) and the base square; None on success."""
    phi = np.asarray(h.total_map, dtype=np.int64)
    base = np.asarray(h.base_map, dtype=np.int64)
    psi = np.asarray(h.group_hom, dtype=np.int64)
    if group_hom_witness(psi, pb.group, pb2.group) is not None:
        return BundleFailure("hom-group", tuple(int(v) for v in psi))
    if not np.array_equal(pb2.projection[phi], base[pb.projection]):
        p = int(np.nonzero(pb2.projection[phi] != base[pb.projection])[0][0])
        return BundleFailure("hom-projection", (p,))
    lhs = phi[pb.action]
    rhs = pb2.action[phi][:, psi]
    bad = lhs != rhs
    if bad.any():
        p, g = np.unravel_index(int(np.argmax(bad)), bad.shape)
        return BundleFailure("hom-equivariance", (int(p), int(g)))
    return None


def heapify_principal_hom(h, pb, pb2):
    """Transport a verified principal-bundle hom to the heapified bundles.

    The psi-equivariance of the result is automatic, so the transported
    hom is asserted to verify against the heapified bundles.
    """
    failure = verify_principal_hom(h, pb, pb2)
    if failure is not None:
        raise LawError(f"not a principal-bundle hom: {failure.axiom}", failure)
    s, s2 = heapify(pb.group).semiheap, heapify(pb2.group).semiheap
    hom = BundleHom(h.total_map, h.base_map, SemiheapHom(s, s2, h.group_hom))
    b, b2 = heapify_principal(pb), heapify_principal(pb2)
    assert verify_bundle_hom(hom, b, b2) is None, \
        "heapified principal homs must be semiheap-bundle homs"
    return hom
