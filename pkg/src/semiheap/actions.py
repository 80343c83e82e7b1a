"""Right semiheap actions on finite sets.

An action of S on M is a table sigma(point, x, y) subject to the
compatibility law sigma_{x3x4} . sigma_{x1x2} = sigma_{x1, [x2,x3,x4]}.
Orbits are plain reachable sets: the paper's warning that semiheap
reachability is not an equivalence relation rules out quotient objects,
so none exist here.
"""

from dataclasses import dataclass, InitVar

import numpy as np

from .core import FiniteSemiheap, InvalidTable, LawError
from .functors import heapify


@dataclass(frozen=True)
class ActionCounterexample:
    """First (point, x1, x2, x3, x4) where the compatibility law fails."""

    point: int
    quadruple: tuple
    lhs: int
    rhs: int


def action_compat_witness(table, semiheap):
    """Exhaustive compatibility check of a raw (m, n, n) action table."""
    a = np.asarray(table, dtype=np.int64)
    n = semiheap.n
    if a.ndim != 3 or a.shape[1:] != (n, n):
        raise InvalidTable(f"action table must be (m, {n}, {n}), got {a.shape}")
    m = a.shape[0]
    if a.size and (a.min() < 0 or a.max() >= m):
        raise InvalidTable("action table entry outside the space")
    if m == 0 or n == 0:
        return None
    t = semiheap.table.entries
    lhs = a[a]  # lhs[p,x1,x2,x3,x4] = a[a[p,x1,x2],x3,x4]
    rhs = a[np.arange(m)[:, None, None, None, None],
            np.arange(n)[None, :, None, None, None],
            t[None, None, :, :, :]]
    bad = lhs != rhs
    if not bad.any():
        return None
    p, x1, x2, x3, x4 = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return ActionCounterexample(int(p), (int(x1), int(x2), int(x3), int(x4)),
                                int(lhs[p, x1, x2, x3, x4]), int(rhs[p, x1, x2, x3, x4]))


@dataclass(frozen=True)
class FiniteAction:
    """A verified right action table of a semiheap on a finite set."""

    semiheap: FiniteSemiheap
    table: np.ndarray  # shape (m, n, n)
    verify: InitVar[bool] = True

    def __post_init__(self, verify):
        arr = np.asarray(self.table, dtype=np.int64).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "table", arr)
        if verify:
            witness = action_compat_witness(arr, self.semiheap)
            if witness is not None:
                raise LawError(f"action compatibility fails at point {witness.point}", witness)

    @property
    def space_size(self):
        return self.table.shape[0]

    def apply(self, p, x, y):
        return int(self.table[p, x, y])


def verify_action(action):
    """Re-run the compatibility check on an existing action value."""
    return action_compat_witness(action.table, action.semiheap)


def trivial_action(m, s):
    """Every pair acts as the identity on an m-point space."""
    table = np.broadcast_to(np.arange(m)[:, None, None], (m, s.n, s.n))
    return FiniteAction(s, table.copy())


def translation_action(s):
    """S acting on itself by right translation; the table is the ternary cube."""
    return FiniteAction(s, s.table.entries.copy())


def action_from_hom(h):
    """Action of the source on the target: (y, x1, x2) -> [y, psi x1, psi x2]'."""
    t2 = h.target.table.entries
    table = t2[:, h.mapping, :][:, :, h.mapping]
    return FiniteAction(h.source, table)


def group_action_witness(act, g):
    """First violated right group-action axiom on a raw (m, n) table, or None."""
    a = np.asarray(act, dtype=np.int64)
    if a.ndim != 2 or a.shape[1] != g.n:
        raise InvalidTable(f"group action table must be (m, {g.n}), got {a.shape}")
    m = a.shape[0]
    if a.size and (a.min() < 0 or a.max() >= m):
        raise InvalidTable("group action entry outside the space")
    if not np.array_equal(a[:, g.e], np.arange(m)):
        p = int(np.nonzero(a[:, g.e] != np.arange(m))[0][0])
        return ("identity", (p,), int(a[p, g.e]), p)
    lhs = a[a]  # lhs[p,g1,g2] = a[a[p,g1],g2]
    rhs = a[np.arange(m)[:, None, None], g.mul[None, :, :]]
    bad = lhs != rhs
    if bad.any():
        p, g1, g2 = np.unravel_index(int(np.argmax(bad)), bad.shape)
        return ("compatibility", (int(p), int(g1), int(g2)),
                int(lhs[p, g1, g2]), int(rhs[p, g1, g2]))
    return None


def action_from_group_action(g, act):
    """The heap action induced by a right G-action: sigma(p,g1,g2) = a(p, g1^-1 g2)."""
    bad = group_action_witness(act, g)
    if bad is not None:
        raise LawError(f"not a right group action: {bad[0]} axiom fails", bad)
    a = np.asarray(act, dtype=np.int64)
    word = g.mul[g.inv]                       # word[g1,g2] = g1^-1 * g2
    table = a[:, word]                        # table[p,g1,g2] = a[p, word[g1,g2]]
    return FiniteAction(heapify(g).semiheap, table)


def right_multiplication_action(g):
    """G acting on itself by right multiplication, as a raw (n, n) table."""
    return g.mul.copy()


def discretized_flow_action(k, m, flow):
    """Heap action of the cyclic step heap Z/k from an additive flow table.

    flow is an (m, k) table with flow[p, 0] = p and
    flow[flow[p, t1], t2] = flow[p, (t1 + t2) % k]; the induced action is
    sigma(p, t1, t2) = flow[p, (-t1 + t2) % k].
    """
    f = np.asarray(flow, dtype=np.int64)
    if f.shape != (m, k):
        raise InvalidTable(f"flow table must be ({m}, {k}), got {f.shape}")
    if not np.array_equal(f[:, 0], np.arange(m)):
        raise LawError("flow must fix every point at step 0")
    steps = (np.arange(k)[:, None] + np.arange(k)[None, :]) % k
    if not np.array_equal(f[f], f[np.arange(m)[:, None, None], steps[None, :, :]]):
        raise LawError("flow is not additive on the step set")
    heap = FiniteSemiheap.from_rule(k, lambda a, b, c: (a - b + c) % k)
    diff = (-np.arange(k)[:, None] + np.arange(k)[None, :]) % k
    table = f[:, diff]
    return FiniteAction(heap, table)


def equivariance_witness(mapping, a_m, a_n):
    """First (p, x, y) with psi(p <| (x,y)) != psi(p) <| (x,y), or None."""
    if a_m.semiheap.key() != a_n.semiheap.key():
        raise InvalidTable("equivariance needs actions of the same semiheap")
    psi = np.asarray(mapping, dtype=np.int64)
    if psi.shape != (a_m.space_size,) or (psi.size and (psi.min() < 0 or psi.max() >= a_n.space_size)):
        raise InvalidTable("map malformed")
    lhs = psi[a_m.table]
    rhs = a_n.table[psi]
    bad = lhs != rhs
    if not bad.any():
        return None
    p, x, y = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return (int(p), int(x), int(y), int(lhs[p, x, y]), int(rhs[p, x, y]))


def is_equivariant(mapping, a_m, a_n):
    return equivariance_witness(mapping, a_m, a_n) is None


def orbit(action, p):
    """The reachable set {sigma(p, x, y)} — a plain set, never a quotient."""
    if not 0 <= p < action.space_size:
        raise IndexError(f"point {p} outside space of size {action.space_size}")
    return frozenset(int(v) for v in action.table[p].reshape(-1))


def reachability_symmetric(action):
    """Diagnostic: is q in orbit(p) equivalent to p in orbit(q) here?

    Returns None when symmetric, else the first asymmetric pair (p, q)
    with q reachable from p but not conversely.
    """
    m = action.space_size
    orbits = [orbit(action, p) for p in range(m)]
    for p in range(m):
        for q in sorted(orbits[p]):
            if p not in orbits[q]:
                return (p, q)
    return None
