"""Finite ternary tables and exhaustive semiheap law verification.

Carriers are always 0..n-1; a ternary product is stored as a dense
(n, n, n) integer cube indexed [x, y, z].  All law checks are exhaustive
and report the lexicographically first failing tuple, so results are
deterministic regardless of how the tuple space is scanned.
"""

from dataclasses import dataclass, InitVar

import numpy as np


class InvalidTable(ValueError):
    """Raised for malformed input data (shape or out-of-range entries)."""


class LawError(ValueError):
    """Raised when a structural law fails at construction time.

    Carries the witness produced by the corresponding verifier.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class ParaAssocCounterexample:
    """First quintuple where the three para-associative forms disagree."""

    quintuple: tuple
    outer: int    # [[x1,x2,x3],x4,x5]
    middle: int   # [x1,[x4,x3,x2],x5]
    inner: int    # [x1,x2,[x3,x4,x5]]


@dataclass(frozen=True)
class TernaryTable:
    """A complete ternary operation on the carrier {0, .., n-1}."""

    entries: np.ndarray  # shape (n, n, n), values in 0..n-1, read-only

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int64)
        if arr.ndim != 3 or len(set(arr.shape)) > 1:
            raise InvalidTable(f"ternary table must be an (n,n,n) cube, got shape {arr.shape}")
        n = arr.shape[0]
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            bad = np.argwhere((arr < 0) | (arr >= n))[0]
            raise InvalidTable(f"entry {arr[tuple(bad)]} at {tuple(bad)} outside carrier 0..{n - 1}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def n(self):
        return self.entries.shape[0]

    @classmethod
    def from_flat(cls, n, values):
        """Build from n^3 values in (i, j, k) row-major order."""
        vals = np.asarray(list(values), dtype=np.int64)
        if vals.size != n ** 3:
            raise InvalidTable(f"expected {n ** 3} entries for n={n}, got {vals.size}")
        return cls(vals.reshape(n, n, n))

    @classmethod
    def from_rule(cls, n, rule):
        """Tabulate rule(x, y, z) over the whole carrier."""
        arr = np.fromiter(
            (rule(x, y, z) for x in range(n) for y in range(n) for z in range(n)),
            dtype=np.int64,
            count=n ** 3,
        ) if n else np.zeros(0, dtype=np.int64)
        return cls(arr.reshape(n, n, n))

    def flat(self):
        return tuple(int(v) for v in self.entries.reshape(-1))

    def key(self):
        """Hashable identity: (n, flat entries)."""
        return (self.n, self.flat())


def verify_para_associative(table):
    """Check the three-way identity over all n^5 quintuples.

    Returns None on success, else the lexicographically first
    ParaAssocCounterexample.
    """
    t = table.entries
    n = table.n
    if n == 0:
        return None
    ar = np.arange(n)
    outer = t[t]
    trev = t.transpose(2, 1, 0)
    middle = t[ar[:, None, None, None, None], trev[None, :, :, :, None], ar[None, None, None, None, :]]
    inner = t[ar[:, None, None, None, None], ar[None, :, None, None, None], t[None, None, :, :, :]]
    bad = (outer != middle) | (outer != inner)
    if not bad.any():
        return None
    q = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return ParaAssocCounterexample(
        quintuple=tuple(int(i) for i in q),
        outer=int(outer[q]),
        middle=int(middle[q]),
        inner=int(inner[q]),
    )


@dataclass(frozen=True)
class FiniteSemiheap:
    """A ternary table certified para-associative.

    Construction runs the exhaustive verifier unless `_certified` is set,
    which is reserved for operations whose output is para-associative by
    theorem (opposite, product, induced structure, heapification).  Tables
    are immutable, so a certificate can never go stale.
    """

    table: TernaryTable
    _certified: InitVar[bool] = False

    def __post_init__(self, _certified):
        if not _certified:
            witness = verify_para_associative(self.table)
            if witness is not None:
                raise LawError(f"para-associativity fails at {witness.quintuple}", witness)

    @property
    def n(self):
        return self.table.n

    def apply(self, x, y, z):
        return int(self.table.entries[x, y, z])

    def key(self):
        return self.table.key()

    @classmethod
    def from_flat(cls, n, values):
        return cls(TernaryTable.from_flat(n, values))

    @classmethod
    def from_rule(cls, n, rule):
        return cls(TernaryTable.from_rule(n, rule))


@dataclass(frozen=True)
class PointedSemiheap:
    """A certified semiheap with a distinguished basepoint."""

    semiheap: FiniteSemiheap
    basepoint: int

    def __post_init__(self):
        if not 0 <= self.basepoint < self.semiheap.n:
            raise InvalidTable(f"basepoint {self.basepoint} outside carrier of size {self.semiheap.n}")

    @property
    def n(self):
        return self.semiheap.n

    @property
    def table(self):
        return self.semiheap.table


def is_biunitary(s, x):
    """True iff [y,x,x] = y = [x,x,y] for every y."""
    t = s.table.entries
    n = s.n
    if not 0 <= x < n:
        raise IndexError(f"element {x} outside carrier of size {n}")
    ar = np.arange(n)
    return bool(np.array_equal(t[:, x, x], ar) and np.array_equal(t[x, x, :], ar))


def is_heap(s):
    """True iff every element of the semiheap is biunitary."""
    return all(is_biunitary(s, x) for x in range(s.n))


def is_abelian(s):
    """True iff the table equals its argument-reversed conjugate."""
    t = s.table.entries
    return bool(np.array_equal(t, t.transpose(2, 1, 0)))


@dataclass(frozen=True)
class FiniteHeap:
    """A semiheap in which every element is biunitary."""

    semiheap: FiniteSemiheap

    def __post_init__(self):
        for x in range(self.semiheap.n):
            if not is_biunitary(self.semiheap, x):
                raise LawError(f"element {x} is not biunitary", x)

    @property
    def n(self):
        return self.semiheap.n

    def pointed(self, basepoint):
        return PointedSemiheap(self.semiheap, basepoint)


def opposite(s):
    """The argument-reversed semiheap [x,y,z]^op = [z,y,x].

    Para-associativity transports along the reversal, so the certificate
    is inherited.
    """
    rev = TernaryTable(s.table.entries.transpose(2, 1, 0))
    return FiniteSemiheap(rev, _certified=True)


def product(s, s2):
    """Componentwise product on the pair-encoded carrier (index = x*n2 + y)."""
    n, n2 = s.n, s2.n
    t, t2 = s.table.entries, s2.table.entries
    m = n * n2
    if m == 0:
        return FiniteSemiheap(TernaryTable(np.zeros((0, 0, 0), dtype=np.int64)), _certified=True)
    xs, ys = np.divmod(np.arange(m), n2)
    big = np.empty((m, m, m), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            big[a, b, :] = t[xs[a], xs[b], xs] * n2 + t2[ys[a], ys[b], ys]
    return FiniteSemiheap(TernaryTable(big), _certified=True)


def product_projections(s, s2):
    """The two coordinate projections of product(s, s2), as index arrays."""
    m = s.n * s2.n
    idx = np.arange(m)
    return idx // s2.n, idx % s2.n


def homomorphism_witness(mapping, s, s2):
    """First triple violating phi[x,y,z] = [phi x, phi y, phi z]', or None."""
    phi = np.asarray(mapping, dtype=np.int64)
    if phi.shape != (s.n,):
        raise InvalidTable(f"map must have length {s.n}, got shape {phi.shape}")
    if phi.size and (phi.min() < 0 or phi.max() >= s2.n):
        raise InvalidTable("map value outside target carrier")
    if s.n == 0:
        return None
    lhs = phi[s.table.entries]
    rhs = s2.table.entries[np.ix_(phi, phi, phi)]
    bad = lhs != rhs
    if not bad.any():
        return None
    x, y, z = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return (int(x), int(y), int(z), int(lhs[x, y, z]), int(rhs[x, y, z]))


def is_homomorphism(mapping, s, s2):
    return homomorphism_witness(mapping, s, s2) is None


@dataclass(frozen=True)
class SemiheapHom:
    """A verified semiheap homomorphism, stored as an index array."""

    source: FiniteSemiheap
    target: FiniteSemiheap
    mapping: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.mapping, dtype=np.int64).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "mapping", arr)
        witness = homomorphism_witness(arr, self.source, self.target)
        if witness is not None:
            raise LawError(f"not a homomorphism at triple {witness[:3]}", witness)

    def __call__(self, x):
        return int(self.mapping[x])


def homomorphic_image(h):
    """The induced semiheap on the image subset of the target, re-indexed.

    Closure of the image is forced for verified homomorphisms; a failure
    here is an internal invariant violation, not an input error.
    """
    image = sorted(set(int(v) for v in h.mapping))
    pos = {v: i for i, v in enumerate(image)}
    t2 = h.target.table.entries
    k = len(image)
    sub = np.empty((k, k, k), dtype=np.int64)
    for a, va in enumerate(image):
        for b, vb in enumerate(image):
            for c, vc in enumerate(image):
                v = int(t2[va, vb, vc])
                assert v in pos, "image of a verified homomorphism must be closed"
                sub[a, b, c] = pos[v]
    return FiniteSemiheap(TernaryTable(sub), _certified=True)


def closure_witness(subset, s):
    """First triple from the subset whose product escapes it, or None."""
    members = sorted(set(int(x) for x in subset))
    for x in members:
        if not 0 <= x < s.n:
            raise InvalidTable(f"subset element {x} outside carrier")
    inside = set(members)
    t = s.table.entries
    for a in members:
        for b in members:
            for c in members:
                v = int(t[a, b, c])
                if v not in inside:
                    return (a, b, c, v)
    return None


def is_subsemiheap(subset, s):
    return closure_witness(subset, s) is None


def _check_bijection(phi, n):
    arr = np.asarray(phi, dtype=np.int64)
    if arr.shape != (n,) or sorted(arr.tolist()) != list(range(n)):
        raise InvalidTable(f"not a bijection onto 0..{n - 1}: {arr.tolist()}")
    return arr


def induce_via_bijection(phi, s):
    """Pull the structure of s back along a bijection phi: M -> carrier(s).

    [m1,m2,m3] := phi^-1 [phi m1, phi m2, phi m3]; the result is certified,
    since para-associativity transports along bijections.
    """
    n = s.n
    arr = _check_bijection(phi, n)
    inv = np.argsort(arr)
    induced = inv[s.table.entries[np.ix_(arr, arr, arr)]] if n else np.zeros((0, 0, 0), dtype=np.int64)
    return FiniteSemiheap(TernaryTable(induced), _certified=True)


def induced_pair_iso(phi, psi, s):
    """The canonical isomorphism psi^-1 . phi between the two structures
    induced by bijections phi and psi, returned as a verified hom."""
    n = s.n
    arr_phi = _check_bijection(phi, n)
    arr_psi = _check_bijection(psi, n)
    inv_psi = np.argsort(arr_psi)
    mapping = inv_psi[arr_phi]
    return SemiheapHom(induce_via_bijection(arr_phi, s), induce_via_bijection(arr_psi, s), mapping)


def induce_pointed_via_bijection(phi, ps):
    """Pointed version: the basepoint transports to phi^-1(pt)."""
    arr = _check_bijection(phi, ps.n)
    inv = np.argsort(arr)
    return PointedSemiheap(induce_via_bijection(arr, ps.semiheap), int(inv[ps.basepoint]))
