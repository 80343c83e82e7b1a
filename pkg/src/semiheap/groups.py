"""Finite groups as Cayley tables, plus the bundled test corpus.

The corpus (cyclic groups up to order 8, the Klein four-group, S3, D4, Q8)
is constructed from fixed element orderings so every table is deterministic
across runs and platforms.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .core import InvalidTable, LawError


@dataclass(frozen=True)
class FiniteGroup:
    """A validated Cayley table with identity and inverse table."""

    mul: np.ndarray  # shape (n, n)
    e: int
    inv: np.ndarray  # shape (n,)
    name: str = ""

    def __post_init__(self):
        mul = np.asarray(self.mul, dtype=np.int64).copy()
        inv = np.asarray(self.inv, dtype=np.int64).copy()
        n = mul.shape[0]
        if mul.shape != (n, n):
            raise InvalidTable(f"Cayley table must be square, got {mul.shape}")
        if n == 0:
            raise InvalidTable("a group needs at least the identity element")
        if mul.min() < 0 or mul.max() >= n:
            raise InvalidTable("Cayley table entry outside carrier")
        if inv.shape != (n,) or inv.min() < 0 or inv.max() >= n:
            raise InvalidTable("inverse table malformed")
        if not 0 <= self.e < n:
            raise InvalidTable(f"identity index {self.e} outside carrier")
        ar = np.arange(n)
        if not (np.array_equal(mul[self.e], ar) and np.array_equal(mul[:, self.e], ar)):
            raise LawError(f"element {self.e} is not a two-sided identity")
        lhs = mul[mul]
        rhs = mul[ar[:, None, None], mul[None, :, :]]
        bad = lhs != rhs
        if bad.any():
            a, b, c = np.unravel_index(int(np.argmax(bad)), bad.shape)
            raise LawError(f"associativity fails at ({a},{b},{c})", (int(a), int(b), int(c)))
        if not (np.array_equal(mul[ar, inv], np.full(n, self.e)) and np.array_equal(mul[inv, ar], np.full(n, self.e))):
            raise LawError("inverse table does not invert")
        mul.flags.writeable = False
        inv.flags.writeable = False
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "inv", inv)

    @property
    def n(self):
        return self.mul.shape[0]

    def key(self):
        return (self.n, self.e, tuple(int(v) for v in self.mul.reshape(-1)))

    @classmethod
    def from_mul(cls, mul, name=""):
        """Derive identity and inverses from a bare Cayley table."""
        mul = np.asarray(mul, dtype=np.int64)
        n = mul.shape[0]
        ar = np.arange(n)
        e = None
        for c in range(n):
            if np.array_equal(mul[c], ar) and np.array_equal(mul[:, c], ar):
                e = c
                break
        if e is None:
            raise LawError("no two-sided identity in table")
        inv = np.empty(n, dtype=np.int64)
        for x in range(n):
            hits = np.nonzero((mul[x] == e) & (mul[:, x] == e))[0]
            if hits.size != 1:
                raise LawError(f"element {x} lacks a unique two-sided inverse")
            inv[x] = hits[0]
        return cls(mul, e, inv, name=name)


def group_hom_witness(mapping, g, g2):
    """First pair with f(xy) != f(x)f(y), or None."""
    f = np.asarray(mapping, dtype=np.int64)
    if f.shape != (g.n,) or (f.size and (f.min() < 0 or f.max() >= g2.n)):
        raise InvalidTable("map malformed")
    lhs = f[g.mul]
    rhs = g2.mul[np.ix_(f, f)]
    bad = lhs != rhs
    if not bad.any():
        return None
    a, b = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return (int(a), int(b), int(lhs[a, b]), int(rhs[a, b]))


def is_group_hom(mapping, g, g2):
    return group_hom_witness(mapping, g, g2) is None


def cyclic(n):
    mul = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    inv = (-np.arange(n)) % n
    return FiniteGroup(mul, 0, inv, name=f"Z{n}")


def klein_four():
    ar = np.arange(4)
    mul = ar[:, None] ^ ar[None, :]
    return FiniteGroup(mul, 0, ar.copy(), name="K4")


def symmetric3():
    """S3 with elements the permutations of (0,1,2) in lexicographic order."""
    elems = sorted(permutations(range(3)))
    index = {p: i for i, p in enumerate(elems)}
    mul = np.empty((6, 6), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            mul[i, j] = index[tuple(p[q[k]] for k in range(3))]
    return FiniteGroup.from_mul(mul, name="S3")


def dihedral4():
    """D4 of order 8: element i + 4j stands for r^i s^j."""
    mul = np.empty((8, 8), dtype=np.int64)
    for i1 in range(4):
        for j1 in range(2):
            for i2 in range(4):
                for j2 in range(2):
                    i = (i1 + (i2 if j1 == 0 else -i2)) % 4
                    mul[i1 + 4 * j1, i2 + 4 * j2] = i + 4 * ((j1 + j2) % 2)
    return FiniteGroup.from_mul(mul, name="D4")


def quaternion8():
    """Q8 with elements ordered 1, -1, i, -i, j, -j, k, -k."""
    # basis products: table[a][b] = (sign, axis) for axes 1,i,j,k
    basis = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    def idx(sign, axis):
        return 2 * axis + (0 if sign > 0 else 1)
    mul = np.empty((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            sa, xa = (1 if a % 2 == 0 else -1), a // 2
            sb, xb = (1 if b % 2 == 0 else -1), b // 2
            s, x = basis[(xa, xb)]
            mul[a, b] = idx(sa * sb * s, x)
    return FiniteGroup.from_mul(mul, name="Q8")


def corpus():
    """The bundled groups: Z1..Z8, K4, S3, D4, Q8."""
    groups = [cyclic(n) for n in range(1, 9)]
    groups += [klein_four(), symmetric3(), dihedral4(), quaternion8()]
    return groups
