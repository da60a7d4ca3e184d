"""Finite commutative monoids stored as addition tables.

Elements are the indices ``0..size-1`` and index 0 is always the identity.
Tables are kept as tuples of tuples (cheap scalar lookups) with a cached
numpy copy for the vectorised searches.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product

import numpy as np

from .errors import (
    InvalidTable,
    NoIdentityAtZero,
    NotAssociative,
    NotCommutative,
    NotHomomorphism,
    RefinementPreconditionError,
    SizeLimitExceeded,
)

DEFAULT_MAX_SIZE = 64


def default_max_size():
    return int(os.environ.get("REFMON_MAX_SIZE", DEFAULT_MAX_SIZE))


@dataclass(frozen=True)
class FiniteCommutativeMonoid:
    """Addition table of a finite commutative monoid with identity at index 0.

    The constructor trusts its input; use ``validate_monoid`` on anything
    read from outside.  ``labels`` is an optional human-readable name per
    element and takes no part in equality.
    """

    table: tuple
    labels: tuple = field(default=None, compare=False, repr=False)

    zero = 0

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(int(v) for v in row) for row in self.table))

    @property
    def size(self):
        return len(self.table)

    def __len__(self):
        return len(self.table)

    @property
    def elements(self):
        return range(len(self.table))

    def add(self, x, y):
        return self.table[x][y]

    def sum(self, xs):
        return reduce(self.add, xs, 0)

    def multiple(self, k, x):
        acc = 0
        for _ in range(k):
            acc = self.table[acc][x]
        return acc

    def label(self, x):
        return x if self.labels is None else self.labels[x]

    def index_of(self, label):
        return self._label_index[label]

    @cached_property
    def _label_index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def array(self):
        a = np.array(self.table, dtype=np.int64).reshape(len(self.table), len(self.table))
        a.setflags(write=False)
        return a

    @cached_property
    def leq_matrix(self):
        """leq_matrix[x, y] iff x + z = y for some z."""
        n = len(self.table)
        m = np.zeros((n, n), dtype=bool)
        a = self.array
        for x in range(n):
            m[x, a[x]] = True
        m.setflags(write=False)
        return m

    def leq(self, x, y):
        return bool(self.leq_matrix[x, y])

    @cached_property
    def idempotents(self):
        return tuple(x for x in self.elements if self.table[x][x] == x)

    def __repr__(self):
        return f"FiniteCommutativeMonoid(size={self.size})"


def validate_monoid(table, labels=None):
    """Check a square table and return it as a monoid.

    Raises NoIdentityAtZero, NotCommutative or NotAssociative naming the
    first violating pair or triple (in index order).
    """
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0:
        raise InvalidTable("a monoid needs at least one element")
    if any(len(r) != n for r in rows):
        raise InvalidTable("table is not square")
    try:
        a = np.array(rows, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise InvalidTable(f"table entries must be integers: {exc}") from None
    if a.min() < 0 or a.max() >= n:
        bad = tuple(int(v) for v in np.argwhere((a < 0) | (a >= n))[0])
        raise InvalidTable(f"entry at {bad} out of range", witness=bad)
    ident = np.arange(n)
    if not (a[0] == ident).all():
        x = int(np.argmax(a[0] != ident))
        raise NoIdentityAtZero(f"0 + {x} = {a[0, x]}, expected {x}", witness=(0, x))
    if not (a.T == a).all():
        x, y = (int(v) for v in np.argwhere(a != a.T)[0])
        raise NotCommutative(f"{x} + {y} != {y} + {x}", witness=(x, y))
    left = a[a, :]  # [x, y, z] -> (x + y) + z
    right = a[:, a]  # [x, y, z] -> x + (y + z)
    if not (left == right).all():
        x, y, z = (int(v) for v in np.argwhere(left != right)[0])
        raise NotAssociative(f"({x} + {y}) + {z} != {x} + ({y} + {z})", witness=(x, y, z))
    if labels is not None and len(labels) != n:
        raise InvalidTable("one label per element required")
    return FiniteCommutativeMonoid(a.tolist(), tuple(labels) if labels is not None else None)


def trivial_monoid():
    return FiniteCommutativeMonoid(((0,),), (None,))


def building_block(n):
    """(Z/nZ) with a new zero adjoined: index 0 is the zero, index i+1 is the residue i."""
    if n < 1:
        raise ValueError("building blocks need n >= 1")
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for x in range(n + 1):
        table[0][x] = table[x][0] = x
    for i in range(n):
        for j in range(n):
            table[i + 1][j + 1] = (i + j) % n + 1
    return FiniteCommutativeMonoid(table, (None,) + tuple(range(n)))


def nz_of_group(G):
    """G with a new zero adjoined; index 0 is the new zero, 1.. enumerate G."""
    elems = G.elements
    idx = {g: i + 1 for i, g in enumerate(elems)}
    n = len(elems) + 1
    table = [[0] * n for _ in range(n)]
    for x in range(n):
        table[0][x] = table[x][0] = x
    for g in elems:
        for h in elems:
            table[idx[g]][idx[h]] = idx[G.add(g, h)]
    return FiniteCommutativeMonoid(table, (None,) + tuple(elems))


def _sum_table(a1, a2):
    n1, n2 = len(a1), len(a2)
    t = a1[:, None, :, None] * n2 + a2[None, :, None, :]
    return t.reshape(n1 * n2, n1 * n2)


def direct_sum(M1, M2):
    """Componentwise sum; the pair (i, j) gets index i * |M2| + j."""
    t = _sum_table(M1.array, M2.array)
    labels = tuple((M1.label(i), M2.label(j)) for i in M1.elements for j in M2.elements)
    return FiniteCommutativeMonoid(t.tolist(), labels)


@dataclass(frozen=True)
class BlockSumDescriptor:
    """The direct sum of building blocks of the given orders.

    Elements are coordinate tuples in lexicographic order, the first block
    most significant.  A coordinate is 0 for the adjoined zero and i+1 for
    the residue i, matching ``building_block``.  An empty descriptor denotes
    the trivial monoid.
    """

    orders: tuple

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if any(n < 1 for n in orders):
            raise ValueError("block orders must be >= 1")
        object.__setattr__(self, "orders", orders)

    @property
    def size(self):
        s = 1
        for n in self.orders:
            s *= n + 1
        return s

    @cached_property
    def monoid(self):
        a = np.zeros((1, 1), dtype=np.int64)
        for n in self.orders:
            a = _sum_table(a, building_block(n).array)
        labels = tuple(
            tuple(None if c == 0 else c - 1 for c in coords)
            for coords in product(*(range(n + 1) for n in self.orders))
        )
        return FiniteCommutativeMonoid(a.tolist(), labels)

    def coords(self, x):
        out = []
        for n in reversed(self.orders):
            x, c = divmod(x, n + 1)
            out.append(c)
        return tuple(reversed(out))

    def index(self, coords):
        x = 0
        for n, c in zip(self.orders, coords):
            x = x * (n + 1) + c
        return x


def block_sum(orders):
    return BlockSumDescriptor(tuple(orders)).monoid


def submonoid(M, elements):
    """Restrict M to a subset closed under + and containing 0.

    Returns (submonoid, inclusion hom); the subset is relabelled in
    increasing index order, so 0 stays at index 0.
    """
    elems = sorted(set(elements))
    if not elems or elems[0] != 0:
        raise ValueError("a submonoid must contain 0")
    pos = {x: i for i, x in enumerate(elems)}
    table = []
    for x in elems:
        row = []
        for y in elems:
            s = M.table[x][y]
            if s not in pos:
                raise ValueError(f"{x} + {y} = {s} leaves the subset")
            row.append(pos[s])
        table.append(row)
    labels = tuple(M.label(x) for x in elems)
    sub = FiniteCommutativeMonoid(table, labels)
    return sub, MonoidHom(sub, M, tuple(elems))


def generated_submonoid(M, gens):
    elems = {0}
    frontier = [0]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = M.table[x][g]
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


def leq(M, x, y):
    """Algebraic pre-order: x <= y iff x + z = y for some z."""
    return M.leq(x, y)


def element_order(M, x):
    """Least m >= 1 with (m+1)x = x, or None if x is not strongly periodic."""
    t = M.table
    cur = x
    for m in range(1, M.size + 1):
        cur = t[cur][x]
        if cur == x:
            return m
    return None


@dataclass(frozen=True)
class PropertyReport:
    conical: bool
    regular: bool
    strongly_periodic: bool
    is_semilattice: bool
    idempotents: tuple

    def as_dict(self):
        return {
            "conical": self.conical,
            "regular": self.regular,
            "strongly_periodic": self.strongly_periodic,
            "is_semilattice": self.is_semilattice,
            "idempotents": list(self.idempotents),
        }


def is_conical(M):
    zeros = np.argwhere(M.array == 0)
    return len(zeros) == 1


def regularity_witness(M):
    """Some x with 2x <= x failing, or None when M is regular."""
    for x in M.elements:
        if not M.leq_matrix[M.table[x][x], x]:
            return x
    return None


def property_report(M):
    return PropertyReport(
        conical=is_conical(M),
        regular=regularity_witness(M) is None,
        strongly_periodic=all(element_order(M, x) is not None for x in M.elements),
        is_semilattice=len(M.idempotents) == M.size,
        idempotents=M.idempotents,
    )


def _check_size(M, max_size):
    limit = default_max_size() if max_size is None else max_size
    if M.size > limit:
        raise SizeLimitExceeded(
            f"monoid has {M.size} elements; brute-force refinement is limited to {limit} "
            "(raise max_size / REFMON_MAX_SIZE to override)"
        )


def find_refinement(M, x1, x2, y1, y2, max_size=None):
    """Lexicographically least refinement matrix ((z11, z12), (z21, z22)), or None.

    Rows sum to x1, x2 and columns to y1, y2.
    """
    _check_size(M, max_size)
    t = M.table
    if t[x1][x2] != t[y1][y2]:
        raise RefinementPreconditionError(
            f"{x1} + {x2} != {y1} + {y2}", witness=(x1, x2, y1, y2)
        )
    a = M.array
    lm = M.leq_matrix
    sols = {}

    def sol(p, c):
        key = (p, c)
        if key not in sols:
            sols[key] = np.flatnonzero(a[p] == c)
        return sols[key]

    for z11 in np.flatnonzero(lm[:, x1] & lm[:, y1]):
        z11 = int(z11)
        for z12 in sol(z11, x1):
            row = sol(int(z12), y2)
            if not len(row):
                continue
            for z21 in sol(z11, y1):
                both = np.intersect1d(row, sol(int(z21), x2))
                if len(both):
                    return ((z11, int(z12)), (int(z21), int(both[0])))
    return None


def refinement_failure(M, max_size=None):
    """An equation x1 + x2 = y1 + y2 with no refinement, or None.

    For each (x1, y1) every refinement matrix with that first row sum and
    first column sum is generated at once: pairs (z12, z21) sharing a z11
    come from a boolean matrix product, and z22 is swept by fancy indexing.
    The pair (y1, x1) is the transpose problem, so only x1 <= y1 is scanned.
    """
    _check_size(M, max_size)
    n = M.size
    a = M.array
    eq = [(a == c).astype(np.float32) for c in range(n)]
    for x1 in range(n):
        for y1 in range(x1, n):
            required = a[x1][:, None] == a[y1][None, :]
            pairs = (eq[x1] @ eq[y1]) > 0  # [z12, z21]
            z12, z21 = np.nonzero(pairs)
            reached = np.zeros((n, n), dtype=bool)
            reached[a[z21], a[z12]] = True
            bad = required & ~reached
            if bad.any():
                x2, y2 = (int(v) for v in np.argwhere(bad)[0])
                return (x1, x2, y1, y2)
    return None


def has_refinement(M, max_size=None):
    return refinement_failure(M, max_size) is None


@dataclass(frozen=True)
class MonoidHom:
    source: FiniteCommutativeMonoid
    target: FiniteCommutativeMonoid
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))

    def __call__(self, x):
        return self.map[x]

    def __repr__(self):
        return f"MonoidHom({self.source.size} -> {self.target.size}, {list(self.map)})"


def hom_failure(h):
    """First (x, y) with h(x + y) != h(x) + h(y); (0, 0) if h(0) != 0; None if a hom."""
    m = h.map
    if len(m) != h.source.size or any(not 0 <= v < h.target.size for v in m):
        return ()
    if m[0] != 0:
        return (0, 0)
    hm = np.array(m, dtype=np.int64)
    lhs = hm[h.source.array]
    rhs = h.target.array[hm[:, None], hm[None, :]]
    if (lhs == rhs).all():
        return None
    x, y = (int(v) for v in np.argwhere(lhs != rhs)[0])
    return (x, y)


def hom_validate(h):
    w = hom_failure(h)
    if w == ():
        raise NotHomomorphism("map has the wrong length or leaves the target", witness=w)
    if w is not None:
        raise NotHomomorphism(f"h({w[0]} + {w[1]}) != h({w[0]}) + h({w[1]})", witness=w)
    return h


def make_hom(source, target, mapping):
    return hom_validate(MonoidHom(source, target, tuple(mapping)))


def identity_hom(M):
    return MonoidHom(M, M, tuple(M.elements))


def hom_compose(g, f):
    """g after f."""
    if f.target != g.source:
        raise ValueError("cannot compose: target of f is not the source of g")
    return MonoidHom(f.source, g.target, tuple(g.map[v] for v in f.map))


@dataclass(frozen=True)
class Congruence:
    """Partition of element indices, stored as least-representative per element."""

    rep: tuple

    @classmethod
    def from_keys(cls, keys):
        first = {}
        return cls(tuple(first.setdefault(k, i) for i, k in enumerate(keys)))

    @property
    def classes(self):
        out = {}
        for x, r in enumerate(self.rep):
            out.setdefault(r, []).append(x)
        return tuple(tuple(c) for _, c in sorted(out.items()))

    def related(self, x, y):
        return self.rep[x] == self.rep[y]

    def is_compatible(self, M):
        """Classes are respected by addition."""
        rep = np.array(self.rep)
        r = rep[M.array]
        # x ~ x' implies x + y ~ x' + y, checked against the representative of x
        return bool((r == r[rep]).all())

    def __le__(self, other):
        """Every class of self lies inside a class of other."""
        return all(other.rep[x] == other.rep[r] for x, r in enumerate(self.rep))


def hom_kernel(h):
    return Congruence.from_keys(h.map)


def _profile(M):
    orders = [element_order(M, x) for x in M.elements]
    lm = M.leq_matrix
    below = lm.sum(axis=0)
    above = lm.sum(axis=1)
    stab = (M.array == np.arange(M.size)[:, None]).sum(axis=1)
    return [
        (M.table[x][x] == x, orders[x] or 0, int(below[x]), int(above[x]), int(stab[x]))
        for x in M.elements
    ]


def _search_homs(M1, M2, candidates, injective):
    t1, t2 = M1.table, M2.table
    n = M1.size

    def propagate(h, used, new):
        stack = list(new)
        assigned = [x for x in range(n) if h[x] >= 0]
        while stack:
            x = stack.pop()
            for y in list(assigned):
                s = t1[x][y]
                v = t2[h[x]][h[y]]
                if h[s] < 0:
                    if v not in candidates[s] or (injective and v in used):
                        return False
                    h[s] = v
                    used.add(v)
                    assigned.append(s)
                    stack.append(s)
                elif h[s] != v:
                    return False
        return True

    def rec(h, used):
        free = [x for x in range(n) if h[x] < 0]
        if not free:
            yield tuple(h)
            return
        x = min(free, key=lambda z: (len(candidates[z]), z))
        for v in sorted(candidates[x]):
            if injective and v in used:
                continue
            h2, used2 = list(h), set(used)
            h2[x] = v
            used2.add(v)
            if propagate(h2, used2, [x]):
                yield from rec(h2, used2)

    h = [-1] * n
    if 0 not in candidates[0]:
        return
    h[0] = 0
    if propagate(h, {0}, [0]):
        yield from rec(h, {0})


def find_isomorphism(M1, M2):
    """A bijective hom M1 -> M2, or None.

    Backtracking over elements, pruned by matching per-element profiles
    (idempotency, order, numbers of elements below/above, stabiliser size).
    """
    if M1.size != M2.size:
        return None
    p1, p2 = _profile(M1), _profile(M2)
    if sorted(p1) != sorted(p2):
        return None
    by_profile = {}
    for y, p in enumerate(p2):
        by_profile.setdefault(p, set()).add(y)
    candidates = [by_profile[p] for p in p1]
    for m in _search_homs(M1, M2, candidates, injective=True):
        return MonoidHom(M1, M2, m)
    return None


def iter_homs(M1, M2):
    """Every monoid hom M1 -> M2 (exhaustive; meant for small monoids)."""
    o2 = [element_order(M2, y) for y in M2.elements]
    idem2 = {y for y in M2.elements if M2.table[y][y] == y}
    candidates = []
    for x in M1.elements:
        ox = element_order(M1, x)
        if M1.table[x][x] == x:
            cand = set(idem2)
        elif ox is not None:
            cand = {y for y in M2.elements if o2[y] is not None and ox % o2[y] == 0}
        else:
            cand = set(M2.elements)
        candidates.append(cand)
    for m in _search_homs(M1, M2, candidates, injective=False):
        yield MonoidHom(M1, M2, m)


def block_sum_hom(blocks, M, images):
    """The hom from a block sum to M sending each block's residue 1 to images[i].

    images[i] must satisfy (n_i + 1) x = x, i.e. have order dividing n_i.
    """
    desc = blocks if isinstance(blocks, BlockSumDescriptor) else BlockSumDescriptor(tuple(blocks))
    B = desc.monoid
    if len(images) != len(desc.orders):
        raise ValueError("one image per block required")
    per_block = []
    for n, x in zip(desc.orders, images):
        if M.multiple(n + 1, x) != x:
            raise NotHomomorphism(f"image {x} does not have order dividing {n}", witness=(x, n))
        per_block.append([0] + [M.multiple(i if i else n, x) for i in range(n)])
    m = tuple(
        M.sum(per_block[i][c] for i, c in enumerate(desc.coords(b))) for b in B.elements
    )
    return MonoidHom(B, M, m)
