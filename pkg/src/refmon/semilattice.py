"""Finite join-semilattices with 0, seen as monoids where every element is idempotent.

The order is x <= y iff x + y = y.  A finite semilattice with 0 is a lattice;
meets are the join of all common lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import product

from .errors import NotDistributive, NotSemilattice
from .monoid import FiniteCommutativeMonoid, has_refinement, submonoid


class FiniteSemilattice:
    def __init__(self, monoid):
        bad = [x for x in monoid.elements if monoid.table[x][x] != x]
        if bad:
            raise NotSemilattice(f"{bad[0]} + {bad[0]} != {bad[0]}", witness=bad[0])
        self.monoid = monoid

    @property
    def size(self):
        return self.monoid.size

    def __len__(self):
        return self.monoid.size

    @property
    def elements(self):
        return self.monoid.elements

    def join(self, x, y):
        return self.monoid.table[x][y]

    def join_all(self, xs):
        return reduce(self.join, xs, 0)

    def leq(self, x, y):
        return self.monoid.table[x][y] == y

    def lt(self, x, y):
        return x != y and self.monoid.table[x][y] == y

    def down(self, a):
        return frozenset(x for x in self.elements if self.leq(x, a))

    @cached_property
    def top(self):
        return self.join_all(self.elements)

    @cached_property
    def meet_table(self):
        n = self.size
        t = [[0] * n for _ in range(n)]
        for x in range(n):
            for y in range(x, n):
                m = self.join_all(z for z in self.elements if self.leq(z, x) and self.leq(z, y))
                t[x][y] = t[y][x] = m
        return tuple(tuple(r) for r in t)

    def meet(self, x, y):
        return self.meet_table[x][y]

    def lower_covers(self, p):
        below = [x for x in self.elements if self.lt(x, p)]
        return [x for x in below if not any(self.lt(x, y) for y in below)]

    def label(self, x):
        return self.monoid.label(x)

    def __eq__(self, other):
        return isinstance(other, FiniteSemilattice) and self.monoid == other.monoid

    def __hash__(self):
        return hash(self.monoid)

    def __repr__(self):
        return f"FiniteSemilattice(size={self.size})"


def semilattice_from_order(n, leq, labels=None):
    """Build the semilattice on range(n) whose order is the relation ``leq(x, y)``.

    Element 0 must be the least element; every pair needs a least upper bound.
    """
    if not all(leq(0, x) for x in range(n)):
        raise NotSemilattice("element 0 is not the least element")
    table = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(x, n):
            ub = [z for z in range(n) if leq(x, z) and leq(y, z)]
            least = [z for z in ub if all(leq(z, w) for w in ub)]
            if len(least) != 1:
                raise NotSemilattice(f"{x} and {y} have no least upper bound", witness=(x, y))
            table[x][y] = table[y][x] = least[0]
    return FiniteSemilattice(FiniteCommutativeMonoid(table, labels))


def chain(k):
    """The chain 0 < 1 < ... < k-1."""
    return semilattice_from_order(k, lambda x, y: x <= y)


def boolean_lattice(k):
    """Subsets of a k-element set; index = bitmask."""
    return semilattice_from_order(
        2**k,
        lambda x, y: x & ~y == 0,
        labels=tuple(frozenset(i for i in range(k) if x >> i & 1) for x in range(2**k)),
    )


def diamond():
    """M3: 0, three pairwise incomparable atoms 1, 2, 3 and a top 4."""
    return semilattice_from_order(5, lambda x, y: x == y or x == 0 or y == 4)


def pentagon():
    """N5: 0 < 1 < 2 < 4 and 0 < 3 < 4."""
    up = {0: {0, 1, 2, 3, 4}, 1: {1, 2, 4}, 2: {2, 4}, 3: {3, 4}, 4: {4}}
    return semilattice_from_order(5, lambda x, y: y in up[x])


def is_distributive(S, max_size=None):
    """Distributive means the join monoid has refinement."""
    return has_refinement(S.monoid, max_size)


def is_distributive_lattice(S):
    """x & (y | z) == (x & y) | (x & z) for all triples (independent check)."""
    for x, y, z in product(S.elements, repeat=3):
        if S.meet(x, S.join(y, z)) != S.join(S.meet(x, y), S.meet(x, z)):
            return False
    return True


@dataclass
class JoinIrreducibleData:
    lattice: FiniteSemilattice
    elements: tuple
    lower_cover: dict
    dagger: dict = None

    def below(self, a):
        """J(a): the join-irreducibles under a."""
        return tuple(p for p in self.elements if self.lattice.leq(p, a))


def join_irreducibles(S, dagger=None):
    """Join-irreducibles with their lower covers and, when S is distributive, p-dagger.

    ``dagger=None`` computes p-dagger only if S is distributive; ``True``
    insists on it and raises NotDistributive otherwise.
    """
    J, cover = [], {}
    for p in S.elements:
        if p == 0:
            continue
        covers = S.lower_covers(p)
        if len(covers) == 1:
            J.append(p)
            cover[p] = covers[0]
    data = JoinIrreducibleData(S, tuple(J), cover)
    if dagger is False:
        return data
    if not is_distributive(S, max_size=max(S.size, 64)):
        if dagger:
            raise NotDistributive("p-dagger needs a distributive lattice")
        return data
    data.dagger = {}
    for p in J:
        u = S.join_all(x for x in S.elements if not S.leq(p, x))
        if S.leq(p, u):
            raise NotDistributive(f"no largest element avoiding {p}", witness=p)
        data.dagger[p] = u
    return data


def sublattice_generated(S, seeds):
    """Closure of seeds and 0 under join and meet."""
    elems = set(seeds) | {0}
    frontier = list(elems)
    while frontier:
        new = []
        current = list(elems)
        for x in frontier:
            for y in current:
                for z in (S.join(x, y), S.meet(x, y)):
                    if z not in elems:
                        elems.add(z)
                        new.append(z)
        frontier = new
    return frozenset(elems)


def sub_semilattice(S, elements):
    """(semilattice on a join-closed subset containing 0, list of original indices)."""
    sub, incl = submonoid(S.monoid, elements)
    return FiniteSemilattice(sub), incl.map


@dataclass
class IdealLattice:
    """Id S: ideals as bitmasks over S, with the embedding a -> [0, a]."""

    base: FiniteSemilattice
    masks: tuple
    lattice: FiniteSemilattice
    embedding: tuple

    def members(self, i):
        m = self.masks[i]
        return frozenset(x for x in self.base.elements if m >> x & 1)


def _ideal_closure(S, mask):
    elems = {x for x in S.elements if mask >> x & 1}
    changed = True
    while changed:
        changed = False
        for x in list(elems):
            for y in list(elems):
                j = S.join(x, y)
                if j not in elems:
                    elems.add(j)
                    changed = True
        down = {z for x in elems for z in S.elements if S.leq(z, x)}
        if down - elems:
            elems |= down
            changed = True
    return sum(1 << x for x in elems)


def ideals(S):
    """All ideals of S (nonempty down-sets closed under joins)."""
    start = _ideal_closure(S, 1)
    seen = {start}
    frontier = [start]
    while frontier:
        new = []
        for m in frontier:
            for x in S.elements:
                if not m >> x & 1:
                    m2 = _ideal_closure(S, m | 1 << x)
                    if m2 not in seen:
                        seen.add(m2)
                        new.append(m2)
        frontier = new
    masks = sorted(seen, key=lambda m: (bin(m).count("1"), m))
    pos = {m: i for i, m in enumerate(masks)}
    k = len(masks)
    table = [[pos[_ideal_closure(S, masks[i] | masks[j])] for j in range(k)] for i in range(k)]
    lattice = FiniteSemilattice(FiniteCommutativeMonoid(table))
    embedding = tuple(pos[_ideal_closure(S, 1 << a)] for a in S.elements)
    return IdealLattice(S, tuple(masks), lattice, embedding)
