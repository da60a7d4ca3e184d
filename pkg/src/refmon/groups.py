"""Finite abelian groups as products of cyclic factors, and their subgroups.

Elements are tuples of residues; the i-th entry is taken mod ``factors[i]``.
Subgroups carry their full element set, which is fine at the sizes this
package is meant for (a few hundred elements).

A subgroup A of B is *pure* when A & nB == nA for every n.  Only the finite
case of Kulikov's theorem is used: a pure subgroup of a finite (bounded)
group is a direct summand, and ``pure_complement`` constructs a summand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product
from math import gcd, lcm

from .errors import NotDirectSum, NotPure, ParentMismatch


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        if any(d < 1 for d in factors):
            raise ValueError(f"cyclic factors must be >= 1, got {factors}")
        object.__setattr__(self, "factors", factors)

    @cached_property
    def elements(self):
        return tuple(product(*(range(d) for d in self.factors)))

    @cached_property
    def index(self):
        return {x: i for i, x in enumerate(self.elements)}

    @property
    def zero(self):
        return (0,) * len(self.factors)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.factors))

    def mul(self, k, x):
        return tuple((k * a) % d for a, d in zip(x, self.factors))

    def order(self, x):
        return reduce(lcm, (d // gcd(a, d) for a, d in zip(x, self.factors)), 1)

    @property
    def exponent(self):
        return reduce(lcm, self.factors, 1)

    def subgroup(self, generators=()):
        return subgroup_generated(self, generators)

    def whole(self):
        return Subgroup(self, frozenset(self.elements), tuple(_basis(self, self.elements)))

    def trivial(self):
        return Subgroup(self, frozenset([self.zero]), ())

    def __repr__(self):
        if not self.factors:
            return "FiniteAbelianGroup(trivial)"
        return "FiniteAbelianGroup(" + " + ".join(f"Z/{d}" for d in self.factors) + ")"


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteAbelianGroup
    elements: frozenset
    generators: tuple = field(default=())

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self.elements == other.elements

    def __hash__(self):
        return hash((self.parent, self.elements))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def __iter__(self):
        return iter(self.sorted())

    def __le__(self, other):
        return self.elements <= other.elements

    def sorted(self):
        return tuple(sorted(self.elements))

    @property
    def exponent(self):
        return reduce(lcm, (self.parent.order(x) for x in self.elements), 1)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"<{gens}> ({len(self)} elts of {self.parent!r})"


def _ambient(B):
    """(group, element set) for either a group or a subgroup."""
    if isinstance(B, Subgroup):
        return B.parent, B.elements
    return B, frozenset(B.elements)


def _closure(G, generators, start=None):
    elems = set(start) if start is not None else {G.zero}
    frontier = list(elems)
    gens = [tuple(g) for g in generators]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


def subgroup_generated(G, generators=()):
    gens = tuple(tuple(g) for g in generators)
    for g in gens:
        if g not in G:
            raise ValueError(f"{g} is not an element of {G!r}")
    return Subgroup(G, _closure(G, gens), gens)


def subgroup_from_elements(G, elements):
    elems = frozenset(tuple(x) for x in elements)
    return Subgroup(G, elems, tuple(_basis(G, sorted(elems))))


def _same_parent(A, B):
    if A.parent != B.parent:
        raise ParentMismatch(f"{A!r} and {B!r} live in different groups")


def subgroup_sum(A, B):
    _same_parent(A, B)
    elems = frozenset(A.parent.add(a, b) for a in A.elements for b in B.elements)
    return Subgroup(A.parent, elems, A.generators + B.generators)


def subgroup_intersection(A, B):
    _same_parent(A, B)
    return subgroup_from_elements(A.parent, A.elements & B.elements)


def multiple_set(G, n, elements):
    return frozenset(G.mul(n, x) for x in elements)


def torsion(B, m):
    """Elements of B killed by m, as a subgroup."""
    G, elems = _ambient(B)
    return subgroup_from_elements(G, (x for x in elems if G.mul(m, x) == G.zero))


def all_subgroups(B):
    """Every subgroup of B, sorted by size then by element list."""
    G, elems = _ambient(B)
    seen = {frozenset([G.zero])}
    frontier = list(seen)
    order = sorted(elems)
    while frontier:
        new = []
        for H in frontier:
            for g in order:
                if g in H:
                    continue
                K = _closure(G, [g], start=H)
                if K not in seen:
                    seen.add(K)
                    new.append(K)
        frontier = new
    subs = [subgroup_from_elements(G, H) for H in seen]
    subs.sort(key=lambda H: (len(H), H.sorted()))
    return subs


def is_pure(A, B):
    """A & nB == nA for n = 1..exponent(B)."""
    G, belems = _ambient(B)
    if A.parent != G:
        raise ParentMismatch("A must be a subgroup of the group containing B")
    if not A.elements <= belems:
        raise ValueError("A is not contained in B")
    exp = reduce(lcm, (G.order(b) for b in belems), 1)
    for n in range(1, exp + 1):
        if A.elements & multiple_set(G, n, belems) != multiple_set(G, n, A.elements):
            return False
    return True


def purity_witness(A, B):
    """Least n with A & nB != nA, or None when A is pure in B."""
    G, belems = _ambient(B)
    exp = reduce(lcm, (G.order(b) for b in belems), 1)
    for n in range(1, exp + 1):
        if A.elements & multiple_set(G, n, belems) != multiple_set(G, n, A.elements):
            return n
    return None


class AbstractGroup:
    """A finite abelian group given by a sorted element list and an addition.

    Used for subgroups, quotients (elements are least coset representatives)
    and groups sitting inside monoids (elements are monoid indices).
    """

    def __init__(self, elements, add, zero):
        self.elements = tuple(sorted(elements))
        self._add = add
        self.zero = zero

    def add(self, x, y):
        return self._add(x, y)

    def __len__(self):
        return len(self.elements)

    def mul(self, k, x):
        acc = self.zero
        for _ in range(k):
            acc = self._add(acc, x)
        return acc

    def order(self, x):
        m, y = 1, x
        while y != self.zero:
            y = self._add(y, x)
            m += 1
        return m

    def generated(self, gens, start=None):
        elems = set(start) if start is not None else {self.zero}
        frontier = list(elems)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self._add(x, g)
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return frozenset(elems)

    def quotient(self, sub):
        sub = tuple(sub)
        rep = {}
        for x in self.elements:
            if x not in rep:
                coset = [self._add(x, h) for h in sub]
                r = min(coset)
                for y in coset:
                    rep[y] = r
        add = self._add
        return AbstractGroup(set(rep.values()), lambda a, b: rep[add(a, b)], rep[self.zero])


def decompose(group):
    """Invariant-factor basis of an AbstractGroup: [(element, order), ...].

    Orders come out as n1 | n2 | ... | nk.  An element g of maximal order
    spans a pure cyclic subgroup, so every basis element of the quotient by
    <g> lifts to an element of the same order; the lifts together with g
    form a basis.
    """
    if len(group) == 1:
        return []
    orders = {x: group.order(x) for x in group.elements}
    exp = max(orders.values())
    g = next(x for x in group.elements if orders[x] == exp)
    cyc = group.generated([g])
    quot = group.quotient(cyc)
    basis = []
    for q, n in decompose(quot):
        b = _lift(group, q, cyc, n)
        if b is None:
            raise AssertionError("maximal-order cyclic subgroup was not pure")
        basis.append((b, n))
    basis.append((g, exp))
    return basis


def _lift(group, rep, sub, n):
    for b in sorted(group.add(rep, h) for h in sub):
        if group.mul(n, b) == group.zero:
            return b
    return None


def _abstract(G, elements):
    return AbstractGroup(elements, G.add, G.zero)


def _basis(G, elements):
    return [b for b, _ in decompose(_abstract(G, elements))]


def cyclic_decomposition(A):
    """Internal direct-sum basis of A as ((generator, order), ...), orders n1 | n2 | ..."""
    G, elems = _ambient(A)
    return tuple(decompose(_abstract(G, elems)))


def complement_in(group, sub):
    """A complement of the pure subgroup ``sub`` inside an AbstractGroup.

    Returns (complement element set, generators), or None if some basis
    element of the quotient has no lift of the same order (sub not pure).
    """
    sub = frozenset(sub)
    quot = group.quotient(sub)
    gens = []
    for q, n in decompose(quot):
        b = _lift(group, q, sub, n)
        if b is None:
            return None
        gens.append(b)
    return group.generated(gens), tuple(gens)


def pure_complement(A, B):
    """C with A & C = 0 and A + C = B, for A pure in B."""
    G, belems = _ambient(B)
    if A.parent != G:
        raise ParentMismatch("A must be a subgroup of the group containing B")
    n = purity_witness(A, B)
    if n is not None:
        raise NotPure(f"subgroup is not pure: A & {n}B != {n}A", witness=n)
    found = complement_in(_abstract(G, belems), A.elements)
    if found is None:
        raise AssertionError("pure subgroup without a complement")
    elems, gens = found
    C = Subgroup(G, elems, gens)
    if A.elements & C.elements != {G.zero} or len(A) * len(C) != len(belems):
        raise AssertionError("complement check failed")
    return C


def complements_by_search(A, B):
    """All complements of A in B by enumerating subgroups (test oracle)."""
    G, belems = _ambient(B)
    out = []
    for C in all_subgroups(B):
        if A.elements & C.elements == {G.zero} and len(A) * len(C) == len(belems):
            out.append(C)
    return out


def internal_projections(B, parts):
    """Projections of B onto the summands of B = parts[0] + ... (direct).

    Returns one dict per part, mapping each element of B to its component.
    """
    G, belems = _ambient(B)
    parts = list(parts)
    seen = {}
    for combo in product(*(p.sorted() for p in parts)):
        s = reduce(G.add, combo, G.zero)
        if s not in belems:
            raise NotDirectSum(f"{s} is a sum of parts but lies outside B", witness=s)
        if s in seen:
            raise NotDirectSum(f"{s} has two decompositions", witness=s)
        seen[s] = combo
    missing = sorted(belems - seen.keys())
    if missing:
        raise NotDirectSum(f"{missing[0]} has no decomposition", witness=missing[0])
    return tuple({s: combo[i] for s, combo in seen.items()} for i in range(len(parts)))
