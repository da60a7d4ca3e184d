"""Independent reference computations used by the tests.

The oracles are plain enumeration.  The family builders below use the
library only to construct instances, never to produce expected verdicts.
"""

from functools import lru_cache
from itertools import combinations, permutations

from refmon import (
    FiniteAbelianGroup,
    boolean_lattice,
    chain,
    diamond,
    in_rep,
    realize_from_triple,
    semilattice_from_order,
    triple_family,
)


def refinement_oracle(M):
    """True iff every x1 + x2 = y1 + y2 refines; loops written out by hand."""
    t = M.table
    n = M.size
    for x1 in range(n):
        for x2 in range(n):
            s = t[x1][x2]
            for y1 in range(n):
                for y2 in range(n):
                    if t[y1][y2] != s:
                        continue
                    if not _refines(t, n, x1, x2, y1, y2):
                        return False
    return True


def _refines(t, n, x1, x2, y1, y2):
    for z11 in range(n):
        for z12 in range(n):
            if t[z11][z12] != x1:
                continue
            for z21 in range(n):
                if t[z11][z21] != y1:
                    continue
                for z22 in range(n):
                    if t[z21][z22] == x2 and t[z12][z22] == y2:
                        return True
    return False


def generated(M, xs):
    """Submonoid generated by xs, by closure."""
    out = {0} | set(xs)
    while True:
        new = {M.add(a, b) for a in out for b in out} - out
        if not new:
            return out
        out |= new


def _is_lattice_order(n, rel):
    for x in range(n):
        for y in range(n):
            ub = [z for z in range(n) if (x, z) in rel and (y, z) in rel]
            least = [z for z in ub if all((z, w) in rel for w in ub)]
            if len(least) != 1:
                return False
    return True


def _canonical(n, rel):
    best = None
    for perm in permutations(range(1, n)):
        p = (0,) + perm
        key = tuple(sorted((p[a], p[b]) for a, b in rel))
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def all_lattices(max_n):
    """One representative of every finite lattice with at most max_n elements.

    Orders are naturally labelled (x < y implies x < y as integers) with 0
    the bottom; isomorphic copies are removed by canonical relabelling.
    """
    out = []
    for n in range(1, max_n + 1):
        pairs = [(a, b) for a in range(1, n) for b in range(a + 1, n)]
        seen = set()
        for k in range(len(pairs) + 1):
            for chosen in combinations(pairs, k):
                rel = {(x, x) for x in range(n)} | {(0, x) for x in range(n)} | set(chosen)
                if any((a, d) not in rel for a, b in rel for c, d in rel if b == c):
                    continue
                if not _is_lattice_order(n, rel):
                    continue
                key = _canonical(n, rel)
                if key in seen:
                    continue
                seen.add(key)
                out.append(semilattice_from_order(n, lambda x, y, r=frozenset(rel): (x, y) in r))
    return tuple(out)


FAMILY_LATTICES = ("chain1", "chain2", "chain3", "chain4", "square", "diamond")
FAMILY_GROUPS = ((2,), (3,), (4,), (2, 2))


def family_lattice(name):
    if name.startswith("chain"):
        return chain(int(name[5:]))
    return boolean_lattice(2) if name == "square" else diamond()


@lru_cache(maxsize=None)
def family():
    """Every monotone subgroup assignment over the small lattices and groups."""
    out = []
    for name in FAMILY_LATTICES:
        L = family_lattice(name)
        for factors in FAMILY_GROUPS:
            out.extend(triple_family(L, FiniteAbelianGroup(factors), require_cover=False))
    return tuple(out)


@lru_cache(maxsize=None)
def rep_family():
    """(triple, monoid) for the family members lying in the class."""
    out = []
    for T in family():
        M = realize_from_triple(T)
        if in_rep(M):
            out.append((T, M))
    return tuple(out)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = {}


def record(number, title, ok, detail):
    line = f"[criterion {number:>2}] {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok
