"""Small submonoids in the class containing a given finite set.

Input: a triple (Lambda, G, {G_e}) whose monoid M lies in the class and a
finite set X of elements (e_x, g_x).  Output: a submonoid N of M, also in
the class, with X inside N, built from

* D, the sublattice of Lambda generated by 0 and the e_x (for finite Lambda
  every ideal is principal, so ideals of Lambda are identified with their
  top elements);
* for every join-irreducible P of D a complement H_P of G_{P_*} in G_P and
  the subgroup H'_P of H_P spanned by the P-components of the g_x;
* witnesses u_P, v_P, w_P below P with psi(P) = u_P v v_P v w_P, and the
  map phi(A) = join of psi(P) over the join-irreducibles P <= A;
* N = union over A in D of {phi(A)} x G'_A, with G'_A the direct sum of
  the H'_P for P <= A.

Everything is recorded in an ApproximationCertificate, which
``verify_certificate`` re-checks from its own fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import lcm

from .errors import ClaimFailure, NotInRep
from .groups import (
    internal_projections,
    is_pure,
    pure_complement,
    subgroup_from_elements,
    subgroup_generated,
    subgroup_intersection,
    subgroup_sum,
)
from .monoid import has_refinement
from .regular import (
    realize_from_triple,
    rep_report,
    restrict_orders,
    semilattice_of_subgroups,
)
from .semilattice import join_irreducibles, sub_semilattice, sublattice_generated


@dataclass(eq=False)
class ApproximationCertificate:
    triple: object
    X: tuple
    m: int
    n: int
    restricted: dict  # Lambda element -> G_e[m]
    D: tuple
    irreducibles: tuple
    lower_cover: dict
    dagger: dict
    H: dict
    H_prime: dict
    u: dict
    v: dict
    w: dict
    psi: dict
    phi: dict
    G_prime: dict
    N: object = field(repr=False)

    @property
    def bound(self):
        return (self.m + 1) ** (2**self.n * self.n)

    @property
    def size(self):
        return self.N.size


def _least(L, candidates):
    """The least candidate if one exists, else the minimal candidate of least index."""
    candidates = sorted(candidates)
    for c in candidates:
        if all(L.leq(c, d) for d in candidates):
            return c
    minimal = [c for c in candidates if not any(L.lt(d, c) for d in candidates)]
    return minimal[0]


def _restricted_subgroups(T, m):
    """G_e[m], read off the submonoid M[m] of the realised monoid."""
    M = realize_from_triple(T)
    sub, _ = restrict_orders(M, m)
    by_e = {e: [] for e in T.lattice.elements}
    for e, g in sub.labels:
        by_e[e].append(g)
    return {e: subgroup_from_elements(T.group, gs) for e, gs in by_e.items()}


def _assert_rep(M, what, max_size):
    report = rep_report(M, max_size)
    bad = [k for k, v in report.items() if not v]
    if bad:
        raise NotInRep(f"{what} fails {bad[0]}", witness=report[bad[0]].witness)


def _direct_sum(G, parts):
    return reduce(subgroup_sum, parts, G.trivial())


def build_N(triple, phi, G_prime):
    """N = union of {phi(A)} x G'_A over A in D (keys of phi)."""
    subs = {phi[a]: G_prime[a] for a in phi}
    return semilattice_of_subgroups(triple.lattice, triple.group, subs, points=sorted(subs))


def approximate(T, X, max_size=None):
    """Run the construction on triple T and elements X = [(e, g), ...]."""
    L, G = T.lattice, T.group
    M = realize_from_triple(T)
    _assert_rep(M, "the input monoid", max_size)
    xs = []
    for e, g in [(0, G.zero)] + [(int(e), tuple(g)) for e, g in X]:
        if g not in T[e]:
            raise ValueError(f"({e}, {g}) is not an element of the monoid")
        if (e, g) not in xs:
            xs.append((e, g))
    n = len(xs) - 1
    m = reduce(lcm, (G.order(g) for _, g in xs), 1)
    Gm = _restricted_subgroups(T, m)

    D = sorted(sublattice_generated(L, [e for e, _ in xs]))
    Dl, Dmap = sub_semilattice(L, D)
    jd = join_irreducibles(Dl, dagger=True)
    J = tuple(Dmap[P] for P in jd.elements)
    cover = {Dmap[P]: Dmap[jd.lower_cover[P]] for P in jd.elements}
    dagger = {Dmap[P]: Dmap[jd.dagger[P]] for P in jd.elements}

    def below(a):
        return [p for p in J if L.leq(p, a)]

    H = {p: pure_complement(Gm[cover[p]], Gm[p]) for p in J}
    for a in D:
        internal_projections(Gm[a], [H[p] for p in below(a)])

    U = {p: set() for p in J}
    for e, g in xs:
        ps = below(e)
        proj = internal_projections(Gm[e], [H[p] for p in ps])
        for p, pr in zip(ps, proj):
            U[p].add(pr[g])
    H_prime = {p: subgroup_generated(G, sorted(U[p] - {G.zero})) for p in J}

    u = {p: p for p in J}
    v = {}
    for p in J:
        cands = [c for c in L.elements if L.leq(c, p) and H_prime[p] <= Gm[c]]
        v[p] = reduce(L.meet, cands, p)
        if not H_prime[p] <= Gm[v[p]]:
            raise ClaimFailure(f"no least v below {p} carrying H'_P")
    w = {}
    for p in J:
        cands = [c for c in L.elements if L.leq(c, p) and not L.leq(c, dagger[p])]
        w[p] = _least(L, cands)
    psi = {p: L.join_all([u[p], v[p], w[p]]) for p in J}
    phi = {a: L.join_all(psi[p] for p in below(a)) for a in D}
    G_prime = {a: _direct_sum(G, [H_prime[p] for p in below(a)]) for a in D}
    N = build_N(T, phi, G_prime)

    cert = ApproximationCertificate(
        triple=T, X=tuple(xs), m=m, n=n, restricted=Gm, D=tuple(D), irreducibles=J,
        lower_cover=cover, dagger=dagger, H=H, H_prime=H_prime, u=u, v=v, w=w,
        psi=psi, phi=phi, G_prime=G_prime, N=N,
    )
    ok, report = verify_certificate(cert, max_size)
    if not ok:
        failed = [k for k, val in report.items() if not val]
        raise ClaimFailure(f"construction produced a bad certificate: {failed}", witness=failed)
    return cert


def verify_certificate(c, max_size=None):
    """Re-check every claim of a certificate from its fields.

    Returns (ok, report) with report mapping check name -> bool.
    """
    T = c.triple
    L, G = T.lattice, T.group
    D = list(c.D)
    J = list(c.irreducibles)
    r = {}

    Gm = _restricted_subgroups(T, c.m)
    r["restricted"] = all(Gm[e] == c.restricted[e] for e in L.elements)
    r["m"] = all(G.mul(c.m, g) == G.zero for _, g in c.X)

    seeds = {e for e, _ in c.X}
    r["D_sublattice"] = (
        0 in D and seeds <= set(D)
        and all(L.join(a, b) in D and L.meet(a, b) in D for a in D for b in D)
    )
    Dl, Dmap = sub_semilattice(L, D) if r["D_sublattice"] else (None, None)
    if Dl is not None:
        jd = join_irreducibles(Dl, dagger=True)
        r["irreducibles"] = (
            tuple(Dmap[P] for P in jd.elements) == tuple(J)
            and all(c.lower_cover[Dmap[P]] == Dmap[jd.lower_cover[P]] for P in jd.elements)
            and all(c.dagger[Dmap[P]] == Dmap[jd.dagger[P]] for P in jd.elements)
        )
    else:
        r["irreducibles"] = False

    def below(a):
        return [p for p in J if L.leq(p, a)]

    def direct(B, parts):
        try:
            internal_projections(B, parts)
            return True
        except Exception:
            return False

    r["complements"] = all(direct(Gm[p], [Gm[c.lower_cover[p]], c.H[p]]) for p in J)
    r["H_prime_in_H"] = all(c.H_prime[p] <= c.H[p] for p in J)
    r["witnesses_below_P"] = all(
        L.leq(c.u[p], p) and L.leq(c.v[p], p) and L.leq(c.w[p], p) for p in J
    )
    r["v_carries_H_prime"] = all(c.H_prime[p] <= Gm[c.v[p]] for p in J)
    r["w_outside_dagger"] = all(not L.leq(c.w[p], c.dagger[p]) for p in J)
    r["psi"] = all(c.psi[p] == L.join_all([c.u[p], c.v[p], c.w[p]]) for p in J)
    r["phi"] = set(c.phi) == set(D) and all(
        c.phi[a] == L.join_all(c.psi[p] for p in below(a)) for a in D
    )
    if not r["phi"]:
        return False, r
    phi = c.phi

    hom = all(phi[L.join(a, b)] == L.join(phi[a], phi[b]) for a in D for b in D) and phi[0] == 0
    reflects = all(
        L.leq(a, b) or not L.leq(phi[a], phi[b]) for a in D for b in D
    )
    r["claim1_embedding"] = hom and reflects and r["w_outside_dagger"]
    image = sorted(set(phi.values()))
    closed = all(L.join(a, b) in image for a in image for b in image)
    if closed:
        sub, _ = sub_semilattice(L, image)
        r["claim2_distributive"] = has_refinement(sub.monoid, max_size=max(sub.size, 64))
    else:
        r["claim2_distributive"] = False
    r["claim3_phi_in_A"] = all(L.leq(phi[a], a) for a in D)
    r["claim4_fixes_X"] = all(phi[e] == e for e, _ in c.X)

    rebuilt = {a: _direct_sum(G, [c.H_prime[p] for p in below(a)]) for a in D}
    r["G_prime"] = all(
        rebuilt[a] == c.G_prime[a] and direct(rebuilt[a], [c.H_prime[p] for p in below(a)])
        for a in D
    )
    r["G_prime_in_G"] = all(rebuilt[a] <= Gm[phi[a]] for a in D)
    r["sum_and_meet"] = all(
        subgroup_sum(rebuilt[a], rebuilt[b]) == rebuilt[L.join(a, b)]
        and subgroup_intersection(rebuilt[a], rebuilt[b]) == rebuilt[L.meet(a, b)]
        for a in D for b in D
    )
    r["purity"] = all(
        is_pure(rebuilt[a], rebuilt[b]) for a in D for b in D if L.leq(a, b)
    )
    if not (r["claim1_embedding"] and r["G_prime_in_G"]):
        r["N_matches"] = r["X_in_N"] = r["N_in_M"] = r["N_in_rep"] = False
        r["bound"] = False
        return False, r
    N = build_N(T, phi, rebuilt)
    r["N_matches"] = N == c.N and N.labels == c.N.labels
    labels = set(N.labels)
    r["X_in_N"] = all(x in labels for x in c.X)
    r["N_in_M"] = all(g in T[e] for e, g in labels)
    r["N_in_rep"] = all(rep_report(N, max_size=max(N.size, 64)).values())
    n = len([x for x in c.X if x != (0, G.zero)])
    r["bound"] = n == c.n and N.size <= c.bound
    return all(r.values()), r


def naive_restriction(T, points):
    """The submonoid over a join-closed subset of Lambda, keeping every G_e.

    This is the shortcut that a finite distributive subsemilattice suggests;
    it can lose the second Mayer-Vietoris clause, which is why ``approximate``
    goes through D and the psi/phi witnesses instead.
    """
    return semilattice_of_subgroups(T.lattice, T.group, T.subgroups, points=sorted(set(points)))

