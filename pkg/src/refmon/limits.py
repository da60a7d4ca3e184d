"""Retract certificates: finite monoids realised from (Z/nZ) + {0} building blocks.

A certificate is a pair of homs eps: M -> B and mu: B -> M with mu o eps = id.
Then rho = eps o mu is idempotent with mu o rho = mu, and M is the direct
limit of the constant sequence B -rho-> B -rho-> ... with limiting map mu.
Every certificate here is checkable from its data alone (``verify``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product

from .errors import (
    DecompositionFailure,
    InvalidCertificate,
    InvalidTriple,
    NotDistributive,
    NotInRep,
    NotOrderUnit,
)
from .groups import cyclic_decomposition, internal_projections, pure_complement
from .monoid import (
    BlockSumDescriptor,
    FiniteCommutativeMonoid,
    MonoidHom,
    direct_sum,
    hom_compose,
    hom_failure,
    hom_kernel,
    iter_homs,
    nz_of_group,
    submonoid,
)
from .regular import (
    StructureTriple,
    _as_generalized,
    realize_from_triple,
    rep_report,
    structure_triple,
)
from .semilattice import is_distributive, join_irreducibles


@dataclass(frozen=True, eq=False)
class RetractCertificate:
    """M is a retract of B: mu(eps(x)) = x for all x.

    ``blocks`` is set when B is a sum of building blocks (then B is
    ``blocks.monoid``); ``unit`` is an optional distinguished element of B.
    """

    monoid: FiniteCommutativeMonoid
    codomain: FiniteCommutativeMonoid
    eps: MonoidHom
    mu: MonoidHom
    blocks: BlockSumDescriptor = None
    unit: int = None

    @property
    def rho(self):
        return hom_compose(self.eps, self.mu)

    def problems(self):
        """Every violated condition, as human-readable strings (empty when valid)."""
        out = []
        M, B = self.monoid, self.codomain
        if self.blocks is not None and self.blocks.monoid != B:
            out.append("codomain is not the stated block sum")
        for name, h, src, tgt in (("eps", self.eps, M, B), ("mu", self.mu, B, M)):
            if len(h.map) != src.size or any(not 0 <= v < tgt.size for v in h.map):
                out.append(f"{name} has the wrong shape")
                return out
            w = hom_failure(MonoidHom(src, tgt, h.map))
            if w is not None:
                out.append(f"{name} is not a homomorphism: {name}({w[0]} + {w[1]}) != "
                           f"{name}({w[0]}) + {name}({w[1]})")
        for x in M.elements:
            y = self.mu.map[self.eps.map[x]]
            if y != x:
                out.append(f"mu(eps({x})) = {y} != {x}")
                break
        if self.unit is not None and not 0 <= self.unit < B.size:
            out.append("unit is out of range")
        return out

    def verify(self):
        probs = self.problems()
        if probs:
            raise InvalidCertificate("; ".join(probs))
        return True


def identity_certificate(blocks):
    """The trivial certificate of a block sum by itself."""
    desc = blocks if isinstance(blocks, BlockSumDescriptor) else BlockSumDescriptor(tuple(blocks))
    B = desc.monoid
    ident = MonoidHom(B, B, tuple(B.elements))
    return RetractCertificate(B, B, ident, ident, desc)


def nz_group_retract(A):
    """A + {0} as a retract of the sum of building blocks of A's invariant factors.

    eps sends a = sum c_i b_i to the residues (c_i), mu sums the copies.
    The trivial group uses one block of order 1.
    """
    M = nz_of_group(A)
    basis = cyclic_decomposition(A.whole()) or ((A.zero, 1),)
    desc = BlockSumDescriptor(tuple(n for _, n in basis))
    B = desc.monoid
    coords = {}
    for cs in product(*(range(n) for n in desc.orders)):
        g = A.zero
        for (b, _), c in zip(basis, cs):
            g = A.add(g, A.mul(c, b))
        coords.setdefault(g, cs)
    eps = [0] + [desc.index(tuple(c + 1 for c in coords[g])) for g in A.elements]
    mu = []
    for y in B.elements:
        parts = [
            M.index_of(A.mul(c - 1, b)) for (b, _), c in zip(basis, desc.coords(y)) if c > 0
        ]
        mu.append(M.sum(parts))
    cert = RetractCertificate(M, B, MonoidHom(M, B, tuple(eps)), MonoidHom(B, M, tuple(mu)), desc)
    cert.verify()
    return cert


def _power(M, k):
    if k == 0:
        return FiniteCommutativeMonoid(((0,),), ((),))
    return reduce(direct_sum, [M] * k)


def finite_rep_retract(T, max_size=None):
    """A finite member of the class, written as a triple, as a retract of (G + {0})^J.

    J is the set of join-irreducibles of Lambda; G_p = G_{p_*} + H_p (direct),
    eps_p(e, x) = pi_p(x) when p <= e else 0, and mu_p(y) = (p, pi_p(y)).
    """
    L, G = T.lattice, T.group
    if T[L.top].elements != frozenset(G.elements):
        raise InvalidTriple("the top subgroup must be all of G")
    M = realize_from_triple(T)
    report = rep_report(M, max_size)
    failed = {k: v for k, v in report.items() if not v}
    if failed:
        name, v = next(iter(failed.items()))
        raise NotInRep(f"realised monoid fails {name}", witness=v.witness)
    if not is_distributive(L, max_size=max(L.size, 64)):
        raise NotDistributive("Lambda is not distributive")
    data = join_irreducibles(L, dagger=False)
    J = data.elements
    H = {p: pure_complement(T[data.lower_cover[p]], T[p]) for p in J}
    for e in L.elements:
        try:
            internal_projections(T[e], [H[p] for p in data.below(e)])
        except Exception as exc:
            raise DecompositionFailure(f"G_{e} is not the direct sum of its H_p: {exc}",
                                       witness=(e,)) from exc
    proj = internal_projections(T[L.top], [H[p] for p in J])
    pi = dict(zip(J, proj))
    nzG = nz_of_group(G)
    B = _power(nzG, len(J))
    k = nzG.size

    def index(coords):
        i = 0
        for c in coords:
            i = i * k + c
        return i

    eps = []
    for e, x in M.labels:
        eps.append(index([nzG.index_of(pi[p][x]) if L.leq(p, e) else 0 for p in J]))
    mu = []
    for y in B.elements:
        cs = []
        for _ in J:
            y, c = divmod(y, k)
            cs.append(c)
        cs.reverse()
        parts = [M.index_of((p, pi[p][nzG.label(c)])) for p, c in zip(J, cs) if c > 0]
        mu.append(M.sum(parts))
    cert = RetractCertificate(M, B, MonoidHom(M, B, tuple(eps)), MonoidHom(B, M, tuple(mu)))
    cert.verify()
    return cert, {"join_irreducibles": J, "complements": H, "projections": pi}


def _sum_of_certs(certs):
    """Componentwise sum of certificates over block sums."""
    if not certs:
        return identity_certificate(())
    M = reduce(direct_sum, [c.monoid for c in certs])
    desc = BlockSumDescriptor(tuple(n for c in certs for n in c.blocks.orders))
    B = desc.monoid
    sizes_m = [c.monoid.size for c in certs]

    def split(x, sizes):
        out = []
        for s in reversed(sizes):
            x, r = divmod(x, s)
            out.append(r)
        return out[::-1]

    eps = []
    for x in M.elements:
        coords = []
        for c, xi in zip(certs, split(x, sizes_m)):
            coords.extend(c.blocks.coords(c.eps.map[xi]))
        eps.append(desc.index(coords))
    mu = []
    for y in B.elements:
        coords = desc.coords(y)
        parts, pos = [], 0
        for c in certs:
            width = len(c.blocks.orders)
            parts.append(c.mu.map[c.blocks.index(coords[pos:pos + width])])
            pos += width
        m = 0
        for p, s in zip(parts, sizes_m):
            m = m * s + p
        mu.append(m)
    return RetractCertificate(M, B, MonoidHom(M, B, tuple(eps)), MonoidHom(B, M, tuple(mu)), desc)


def blocks_retract(obj, max_size=None):
    """Certificate of a finite member of the class over a sum of building blocks.

    Accepts a monoid (converted through its structure triple) or a triple.
    The inner retract onto (G + {0})^J is composed with the block retract
    of G + {0} in every coordinate.
    """
    if isinstance(obj, StructureTriple) and obj[obj.lattice.top].elements != frozenset(
            obj.group.elements):
        obj = realize_from_triple(obj)
    if isinstance(obj, StructureTriple):
        T, iso = obj, None
    else:
        report = rep_report(obj, max_size)
        failed = {k: v for k, v in report.items() if not v}
        if failed:
            name, v = next(iter(failed.items()))
            raise NotInRep(f"monoid fails {name}", witness=v.witness)
        T, iso = structure_triple(obj)
    inner, info = finite_rep_retract(T, max_size)
    nz = nz_group_retract(T.group)
    outer = _sum_of_certs([nz] * len(info["join_irreducibles"]))
    # outer.monoid is (G + {0})^J, indexed exactly like inner.codomain
    eps = hom_compose(MonoidHom(inner.codomain, outer.codomain, outer.eps.map), inner.eps)
    mu = hom_compose(inner.mu, MonoidHom(outer.codomain, inner.codomain, outer.mu.map))
    M = inner.monoid
    if iso is not None:
        inv = [0] * iso.source.size
        for a, b in enumerate(iso.map):
            inv[b] = a
        M = iso.source
        eps = MonoidHom(M, outer.codomain, tuple(eps.map[iso.map[x]] for x in M.elements))
        mu = MonoidHom(outer.codomain, M, tuple(inv[v] for v in mu.map))
    cert = RetractCertificate(M, outer.codomain, eps, mu, outer.blocks)
    cert.verify()
    return cert


@dataclass(frozen=True, eq=False)
class DirectSystemSeq:
    """The constant system B -rho-> B -rho-> ... with limit M and limiting map mu."""

    term: FiniteCommutativeMonoid
    transition: MonoidHom
    limit: FiniteCommutativeMonoid
    limiting_map: MonoidHom

    def terms(self, k):
        return [self.term] * k

    def transitions(self, k):
        return [self.transition] * k

    def limiting_maps(self, k):
        return [self.limiting_map] * k

    def image(self):
        """image(rho) as a submonoid of B with the inclusion."""
        return submonoid(self.term, set(self.transition.map))


def limit_system(cert):
    """Check rho^2 = rho, mu o rho = mu, and mu: image(rho) -> M bijective."""
    probs = cert.problems()
    if probs:
        raise InvalidCertificate("; ".join(probs))
    rho = cert.rho
    r, m = rho.map, cert.mu.map
    if any(r[r[y]] != r[y] for y in cert.codomain.elements):
        raise InvalidCertificate("rho is not idempotent")
    if any(m[r[y]] != m[y] for y in cert.codomain.elements):
        raise InvalidCertificate("mu o rho != mu")
    img = sorted(set(r))
    if sorted(m[y] for y in img) != list(cert.monoid.elements):
        raise InvalidCertificate("mu does not map image(rho) bijectively onto M")
    return DirectSystemSeq(cert.codomain, rho, cert.monoid, cert.mu)


def cone_factorisations(system, C):
    """For every cone phi: B -> C (phi o rho = phi), the factorisation psi = phi o eps.

    Yields (phi, psi) after checking psi o mu = phi and that psi is the only
    hom with that property (mu is onto, so any other candidate differs on
    some mu(b)).  Exhaustive over all homs B -> C.
    """
    # a section of mu read off rho's image plays the role of eps
    r, m = system.transition.map, system.limiting_map.map
    eps_map = [None] * system.limit.size
    for y in sorted(set(r)):
        eps_map[m[y]] = y
    for phi in iter_homs(system.term, C):
        if any(phi.map[r[y]] != phi.map[y] for y in system.term.elements):
            continue
        psi = tuple(phi.map[eps_map[x]] for x in system.limit.elements)
        if any(psi[m[y]] != phi.map[y] for y in system.term.elements):
            raise InvalidCertificate("cone does not factor through the limit")
        for other in iter_homs(system.limit, C):
            if other.map != psi and all(other.map[m[y]] == phi.map[y] for y in system.term.elements):
                raise InvalidCertificate("factorisation through the limit is not unique")
        yield phi, MonoidHom(system.limit, C, psi)


def factor_through(phi, cert):
    """Factor phi: B -> M as B -psi-> B* -phi'-> M with ker psi = ker phi.

    psi = eps o phi and phi' = mu, where cert: M -> B* -> M.
    """
    if phi.target != cert.monoid:
        raise ValueError("phi must land in the certified monoid")
    psi = hom_compose(cert.eps, phi)
    phi2 = cert.mu
    back = hom_compose(phi2, psi)
    if back.map != phi.map:
        raise InvalidCertificate("phi' o psi != phi")
    if hom_kernel(phi) != hom_kernel(psi):
        raise InvalidCertificate("ker phi != ker psi")
    return psi, phi2


def order_unit_witness(M, u):
    """Some x with x <= u failing, or None when u is an order-unit of a regular M."""
    for x in M.elements:
        if not M.leq(x, u):
            return x
    return None


def order_unit_normalize(M, u, cert):
    """Cut a block-sum certificate down to the elements below eps(u).

    Those are the coordinates where eps(u) is a group element; the result
    carries eps(u) as its unit, one residue per remaining block.
    """
    if cert.blocks is None:
        raise ValueError("order-unit normalisation needs a block-sum certificate")
    if cert.monoid != M:
        raise ValueError("certificate is for a different monoid")
    w = order_unit_witness(M, u)
    if w is not None:
        raise NotOrderUnit(f"{w} <= {u} fails", witness=(w,))
    desc = cert.blocks
    eu = desc.coords(cert.eps.map[u])
    keep = [i for i, c in enumerate(eu) if c > 0]
    new = BlockSumDescriptor(tuple(desc.orders[i] for i in keep))
    B2 = new.monoid
    eps = []
    for x in M.elements:
        cs = desc.coords(cert.eps.map[x])
        if any(c and i not in keep for i, c in enumerate(cs)):
            raise InvalidCertificate(f"eps({x}) is not below eps(u)")
        eps.append(new.index(tuple(cs[i] for i in keep)))
    mu = []
    for y in B2.elements:
        cs = [0] * len(desc.orders)
        for i, c in zip(keep, new.coords(y)):
            cs[i] = c
        mu.append(cert.mu.map[desc.index(cs)])
    unit = new.index(tuple(eu[i] for i in keep))
    out = RetractCertificate(M, B2, MonoidHom(M, B2, tuple(eps)), MonoidHom(B2, M, tuple(mu)),
                             new, unit)
    out.verify()
    if order_unit_witness(B2, unit) is not None:
        raise InvalidCertificate("eps(u) is not an order-unit of the cut-down sum")
    return out


def unit_residues(cert):
    """The residue m of each pair ((Z/nZ) + {0}, m) in a normalised certificate."""
    return tuple(c - 1 for c in cert.blocks.coords(cert.unit))


def verify_order_restriction(cert, m):
    """Every block order divides the (generalised) integer m."""
    m = _as_generalized(m)
    return all(m.divisible_by(n) for n in cert.blocks.orders)
