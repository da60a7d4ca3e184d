"""The ten acceptance criteria, each printing one PASS/FAIL line.

Every comparison is exact (integer tables, set and map equality).
"""

import random
import time
from itertools import combinations, combinations_with_replacement
from math import gcd, lcm

from oracles import family, record, rep_family
from refmon import (
    FiniteAbelianGroup,
    StructureTriple,
    all_subgroups,
    approximate,
    blocks_retract,
    boolean_lattice,
    chain,
    check_mvp,
    check_pur,
    element_order,
    factor_through,
    has_refinement,
    hom_kernel,
    in_rep,
    is_distributive,
    naive_restriction,
    order_unit_normalize,
    realize_from_triple,
    rep_report,
    restrict_orders,
    verify_certificate,
)
from refmon.limits import order_unit_witness, unit_residues
from refmon.monoid import BlockSumDescriptor, block_sum_hom, hom_compose
from refmon.regular import decompose_regular, idempotent_semilattice
from refmon.groups import subgroup_intersection, subgroup_sum

FAMILY = family()
REP = rep_family()


def test_01_refinement_equals_distributive_idempotents_and_mvp():
    start = time.perf_counter()
    mismatches = []
    for T in FAMILY:
        M = realize_from_triple(T)
        brute = has_refinement(M)
        E, _ = idempotent_semilattice(M)
        via = is_distributive(E) and bool(check_mvp(decompose_regular(M)))
        if brute != via:
            mismatches.append(T)
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 300
    assert record(1, "refinement == distributive E(M) and MVP", ok,
                  f"{len(FAMILY)} monoids, {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_02_square_example():
    V4 = FiniteAbelianGroup((2, 2))
    H = V4.whole()
    subs = all_subgroups(V4)
    checked, wrong = 0, 0
    for E in subs:
        for F in subs:
            meet = subgroup_intersection(E, F)
            for G in all_subgroups(meet):
                T = StructureTriple(boolean_lattice(2), V4, [G, E, F, H])
                expected = meet == G and subgroup_sum(E, F) == H
                checked += 1
                wrong += has_refinement(realize_from_triple(T)) != expected
    assert record(2, "square example: refinement iff E&F=G and E+F=H", wrong == 0,
                  f"{len(subs)}x{len(subs)} pairs (E,F), {checked} triples, {wrong} wrong")


def _order_by_coordinates(desc, x):
    """Order of a block-sum element from its residues alone."""
    out = 1
    for n, c in zip(desc.orders, desc.coords(x)):
        if c:
            out = lcm(out, n // gcd(c - 1, n))
    return out


def test_03_building_block_sums():
    start = time.perf_counter()
    failures = []
    count = 0
    for k in (1, 2, 3):
        for orders in combinations_with_replacement(range(1, 6), k):
            desc = BlockSumDescriptor(orders)
            M = desc.monoid
            report = rep_report(M, max_size=M.size)
            if not all(report.values()):
                failures.append((orders, [c for c, v in report.items() if not v]))
            for x in M.elements:
                m = element_order(M, x)
                if m is None or m != _order_by_coordinates(desc, x) or M.multiple(m + 1, x) != x:
                    failures.append((orders, x))
            count += 1
    elapsed = time.perf_counter() - start
    assert record(3, "block sums (k<=3, n<=5) lie in the class", not failures,
                  f"{count} sums up to reordering, {len(failures)} failures, {elapsed:.1f}s")


def test_04_block_certificates():
    bad = []
    for T, M in REP:
        c = blocks_retract(M)
        if hom_compose(c.mu, c.eps).map != tuple(M.elements) or c.problems():
            bad.append(T)
    chain_cert = blocks_retract(chain(3).monoid)
    chain_ok = chain_cert.blocks.orders == (1, 1) and chain_cert.codomain.size == 4
    assert record(4, "blocks_retract with mu.eps = id", not bad and chain_ok,
                  f"{len(REP)} class members, {len(bad)} bad; chain 0<1<2 -> blocks "
                  f"{list(chain_cert.blocks.orders)}")


def test_05_order_restriction():
    applicable, bad = 0, []
    for T, M in REP:
        orders = [element_order(M, x) for x in M.elements]
        c = blocks_retract(M)
        for m in (1, 2, 4, 6, 12):
            if all(m % o == 0 for o in orders):
                applicable += 1
                if not all(m % n == 0 for n in c.blocks.orders):
                    bad.append((T, m))
    assert record(5, "block orders divide m when element orders do", not bad,
                  f"{applicable} (monoid, m) pairs applicable, {len(bad)} violations")


def test_06_order_units():
    checked, bad = 0, []
    for T, M in REP:
        c = blocks_retract(M)
        for u in M.elements:
            if order_unit_witness(M, u) is not None:
                continue
            n = order_unit_normalize(M, u, c)
            checked += 1
            eu = c.blocks.coords(c.eps.map[u])
            kept = tuple(o for o, x in zip(c.blocks.orders, eu) if x)
            ok = (
                n.problems() == []
                and hom_compose(n.mu, n.eps).map == tuple(M.elements)
                and n.blocks.orders == kept
                and unit_residues(n) == tuple(x - 1 for x in eu if x)
                and order_unit_witness(n.codomain, n.unit) is None
            )
            if not ok:
                bad.append((T, u))
    assert record(6, "order-unit normalisation", not bad,
                  f"{checked} (monoid, unit) pairs, {len(bad)} bad")


def test_07_approximation():
    start = time.perf_counter()
    runs, bad = 0, []
    for T, M in REP:
        for k in range(4):
            for X in combinations(M.labels[1:], k):
                c = approximate(T, list(X))
                runs += 1
                labels = set(c.N.labels)
                ok = (set(X) <= labels and labels <= set(M.labels) and in_rep(c.N)
                      and c.N.size <= c.bound and verify_certificate(c)[0])
                if not ok:
                    bad.append((T, X))
    elapsed = time.perf_counter() - start
    assert record(7, "approximation N in class, X in N, |N| <= (m+1)^(2^n n)",
                  not bad and elapsed < 600,
                  f"{runs} runs, {len(bad)} bad, {elapsed:.1f}s")


def test_08_restriction_closure():
    checked, bad = 0, []
    for T, M in REP:
        for m in (1, 2, 3, 4, 6):
            sub, _ = restrict_orders(M, m)
            checked += 1
            if not in_rep(sub):
                bad.append((T, m))
    assert record(8, "M[m] stays in the class", not bad,
                  f"{checked} (monoid, m) pairs, {len(bad)} bad")


def test_09_factorisation_kernels():
    rng = random.Random(2024)
    bad = 0
    for _ in range(100):
        T, M = rng.choice(REP)
        cert = blocks_retract(M)
        orders = [rng.randint(1, 6) for _ in range(rng.randint(1, 3))]
        images = []
        for n in orders:
            images.append(rng.choice([x for x in M.elements if n % element_order(M, x) == 0]))
        phi = block_sum_hom(orders, M, images)
        psi, phi2 = factor_through(phi, cert)
        if hom_kernel(psi).classes != hom_kernel(phi).classes or \
                hom_compose(phi2, psi).map != phi.map:
            bad += 1
    assert record(9, "ker phi = ker psi for factorisations", bad == 0,
                  f"100 random homs, {bad} mismatches")


def test_10_negative_controls():
    Z4 = FiniteAbelianGroup((4,))
    pur = check_pur(realize_from_triple(StructureTriple(chain(2), Z4, [Z4.subgroup([(2,)]),
                                                                        Z4.whole()])))
    V4 = FiniteAbelianGroup((2, 2))
    E = V4.subgroup([(1, 0)])
    M = realize_from_triple(StructureTriple(boolean_lattice(2), V4, [V4.trivial(), E, E,
                                                                     V4.whole()]))
    mvp_a = check_mvp(M)
    Z2 = FiniteAbelianGroup((2,))
    cube = StructureTriple(boolean_lattice(3), Z2,
                           [Z2.whole() if s & 1 else Z2.trivial() for s in range(8)])
    naive = check_mvp(naive_restriction(cube, (0, 3, 5, 7)))
    ok = (not pur and pur.witness[3] == 2
          and not mvp_a and mvp_a.clause == "a" and not has_refinement(M)
          and in_rep(realize_from_triple(cube)) and not naive and naive.clause == "b")
    assert record(10, "negative controls", ok,
                  f"pur fails with m={pur.witness[3] if pur.witness else None}; "
                  f"MVP (a) example refines={has_refinement(M)}; "
                  f"naive restriction fails clause {naive.clause}")
