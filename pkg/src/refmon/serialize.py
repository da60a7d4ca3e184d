"""JSON forms of the package's objects.

Schemas (all indices 0-based):

monoid        {"size": n, "table": [[...], ...], "labels": optional}
semilattice   same as monoid with "kind": "semilattice"; may instead give
              {"kind": "semilattice", "named": "chain"|"boolean"|"diamond"|"pentagon", "k": k}
              or {"kind": "semilattice", "size": n, "leq": [[x, y], ...]} (0 is the
              bottom; the relation is closed reflexively and transitively)
hom           {"source": <monoid or path>, "target": <monoid or path>, "map": [...]}
group         {"factors": [d1, ...]}
subgroup      {"generators": [[...], ...]}
triple        {"semilattice": {...}, "group": {...},
               "subgroups": {"<e>": {"generators": [...]}, ...}}
generalized   {"primes": {"2": 1, "3": "inf"}, "all_infinite": false}, or an int
retract cert  {"kind": "retract", "monoid": {...}, "blocks": [n1, ...],
               "eps": {"map": [...]}, "mu": {"map": [...]}, "unit": index or null}
approx cert   {"kind": "approximation", "triple": {...}, "X": [[e, [g...]], ...],
               "m": m, "n": n, "restricted": {...}, "D": [...],
               "irreducibles": [{"P", "lower_cover", "dagger", "H", "H_prime",
                                 "u", "v", "w", "psi"}, ...],
               "phi": [{"A", "phi", "G_prime"}, ...], "N": {...}}

Paths inside a file are resolved relative to that file.  ``dumps`` is
deterministic: identical objects give identical text.
"""

from __future__ import annotations

import json
from math import inf
from pathlib import Path

from .approx import ApproximationCertificate
from .groups import FiniteAbelianGroup, Subgroup, subgroup_generated
from .limits import RetractCertificate
from .monoid import BlockSumDescriptor, FiniteCommutativeMonoid, MonoidHom, validate_monoid
from .regular import GeneralizedInteger, StructureTriple
from .semilattice import (
    FiniteSemilattice,
    boolean_lattice,
    chain,
    diamond,
    pentagon,
    semilattice_from_order,
)


class SchemaError(ValueError):
    pass


def _need(data, key, what):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"{what}: missing field {key!r}")
    return data[key]


def _plain(x):
    """Labels and group elements as JSON-friendly values."""
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    return x


def _tupled(x):
    if isinstance(x, list):
        return tuple(_tupled(v) for v in x)
    return x


def _resolve(value, base, loader):
    if isinstance(value, str):
        path = Path(value)
        if base is not None and not path.is_absolute():
            path = Path(base) / path
        return loader(read_json(path), path.parent)
    return loader(value, base)


# -- monoids and semilattices ----------------------------------------------

def monoid_to_json(M):
    out = {"size": M.size, "table": [list(r) for r in M.table]}
    if M.labels is not None:
        out["labels"] = _plain(M.labels)
    return out


def monoid_from_json(data, base=None):
    table = _need(data, "table", "monoid")
    if not isinstance(table, (list, tuple)) or not all(isinstance(r, (list, tuple)) for r in table):
        raise SchemaError("monoid: table must be a list of rows")
    if "size" in data and data["size"] != len(table):
        raise SchemaError(f"monoid: size {data['size']} but table has {len(table)} rows")
    labels = data.get("labels")
    if labels is not None:
        labels = tuple(_tupled(lab) for lab in labels)
    return validate_monoid(table, labels)


_NAMED = {"chain": chain, "boolean": boolean_lattice, "diamond": diamond, "pentagon": pentagon}


def semilattice_to_json(S):
    out = monoid_to_json(S.monoid)
    out["kind"] = "semilattice"
    return out


def semilattice_from_json(data, base=None):
    if isinstance(data, dict) and "named" in data:
        name = data["named"]
        if name not in _NAMED:
            raise SchemaError(f"semilattice: unknown name {name!r}")
        return _NAMED[name](data["k"]) if name in ("chain", "boolean") else _NAMED[name]()
    if isinstance(data, dict) and "leq" in data:
        n = int(_need(data, "size", "semilattice"))
        rel = {(x, x) for x in range(n)} | {(0, x) for x in range(n)}
        rel |= {(int(a), int(b)) for a, b in data["leq"]}
        changed = True
        while changed:
            extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
            rel |= extra
            changed = bool(extra)
        return semilattice_from_order(n, lambda x, y: (x, y) in rel)
    return FiniteSemilattice(monoid_from_json(data, base))


def hom_to_json(h):
    return {"source": monoid_to_json(h.source), "target": monoid_to_json(h.target),
            "map": list(h.map)}


def hom_from_json(data, base=None):
    from .monoid import hom_validate

    src = _resolve(_need(data, "source", "hom"), base, monoid_from_json)
    tgt = _resolve(_need(data, "target", "hom"), base, monoid_from_json)
    return hom_validate(MonoidHom(src, tgt, tuple(_need(data, "map", "hom"))))


# -- groups and triples ----------------------------------------------------

def group_to_json(G):
    return {"factors": list(G.factors)}


def group_from_json(data, base=None):
    return FiniteAbelianGroup(tuple(_need(data, "factors", "group")))


def subgroup_to_json(H):
    return {"generators": [list(g) for g in sorted(H.generators)]}


def subgroup_from_json(data, G):
    gens = [tuple(g) for g in _need(data, "generators", "subgroup")]
    for g in gens:
        if len(g) != len(G.factors):
            raise SchemaError(f"subgroup: generator {list(g)} has the wrong length")
    return subgroup_generated(G, [G.mul(1, g) for g in gens])


def triple_to_json(T):
    return {
        "semilattice": semilattice_to_json(T.lattice),
        "group": group_to_json(T.group),
        "subgroups": {str(e): subgroup_to_json(H) for e, H in enumerate(T.subgroups)},
    }


def triple_from_json(data, base=None, check_cover=True):
    L = _resolve(_need(data, "semilattice", "triple"), base, semilattice_from_json)
    G = group_from_json(_need(data, "group", "triple"))
    raw = _need(data, "subgroups", "triple")
    if isinstance(raw, list):
        raw = {str(i): v for i, v in enumerate(raw)}
    subs = []
    for e in L.elements:
        if str(e) not in raw:
            raise SchemaError(f"triple: no subgroup for lattice element {e}")
        subs.append(subgroup_from_json(raw[str(e)], G))
    return StructureTriple(L, G, subs, check_cover=check_cover)


def generalized_to_json(m):
    return {
        "primes": {str(p): ("inf" if e == inf else e) for p, e in m.exponents},
        "all_infinite": m.all_infinite,
    }


def generalized_from_json(data, base=None):
    if isinstance(data, int):
        return GeneralizedInteger.of(data)
    if data == "inf":
        return GeneralizedInteger.infinite()
    return GeneralizedInteger.from_mapping(data.get("primes", {}), bool(data.get("all_infinite")))


# -- certificates ----------------------------------------------------------

def retract_to_json(c):
    return {
        "kind": "retract",
        "monoid": monoid_to_json(c.monoid),
        "blocks": list(c.blocks.orders),
        "eps": {"map": list(c.eps.map)},
        "mu": {"map": list(c.mu.map)},
        "unit": c.unit,
    }


def retract_from_json(data, base=None):
    """Rebuild a certificate without checking it (``problems()`` does that)."""
    M = _resolve(_need(data, "monoid", "certificate"), base, monoid_from_json)
    desc = BlockSumDescriptor(tuple(_need(data, "blocks", "certificate")))
    B = desc.monoid
    eps = _need(_need(data, "eps", "certificate"), "map", "eps")
    mu = _need(_need(data, "mu", "certificate"), "map", "mu")
    return RetractCertificate(M, B, MonoidHom(M, B, tuple(eps)), MonoidHom(B, M, tuple(mu)),
                              desc, data.get("unit"))


def approx_to_json(c):
    return {
        "kind": "approximation",
        "triple": triple_to_json(c.triple),
        "X": [[e, list(g)] for e, g in c.X],
        "m": c.m,
        "n": c.n,
        "bound": c.bound,
        "size": c.N.size,
        "restricted": {str(e): subgroup_to_json(H) for e, H in sorted(c.restricted.items())},
        "D": list(c.D),
        "irreducibles": [
            {
                "P": p,
                "lower_cover": c.lower_cover[p],
                "dagger": c.dagger[p],
                "H": subgroup_to_json(c.H[p]),
                "H_prime": subgroup_to_json(c.H_prime[p]),
                "u": c.u[p],
                "v": c.v[p],
                "w": c.w[p],
                "psi": c.psi[p],
            }
            for p in c.irreducibles
        ],
        "phi": [
            {"A": a, "phi": c.phi[a], "G_prime": subgroup_to_json(c.G_prime[a])} for a in c.D
        ],
        "N": monoid_to_json(c.N),
    }


def approx_from_json(data, base=None):
    T = triple_from_json(_need(data, "triple", "approximation"), base, check_cover=False)
    G = T.group
    irr = _need(data, "irreducibles", "approximation")
    J = tuple(int(r["P"]) for r in irr)

    def per_p(key, conv=int):
        return {int(r["P"]): conv(r[key]) for r in irr}

    def sub(d):
        return subgroup_from_json(d, G)

    phis = _need(data, "phi", "approximation")
    return ApproximationCertificate(
        triple=T,
        X=tuple((int(e), tuple(g)) for e, g in _need(data, "X", "approximation")),
        m=int(data["m"]),
        n=int(data["n"]),
        restricted={int(e): sub(d) for e, d in data["restricted"].items()},
        D=tuple(data["D"]),
        irreducibles=J,
        lower_cover=per_p("lower_cover"),
        dagger=per_p("dagger"),
        H=per_p("H", sub),
        H_prime=per_p("H_prime", sub),
        u=per_p("u"),
        v=per_p("v"),
        w=per_p("w"),
        psi=per_p("psi"),
        phi={int(r["A"]): int(r["phi"]) for r in phis},
        G_prime={int(r["A"]): sub(r["G_prime"]) for r in phis},
        N=monoid_from_json(data["N"]),
    )


# -- dispatch ----------------------------------------------------------------

def to_json(obj):
    if isinstance(obj, ApproximationCertificate):
        return approx_to_json(obj)
    if isinstance(obj, RetractCertificate):
        return retract_to_json(obj)
    if isinstance(obj, StructureTriple):
        return triple_to_json(obj)
    if isinstance(obj, FiniteSemilattice):
        return semilattice_to_json(obj)
    if isinstance(obj, FiniteCommutativeMonoid):
        return monoid_to_json(obj)
    if isinstance(obj, MonoidHom):
        return hom_to_json(obj)
    if isinstance(obj, FiniteAbelianGroup):
        return group_to_json(obj)
    if isinstance(obj, Subgroup):
        return subgroup_to_json(obj)
    if isinstance(obj, GeneralizedInteger):
        return generalized_to_json(obj)
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def dumps(obj):
    data = obj if isinstance(obj, (dict, list)) else to_json(obj)
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc


def write(obj, path):
    Path(path).write_text(dumps(obj))
