"""Command-line front end.

Exit codes: 0 success / property holds, 1 property fails (a witness is
printed), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import serialize as ser
from .approx import approximate, verify_certificate
from .errors import (
    ClaimFailure,
    DecompositionFailure,
    EmbRequired,
    InternalInconsistency,
    InvalidCertificate,
    NotDistributive,
    NotInRep,
    NotOrderUnit,
    NotRegular,
    RefmonError,
    SizeLimitExceeded,
)
from .limits import blocks_retract, factor_through, order_unit_normalize, unit_residues
from .monoid import hom_kernel
from .regular import characterize_refinement, realize_from_triple, rep_report, structure_triple

# errors that mean "the input is fine but lacks the property"
PROPERTY_ERRORS = (NotInRep, NotRegular, EmbRequired, NotDistributive, NotOrderUnit,
                   DecompositionFailure, InvalidCertificate)


class Failure(Exception):
    """Property false: carries the report to print before exiting 1."""

    def __init__(self, report):
        super().__init__("property fails")
        self.report = report


def _load(path):
    path = Path(path)
    return ser.read_json(path), path.parent


def _load_monoid_or_triple(path):
    data, base = _load(path)
    if isinstance(data, dict) and "subgroups" in data:
        T = ser.triple_from_json(data, base)
        return realize_from_triple(T), T
    if isinstance(data, dict) and data.get("kind") == "semilattice":
        return ser.semilattice_from_json(data, base).monoid, None
    return ser.monoid_from_json(data, base), None


def _verdicts(report):
    return {k: {"ok": v.ok, "clause": v.clause, "witness": ser._plain(v.witness)}
            for k, v in report.items()}


def cmd_verify(args):
    M, _ = _load_monoid_or_triple(args.input)
    report = rep_report(M, args.max_size)
    out = {"size": M.size, "checks": _verdicts(report), "in_rep": all(report.values())}
    if report["regular"]:
        out["refinement_via_idempotents_and_mvp"] = characterize_refinement(
            M, args.max_size).via_theorem
    if not out["in_rep"]:
        raise Failure(out)
    return out


def cmd_decompose(args):
    M, _ = _load_monoid_or_triple(args.input)
    T, iso = structure_triple(M)
    out = ser.triple_to_json(T)
    out["isomorphism"] = list(iso.map)
    return out


def cmd_realize(args):
    data, base = _load(args.input)
    T = ser.triple_from_json(data, base)
    return ser.monoid_to_json(realize_from_triple(T))


def cmd_blocks(args):
    M, T = _load_monoid_or_triple(args.input)
    cert = blocks_retract(T if T is not None else M, args.max_size)
    if args.unit is not None:
        if not 0 <= args.unit < cert.monoid.size:
            raise ser.SchemaError(f"unit {args.unit} is not an element")
        cert = order_unit_normalize(cert.monoid, args.unit, cert)
    out = ser.retract_to_json(cert)
    if cert.unit is not None:
        out["unit_residues"] = list(unit_residues(cert))
    return out


def cmd_approx(args):
    data, base = _load(args.triple)
    T = ser.triple_from_json(data, base, check_cover=False)
    xs, _ = _load(args.elements)
    if not isinstance(xs, list):
        raise ser.SchemaError("elements: expected a list of [e, [g, ...]] pairs")
    X = []
    for item in xs:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], list)):
            raise ser.SchemaError(f"elements: bad entry {item!r}")
        X.append((int(item[0]), tuple(item[1])))
    return ser.approx_to_json(approximate(T, X, args.max_size))


def cmd_factor(args):
    hdata, hbase = _load(args.hom)
    phi = ser.hom_from_json(hdata, hbase)
    cdata, cbase = _load(args.cert)
    cert = ser.retract_from_json(cdata, cbase)
    probs = cert.problems()
    if probs:
        raise Failure({"valid": False, "problems": probs})
    psi, phi2 = factor_through(phi, cert)
    return {
        "psi": {"map": list(psi.map)},
        "phi_prime": {"map": list(phi2.map)},
        "kernel": [list(c) for c in hom_kernel(psi).classes],
    }


def cmd_check_cert(args):
    data, base = _load(args.input)
    if isinstance(data, dict) and data.get("kind") == "approximation":
        c = ser.approx_from_json(data, base)
        ok, report = verify_certificate(c, args.max_size)
        out = {"kind": "approximation", "valid": ok, "checks": report}
        if not ok:
            out["failed"] = [k for k, v in report.items() if not v]
    else:
        cert = ser.retract_from_json(data, base)
        probs = cert.problems()
        out = {"kind": "retract", "valid": not probs, "problems": probs}
    if not out["valid"]:
        raise Failure(out)
    return out


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, dict) and set(v) >= {"ok", "witness"}:
                mark = "yes" if v["ok"] else f"NO  witness={v['witness']}"
                lines.append(f"{pad}{k}: {mark}")
            elif isinstance(v, (dict,)) or (isinstance(v, list) and v and isinstance(v[0], dict)):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            lines.append(f"{pad}-")
            lines.append(_text(v, indent + 1))
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def _emit(out, args, stream):
    text = ser.dumps(out) if args.format == "json" else _text(out) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        stream.write(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--max-size", type=int, default=None,
                        help="largest monoid for brute-force checks (default $REFMON_MAX_SIZE or 64)")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    p = argparse.ArgumentParser(prog="refmon", description="Finite refinement monoid toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="run every class decider on a monoid")
    s.add_argument("input", help="monoid, semilattice or triple file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("decompose", parents=[common], help="monoid -> structure triple")
    s.add_argument("input")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("realize", parents=[common], help="structure triple -> monoid")
    s.add_argument("input")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("blocks", parents=[common], help="retract certificate onto building blocks")
    s.add_argument("input", help="monoid or triple file")
    s.add_argument("--unit", type=int, help="normalise against this order-unit (element index)")
    s.set_defaults(func=cmd_blocks)

    s = sub.add_parser("approx", parents=[common], help="small submonoid containing given elements")
    s.add_argument("triple")
    s.add_argument("elements", help='JSON list of [e, [g, ...]] pairs')
    s.set_defaults(func=cmd_approx)

    s = sub.add_parser("factor", parents=[common], help="factor a hom B -> M through a certificate")
    s.add_argument("hom")
    s.add_argument("cert")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("check-cert", parents=[common], help="re-verify a certificate file")
    s.add_argument("input")
    s.set_defaults(func=cmd_check_cert)
    return p


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.max_size is None and os.environ.get("REFMON_MAX_SIZE"):
        args.max_size = int(os.environ["REFMON_MAX_SIZE"])
    try:
        out = args.func(args)
    except (ClaimFailure, InternalInconsistency):
        raise
    except Failure as f:
        _emit(f.report, args, stdout)
        return 1
    except PROPERTY_ERRORS as exc:
        _emit({"error": type(exc).__name__, "message": str(exc),
               "witness": ser._plain(exc.witness)}, args, stdout)
        return 1
    except (ser.SchemaError, SizeLimitExceeded, RefmonError, OSError, KeyError,
            TypeError, ValueError) as exc:
        stderr.write(f"refmon: {type(exc).__name__}: {exc}\n")
        return 2
    _emit(out, args, stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
