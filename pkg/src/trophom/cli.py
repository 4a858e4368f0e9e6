"""Command-line front end: ingest JSON descriptions of face complexes,
cycles, divisors, maps, and matroids; run the computations; emit
deterministic JSON or aligned plain-text tables.

Exit codes: 0 on success, 1 on mathematical failure (an unbalanced cycle,
a failed duality table, ...), 2 on input errors.  Rationals are carried
as strings like "3/4" to keep everything float-free.
"""

import argparse
import json
import os
import sys

from .cycles import TropicalCycle, is_balanced, push_forward
from .divisors import CartierDivisor, PLFunction, intersect, verify_pl
from .homology import (
    bm_table,
    cohomology_table,
    cycle_class_chain,
    kunneth_check,
    pd_check,
)
from .matroids import Matroid, bergman_fan
from .polyhedral import AffineMap, FaceComplex, validate_complex


class MathFailure(Exception):
    """A computation ran but the mathematical verdict is negative."""


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _dump(payload, args):
    text = json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"
    if getattr(args, "format", "json") == "table":
        text = _render_table(payload)
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _shape_doc(shape):
    return {"rank": shape.free_rank, "torsion": list(shape.invariant_factors)}


def _shape_str(shape):
    parts = []
    if shape.free_rank == 1:
        parts.append("Z")
    elif shape.free_rank > 1:
        parts.append("Z^%d" % shape.free_rank)
    parts.extend("Z/%d" % d for d in shape.invariant_factors)
    return " + ".join(parts) if parts else "0"


def _label_str(label):
    cell, i = label
    if isinstance(cell, tuple):
        cell = "<".join(str(x) for x in cell)
    return "%s[%d]" % (cell, i)


def _render_table(payload):
    lines = []
    for key in sorted(payload):
        val = payload[key]
        if key == "table" and isinstance(val, dict):
            lines.append(_grid(val))
        else:
            lines.append("%s: %s" % (key, json.dumps(val, sort_keys=True,
                                                     default=str)))
    return "\n".join(lines) + "\n"


def _grid(table):
    """Aligned (p, q) grid from a {"p,q": entry} mapping."""
    cells = {}
    for key, entry in table.items():
        p, q = (int(x) for x in key.split(","))
        if isinstance(entry, dict):
            if "pretty" in entry:
                text = entry["pretty"]
            elif "bm" in entry:
                text = "%s | %s %s" % (entry["bm"], entry["dual"],
                                       "ok" if entry["match"] else "MISMATCH")
            elif "product" in entry:
                text = "%s (expect rank %s, %s) %s" % (
                    entry["product"], entry["expected_rank"], entry["mode"],
                    "ok" if entry["match"] else "MISMATCH")
            else:
                text = json.dumps(entry, sort_keys=True, default=str)
        else:
            text = str(entry)
        cells[(p, q)] = text
    ps = sorted({p for p, _q in cells})
    qs = sorted({q for _p, q in cells})
    width = max([len(t) for t in cells.values()] + [6])
    head = "p\\q " + " ".join(("q=%d" % q).ljust(width) for q in qs)
    rows = [head]
    for p in ps:
        rows.append(("p=%d " % p)
                    + " ".join(cells.get((p, q), "").ljust(width) for q in qs))
    return "\n".join(rows)


def _parse_range(text, top):
    """'2', '0:2', or None (full range) -> list of ints."""
    if text is None:
        return list(range(top + 1))
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _result_table(table, want_generators=False):
    out = {}
    for (p, q), res in table.items():
        entry = _shape_doc(res.shape)
        entry["pretty"] = _shape_str(res.shape)
        if want_generators:
            entry["generators"] = [
                {"order": order,
                 "vector": {_label_str(l): x for l, x in sorted(
                     vec.items(), key=lambda kv: _label_str(kv[0]))}}
                for order, vec in res.generators]
        out["%d,%d" % (p, q)] = entry
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args):
    c = FaceComplex.from_json_dict(_load(args.complex))
    issues = validate_complex(c)
    payload = {"ok": not issues, "cells": len(c.cells), "violations": issues}
    _dump(payload, args)
    if issues:
        raise MathFailure("complex is not a valid face structure")


def cmd_balance(args):
    a = TropicalCycle.from_json_dict(_load(args.cycle))
    report = is_balanced(a)
    payload = {"balanced": not report, "k": a.k,
               "violations": [{"face": r["face"], "sum": r["sum"]}
                              for r in report]}
    _dump(payload, args)
    if report:
        raise MathFailure("cycle is not balanced at %s"
                          % sorted(r["face"] for r in report))


def cmd_homology(args):
    c = FaceComplex.from_json_dict(_load(args.complex))
    ps = _parse_range(args.p, c.dim)
    qs = _parse_range(args.q, c.dim)
    build = cohomology_table if args.cohomology else bm_table
    table = build(c, ps, qs, want_generators=args.emit_generators,
                  threads=args.threads)
    payload = {"kind": "cohomology" if args.cohomology else "bm",
               "table": _result_table(table, args.emit_generators)}
    _dump(payload, args)


def cmd_intersect(args):
    pl = PLFunction.from_json_dict(_load(args.divisor))
    issues = verify_pl(pl)
    if issues:
        raise ValueError("divisor function is not continuous: %r" % issues)
    a = TropicalCycle.from_json_dict(_load(args.cycle))
    out = intersect(CartierDivisor(pl), a)
    _dump(out.to_json_dict(), args)


def cmd_pushforward(args):
    f = AffineMap.from_json_dict(_load(args.map))
    a = TropicalCycle.from_json_dict(_load(args.cycle))
    target = None
    if args.target:
        target = FaceComplex.from_json_dict(_load(args.target))
    out = push_forward(f, a, target=target)
    _dump(out.to_json_dict(), args)


def cmd_bergman(args):
    m = Matroid.from_json_dict(_load(args.matroid))
    fan = bergman_fan(m).fan
    _dump(fan.to_json_dict(), args)


def cmd_pd(args):
    c = FaceComplex.from_json_dict(_load(args.complex))
    out = pd_check(c, threads=args.threads)
    payload = {"n": out["n"], "ok": out["ok"], "table": {
        "%d,%d" % pq: {"bm": _shape_str(v["bm"]), "dual": _shape_str(v["dual"]),
                       "match": v["match"]}
        for pq, v in out["table"].items()}}
    _dump(payload, args)
    if not out["ok"]:
        raise MathFailure("duality tables do not match")


def cmd_kunneth(args):
    a = FaceComplex.from_json_dict(_load(args.a))
    b = FaceComplex.from_json_dict(_load(args.b))
    out = kunneth_check(a, b, threads=args.threads)
    payload = {"ok": out["ok"], "table": {
        "%d,%d" % pq: {"product": _shape_str(v["product"]),
                       "expected_rank": v["expected_rank"],
                       "mode": v["mode"], "match": v["match"]}
        for pq, v in out["table"].items()}}
    _dump(payload, args)
    if not out["ok"]:
        raise MathFailure("product ranks do not match the factor tables")


def cmd_cycle_class(args):
    a = TropicalCycle.from_json_dict(_load(args.cycle))
    ambient = None
    if args.ambient:
        ambient = FaceComplex.from_json_dict(_load(args.ambient))
    cls = cycle_class_chain(a, ambient)
    payload = {"bigrade": list(cls.bigrade), "closed": cls.closed,
               "coefficients": {_label_str(l): x for l, x in sorted(
                   cls.vector.items(), key=lambda kv: _label_str(kv[0]))}}
    _dump(payload, args)
    if not cls.closed:
        raise MathFailure("cycle class is not closed (cycle is unbalanced)")


# ---------------------------------------------------------------------------

def _default_threads():
    try:
        return max(1, int(os.environ.get("TROPHOM_THREADS", "1")))
    except ValueError:
        return 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="trophom",
        description="Exact computations on tropical face complexes: "
                    "balancing, intersections, Bergman fans, and integral "
                    "(co)homology tables.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=["json", "table"], default="json")
        p.add_argument("-o", "--output", help="write to a file instead of stdout")
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="parallel table computation (default: "
                            "TROPHOM_THREADS or 1)")
        return p

    p = add("validate", cmd_validate, "check the face-structure invariants")
    p.add_argument("complex", help="face complex JSON")

    p = add("balance", cmd_balance, "check the balancing condition")
    p.add_argument("cycle", help="weighted cycle JSON")

    p = add("homology", cmd_homology, "integral homology/cohomology tables")
    p.add_argument("complex", help="face complex JSON")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--bm", action="store_true", default=True,
                       help="Borel-Moore homology (default)")
    group.add_argument("--cohomology", action="store_true", default=False)
    p.add_argument("--p", help="form degree or range, e.g. 1 or 0:2")
    p.add_argument("--q", help="homological degree or range")
    p.add_argument("--emit-generators", action="store_true")

    p = add("intersect", cmd_intersect, "divisor . cycle intersection")
    p.add_argument("divisor", help="piecewise affine function JSON")
    p.add_argument("cycle", help="weighted cycle JSON")

    p = add("pushforward", cmd_pushforward, "push a cycle along an affine map")
    p.add_argument("map", help="affine map JSON")
    p.add_argument("cycle", help="weighted cycle JSON")
    p.add_argument("--target", help="optional target complex JSON")

    p = add("bergman", cmd_bergman, "Bergman fan of a matroid")
    p.add_argument("matroid", help="matroid JSON (elements + bases)")

    p = add("pd", cmd_pd, "Poincare-duality table comparison")
    p.add_argument("complex", help="face complex JSON")

    p = add("kunneth", cmd_kunneth, "product-rank bookkeeping for a product")
    p.add_argument("a", help="first factor complex JSON")
    p.add_argument("b", help="second factor complex JSON")

    p = add("cycle-class", cmd_cycle_class, "Borel-Moore class of a cycle")
    p.add_argument("cycle", help="weighted cycle JSON")
    p.add_argument("--ambient", help="optional ambient complex JSON")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except MathFailure as e:
        sys.stderr.write(json.dumps(
            {"error": {"kind": "math", "message": str(e)}}) + "\n")
        return 1
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        sys.stderr.write(json.dumps(
            {"error": {"kind": "input", "message": "%s: %s"
                       % (type(e).__name__, e)}}) + "\n")
        return 2
    except (ValueError, AssertionError) as e:
        sys.stderr.write(json.dumps(
            {"error": {"kind": "math", "message": str(e)}}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
