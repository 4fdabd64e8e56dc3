"""Command-line interface.

    quadorbits classify --expr "x^2+y, y^2+x, xy" --json
    quadorbits invariants --input map.json
    quadorbits witness --expr "x^2+y, y^2+x, xy-3/2x-3/2y"
    quadorbits poset --format dot
    quadorbits family --edge G2:G3
    quadorbits selftest

Exit codes: 0 success, 2 input error, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .classifier import UnclassifiableError, classify
from .expr import ExprError, parse_components
from .groebner import NotPrincipalError
from .invariants import DegreeSamplingError, PreconditionError, invariant_vector, self_intersection
from .orbitdb import UnknownLabelError, identity_selftests, load
from .polycore import Q, qstr
from .quadmap import QuadMap

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


class DocumentError(ValueError):
    """Malformed map document; ``path`` locates the offending entry."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass(frozen=True)
class MapDocument:
    field: str
    n: int
    components: tuple  # n tuples of 6 rationals

    @classmethod
    def from_dict(cls, doc) -> "MapDocument":
        if not isinstance(doc, dict):
            raise DocumentError("document must be a JSON object")
        field = doc.get("field", "C")
        if field not in ("C", "R"):
            raise DocumentError(f"field must be 'C' or 'R', got {field!r}", "field")
        comps = doc.get("components")
        if not isinstance(comps, list) or not comps:
            raise DocumentError("components must be a non-empty list", "components")
        n = doc.get("n", len(comps))
        if not isinstance(n, int) or isinstance(n, bool) or n != len(comps):
            raise DocumentError(f"n = {n!r} does not match {len(comps)} components", "n")
        out = []
        for i, comp in enumerate(comps):
            if not isinstance(comp, list) or len(comp) != 6:
                raise DocumentError("each component needs 6 coefficients [a,b,c,d,e,g]", f"components[{i}]")
            row = []
            for j, v in enumerate(comp):
                if isinstance(v, bool) or not isinstance(v, (int, str)):
                    raise DocumentError(f"coefficient {v!r} must be an integer or a 'p/q' string",
                                        f"components[{i}][{j}]")
                try:
                    row.append(Q(v))
                except (ValueError, ZeroDivisionError) as exc:
                    raise DocumentError(str(exc), f"components[{i}][{j}]") from None
            out.append(tuple(row))
        return cls(field, n, tuple(out))

    @classmethod
    def from_json(cls, text: str) -> "MapDocument":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON ({exc.msg})", f"line {exc.lineno} column {exc.colno}") from None
        return cls.from_dict(doc)

    @classmethod
    def from_map(cls, F: QuadMap) -> "MapDocument":
        return cls(F.field, F.n, tuple(F.components))

    def to_dict(self) -> dict:
        enc = lambda v: int(v) if v.denominator == 1 else qstr(v)
        return {"field": self.field, "n": self.n, "components": [[enc(v) for v in c] for c in self.components]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_map(self) -> QuadMap:
        return QuadMap(list(self.components), self.field)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str)


def _read_map(args) -> QuadMap:
    if args.expr is not None and args.input is not None:
        raise DocumentError("give either --expr or --input, not both")
    if args.expr is not None:
        polys = parse_components(args.expr)
        for k, p in enumerate(polys):
            if p.total_degree() > 2:
                raise DocumentError(f"component {k} has degree {p.total_degree()} > 2", "expr")
        doc = MapDocument.from_map(QuadMap(polys, args.field or "C"))
    elif args.input is not None:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
        doc = MapDocument.from_json(text)
    else:
        raise DocumentError("no map given; use --expr or --input")
    F = doc.to_map()
    if args.field is not None:
        F = F.with_field(args.field)
    return F


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    F = _read_map(args)
    t0 = time.perf_counter()
    rep = classify(F, seed=args.seed)
    out = rep.as_dict()
    out["input"] = MapDocument.from_map(F).to_dict()
    if args.timings:
        out["timings"] = {"classify_seconds": round(time.perf_counter() - t0, 6)}
    if args.json:
        print(_dump(out))
    else:
        print(f"{rep.label.base}  (field {F.field}, n={F.n}, topological type {rep.topological_type}, "
              f"orbit dimension {rep.expected_orbit_dim})")
    return EXIT_OK


def cmd_invariants(args) -> int:
    F = _read_map(args)
    vec, reports = invariant_vector(F, seed=args.seed, compute_si=False)
    out = {"input": MapDocument.from_map(F).to_dict(), "invariants": vec.as_dict(),
           "critical": reports["critical"].as_dict(), "degree": str(reports["degree"])}
    if reports["degree"].is_finite:
        out["self_intersection"] = self_intersection(F, reports["degree"]).as_dict()
    if args.json:
        print(_dump(out))
    else:
        inv = out["invariants"]
        print(f"dim_a={inv['dim_a']} dim_q={inv['dim_q']} mu={inv['mu']} orbit_dim={inv['orbit_dim']} "
              f"critical={out['critical']['kind']}")
        if "self_intersection" in out:
            si = out["self_intersection"]
            print("SI: " + ("empty" if si["kind"] == "EMPTY" else
                            " * ".join(f"({f})^{k}" if k > 1 else f"({f})" for f, k in si["factors"])))
    return EXIT_OK


def cmd_witness(args) -> int:
    from .normalizer import UnsupportedLabelError, WitnessError, find_witness
    F = _read_map(args)
    try:
        w = find_witness(F, label=args.label, seed=args.seed, tol=args.tolerance)
    except UnsupportedLabelError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except WitnessError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    out = w.as_dict()
    out["tolerance"] = args.tolerance
    if args.json:
        print(_dump(out))
    else:
        print(f"{w.label}: route {w.route}, residual {w.residual:.3g}")
        for s in w.steps:
            print(f"  - {s}")
    return EXIT_OK


def cmd_poset(args) -> int:
    db = load()
    if args.format == "dot":
        sys.stdout.write(db.to_dot())
    else:
        print(_dump(db.to_json()))
    return EXIT_OK


def cmd_family(args) -> int:
    db = load()
    try:
        upper, lower = args.edge.split(":")
    except ValueError:
        raise DocumentError("edge must look like UPPER:LOWER", "edge") from None
    report = db.verify_family(db.family(upper, lower), seed=args.seed)
    report["map"] = db.family(upper, lower).family
    if args.json:
        print(_dump(report))
    else:
        print(f"{report['edge']}: t in (1, 1/2, 1/3) -> {', '.join(report['upper'])}; t = 0 -> {report['lower']}; "
              + ("verified" if report["ok"] else "FAILED"))
    return EXIT_OK if report["ok"] else EXIT_INTERNAL


def cmd_selftest(args) -> int:
    ids = identity_selftests()
    fams = load().verify_families(seed=args.seed)
    out = {"identities": ids, "families": fams,
           "passed": ids["passed"] and all(f["ok"] for f in fams)}
    if args.json:
        print(_dump(out))
    else:
        for c in ids["checks"]:
            print(f"{'ok  ' if c['ok'] else 'FAIL'} {c['name']}")
        for f in fams:
            print(f"{'ok  ' if f['ok'] else 'FAIL'} family {f['edge']}")
        print("all passed" if out["passed"] else "FAILURES")
    return EXIT_OK if out["passed"] else EXIT_INTERNAL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadorbits", description="Orbits of quadratic maps from the plane.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, map_input=True):
        sp.add_argument("--json", action="store_true", help="JSON output")
        sp.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
        if map_input:
            sp.add_argument("--expr", help='map as text, e.g. "x^2+y, y^2+x, xy"')
            sp.add_argument("--input", help="map document (JSON file, or - for stdin)")
            sp.add_argument("--field", choices=("C", "R"), help="ground field (overrides the document)")

    sp = sub.add_parser("classify", help="orbit label, topological type and orbit dimension")
    common(sp)
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("invariants", help="full invariant reports")
    common(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("witness", help="equivalence witness to the normal form")
    common(sp)
    sp.add_argument("--label", help="target orbit label (default: classify first)")
    sp.add_argument("--tolerance", type=float, default=1e-8, help="residual bound (default 1e-8)")
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("poset", help="orbit closure poset")
    sp.add_argument("--format", choices=("dot", "json"), default="dot")
    sp.set_defaults(func=cmd_poset)

    sp = sub.add_parser("family", help="verify a degeneration family")
    common(sp, map_input=False)
    sp.add_argument("--edge", required=True, help="UPPER:LOWER, e.g. G2:G3")
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("selftest", help="displayed identities and degeneration families")
    common(sp, map_input=False)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ExprError, DocumentError, UnknownLabelError, PreconditionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnclassifiableError, DegreeSamplingError, NotPrincipalError, ArithmeticError) as exc:
        print(f"internal error: {getattr(exc, 'code', type(exc).__name__)}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
