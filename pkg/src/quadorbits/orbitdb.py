"""Orbit tables: normal forms, closure poset, degeneration families, topological types.

The data lives in ``data/orbits.json``; this module turns it into objects and
adds the exact polynomial identity checks used as self-tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .expr import parse_components
from .groebner import INFINITE
from .polycore import Poly, Q
from .quadmap import QuadMap

DATA_FILE = "orbits.json"
COMPLEX_LABELS = tuple([f"F{i}" for i in range(1, 30)] + [f"G{i}" for i in range(5)])
PRIMED_LABELS = ("F1'", "F7'", "F13'", "F17'", "F19'", "F25'", "G3'")


class UnknownLabelError(KeyError):
    pass


@dataclass(frozen=True)
class OrbitRecord:
    label: str
    complex_label: str
    fields: Tuple[str, ...]
    normal_form_text: str
    dim_a: int
    dim_q: int
    mu: object  # int or INFINITE
    critical: dict
    si: Optional[str]
    min_ambient: int
    slope: int
    intercept: int
    top_type_c: int
    top_type_r: int
    real_split: Optional[Tuple[str, object]] = None

    def normal_form(self, n: Optional[int] = None, field: Optional[str] = None) -> QuadMap:
        field = field or ("R" if self.label.endswith("'") else "C")
        polys = parse_components(self.normal_form_text)
        F = QuadMap(polys, field)
        n = self.default_ambient if n is None else n
        if n < self.min_ambient:
            raise ValueError(f"{self.label} needs at least {self.min_ambient} target dimensions")
        if n < F.n:
            if any(any(c) for c in F.components[n:]):
                raise ValueError(f"{self.label} does not fit in dimension {n}")
            return QuadMap(F.components[:n], field)
        return F.embed(n)

    @property
    def default_ambient(self) -> int:
        return max(3, self.min_ambient)

    def orbit_dim(self, n: int) -> int:
        if n < self.min_ambient:
            raise ValueError(f"{self.label} does not occur for n = {n}")
        return self.slope * n + self.intercept

    @property
    def stabilizer_dim_min(self) -> int:
        n = self.default_ambient
        return n * (n + 1) + 6 - self.orbit_dim(n)

    def topological_type(self, field: str = "C") -> int:
        return self.top_type_r if field == "R" else self.top_type_c


@dataclass(frozen=True)
class PosetEdge:
    upper: str
    lower: str
    source: str = "figure"
    family: Optional[str] = None

    def family_map(self, t, field: str = "C") -> QuadMap:
        if self.family is None:
            raise ValueError("edge has no degeneration family")
        polys = parse_components(self.family, ("x", "y", "t"))
        tv = Q(t)
        out = [p.partial_eval({"t": tv}) for p in polys]
        out = [Poly({m[:2]: c for m, c in p.terms.items()}, ("x", "y")) for p in out]
        return QuadMap(out, field)


class OrbitDB:
    """Read-only view of the orbit tables."""

    def __init__(self, doc: dict):
        self.version = doc["version"]
        self.records: Dict[str, OrbitRecord] = {}
        for r in doc["records"]:
            mu = INFINITE if r["mu"] == "INFINITE" else int(r["mu"])
            split = tuple(r["real_split"]) if r.get("real_split") else None
            rec = OrbitRecord(r["label"], r["complex_label"], tuple(r["fields"]), r["normal_form"],
                              r["dim_a"], r["dim_q"], mu, r["critical"], r["si"], r["min_ambient"],
                              r["orbit_dim_formula"][0], r["orbit_dim_formula"][1],
                              r["topological_type"]["C"], r["topological_type"]["R"], split)
            self.records[rec.label] = rec
        self.edges = [PosetEdge(e["upper"], e["lower"], e["source"]) for e in doc["edges"]]
        self.families = [PosetEdge(f["upper"], f["lower"], f["source"], f["map"]) for f in doc["families"]]
        self.non_containments = [(d["upper"], d["lower"]) for d in doc["non_containments"]]
        self.fj_table = {int(k): tuple(v) for k, v in doc["fj_table"].items()}
        self.topological_groups = {k: [tuple(g) for g in v] for k, v in doc["topological_types"].items()}
        self._closure = None

    # -- lookups ------------------------------------------------------
    def lookup(self, label: str) -> OrbitRecord:
        try:
            return self.records[label]
        except KeyError:
            raise UnknownLabelError(f"unknown orbit label {label!r}") from None

    def labels(self, field: str = "C") -> List[str]:
        return [l for l, r in self.records.items() if field in r.fields]

    def labels_for_ambient(self, n: int, field: str = "C") -> List[str]:
        """Labels occurring for maps K^2 -> K^n."""
        out = []
        for label in self.labels(field):
            rec = self.records[label]
            if n in self.fj_table:
                if rec.complex_label in self.fj_table[n]:
                    out.append(label)
            elif rec.min_ambient <= n:
                out.append(label)
        return out

    def expected_orbit_dim(self, label: str, n: int) -> int:
        return self.lookup(label).orbit_dim(n)

    def topological_type(self, label: str, field: str = "C") -> int:
        rec = self.lookup(label)
        if field == "C" and label not in COMPLEX_LABELS:
            raise UnknownLabelError(f"{label} is not a complex orbit")
        return rec.topological_type(field)

    # -- poset --------------------------------------------------------
    def _reach(self) -> Dict[str, set]:
        if self._closure is None:
            down = {l: set() for l in COMPLEX_LABELS}
            for e in self.edges:
                down[e.upper].add(e.lower)
            closure = {}
            for start in COMPLEX_LABELS:
                seen = {start}
                stack = [start]
                while stack:
                    v = stack.pop()
                    for w in down[v]:
                        if w not in seen:
                            seen.add(w)
                            stack.append(w)
                closure[start] = seen
            self._closure = closure
        return self._closure

    def is_in_closure(self, upper: str, lower: str) -> bool:
        """Whether the orbit of ``lower`` lies in the closure of the orbit of ``upper``."""
        for l in (upper, lower):
            if l not in COMPLEX_LABELS:
                raise UnknownLabelError(f"{l!r} is not a complex orbit label")
        return lower in self._reach()[upper]

    def to_dot(self) -> str:
        lines = ["digraph closure {", "  rankdir=TB;"]
        for l in COMPLEX_LABELS:
            r = self.records[l]
            lines.append(f'  "{l}" [label="{l}\\n{r.orbit_dim(r.default_ambient)}"];')
        for e in self.edges:
            lines.append(f'  "{e.upper}" -> "{e.lower}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "nodes": [{"label": l, "orbit_dim": self.records[l].orbit_dim(self.records[l].default_ambient),
                       "ambient": self.records[l].default_ambient} for l in COMPLEX_LABELS],
            "edges": [{"upper": e.upper, "lower": e.lower, "source": e.source} for e in self.edges],
        }

    # -- families -----------------------------------------------------
    def family(self, upper: str, lower: str) -> PosetEdge:
        for f in self.families:
            if f.upper == upper and f.lower == lower:
                return f
        raise UnknownLabelError(f"no family for {upper} -> {lower}")

    def verify_family(self, fam: PosetEdge, params=("1", "1/2", "1/3"), seed: int = 0) -> dict:
        """Classify family members: the upper label for t ≠ 0 and the lower one at t = 0."""
        from .classifier import classify
        uppers = [classify(fam.family_map(t), seed=seed).label.base for t in params]
        lower = classify(fam.family_map(0), seed=seed).label.base
        ok = all(u == fam.upper for u in uppers) and lower == fam.lower
        return {"edge": f"{fam.upper}:{fam.lower}", "upper": uppers, "lower": lower,
                "ok": ok, "on_poset": self.is_in_closure(fam.upper, fam.lower)}

    def verify_families(self, params=("1", "1/2", "1/3"), seed: int = 0) -> List[dict]:
        return [self.verify_family(f, params, seed) for f in self.families]


@lru_cache(maxsize=1)
def load() -> OrbitDB:
    text = resources.files(__package__).joinpath("data", DATA_FILE).read_text(encoding="utf-8")
    return OrbitDB(json.loads(text))


def canonical_dump(doc: dict) -> str:
    """Deterministic serialization used for the shipped data file."""
    return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=True) + "\n"


# ---------------------------------------------------------------------------
# polynomial identity self-tests
# ---------------------------------------------------------------------------

TARGET_VARS = ("x", "y", "z", "w", "v")


def compose_text(outer: str, inner: str, right: Optional[str] = None) -> List[Poly]:
    """outer ∘ inner ∘ right, each given as comma-separated polynomials."""
    F = parse_components(inner)
    if right is not None:
        R = parse_components(right)
        F = [f.compose(R) for f in F]
    L = parse_components(outer, TARGET_VARS[:len(F)])
    return [l.compose(F) for l in L]


def _eq(lhs: Sequence[Poly], rhs_text: str) -> bool:
    rhs = parse_components(rhs_text)
    return len(lhs) == len(rhs) and all(a == b for a, b in zip(lhs, rhs))


def _f5_witness(a, b) -> Tuple[str, str]:
    a, b = Q(a), Q(b)
    L = (f"({a * a})x - ({a * a / b})z + ({a ** 4 / (4 * b * b)}), "
         f"({b * b})y - ({b * b / a})z + ({b ** 4 / (4 * a * a)}), "
         f"z - ({(a ** 3 + b ** 3) / (2 * a * b)})")
    R = f"x/({a}) + ({a / (2 * b)}), y/({b}) + ({b / (2 * a)})"
    return L, R


def _f5_printed(a, b) -> Tuple[str, str]:
    a, b = Q(a), Q(b)
    L = (f"({a * a})x - ({a * a / b})z + ({a ** 4 / (4 * b * b)}), "
         f"({b * b})y - ({b * b / a})z + ({(2 * b ** 4 - a ** 4) / (4 * a * a)}), "
         f"z - ({(a ** 3 + b ** 3) / (4 * a * a)})")
    R = f"x/({a}) + ({a / (2 * b)}), y/({b}) + ({b / (2 * a)})"
    return L, R


def _g_reduction(a, b, c) -> bool:
    a, b, c = Q(a), Q(b), Q(c)
    G = f"x^2 + {a}y, y^2 + {b}y, xy + {c}y, x"
    L = (f"x + {2 * c}w + {c * c + a * b / 2}, y + {b * b / 4}, "
         f"z + {b / 2}w + {b * c / 2}, w + {c}")
    R = f"x - {c}, y - {b / 2}"
    if not _eq(compose_text(L, G, R), f"x^2 + {a}y, y^2, xy, x"):
        return False
    L2 = f"{1 / a ** 2}x, {1 / a ** 2}y, {1 / a ** 2}z, {1 / a}w"
    return _eq(compose_text(L2, f"x^2 + {a}y, y^2, xy, x", f"{a}x, {a}y"), "x^2 + y, y^2, xy, x")


def _f2_slice(alpha):
    al = Q(alpha)
    return al, -(al ** 3 + 2) / (2 * al), -(2 * al ** 3 + 1) / (2 * al ** 2)


def _f2_si_factored(alpha) -> bool:
    """The double-line factorization of SI on the F2 slice equals the computed curve."""
    from .groebner import colon_and_eliminate
    al, a, b = _f2_slice(alpha)
    X, Y = Poly.gens()
    factored = ((X * al + Y - (al ** 3 + 1) / (2 * al)) ** 2
                * (X / al ** 2 + Y - (al ** 6 + 1) / (2 * al ** 4)))
    computed = colon_and_eliminate([X ** 2 + Y, Y ** 2 + X, X * Y + X * a + Y * b])
    return factored.monic() == computed.monic()


def printed_f2_cubic_holds(alpha="2") -> bool:
    """The expanded SI cubic for (x^2+y, y^2+x, xy+ax+by) as printed, against the computed curve."""
    from .groebner import colon_and_eliminate
    _, a, b = _f2_slice(alpha)
    X, Y = Poly.gens()
    cubic = (X ** 3 - X ** 2 * Y * (2 * a) - X ** 2 * (2 * a * a) - X ** 2 * b - X * Y ** 2 * (2 * b)
             - X * Y * (4 * a * b) + X * Y * 3 - X * (2 * a * a * b) + X * a - X * (b * b)
             + Y ** 3 - Y ** 2 * a - Y ** 2 * (2 * b * b) - Y * (a * a) - Y * (2 * a * b * b) + Y * b
             + (a ** 3 + 3 * a * b + b ** 3 + 1))
    computed = colon_and_eliminate([X ** 2 + Y, Y ** 2 + X, X * Y + X * a + Y * b])
    return cubic.monic() == computed.monic()


def printed_f8_step_holds() -> bool:
    """The last F8 reduction step with the shift of R exactly as printed."""
    return _eq(compose_text("x - z + 1/4, y + x - 3/2z + 1/2, z - 1", "x^2+y, xy, x+y", "x + 1/2, y - x - 1/2"),
               "x^2, xy, y")


def _theta_shape() -> bool:
    from .normalizer import theta
    from .quadmap import act, AffinePair, AffineMap
    F = QuadMap(parse_components("x^2+y, y^2+x, xy+1/2x+1/2y"))
    pair = AffinePair(AffineMap([[1, 2, 0], [0, 1, 3], [1, 0, 1]], [1, -2, 3]), AffineMap([[2, 1], [1, 1]], [1, 0]))
    G = act(pair, F)
    out, _ = theta(G)
    c = out.components
    shape = (c[0][:3] == (1, 0, 0) and c[1][:3] == (0, 0, 1) and c[2][:3] == (0, 1, 0)
             and c[0][3] == 0 and c[1][4] == 0 and all(v[5] == 0 for v in c))
    return shape


def _theta_constants(seed: int, printed: bool = False) -> bool:
    """Closed-form target shift of the first Θ step against the exact reduction."""
    import random
    from . import linalg
    from .normalizer import theta
    from .quadmap import AffineMap, apply_affine, phi1
    rng = random.Random(seed)
    while True:
        F = QuadMap([[rng.randint(-5, 5) for _ in range(6)] for _ in range(3)])
        if linalg.det(phi1(F)) != 0:
            break
    G = apply_affine(AffineMap(linalg.inverse(phi1(F))), F, None)
    (_, _, _, d1, e1, g1), (_, _, _, d2, e2, g2), (_, _, _, d3, e3, g3) = G.components
    if printed:
        want = (-g1 + (d1 / 2) ** 2 + d1 * e2 / 2, -g2 + (e2 / 2) ** 2 + d1 * e2 / 2,
                (-d1 * e2 + d1 * d3 + e2 * e3) / 2 - g3)
    else:
        want = (-g1 + d1 * d1 / 4 + e1 * e2 / 2, -g2 + e2 * e2 / 4 + d1 * d2 / 2,
                -d1 * e2 / 4 + (d1 * d3 + e2 * e3) / 2 - g3)
    return tuple(theta(F)[1].L.shift) == want


def printed_theta_constants_hold(seed: int = 2) -> bool:
    return _theta_constants(seed, printed=True)


def _shear_formula(params, alpha, beta) -> bool:
    from .normalizer import omega1_params, shifted_params, theta_shift
    e1, d2, d3, e3 = (Q(v) for v in params)
    F = QuadMap(parse_components(f"x^2 + ({e1})y, y^2 + ({d2})x, xy + ({d3})x + ({e3})y"))
    return omega1_params(theta_shift(F, alpha, beta))[:2] == shifted_params((e1, d2, d3, e3), alpha, beta)


def _f2_discriminant() -> bool:
    """F2 sits on the discriminant curve of the second slice."""
    a = b = Q("1/2")
    return 2 * a ** 3 + a * a * b * b + Q("9/2") * a * b + 2 * b ** 3 - Q("27/16") == 0


def identity_checks() -> List[Tuple[str, bool]]:
    """Each displayed identity as (name, holds)."""
    out = []
    out.append(("topological F8 to F5 step: quadratic substitution",
                _eq(compose_text("-1/2(x - y - z^2), y, z", "x^2 - 2xy + y^2, y^2, x"), "xy, y^2, x")))
    out.append(("F5 composed with the shear (x-y, y)",
                _eq(compose_text("x, y, z", "x^2, y^2, x+y", "x - y, y"), "x^2 - 2xy + y^2, y^2, x")))
    out.append(("F3 from the quadratic slice point (-3/2, -3/2)",
                _eq(compose_text("x + y + 2z + 1, y - 3/4, y + z + 1/2", "x^2+y, y^2+x, xy - 3/2x - 3/2y",
                                 "x - y + 1/2, y + 1/2"), "x^2, y^2+x, xy")))
    for a in ("2", "-3", "1/5"):
        out.append((f"F6 witness a={a}",
                    _eq(compose_text(f"x, y - z/({a}), z/({a})", f"x^2+y, y^2+x, {a}x"), "x^2+y, y^2, x")))
    for a, b in (("1", "1"), ("2", "3"), ("-1/2", "5")):
        L, R = _f5_witness(a, b)
        out.append((f"F5 witness a={a} b={b}",
                    _eq(compose_text(L, f"x^2+y, y^2+x, {a}x + ({b})y", R), "x^2, y^2, x+y")))
    for b in ("2", "-1/3"):
        out.append((f"F8 witness a=0 b={b}",
                    _eq(compose_text(f"x - z/({b}), y, z/({b})", f"x^2+y, xy, ({b})y"), "x^2, xy, y")))
    for a, b in (("1", "2"), ("3", "-1"), ("-2", "1/2")):
        A, B = Q(a), Q(b)
        L1 = f"{B * B / (A * A)}x, {B ** 3 / A ** 3}y, {B / (A * A)}z"
        R1 = f"{A / B}x, {A * A / (B * B)}y"
        out.append((f"F8 rescaling a={a} b={b}",
                    _eq(compose_text(L1, f"x^2+y, xy, ({a})x + ({b})y", R1), "x^2+y, xy, x+y")))
    out.append(("F8 final step",
                _eq(compose_text("x - z + 1/4, y + x - 3/2z + 1/2, z - 1", "x^2+y, xy, x+y", "x + 1/2, y - x + 1/2"),
                    "x^2, xy, y")))
    for abc in (("1", "2", "3"), ("-2", "1/2", "0"), ("3", "-1", "5")):
        out.append((f"G reduction a,b,c={','.join(abc)}", _g_reduction(*abc)))
    for al in ("2", "3", "-1/2"):
        out.append((f"F2 self-intersection factorization alpha={al}", _f2_si_factored(al)))
    out.append(("F1 restricted to a self-intersection edge",
                _eq(compose_text("x, y, z", "x^2+y, y^2+x, xy", "x + 1/2, -x + 1/2"),
                    "x^2 + 3/4, x^2 + 3/4, -x^2 + 1/4")))
    out.append(("cube-root-of-unity rescaling of the slice",
                _eq(compose_text("x, y, z", "x^2+y, y^2+x, xy", "x, y"), "x^2+y, y^2+x, xy")))
    out.append(("quadratic-slice reduction lands in the slice shape", _theta_shape()))
    for seed in (1, 2, 3):
        out.append((f"first reduction step target shift, seed {seed}", _theta_constants(seed)))
    for params, ab in (((0, 1, 0, 0), (1, 0)), ((2, -1, 3, "1/2"), ("1/2", 3)), ((1, 1, -2, 5), (-2, "1/3"))):
        out.append((f"shear update of the slice parameters {params} at {ab}",
                    _shear_formula([Q(str(v)) for v in params], *ab)))
    out.append(("F2 on the discriminant curve of the second slice", _f2_discriminant()))
    return out


def printed_f5_witness_holds(a="1", b="1") -> bool:
    """The F5 witness exactly as printed (constants not corrected)."""
    L, R = _f5_printed(a, b)
    return _eq(compose_text(L, f"x^2+y, y^2+x, {a}x + ({b})y", R), "x^2, y^2, x+y")


def identity_selftests() -> dict:
    checks = identity_checks()
    return {"passed": all(ok for _, ok in checks), "checks": [{"name": n, "ok": ok} for n, ok in checks]}
