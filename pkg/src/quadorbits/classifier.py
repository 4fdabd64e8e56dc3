"""Orbit classification by invariant-table matching."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import linalg
from .expr import parse_poly
from .groebner import INFINITE
from .invariants import (CURVE, EMPTY, FINITE, DegreeSamplingError, InvariantVector, SIReport, invariant_vector,
                         real_signatures, self_intersection)
from .orbitdb import COMPLEX_LABELS, OrbitRecord, load
from .polycore import ZERO, squarefree_decomposition
from .quadmap import AffineMap, AffinePair, QuadMap, apply_affine, dim_affine

REAL_PAIRS = {"F1": "F1'", "F7": "F7'", "F13": "F13'", "F17": "F17'", "F19": "F19'", "F25": "F25'", "G3": "G3'"}


class UnclassifiableError(RuntimeError):
    code = "UNCLASSIFIABLE"

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


@dataclass(frozen=True)
class OrbitLabel:
    base: str
    ambient_n: int
    field: str = "C"

    def __post_init__(self):
        if self.field not in ("C", "R"):
            raise ValueError("field must be C or R")
        if self.base.endswith("'") and self.field != "R":
            raise ValueError("primed labels exist only over R")
        if self.ambient_n < 1:
            raise ValueError("ambient dimension must be positive")
        if self.base.startswith("G"):
            need = 5 if self.base == "G0" else 4
            if self.ambient_n < need:
                raise ValueError(f"{self.base} needs ambient dimension at least {need}")

    @property
    def complex_base(self) -> str:
        return self.base.rstrip("'")

    def __str__(self):
        return self.base


@dataclass
class ClassificationReport:
    label: OrbitLabel
    invariant_vector: InvariantVector
    topological_type: int
    expected_orbit_dim: int
    reduced_map: QuadMap = None
    witness: AffinePair = None
    details: Dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "label": self.label.base,
            "field": self.label.field,
            "ambient_n": self.label.ambient_n,
            "invariants": self.invariant_vector.as_dict(),
            "topological_type": self.topological_type,
            "expected_orbit_dim": self.expected_orbit_dim,
        }
        if self.details.get("critical") is not None:
            out["critical"] = self.details["critical"].as_dict()
        if self.details.get("si") is not None:
            out["self_intersection"] = self.details["si"].as_dict()
        return out


# ---------------------------------------------------------------------------
# ambient reduction
# ---------------------------------------------------------------------------

def reduce_ambient(F: QuadMap) -> Tuple[QuadMap, AffinePair]:
    """Change target coordinates so only the first max(3, dim_a) components survive.

    Returns the reduced map and the pair (L, id) with L∘F = (reduced, 0, ..., 0).
    Maps with n < 3 are returned unchanged.
    """
    n = F.n
    if n < 3:
        return F, AffinePair.identity(n)
    rows = [list(c[:5]) for c in F.components]
    pivots = []
    for i in range(n):
        if linalg.rank([rows[j] for j in pivots + [i]]) > len(pivots):
            pivots.append(i)
    r = len(pivots)
    target = min(max(3, r), 5)
    others = [i for i in range(n) if i not in pivots]
    order = pivots + others
    L = [[ZERO] * n for _ in range(n)]
    for new, old in enumerate(order):
        L[new][old] = 1
        if old not in pivots and r:
            coeffs = _solve(linalg.transpose([rows[p] for p in pivots]), rows[old])
            for c, p in zip(coeffs, pivots):
                L[new][p] -= c
    # the trailing rows are now constant; translate them to zero
    linear = apply_affine(AffineMap(L), F, None)
    shift = [ZERO] * n
    for i in range(target, n):
        shift[i] = -linear.components[i][5]
    Lmap = AffineMap(L, shift)
    pair = AffinePair(Lmap, AffineMap.identity(2))
    G = apply_affine(Lmap, F, None)
    if any(any(c) for c in G.components[target:]):
        raise UnclassifiableError("ambient reduction left nonzero trailing components")
    return QuadMap(G.components[:target], F.field), pair


def _solve(A, b):
    """Exact solution of A c = b for full-column-rank A."""
    aug = [list(row) + [v] for row, v in zip(A, b)]
    R, piv = linalg.rref(aug)
    k = len(A[0])
    if k in piv:
        raise UnclassifiableError("row outside the pivot span")
    out = [ZERO] * k
    for i, p in enumerate(piv):
        out[p] = R[i][k]
    return out


# ---------------------------------------------------------------------------
# matching
# ---------------------------------------------------------------------------

def si_shape(poly) -> Tuple:
    """Multiplicity structure of a plane curve: sorted (degree of the part of multiplicity k, k)."""
    _, parts = squarefree_decomposition(poly)
    return tuple(sorted((f.total_degree(), k) for f, k in parts if f.total_degree() > 0))


def _report_shape(si: SIReport) -> Tuple:
    if si.kind == EMPTY:
        return (EMPTY,)
    by_k: Dict[int, int] = {}
    for f, k in si.factors:
        by_k[k] = by_k.get(k, 0) + f.total_degree()
    return (CURVE, tuple(sorted((d, k) for k, d in by_k.items())))


def _record_si_shape(rec: OrbitRecord):
    if rec.si is None:
        return None
    if rec.si == "EMPTY":
        return (EMPTY,)
    return (CURVE, si_shape(parse_poly(rec.si)))


def _critical_matches(rec: OrbitRecord, sig) -> bool:
    kind = rec.critical["kind"]
    if sig[0] != kind:
        return False
    if kind == FINITE:
        return tuple(sorted(rec.critical["partition"])) == tuple(sig[1])
    if kind == CURVE:
        return parse_poly(rec.critical["curve"]).total_degree() == sig[1]
    return True


def _mismatch(rec: OrbitRecord, vec: InvariantVector, n: int) -> Optional[str]:
    if rec.dim_a != vec.dim_a:
        return "dim_a"
    if rec.dim_q != vec.dim_q:
        return "dim_q"
    if (rec.mu is INFINITE) != (vec.mu is INFINITE) or (rec.mu is not INFINITE and rec.mu != vec.mu):
        return "mu"
    if n < rec.min_ambient or rec.orbit_dim(n) != vec.orbit_dim:
        return "orbit_dim"
    if not _critical_matches(rec, vec.critical):
        return "critical"
    if vec.si is not None:
        want = _record_si_shape(rec)
        if want is not None and want != vec.si:
            return "si"
    return None


def candidates(n: int, db=None) -> List[OrbitRecord]:
    db = db or load()
    out = []
    for label in COMPLEX_LABELS:
        rec = db.records[label]
        if n in db.fj_table:
            if label in db.fj_table[n]:
                out.append(rec)
        elif rec.min_ambient <= n:
            out.append(rec)
    return out


def match_complex(vec: InvariantVector, n: int, db=None) -> OrbitRecord:
    hits = [rec for rec in candidates(n, db) if _mismatch(rec, vec, n) is None]
    if len(hits) != 1:
        raise UnclassifiableError(
            f"{len(hits)} table rows match invariants {vec.as_dict()}", [h.label for h in hits])
    return hits[0]


def split_real(rec: OrbitRecord, G: QuadMap, db=None) -> OrbitRecord:
    """Pick the real form among the two twins sharing ``rec``'s complex orbit."""
    db = db or load()
    if rec.label not in REAL_PAIRS:
        return rec
    twins = [rec, db.records[REAL_PAIRS[rec.label]]]
    sig = real_signatures(G.with_field("R")).as_dict()
    hits = [t for t in twins if t.real_split and sig.get(t.real_split[0]) == t.real_split[1]]
    if len(hits) != 1:
        raise UnclassifiableError(f"real signature {sig} does not split {rec.label}", [h.label for h in hits])
    return hits[0]


class Classifier:
    """Classify quadratic maps K^2 -> K^n up to affine equivalence.

    Parameters
    ----------
    seed : int
        Seed for the base points used to sample the topological degree.
    compute_si : bool
        Also compute the self-intersection curve and check its multiplicity structure.
    """

    max_degree_attempts = 3

    def __init__(self, seed: int = 0, compute_si: bool = True):
        self.seed = seed
        self.compute_si = compute_si

    def _invariants(self, G: QuadMap):
        # a sample landing on the branch locus makes the fiber counts disagree;
        # retry with fresh base points and keep the failures in the report
        failures = []
        for attempt in range(self.max_degree_attempts):
            try:
                vec, reports = invariant_vector(G, seed=self.seed + 1000 * attempt, compute_si=False)
            except DegreeSamplingError as exc:
                failures.append(str(exc))
                continue
            reports["degree_failures"] = failures
            return vec, reports
        raise UnclassifiableError("topological degree sampling failed: " + "; ".join(failures))

    def classify(self, F: QuadMap) -> ClassificationReport:
        db = load()
        G, pair = reduce_ambient(F)
        vec, reports = self._invariants(G)
        # SI only enters the decision table for degree one; the branch locus of
        # higher-degree maps is expensive and carries no extra separating power
        if self.compute_si and vec.mu == 1:
            reports["si"] = self_intersection(G, reports["degree"])
        if reports["si"] is not None:
            vec = InvariantVector(vec.dim_a, vec.dim_q, vec.mu, vec.critical, vec.orbit_dim,
                                  _report_shape(reports["si"]), vec.real)
        rec = match_complex(vec, G.n, db)
        if F.field == "R":
            rec = split_real(rec, G, db)
        label = OrbitLabel(rec.label, F.n, F.field)
        expected = rec.orbit_dim(F.n) if F.n >= rec.min_ambient else rec.orbit_dim(G.n)
        return ClassificationReport(label, vec, rec.topological_type(F.field), expected, G, pair, reports)


def classify(F: QuadMap, seed: int = 0, compute_si: bool = True) -> ClassificationReport:
    return Classifier(seed, compute_si).classify(F)


def topological_type(label, field: Optional[str] = None) -> int:
    if isinstance(label, OrbitLabel):
        field = field or label.field
        label = label.base
    return load().topological_type(label, field or ("R" if label.endswith("'") else "C"))


def expected_orbit_dim(label, n: Optional[int] = None) -> int:
    if isinstance(label, OrbitLabel):
        n = label.ambient_n if n is None else n
        label = label.base
    rec = load().lookup(label)
    return rec.orbit_dim(rec.default_ambient if n is None else n)
