"""Affine invariants of quadratic maps: critical scheme, degree, self-intersection, orbit dimension.

All computations are exact over Q.  Irrational critical points are described
by the minimal data that pins them down: a separating linear form
``u = x + c*y`` and a squarefree polynomial whose roots are the values of ``u``
on those points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .groebner import INFINITE, Ideal, NotPrincipalError, colon_and_eliminate, eliminate
from .polycore import (ONE, ZERO, Poly, Q, Rational, VARS2, bareiss_det, linear_factors,
                       poly_gcd, qstr, rational_roots, squarefree_decomposition, sturm_count,
                       u_deg, u_eval, u_sqf_list, u_squarefree, u_to_poly, u_trim)
from .quadmap import MONOMIALS, QuadMap, dim_affine, dim_quadratic, jacobian_minors

EMPTY, FINITE, CURVE, PLANE = "EMPTY", "FINITE", "CURVE", "PLANE"
SEPARATOR_RANGE = range(8)
DEGREE_SAMPLES = 7


class DegreeSamplingError(RuntimeError):
    """The sampled fibers disagree, so no generic count could be certified."""


class PreconditionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointGroup:
    """A Galois-stable group of ``count`` critical points sharing one multiplicity.

    ``coords`` is set when the group is a single rational point.  Otherwise the
    points are the zeros of the ideal where ``x + separator*y`` is a root of
    ``minpoly`` (low-to-high coefficients).
    """

    multiplicity: int
    count: int
    separator: Rational
    minpoly: Tuple[Rational, ...]
    coords: Optional[Tuple[Rational, Rational]] = None

    def as_dict(self) -> dict:
        out = {"multiplicity": self.multiplicity, "count": self.count}
        if self.coords is not None:
            out["point"] = [qstr(c) for c in self.coords]
        else:
            out["separator"] = f"x + {qstr(self.separator)}*y"
            out["minpoly"] = str(u_to_poly(self.minpoly, "u"))
        return out


@dataclass(frozen=True)
class CriticalReport:
    kind: str
    points: Tuple[PointGroup, ...] = ()
    curve_poly: Optional[Poly] = None
    total_multiplicity: Optional[int] = None
    real_point_count: Optional[int] = None

    @property
    def partition(self) -> Tuple[int, ...]:
        out = []
        for g in self.points:
            out.extend([g.multiplicity] * g.count)
        return tuple(sorted(out))

    @property
    def rational_points(self) -> List[Tuple[Tuple[Rational, Rational], int]]:
        return [(g.coords, g.multiplicity) for g in self.points if g.coords is not None]

    def signature(self):
        if self.kind == FINITE:
            return (FINITE, self.partition)
        if self.kind == CURVE:
            return (CURVE, self.curve_poly.total_degree())
        return (self.kind,)

    def as_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == FINITE:
            out["total_multiplicity"] = self.total_multiplicity
            out["partition"] = list(self.partition)
            out["points"] = [g.as_dict() for g in self.points]
        if self.kind == CURVE:
            out["curve"] = str(self.curve_poly)
        return out


@dataclass(frozen=True)
class DegreeReport:
    value: object  # int or INFINITE
    samples: Tuple[Tuple[str, str], ...] = ()

    @property
    def is_finite(self) -> bool:
        return self.value is not INFINITE

    def __str__(self):
        return f"FINITE({self.value})" if self.is_finite else "INFINITE"


@dataclass(frozen=True)
class SIReport:
    kind: str  # EMPTY | CURVE
    factors: Tuple[Tuple[Poly, int], ...] = ()
    real_locus: Optional[Tuple[Poly, ...]] = None
    method: str = "colon"

    def polynomial(self) -> Poly:
        out = Poly.const(1)
        for f, k in self.factors:
            out = out * f ** k
        return out

    def radical(self) -> Poly:
        out = Poly.const(1)
        for f, _ in self.factors:
            out = out * f
        return out

    def signature(self):
        if self.kind == EMPTY:
            return (EMPTY,)
        return (CURVE, tuple(sorted((f.total_degree(), k) for f, k in self.factors)))

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "method": self.method}
        if self.kind == CURVE:
            out["factors"] = [[str(f), k] for f, k in self.factors]
            if self.real_locus is not None:
                out["real_locus"] = [str(f) for f in self.real_locus]
        return out


# ---------------------------------------------------------------------------
# zero-dimensional helpers
# ---------------------------------------------------------------------------

def _separating_charpoly(ideal: Ideal) -> Tuple[Rational, List[Rational]]:
    """Charpoly of multiplication by x + c*y with c in 0..7 maximizing the number of distinct roots."""
    X, Y = Poly.gens(ideal.vars)
    best = None
    for c in SEPARATOR_RANGE:
        cp = linalg.charpoly(ideal.multiplication_matrix(X + Y * c))
        k = u_deg(u_squarefree(cp))
        if best is None or k > best[0]:
            best = (k, Q(c), cp)
    return best[1], best[2]


def distinct_point_count(ideal: Ideal) -> int:
    """Number of distinct complex zeros of a zero-dimensional ideal in two variables."""
    if ideal.is_unit():
        return 0
    _, cp = _separating_charpoly(ideal)
    return u_deg(u_squarefree(cp))


def radical_zero_dim(ideal: Ideal) -> Ideal:
    """Radical of a zero-dimensional ideal by adjoining squarefree parts of coordinate charpolys."""
    gens = list(ideal.basis())
    for v in ideal.vars:
        g = Poly.var(v, ideal.vars)
        cp = u_squarefree(linalg.charpoly(ideal.multiplication_matrix(g)))
        gens.append(Poly.from_univariate(cp, v, ideal.vars))
    return Ideal(gens, vars=ideal.vars)


def _point_from_root(ideal: Ideal, c: Rational, r: Rational) -> Tuple[Rational, Rational]:
    X, Y = Poly.gens(ideal.vars)
    local = Ideal(ideal.basis() + [X + Y * c - r], vars=ideal.vars)
    d = local.quotient_dimension()
    tx = sum((local.multiplication_matrix(X)[i][i] for i in range(d)), ZERO)
    ty = sum((local.multiplication_matrix(Y)[i][i] for i in range(d)), ZERO)
    return (tx / d, ty / d)


# ---------------------------------------------------------------------------
# critical scheme
# ---------------------------------------------------------------------------

def _poly_gcd_all(polys: Sequence[Poly]) -> Poly:
    g = Poly.const(0)
    for p in polys:
        g = poly_gcd(g, p)
    return g


def critical_scheme(F: QuadMap) -> CriticalReport:
    """Structure of the scheme cut out by the 2x2 minors of DF."""
    minors = [m for m in jacobian_minors(F) if not m.is_zero()]
    if not minors:
        return CriticalReport(PLANE)
    ideal = Ideal(minors, vars=VARS2)
    if ideal.is_unit():
        return CriticalReport(EMPTY)
    dim = ideal.quotient_dimension()
    if dim is INFINITE:
        g = _poly_gcd_all(minors).primitive()
        return CriticalReport(CURVE, curve_poly=g)
    c, cp = _separating_charpoly(ideal)
    groups = []
    real = 0
    for f, k in u_sqf_list(cp):
        real += sturm_count(f)
        rroots = rational_roots(f)
        for r in rroots:
            pt = _point_from_root(ideal, c, r)
            groups.append(PointGroup(k, 1, ZERO, (-r, ONE), pt))
        rest = f
        for r in rroots:
            rest = _udiv(rest, [-r, ONE])
        if u_deg(rest) > 0:
            groups.append(PointGroup(k, u_deg(rest), c, tuple(rest)))
    return CriticalReport(FINITE, tuple(groups), total_multiplicity=dim, real_point_count=real)


def _udiv(a, b):
    from .polycore import u_divmod
    q, r = u_divmod(a, b)
    if r:
        raise ArithmeticError("inexact division")
    return q


# ---------------------------------------------------------------------------
# topological degree
# ---------------------------------------------------------------------------

def sample_points(seed: int = 0, count: int = DEGREE_SAMPLES) -> List[Tuple[Rational, Rational]]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = (Q(rng.randint(-997, 997)) / rng.randint(1, 97), Q(rng.randint(-997, 997)) / rng.randint(1, 97))
        if p not in out:
            out.append(p)
    return out


def fiber_count(F: QuadMap, point) -> object:
    """Number of distinct points in F^{-1}(F(point)), or INFINITE."""
    values = F.evaluate(point)
    gens = [p - v for p, v in zip(F.polys(), values)]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return INFINITE
    ideal = Ideal(gens, vars=VARS2)
    if ideal.quotient_dimension() is INFINITE:
        return INFINITE
    return distinct_point_count(ideal)


def topological_degree(F: QuadMap, seed: int = 0) -> DegreeReport:
    """Generic fiber cardinality, certified by agreement over seeded base points."""
    counts = []
    pts = sample_points(seed)
    for p in pts:
        counts.append(fiber_count(F, p))
    if any(c != counts[0] for c in counts):
        detail = ", ".join(f"({qstr(p[0])},{qstr(p[1])})->{c}" for p, c in zip(pts, counts))
        raise DegreeSamplingError(f"fiber counts disagree across samples: {detail}")
    samples = tuple((f"({qstr(p[0])},{qstr(p[1])})", str(c)) for p, c in zip(pts, counts))
    return DegreeReport(counts[0], samples)


# ---------------------------------------------------------------------------
# self-intersection
# ---------------------------------------------------------------------------

def _normalize(p: Poly) -> Poly:
    return p.primitive()


def _factor_report(gen: Poly, field: str, method: str, reduced: bool = False) -> SIReport:
    if gen.is_zero():
        raise ArithmeticError("self-intersection locus is the whole plane")
    if gen.is_constant():
        return SIReport(EMPTY, method=method)
    _, parts = squarefree_decomposition(gen)
    factors = []
    for f, k in parts:
        lines, rest = linear_factors(f)
        for l in lines:
            factors.append((_normalize(l), 1 if reduced else k))
        if not rest.is_constant():
            factors.append((_normalize(rest), 1 if reduced else k))
    factors.sort(key=lambda fk: (fk[0].total_degree(), str(fk[0])))
    real = None
    if field == "R":
        real = tuple(f for f, _ in factors if has_real_points(f))
    return SIReport(CURVE, tuple(factors), real, method)


def self_intersection(F: QuadMap, degree: DegreeReport | None = None) -> SIReport:
    """Self-intersection curve.

    For degree one this is the scheme given by the colon ideal of the fiber
    product by the diagonal, eliminated to the first factor.  For finite
    degree k > 1 the reduced locus of non-generic fibers F^{-1}(F(C(F))) is
    returned instead (the colon ideal then fills the plane).
    """
    degree = degree or topological_degree(F)
    if not degree.is_finite:
        raise PreconditionError("self-intersection needs a finite topological degree")
    if degree.value == 1:
        # the fiber-product ideal only sees the span of the non-constant parts;
        # a reduced basis of that span keeps the Gröbner coefficients small
        rows, _ = linalg.rref([list(c[:5]) for c in F.components])
        span = QuadMap([list(r) + [ZERO] for r in rows if any(r)], F.field)
        gen = colon_and_eliminate(span.polys())
        return _factor_report(gen, F.field, "colon")
    return _factor_report(branch_preimage(F), F.field, "branch", reduced=True)


def branch_preimage(F: QuadMap) -> Poly:
    """Generator of the elimination of {F(p) = F(q), q critical} to p."""
    ctx = ("x", "y", "_u", "_v")
    X, Y, U, V = Poly.gens(ctx)
    gens = []
    for f in F.polys():
        fe = f.change_context(ctx)
        g = fe - fe.compose([U, V, U, V])
        if not g.is_zero():
            gens.append(g)
    for m in jacobian_minors(F):
        if not m.is_zero():
            gens.append(m.change_context(ctx).compose([U, V, U, V]))
    res = eliminate(gens, ("_u", "_v"))
    if not res:
        return Poly.const(0)
    res = [r for r in res]
    g = _poly_gcd_all(res)
    ideal = Ideal(res, vars=("x", "y"))
    if ideal.is_unit() or ideal.quotient_dimension() is not INFINITE:
        return Poly.const(1)
    if g.is_constant():
        raise NotPrincipalError("non-generic fibers do not form a curve")
    return g


def has_real_points(f: Poly) -> bool:
    """Whether the squarefree plane curve f = 0 has a real point (exact, cell sampling)."""
    if f.total_degree() <= 1:
        return True
    fx = f.degree("y")
    if fx <= 0:
        return sturm_count(f.to_univariate()) > 0
    lc = f.coeffs_in("y")[-1]
    disc = _discriminant_y(f)
    crit = Poly.const(1)
    for p in (lc, disc):
        if not p.is_zero() and not p.is_constant():
            crit = crit * p
    samples = [Q(0)]
    if not crit.is_constant():
        u = crit.to_univariate()
        from .polycore import isolate_real_roots
        ivs = isolate_real_roots(u)
        bounds = []
        for lo, hi in ivs:
            bounds.extend([lo, hi])
        samples = _cell_samples(bounds)
        for r in rational_roots(u):
            samples.append(r)
    for s in samples:
        g = u_trim(f.partial_eval({"x": s}).to_univariate())
        if len(g) > 1 and sturm_count(g) > 0:
            return True
        if len(g) == 0:
            return True
    return False


def _discriminant_y(f: Poly) -> Poly:
    from .polycore import resultant
    if f.degree("y") < 1:
        return Poly.const(0)
    return resultant(f, f.diff("y"), "y")


def _cell_samples(bounds: List[Rational]) -> List[Rational]:
    if not bounds:
        return [Q(0)]
    bounds = sorted(set(bounds))
    out = [bounds[0] - 1, bounds[-1] + 1]
    out.extend((a + b) / 2 for a, b in zip(bounds, bounds[1:]))
    out.extend(bounds)
    return out


def self_intersection_midpoint(F: QuadMap, seed: int = 0) -> Poly:
    """Reduced self-intersection curve from kernel lines through the critical locus.

    Uses F(u + v/2) - F(u - v/2) = DF(u) v: identified pairs are symmetric about
    a critical point u along a kernel direction of DF(u), and that whole line is
    then identified with itself.  Returns the squarefree defining polynomial
    (1 when empty).
    """
    crit = critical_scheme(F)
    if crit.kind == EMPTY:
        return Poly.const(1)
    if crit.kind == PLANE:
        raise PreconditionError("critical locus is the whole plane")
    rng = random.Random(seed)
    lam = [Q(rng.randint(1, 97)) for _ in range(F.n)]
    X, Y = Poly.gens(VARS2)
    jac = F.jacobian()
    n1 = sum((dx * l for (dx, _), l in zip(jac, lam)), Poly.const(0))
    n2 = sum((dy * l for (_, dy), l in zip(jac, lam)), Poly.const(0))
    product = Poly.const(1)
    minors = [m for m in jacobian_minors(F) if not m.is_zero()]
    residual = minors
    if crit.kind == CURVE:
        g = crit.curve_poly
        lines, rest = linear_factors(g)
        if not rest.is_constant():
            raise PreconditionError("non-linear critical curve: kernel lines sweep an open set")
        for l in lines:
            if not _kernel_tangent(F, l):
                raise PreconditionError("kernel lines are transversal to the critical curve")
            product = product * l
        residual = [m.exquo(g) for m in minors]
        ideal = Ideal(residual, vars=VARS2)
        if ideal.is_unit() or ideal.quotient_dimension() is INFINITE:
            return _sqf_normal(product)
    ideal = radical_zero_dim(Ideal(residual, vars=VARS2))
    basis = ideal.staircase()
    k = len(basis)
    # l(u; P) = n(u) . (P - u), with P = (Px, Py) the free point in the plane
    M1 = ideal.multiplication_matrix(n1)
    M2 = ideal.multiplication_matrix(n2)
    M0 = ideal.multiplication_matrix(n1 * X + n2 * Y)
    P = ("x", "y")
    PX, PY = Poly.gens(P)
    mat = [[PX * M1[i][j] + PY * M2[i][j] - M0[i][j] for j in range(k)] for i in range(k)]
    norm = bareiss_det(mat)
    if norm.is_zero():
        raise PreconditionError("a critical point has a vanishing differential")
    return _sqf_normal(product * norm)


def _kernel_tangent(F: QuadMap, line: Poly) -> bool:
    a, b = line.coeff((1, 0)), line.coeff((0, 1))
    c = line.coeff((0, 0))
    direction = (-b, a)
    # parametrize the line by s
    ctx = ("s",)
    S = Poly.var("s", ctx)
    if b:
        px, py = S, (S * (-a) - c) * (ONE / b)
    else:
        px, py = Poly.const(-c / a, ctx), S
    for dx, dy in F.jacobian():
        v = dx.compose([px, py]) * direction[0] + dy.compose([px, py]) * direction[1]
        if not v.is_zero():
            return False
    return True


def _sqf_normal(p: Poly) -> Poly:
    if p.is_constant():
        return Poly.const(1)
    out = Poly.const(1)
    for f, _ in squarefree_decomposition(p)[1]:
        out = out * f
    return out.primitive()


# ---------------------------------------------------------------------------
# orbit dimension
# ---------------------------------------------------------------------------

def _coeff_vector(polys: Sequence[Poly]) -> List[Rational]:
    out = []
    for p in polys:
        out.extend(p.coeff(m) for m in MONOMIALS)
    return out


def tangent_matrix(F: QuadMap) -> linalg.Matrix:
    """Columns span the tangent space of the orbit inside the 6n coefficient space."""
    polys = F.polys()
    n = F.n
    zero = Poly.const(0)
    cols = []
    for i in range(n):
        for j in range(n):
            comps = [zero] * n
            comps[i] = polys[j]
            cols.append(_coeff_vector(comps))
    for i in range(n):
        comps = [zero] * n
        comps[i] = Poly.const(1)
        cols.append(_coeff_vector(comps))
    X, Y = Poly.gens(VARS2)
    for var in ("x", "y"):
        ders = [p.diff(var) for p in polys]
        for mult in (X, Y, Poly.const(1)):
            cols.append(_coeff_vector([d * mult for d in ders]))
    return linalg.transpose(cols)


def orbit_dimension(F: QuadMap) -> int:
    """Rank of the infinitesimal action of the affine group pair at F."""
    return linalg.rank(tangent_matrix(F))


# ---------------------------------------------------------------------------
# real refinements
# ---------------------------------------------------------------------------

def conic_type(f: Poly) -> str:
    """Real affine type of a curve of degree at most two."""
    d = f.total_degree()
    if d <= 0:
        return "empty" if f.is_zero() is False else "plane"
    if d == 1:
        return "line"
    if d > 2:
        return "higher-degree"
    a, b, c = f.coeff((2, 0)), f.coeff((1, 1)), f.coeff((0, 2))
    dd, e, g = f.coeff((1, 0)), f.coeff((0, 1)), f.coeff((0, 0))
    M = [[a, b / 2, dd / 2], [b / 2, c, e / 2], [dd / 2, e / 2, g]]
    det3 = linalg.det(M)
    disc = b * b - 4 * a * c
    if det3 != 0:
        if disc < 0:
            # real points iff the form has the opposite sign of det on some point: a*det3 < 0
            return "ellipse" if a * det3 < 0 else "imaginary-ellipse"
        if disc > 0:
            return "hyperbola"
        return "parabola"
    if disc > 0:
        return "real-line-pair"
    if disc < 0:
        return "complex-line-pair"
    # parallel or double lines: rank of the full matrix
    r = linalg.rank(M)
    if r == 1:
        return "double-line"
    # two parallel lines; decide reality from a 1-d discriminant along the normal direction
    cof = (a * g - dd * dd / 4) if a else (c * g - e * e / 4)
    return "parallel-lines" if cof < 0 else "imaginary-parallel-lines"


def binary_form_type(a, b, c) -> str:
    disc = Q(b) ** 2 - 4 * Q(a) * Q(c)
    if disc == 0:
        return "square"
    return "real-product" if disc > 0 else "irreducible"


def quadratic_span(F: QuadMap) -> List[Tuple[Rational, Rational, Rational]]:
    R, piv = linalg.rref([list(c[:3]) for c in F.components])
    return [tuple(r) for r in R[:len(piv)]]


def pencil_signature(q1, q2) -> str:
    """Sign type of the discriminant of the pencil s*q1 + t*q2, a binary form in (s, t)."""
    a1, b1, c1 = q1
    a2, b2, c2 = q2
    # D(s,t) = (s b1 + t b2)^2 - 4 (s a1 + t a2)(s c1 + t c2) = A s^2 + B st + C t^2
    A = b1 * b1 - 4 * a1 * c1
    B = 2 * b1 * b2 - 4 * (a1 * c2 + a2 * c1)
    C = b2 * b2 - 4 * a2 * c2
    delta = B * B - 4 * A * C
    if A == B == C == 0:
        return "all-degenerate"
    if delta > 0:
        return "two-real-degenerate"
    if delta < 0:
        return "none-real-degenerate"
    return "one-double-degenerate"


@dataclass(frozen=True)
class RealSignature:
    real_critical_count: Optional[int]
    conic_type: Optional[str]
    binary_form_type: Optional[str]
    pencil_signature: Optional[str]

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def real_signatures(F: QuadMap, critical: CriticalReport | None = None) -> RealSignature:
    if F.field != "R":
        raise PreconditionError("real signatures need field R")
    critical = critical or critical_scheme(F)
    count = critical.real_point_count if critical.kind == FINITE else None
    ctype = conic_type(critical.curve_poly) if critical.kind == CURVE else None
    span = quadratic_span(F)
    bft = binary_form_type(*span[0]) if len(span) == 1 else None
    pen = pencil_signature(span[0], span[1]) if len(span) == 2 else None
    return RealSignature(count, ctype, bft, pen)


@dataclass(frozen=True)
class InvariantVector:
    dim_a: int
    dim_q: int
    mu: object
    critical: Tuple
    orbit_dim: int
    si: Optional[Tuple] = None
    real: Optional[RealSignature] = None

    def as_dict(self) -> dict:
        out = {
            "dim_a": self.dim_a,
            "dim_q": self.dim_q,
            "mu": self.mu if isinstance(self.mu, int) else str(self.mu),
            "critical": [str(v) if not isinstance(v, tuple) else list(v) for v in self.critical],
            "orbit_dim": self.orbit_dim,
        }
        if self.si is not None:
            out["si"] = _jsonable(self.si)
        if self.real is not None:
            out["real"] = self.real.as_dict()
        return out


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def invariant_vector(F: QuadMap, seed: int = 0, compute_si: bool = False) -> Tuple[InvariantVector, Dict]:
    """All invariants used by the classifier, plus the raw reports."""
    crit = critical_scheme(F)
    deg = topological_degree(F, seed)
    si = None
    if compute_si and deg.is_finite:
        si = self_intersection(F, deg)
    real = real_signatures(F, crit) if F.field == "R" else None
    vec = InvariantVector(dim_affine(F), dim_quadratic(F), deg.value, crit.signature(),
                          orbit_dimension(F), si.signature() if si else None, real)
    return vec, {"critical": crit, "degree": deg, "si": si}
