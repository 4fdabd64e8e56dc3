"""Quadratic maps K^2 -> K^n, the affine group action, and the basic dimension counts."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Sequence, Tuple

from . import linalg
from .polycore import ONE, ZERO, Poly, Q, Rational, VARS2

# monomials in coefficient order (a, b, c, d, e, g) for a x^2 + b xy + c y^2 + d x + e y + g
MONOMIALS = ((2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0))
FIELDS = ("C", "R")


def _tuple_from_poly(p: Poly) -> Tuple[Rational, ...]:
    if p.total_degree() > 2:
        raise ValueError(f"component {p} has degree above 2")
    if p.vars != VARS2:
        p = p.change_context(VARS2)
    return tuple(p.coeff(m) for m in MONOMIALS)


class QuadMap:
    """A map (f_1, ..., f_n) with f_i = a x^2 + b xy + c y^2 + d x + e y + g over Q.

    Parameters
    ----------
    components : sequence of 6-sequences or of :class:`Poly`
        Coefficient tuples in the order (a, b, c, d, e, g), or polynomials in x, y.
    field : {"C", "R"}
        Ground field the map is considered over.
    """

    __slots__ = ("field", "components")

    def __init__(self, components: Sequence, field: str = "C"):
        if field not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}, got {field!r}")
        comps = []
        for i, comp in enumerate(components):
            if isinstance(comp, Poly):
                comps.append(_tuple_from_poly(comp))
                continue
            comp = tuple(comp)
            if len(comp) != 6:
                raise ValueError(f"component {i} has {len(comp)} coefficients, expected 6")
            comps.append(tuple(Q(c) for c in comp))
        if not comps:
            raise ValueError("a map needs at least one component")
        self.field = field
        self.components = tuple(comps)

    @classmethod
    def from_polys(cls, polys: Sequence[Poly], field: str = "C") -> "QuadMap":
        return cls(list(polys), field)

    @property
    def n(self) -> int:
        return len(self.components)

    def __repr__(self):
        return f"QuadMap({self.field}, ({', '.join(str(p) for p in self.polys())}))"

    def __eq__(self, other):
        return isinstance(other, QuadMap) and self.field == other.field and self.components == other.components

    def __hash__(self):
        return hash((self.field, self.components))

    def with_field(self, field: str) -> "QuadMap":
        return QuadMap(self.components, field)

    def polys(self) -> List[Poly]:
        return [Poly(dict(zip(MONOMIALS, c)), VARS2) for c in self.components]

    def evaluate(self, point) -> List[Rational]:
        x, y = (Q(v) for v in point)
        vals = (x * x, x * y, y * y, x, y, ONE)
        return [sum((a * v for a, v in zip(c, vals)), ZERO) for c in self.components]

    def embed(self, n: int) -> "QuadMap":
        """Compose with the standard inclusion K^m -> K^n."""
        if n < self.n:
            raise ValueError("cannot embed into a smaller target")
        return QuadMap(list(self.components) + [(ZERO,) * 6] * (n - self.n), self.field)

    def coefficient_matrix(self) -> linalg.Matrix:
        return [list(c) for c in self.components]

    def jacobian(self) -> List[Tuple[Poly, Poly]]:
        return [(p.diff("x"), p.diff("y")) for p in self.polys()]


# ---------------------------------------------------------------------------
# affine maps and the group action
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """v -> M v + t over Q."""

    matrix: Tuple[Tuple[Rational, ...], ...]
    shift: Tuple[Rational, ...]

    def __init__(self, matrix, shift=None):
        M = tuple(tuple(Q(v) for v in row) for row in matrix)
        n = len(M)
        if any(len(r) != n for r in M):
            raise ValueError("linear part must be square")
        t = tuple(Q(v) for v in shift) if shift is not None else (ZERO,) * n
        if len(t) != n:
            raise ValueError("translation has the wrong length")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "shift", t)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(linalg.identity(n))

    def det(self) -> Rational:
        return linalg.det([list(r) for r in self.matrix])

    def is_invertible(self) -> bool:
        return self.det() != 0

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self ∘ other."""
        M = linalg.matmul([list(r) for r in self.matrix], [list(r) for r in other.matrix])
        t = [a + b for a, b in zip(linalg.matvec([list(r) for r in self.matrix], other.shift), self.shift)]
        return AffineMap(M, t)

    def inverse(self) -> "AffineMap":
        Mi = linalg.inverse([list(r) for r in self.matrix])
        t = [-v for v in linalg.matvec(Mi, self.shift)]
        return AffineMap(Mi, t)

    def apply(self, v) -> List[Rational]:
        return [a + b for a, b in zip(linalg.matvec([list(r) for r in self.matrix], [Q(x) for x in v]), self.shift)]

    def polys(self, vars: Sequence[str]) -> List[Poly]:
        """Component polynomials in the given variables."""
        gens = Poly.gens(vars)
        out = []
        for row, s in zip(self.matrix, self.shift):
            p = Poly.const(s, vars)
            for c, g in zip(row, gens):
                p = p + g * c
            out.append(p)
        return out


@dataclass(frozen=True)
class AffinePair:
    """A pair (L, R) acting by F -> L ∘ F ∘ R."""

    L: AffineMap
    R: AffineMap

    def __post_init__(self):
        if self.R.dim != 2:
            raise ValueError("R must act on the plane")
        if not self.L.is_invertible() or not self.R.is_invertible():
            raise ValueError("singular linear part")

    @classmethod
    def identity(cls, n: int) -> "AffinePair":
        return cls(AffineMap.identity(n), AffineMap.identity(2))

    def compose(self, first: "AffinePair") -> "AffinePair":
        """``self ∘ first``: acting by ``first`` and then by ``self``."""
        return AffinePair(self.L.compose(first.L), first.R.compose(self.R))

    def inverse(self) -> "AffinePair":
        return AffinePair(self.L.inverse(), self.R.inverse())


def act(pair: AffinePair, F: QuadMap) -> QuadMap:
    """Return L ∘ F ∘ R exactly."""
    if pair.L.dim != F.n:
        raise ValueError(f"L acts on K^{pair.L.dim} but F maps to K^{F.n}")
    if not pair.L.is_invertible() or not pair.R.is_invertible():
        raise ValueError("singular linear part")
    return apply_affine(pair.L, F, pair.R)


def apply_affine(L: AffineMap | None, F: QuadMap, R: AffineMap | None) -> QuadMap:
    """L ∘ F ∘ R without the invertibility requirement (either side may be None)."""
    polys = F.polys()
    if R is not None:
        images = R.polys(VARS2)
        polys = [p.compose(images) for p in polys]
    if L is not None:
        rows = [[Q(v) for v in r] for r in L.matrix]
        out = []
        for row, s in zip(rows, L.shift):
            q = Poly.const(s, VARS2)
            for c, p in zip(row, polys):
                if c:
                    q = q + p * c
            out.append(q)
        polys = out
    return QuadMap(polys, F.field)


def compose_polys(outer: Sequence[Poly], F: QuadMap) -> QuadMap:
    """outer ∘ F where ``outer`` are polynomials in n target variables (any degree)."""
    images = F.polys()
    return QuadMap([p.compose(images) for p in outer], F.field)


# ---------------------------------------------------------------------------
# dimensions and Jacobian data
# ---------------------------------------------------------------------------

def dim_affine(F: QuadMap) -> int:
    """Dimension of the affine span of the image."""
    return linalg.rank([list(c[:5]) for c in F.components])


def dim_quadratic(F: QuadMap) -> int:
    """Dimension of the span of the quadratic parts."""
    return linalg.rank([list(c[:3]) for c in F.components])


def _minor(F_jac, i, j) -> Poly:
    (pi_x, pi_y), (pj_x, pj_y) = F_jac[i], F_jac[j]
    return pi_x * pj_y - pi_y * pj_x


def jacobian_minors(F: QuadMap) -> List[Poly]:
    """The 2x2 minors of DF.  For n = 3 these are (J1, J2, J3) from rows (2,3), (3,1), (1,2)."""
    jac = F.jacobian()
    if F.n == 3:
        return [_minor(jac, 1, 2), _minor(jac, 2, 0), _minor(jac, 0, 1)]
    return [_minor(jac, i, j) for i, j in combinations(range(F.n), 2)]


def phi1(F: QuadMap) -> linalg.Matrix:
    """3x3 matrix with rows (a_i, c_i, b_i)."""
    if F.n != 3:
        raise ValueError("phi1 needs n = 3")
    return [[c[0], c[2], c[1]] for c in F.components]


def phi2(J: Poly) -> Rational:
    """4AC - B^2 for the quadratic part A x^2 + B xy + C y^2 of J."""
    A, B, C = J.coeff((2, 0)), J.coeff((1, 1)), J.coeff((0, 2))
    return 4 * A * C - B * B


def cofactor_matrix(P: linalg.Matrix) -> linalg.Matrix:
    """(det P · P^-1)^T."""
    d = linalg.det(P)
    adj = [[v * d for v in row] for row in linalg.inverse(P)]
    return linalg.transpose(adj)


def cofactor_transform_check(P: linalg.Matrix, F: QuadMap, shift=None) -> bool:
    """Check [J_i(L∘F)] = C · [J_i(F)] with C the cofactor matrix of P."""
    if F.n != 3:
        raise ValueError("needs n = 3")
    P = linalg.as_matrix(P)
    G = apply_affine(AffineMap(P, shift), F, None)
    lhs = jacobian_minors(G)
    J = jacobian_minors(F)
    C = cofactor_matrix(P)
    for row, l in zip(C, lhs):
        r = Poly.const(0)
        for c, j in zip(row, J):
            r = r + j * c
        if r != l:
            return False
    return True


def critical_space(F: QuadMap) -> Tuple[List[Poly], int]:
    """RREF basis of the span of the Jacobian minors inside the quadratics, and its dimension."""
    rows = [list(_tuple_from_poly(m)) for m in jacobian_minors(F)]
    R, piv = linalg.rref(rows)
    basis = [Poly(dict(zip(MONOMIALS, r)), VARS2) for r in R[:len(piv)]]
    return basis, len(piv)
