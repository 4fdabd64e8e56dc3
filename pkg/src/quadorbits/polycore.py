"""Exact rational arithmetic and a small multivariate polynomial kernel.

Coefficients are ``gmpy2.mpq`` values, always kept in lowest terms.  Polynomials
live in an explicit variable context (a tuple of names); mixing contexts raises
``ValueError``.  Everything here is exact: there is no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _iproduct
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from gmpy2 import mpq, mpz

Rational = type(mpq(0))
Monomial = Tuple[int, ...]

ZERO = mpq(0)
ONE = mpq(1)

VARS2 = ("x", "y")


def Q(value) -> Rational:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``Fraction``, ``mpq``/``mpz`` and strings such as ``"3/4"`` or
    ``"-2"``.  Floats are rejected since they would silently lose exactness.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            if "/" in text:
                num, den = text.split("/")
                d = int(den)
                if d == 0:
                    raise ValueError("zero denominator")
                return mpq(int(num), d)
            return mpq(int(text))
        except ValueError as exc:
            raise ValueError(f"unparsable rational {value!r}") from exc
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def qstr(value: Rational) -> str:
    """Canonical string form ``p/q`` (or ``p`` for integers)."""
    value = Q(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Poly:
    """Immutable sparse polynomial over Q in a fixed variable context."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Dict[Monomial, Rational] | None = None, vars: Sequence[str] = VARS2):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            k = len(self.vars)
            for mono, c in terms.items():
                if len(mono) != k:
                    raise ValueError(f"monomial {mono} does not fit context {self.vars}")
                c = Q(c)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, terms: Dict[Monomial, Rational], vars: Tuple[str, ...]) -> "Poly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c, vars: Sequence[str] = VARS2) -> "Poly":
        c = Q(c)
        vars = tuple(vars)
        return cls._raw({(0,) * len(vars): c} if c else {}, vars)

    @classmethod
    def var(cls, name: str, vars: Sequence[str] = VARS2) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise ValueError(f"{name!r} not in context {vars}")
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls._raw({tuple(e): ONE}, vars)

    @classmethod
    def gens(cls, vars: Sequence[str] = VARS2) -> List["Poly"]:
        return [cls.var(v, vars) for v in vars]

    # -- basic protocol -----------------------------------------------
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=_grevlex_key, reverse=True):
            c = self.terms[mono]
            factors = []
            for v, e in zip(self.vars, mono):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mon = "*".join(factors)
            if not mon:
                parts.append(qstr(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{qstr(c)}*{mon}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            c = Q(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self == Poly.const(c, self.vars)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Rational:
        return self.terms.get((0,) * len(self.vars), ZERO)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError(f"variable context mismatch: {self.vars} vs {other.vars}")
            return other
        return Poly.const(other, self.vars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Q(other)
            if not c:
                return Poly._raw({}, self.vars)
            return Poly._raw({m: v * c for m, v in self.terms.items()}, self.vars)
        other = self._coerce(other)
        out: Dict[Monomial, Rational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, ZERO) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out, self.vars)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant():
                return self.exquo(other)
            other = other.constant_value()
        c = Q(other)
        if not c:
            raise ZeroDivisionError("division by zero polynomial")
        return self * (ONE / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ----------------------------------------------------
    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree(self, var: str | None = None) -> int:
        if var is None:
            return self.total_degree()
        if not self.terms:
            return -1
        i = self._index(var)
        return max(m[i] for m in self.terms)

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise ValueError(f"{var!r} not in context {self.vars}") from None

    def free_vars(self) -> Tuple[str, ...]:
        used = set()
        for m in self.terms:
            for v, e in zip(self.vars, m):
                if e:
                    used.add(v)
        return tuple(v for v in self.vars if v in used)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw({m: c for m, c in self.terms.items() if sum(m) == d}, self.vars)

    def coeff(self, mono: Monomial) -> Rational:
        return self.terms.get(tuple(mono), ZERO)

    def diff(self, var: str) -> "Poly":
        """Partial derivative."""
        i = self._index(var)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return Poly._raw(out, self.vars)

    def subs(self, mapping: Dict[str, "Poly | Rational | int"]) -> "Poly":
        """Simultaneous substitution of variables by polynomials (same context)."""
        images = []
        for v in self.vars:
            if v in mapping:
                images.append(self._coerce(mapping[v]))
            else:
                images.append(Poly.var(v, self.vars))
        return self.compose(images)

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Replace the i-th variable by ``images[i]`` (images may use another context)."""
        if len(images) != len(self.vars):
            raise ValueError("need one image per variable")
        target = images[0].vars if images else self.vars
        for im in images:
            if im.vars != target:
                raise ValueError("images must share a variable context")
        cache: Dict[Tuple[int, int], Poly] = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        out = Poly._raw({}, target)
        for m, c in self.terms.items():
            term = Poly.const(c, target)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, point: Dict[str, object] | Sequence) -> Rational:
        """Exact evaluation at a rational point (dict by name or sequence)."""
        if not isinstance(point, dict):
            point = dict(zip(self.vars, point))
        vals = [Q(point[v]) if v in point else None for v in self.vars]
        total = ZERO
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    if v is None:
                        raise ValueError("missing coordinate for evaluation")
                    t *= v ** e
            total += t
        return total

    def partial_eval(self, assignment: Dict[str, object]) -> "Poly":
        """Substitute rational values for some variables, keeping the context."""
        idx = {self._index(k): Q(v) for k, v in assignment.items()}
        out: Dict[Monomial, Rational] = {}
        for m, c in self.terms.items():
            mm = list(m)
            for i, v in idx.items():
                if mm[i]:
                    c = c * v ** mm[i]
                    mm[i] = 0
            mm = tuple(mm)
            s = out.get(mm, ZERO) + c
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
        return Poly._raw(out, self.vars)

    def change_context(self, vars: Sequence[str]) -> "Poly":
        """Re-express in another context containing every variable actually used."""
        vars = tuple(vars)
        pos = []
        for v, _ in zip(self.vars, range(len(self.vars))):
            pos.append(vars.index(v) if v in vars else None)
        out = {}
        for m, c in self.terms.items():
            e = [0] * len(vars)
            for i, k in enumerate(m):
                if k:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.vars[i]} missing from {vars}")
                    e[pos[i]] = k
            out[tuple(e)] = c
        return Poly._raw(out, vars)

    # -- univariate views ---------------------------------------------
    def coeffs_in(self, var: str) -> List["Poly"]:
        """Coefficients (low to high) as polynomials in the remaining variables."""
        i = self._index(var)
        d = self.degree(var)
        buckets: List[Dict[Monomial, Rational]] = [dict() for _ in range(max(d, 0) + 1)]
        for m, c in self.terms.items():
            mm = list(m)
            e = mm[i]
            mm[i] = 0
            buckets[e][tuple(mm)] = c
        return [Poly._raw(b, self.vars) for b in buckets] if d >= 0 else []

    @classmethod
    def from_coeffs_in(cls, coeffs: Sequence["Poly"], var: str, vars: Sequence[str]) -> "Poly":
        x = cls.var(var, vars)
        out = cls._raw({}, tuple(vars))
        xp = cls.const(1, vars)
        for c in coeffs:
            out = out + c * xp
            xp = xp * x
        return out

    def to_univariate(self) -> List[Rational]:
        """Dense coefficient list (low to high) of a polynomial in one used variable."""
        fv = self.free_vars()
        if len(fv) > 1:
            raise ValueError(f"not univariate: uses {fv}")
        if not self.terms:
            return []
        if not fv:
            return [self.constant_value()]
        i = self._index(fv[0])
        d = self.degree(fv[0])
        out = [ZERO] * (d + 1)
        for m, c in self.terms.items():
            out[m[i]] = c
        return out

    def coeffs_in_const(self, var: str) -> List[Rational]:
        """Dense coefficients (low to high) in ``var`` of a polynomial using no other variable."""
        i = self._index(var)
        out = [ZERO] * (self.degree(var) + 1) if self.terms else []
        for m, c in self.terms.items():
            out[m[i]] = c
        return out

    @classmethod
    def from_univariate(cls, coeffs: Sequence, var: str = "x", vars: Sequence[str] | None = None) -> "Poly":
        vars = tuple(vars) if vars is not None else (var,)
        i = vars.index(var)
        out = {}
        for k, c in enumerate(coeffs):
            c = Q(c)
            if c:
                e = [0] * len(vars)
                e[i] = k
                out[tuple(e)] = c
        return cls._raw(out, vars)

    # -- division -----------------------------------------------------
    def leading(self, key=None) -> Tuple[Monomial, Rational]:
        key = key or _grevlex_key
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def exquo(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ``ArithmeticError`` when ``other`` does not divide."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q, r = divmod_lex(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self, key=None) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading(key or _lex_key)
        return self * (ONE / c)

    def primitive(self) -> "Poly":
        """Scale to integer coefficients with gcd 1 and positive lex-leading coefficient."""
        if not self.terms:
            return self
        from math import gcd
        den = 1
        for c in self.terms.values():
            d = int(c.denominator)
            den = den * d // gcd(den, d)
        ints = [int(c * den) for c in self.terms.values()]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        scale = mpq(den, g)
        _, lc = self.leading(_lex_key)
        if lc < 0:
            scale = -scale
        return self * scale


def _grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


def _lex_key(m: Monomial):
    return m


def divmod_lex(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    """Multivariate division by a single divisor under lex order."""
    lm_b, lc_b = b.leading(_lex_key)
    rem = dict(a.terms)
    quo: Dict[Monomial, Rational] = {}
    out_rem: Dict[Monomial, Rational] = {}
    while rem:
        m = max(rem, key=_lex_key)
        c = rem[m]
        if all(x >= y for x, y in zip(m, lm_b)):
            shift = tuple(x - y for x, y in zip(m, lm_b))
            f = c / lc_b
            quo[shift] = quo.get(shift, ZERO) + f
            for mb, cb in b.terms.items():
                mm = tuple(x + y for x, y in zip(mb, shift))
                s = rem.get(mm, ZERO) - f * cb
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        else:
            out_rem[m] = c
            del rem[m]
    return Poly._raw({k: v for k, v in quo.items() if v}, a.vars), Poly._raw(out_rem, a.vars)


# ---------------------------------------------------------------------------
# gcd and squarefree decomposition (recursive primitive PRS)
# ---------------------------------------------------------------------------

def _main_var(*polys: Poly) -> str | None:
    for v in polys[0].vars:
        if any(p.degree(v) > 0 for p in polys):
            return v
    return None


def _prem(a: List[Poly], b: List[Poly]) -> List[Poly]:
    """Pseudo-remainder of coefficient lists (low to high) over a polynomial ring."""
    a = list(a)
    db = len(b) - 1
    lc = b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        top = a[-1]
        a = [c * lc for c in a]
        for i in range(db + 1):
            a[da - db + i] = a[da - db + i] - top * b[i]
        while a and a[-1].is_zero():
            a.pop()
    return a


def content_in(p: Poly, var: str) -> Poly:
    """gcd of the coefficients of ``p`` viewed as a polynomial in ``var``."""
    g = Poly._raw({}, p.vars)
    for c in p.coeffs_in(var):
        g = poly_gcd(g, c)
    return g


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor, normalized to be monic in lex order (1 for coprime)."""
    if p.vars != q.vars:
        raise ValueError("variable context mismatch")
    if p.is_zero():
        return q.monic() if q else q
    if q.is_zero():
        return p.monic()
    v = _main_var(p, q)
    if v is None:
        return Poly.const(1, p.vars)
    used = set(p.free_vars()) | set(q.free_vars())
    if len(used) == 1:
        g = u_gcd(p.coeffs_in_const(v), q.coeffs_in_const(v))
        return Poly.from_univariate(g, v, p.vars)
    if p.degree(v) <= 0 or q.degree(v) <= 0:
        # one side is free of v: the gcd divides its content in v
        free, other = (p, q) if p.degree(v) <= 0 else (q, p)
        return poly_gcd(free, content_in(other, v))
    cp, cq = content_in(p, v), content_in(q, v)
    g_cont = poly_gcd(cp, cq)
    # primitive over Z at every step keeps the numbers from growing exponentially
    a = p.exquo(cp).primitive().coeffs_in(v)
    b = q.exquo(cq).primitive().coeffs_in(v)
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = _prem(a, b)
        if not r:
            break
        rp = Poly.from_coeffs_in(r, v, p.vars)
        if rp.degree(v) <= 0:
            b = [Poly.const(1, p.vars)]
            break
        rp = rp.exquo(content_in(rp, v)).primitive()
        a, b = b, rp.coeffs_in(v)
    if len(b) == 1:
        prim = Poly.const(1, p.vars)
    else:
        prim = Poly.from_coeffs_in(b, v, p.vars)
        prim = prim.exquo(content_in(prim, v))
    return (g_cont * prim).monic()


def squarefree_decomposition(p: Poly) -> Tuple[Rational, List[Tuple[Poly, int]]]:
    """Yun decomposition: ``p = c * prod(f_i ** i)`` with monic, pairwise coprime, squarefree ``f_i``.

    Works for multivariate input by splitting off the content in the first
    variable that occurs and recursing into it.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree decomposition")
    v = _main_var(p)
    if v is None:
        return p.constant_value(), []
    cont = content_in(p, v)
    prim = p.exquo(cont)
    parts: Dict[int, Poly] = {}
    b = prim
    a0 = poly_gcd(b, b.diff(v))
    b = b.exquo(a0)
    c = prim.diff(v).exquo(a0)
    d = c - b.diff(v)
    i = 1
    while b.degree(v) > 0:
        a = poly_gcd(b, d)
        if not a.is_constant():
            parts[i] = a
        b = b.exquo(a)
        c = d.exquo(a)
        d = c - b.diff(v)
        i += 1
    scalar = ONE
    if not cont.is_constant():
        s2, sub = squarefree_decomposition(cont)
        scalar = s2
        for f, k in sub:
            parts[k] = parts[k] * f if k in parts else f
    else:
        scalar = cont.constant_value()
    factors = [(parts[k].monic(), k) for k in sorted(parts)]
    prod = Poly.const(1, p.vars)
    for f, k in factors:
        prod = prod * f ** k
    lead_ratio = p.leading(_lex_key)[1] / prod.leading(_lex_key)[1]
    return lead_ratio, factors


def multiplicity_factorization(p: Poly, var: str | None = None) -> List[Tuple[Poly, int]]:
    """List of (squarefree factor, multiplicity), grouping factors of equal multiplicity."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    return squarefree_decomposition(p)[1]


def squarefree_part(p: Poly) -> Poly:
    if p.is_zero():
        raise ValueError("zero polynomial")
    out = Poly.const(1, p.vars)
    for f, _ in squarefree_decomposition(p)[1]:
        out = out * f
    return out


# ---------------------------------------------------------------------------
# Resultants (Sylvester determinant, fraction-free Bareiss)
# ---------------------------------------------------------------------------

def bareiss_det(matrix: List[List[Poly]]) -> Poly:
    """Determinant over a polynomial ring by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    vars = matrix[0][0].vars
    M = [list(row) for row in matrix]
    sign = 1
    prev = Poly.const(1, vars)
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return Poly._raw({}, vars)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[k][k] * M[i][j] - M[i][k] * M[k][j]
                M[i][j] = num.exquo(prev) if k else num
        prev = M[k][k]
    return M[n - 1][n - 1] * sign


def sylvester_matrix(p: Poly, q: Poly, var: str) -> List[List[Poly]]:
    a = p.coeffs_in(var)[::-1]
    b = q.coeffs_in(var)[::-1]
    m, n = len(a) - 1, len(b) - 1
    zero = Poly._raw({}, p.vars)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (size - n - 1 - i))
    return rows


def resultant(p: Poly, q: Poly, var: str) -> Poly:
    """Resultant of ``p`` and ``q`` with respect to ``var``."""
    if p.vars != q.vars:
        raise ValueError("variable context mismatch")
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    dp, dq = p.degree(var), q.degree(var)
    if dp <= 0 and dq <= 0:
        raise ValueError(f"both inputs are constant in {var}")
    if dp == 0:
        return p ** dq
    if dq == 0:
        return q ** dp
    return bareiss_det(sylvester_matrix(p, q, var))


# ---------------------------------------------------------------------------
# Dense univariate helpers (coefficient lists, low to high)
# ---------------------------------------------------------------------------

def u_trim(a: Sequence) -> List[Rational]:
    a = [Q(c) for c in a]
    while a and not a[-1]:
        a.pop()
    return a


def u_deg(a: Sequence) -> int:
    return len(u_trim(a)) - 1


def u_eval(a: Sequence[Rational], x) -> Rational:
    x = Q(x)
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def u_deriv(a: Sequence[Rational]) -> List[Rational]:
    return [a[i] * i for i in range(1, len(a))]


def u_mul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return u_trim(out)


def u_divmod(a, b):
    a, b = u_trim(a), u_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lb
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r = u_trim(r)
    return u_trim(q), r


def u_monic(a):
    a = u_trim(a)
    if not a:
        return a
    lc = a[-1]
    return [c / lc for c in a]


def u_gcd(a, b):
    a, b = u_trim(a), u_trim(b)
    while b:
        a, b = b, u_divmod(a, b)[1]
    return u_monic(a)


def u_squarefree(a):
    a = u_trim(a)
    if not a:
        raise ValueError("zero polynomial")
    if len(a) == 1:
        return [ONE]
    g = u_gcd(a, u_deriv(a))
    return u_monic(u_divmod(a, g)[0])


def u_sqf_list(a) -> List[Tuple[List[Rational], int]]:
    """Yun's algorithm on a dense univariate polynomial (monic factors)."""
    a = u_trim(a)
    if not a:
        raise ValueError("zero polynomial")
    out = []
    if len(a) == 1:
        return out
    a0 = u_gcd(a, u_deriv(a))
    b = u_divmod(a, a0)[0]
    c = u_divmod(u_deriv(a), a0)[0]
    d = [x - y for x, y in _zip_pad(c, u_deriv(b))]
    i = 1
    while u_deg(b) > 0:
        g = u_gcd(b, d)
        if u_deg(g) > 0:
            out.append((g, i))
        b = u_divmod(b, g)[0]
        c = u_divmod(d, g)[0]
        d = [x - y for x, y in _zip_pad(c, u_deriv(b))]
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [ZERO] * (n - len(a))
    b = list(b) + [ZERO] * (n - len(b))
    return zip(a, b)


def sturm_sequence(a) -> List[List[Rational]]:
    a = u_trim(a)
    seq = [a, u_deriv(a)]
    while u_trim(seq[-1]):
        r = u_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(values) -> int:
    signs = [v for v in values if v]
    return sum(1 for s, t in zip(signs, signs[1:]) if (s > 0) != (t > 0))


def _sign_at_infinity(a, positive: bool) -> int:
    lc = a[-1]
    if positive or (len(a) - 1) % 2 == 0:
        return 1 if lc > 0 else -1
    return -1 if lc > 0 else 1


def sturm_count(a, lo=None, hi=None) -> int:
    """Number of distinct real roots of ``a`` in ``(lo, hi]`` (``None`` means infinite).

    The squarefree part is taken internally.
    """
    a = u_trim(a)
    if not a:
        raise ValueError("zero polynomial")
    if len(a) == 1:
        return 0
    seq = sturm_sequence(u_squarefree(a))

    def changes(x, side):
        if x is None:
            return _sign_changes([_sign_at_infinity(s, side) for s in seq])
        return _sign_changes([u_eval(s, x) for s in seq])

    return changes(lo, False) - changes(hi, True)


def cauchy_bound(a) -> Rational:
    a = u_trim(a)
    lc = abs(a[-1])
    return ONE + max((abs(c) / lc for c in a[:-1]), default=ZERO)


def isolate_real_roots(a) -> List[Tuple[Rational, Rational]]:
    """Disjoint intervals ``(lo, hi]`` each holding exactly one real root of squarefree(a)."""
    sf = u_squarefree(a)
    if len(sf) <= 1:
        return []
    B = cauchy_bound(sf)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        k = sturm_count(sf, lo, hi)
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out)


def rational_roots(a) -> List[Rational]:
    """All rational roots of a nonzero univariate polynomial, ascending."""
    sf = u_squarefree(a)
    if len(sf) <= 1:
        return []
    # primitive integer form: rational roots p/q need q | leading coefficient
    from math import lcm
    den = 1
    for c in sf:
        den = lcm(den, int(c.denominator))
    ints = [int(c * den) for c in sf]
    lead = abs(ints[-1])
    roots = []
    for lo, hi in isolate_real_roots(sf):
        width = hi - lo
        while width * lead >= 1:
            mid = (lo + hi) / 2
            if sturm_count(sf, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
            width = hi - lo
        # at most one candidate k/lead lies in (lo, hi]
        k = int(mpz((hi * lead).numerator // (hi * lead).denominator))
        cand = mpq(k, lead)
        if lo < cand <= hi and u_eval(sf, cand) == 0:
            roots.append(cand)
    return roots


def u_to_poly(a, var="x", vars=None) -> Poly:
    return Poly.from_univariate(a, var, vars)


def monomials_up_to(nvars: int, degree: int) -> List[Monomial]:
    return [m for m in _iproduct(range(degree + 1), repeat=nvars) if sum(m) <= degree]


def linear_factors(p: Poly) -> Tuple[List[Poly], Poly]:
    """Split off rational linear factors of a bivariate polynomial (with repetition).

    Returns ``(lines, rest)`` with ``p == prod(lines) * rest`` up to a rational scalar.
    """
    if len(p.vars) != 2:
        raise ValueError("bivariate input expected")
    lines: List[Poly] = []
    rest = p
    progress = True
    while progress and rest.total_degree() >= 1:
        progress = False
        for cand in _line_candidates(rest):
            if divides(cand, rest):
                lines.append(cand)
                rest = rest.exquo(cand)
                progress = True
                break
    return lines, rest


def divides(a: Poly, b: Poly) -> bool:
    try:
        b.exquo(a)
        return True
    except ArithmeticError:
        return False


def _line_candidates(p: Poly) -> List[Poly]:
    """Rational lines ``l`` whose direction divides the top form and on which ``p`` vanishes."""
    X, Y = Poly.gens(p.vars)
    d = p.total_degree()
    top = p.homogeneous_part(d)
    # binary form top(x, y): factors (y - m x) from roots of top(1, m); x from vanishing at (0, 1)
    dirs = []
    tm = [top.coeff((d - k, k)) for k in range(d + 1)]  # top(1, m) coefficients in m
    for m in rational_roots(tm) if u_trim(tm) else []:
        dirs.append(("y", m))  # line y = m x + c
    if top.coeff((0, d)) == 0:
        dirs.append(("x", None))  # line x = c
    out = []
    for kind, m in dirs:
        if kind == "y":
            for c in _vanishing_constants(p, m):
                out.append((Y - X * m - c).primitive())
        else:
            for c in _vanishing_constants_vertical(p):
                out.append((X - c).primitive())
    return out


def _vanishing_constants(p: Poly, m: Rational) -> List[Rational]:
    ctx = ("x", "c")
    xs, cs = Poly.gens(ctx)
    images = [xs, xs * m + cs]
    q = p.compose(images)
    g: List[Rational] = []
    for coeff in q.coeffs_in("x"):
        u = u_trim(coeff.to_univariate()) if coeff else []
        if not u:
            continue
        g = u if not g else u_gcd(g, u)
    if not g or len(g) == 1:
        return []
    return rational_roots(g)


def _vanishing_constants_vertical(p: Poly) -> List[Rational]:
    ctx = ("c", "y")
    cs, ys = Poly.gens(ctx)
    q = p.compose([cs, ys])
    g: List[Rational] = []
    for coeff in q.coeffs_in("y"):
        u = u_trim(coeff.to_univariate()) if coeff else []
        if not u:
            continue
        g = u if not g else u_gcd(g, u)
    if not g or len(g) == 1:
        return []
    return rational_roots(g)
