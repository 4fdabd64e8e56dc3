"""Buchberger's algorithm over Q, elimination, ideal quotients and zero-dimensional quotients.

Polynomials are handled internally as plain ``{exponent tuple: mpq}`` dicts and
converted back to :class:`~quadorbits.polycore.Poly` at the boundary.  A monomial
order is a key function on exponent tuples: larger key means larger monomial.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as _iproduct
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .linalg import Matrix, charpoly
from .polycore import ONE, ZERO, Poly, Q, Rational

Mono = Tuple[int, ...]
Terms = Dict[Mono, Rational]


class _Infinite:
    """Marker for an infinite-dimensional quotient."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


class NotPrincipalError(ArithmeticError):
    """The eliminated ideal in two variables needs more than one generator."""

    code = "NOT_PRINCIPAL"


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given as block sizes; each block is degrevlex, blocks compare lexicographically.

    ``MonomialOrder((k,))`` is plain degrevlex in k variables and
    ``MonomialOrder((1,)*k)`` is lex.
    """

    blocks: Tuple[int, ...]

    @property
    def nvars(self) -> int:
        return sum(self.blocks)

    def key(self, m: Mono):
        return _order_key(self.blocks, m)

    @classmethod
    def degrevlex(cls, n: int) -> "MonomialOrder":
        return cls((n,))

    @classmethod
    def lex(cls, n: int) -> "MonomialOrder":
        return cls((1,) * n)

    @classmethod
    def elimination(cls, n_elim: int, n_keep: int) -> "MonomialOrder":
        return cls((n_elim, n_keep))


@lru_cache(maxsize=1 << 18)
def _order_key(blocks: Tuple[int, ...], m: Mono):
    out = []
    i = 0
    for size in blocks:
        part = m[i:i + size]
        out.append(sum(part))
        out.extend(-e for e in reversed(part))
        i += size
    return tuple(out)


# ---------------------------------------------------------------------------
# dict-level helpers
# ---------------------------------------------------------------------------

def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


class _GPoly:
    __slots__ = ("terms", "lm", "sugar")

    def __init__(self, terms: Terms, key, sugar: int):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.sugar = sugar


def _monic(terms: Terms, lm: Mono) -> Terms:
    c = terms[lm]
    if c == 1:
        return terms
    inv = ONE / c
    return {m: v * inv for m, v in terms.items()}


def _reduce(terms: Terms, basis: Sequence[_GPoly], key, full: bool = True) -> Terms:
    """Normal form of ``terms`` modulo ``basis`` (full reduction unless ``full`` is False)."""
    p = dict(terms)
    rem: Terms = {}
    heads = [(g.lm, g.terms[g.lm], list(g.terms.items())) for g in basis]
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, gterms in heads:
            if all(x <= y for x, y in zip(lm, m)):
                shift = tuple(x - y for x, y in zip(m, lm))
                f = c / lc
                for gm, gc in gterms:
                    mm = tuple(x + y for x, y in zip(gm, shift))
                    v = p.get(mm, ZERO) - f * gc
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            if not full:
                rem.update(p)
                return rem
            rem[m] = c
            del p[m]
    return rem


def _spoly(f: _GPoly, g: _GPoly) -> Terms:
    L = _lcm(f.lm, g.lm)
    sf, sg = _sub(L, f.lm), _sub(L, g.lm)
    cf, cg = f.terms[f.lm], g.terms[g.lm]
    out: Terms = {}
    for m, c in f.terms.items():
        mm = tuple(x + y for x, y in zip(m, sf))
        out[mm] = c / cf
    for m, c in g.terms.items():
        mm = tuple(x + y for x, y in zip(m, sg))
        v = out.get(mm, ZERO) - c / cg
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _buchberger(gens: Sequence[Terms], order: MonomialOrder) -> List[Terms]:
    key = order.key
    G: List[_GPoly] = []
    pairs: list = []
    counter = 0

    def push_pair(i, j):
        nonlocal counter
        f, g = G[i], G[j]
        L = _lcm(f.lm, g.lm)
        sugar = max(f.sugar + sum(L) - sum(f.lm), g.sugar + sum(L) - sum(g.lm))
        counter += 1
        heapq.heappush(pairs, (sugar, key(L), counter, i, j))

    live = set()
    pending = set()

    def add(terms: Terms, sugar: int):
        g = _GPoly(terms, key, sugar)
        g.terms = _monic(g.terms, g.lm)
        G.append(g)
        k = len(G) - 1
        for i in live:
            pending.add((i, k))
            push_pair(i, k)
        live.add(k)

    for t in gens:
        if t:
            t = _reduce(t, G, key) if G else t
            if t:
                add(t, max(sum(m) for m in t))
    while pairs:
        _, _, _, i, j = heapq.heappop(pairs)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        f, g = G[i], G[j]
        # product criterion
        if all(min(a, b) == 0 for a, b in zip(f.lm, g.lm)):
            continue
        L = _lcm(f.lm, g.lm)
        # chain criterion
        skip = False
        for k in live:
            if k in (i, j):
                continue
            if _divides(G[k].lm, L):
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    skip = True
                    break
        if skip:
            continue
        sugar = max(f.sugar + sum(L) - sum(f.lm), g.sugar + sum(L) - sum(g.lm))
        h = _reduce(_spoly(f, g), [G[k] for k in sorted(live)], key)
        if h:
            add(h, sugar)
    # minimize then interreduce
    items = [G[k] for k in sorted(live)]
    minimal = []
    for idx, g in enumerate(items):
        if any(_divides(h.lm, g.lm) and (h.lm != g.lm or jdx < idx)
               for jdx, h in enumerate(items) if jdx != idx):
            continue
        minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = [h for jdx, h in enumerate(minimal) if jdx != idx]
        lm = g.lm
        tail = {m: c for m, c in g.terms.items() if m != lm}
        tail = _reduce(tail, others, key)
        tail[lm] = g.terms[lm]
        reduced.append(_monic(tail, lm))
    reduced.sort(key=lambda t: key(max(t, key=key)))
    return reduced


# ---------------------------------------------------------------------------
# public interface
# ---------------------------------------------------------------------------

class Ideal:
    """An ideal of Q[vars] with a chosen monomial order; the reduced basis is computed lazily."""

    def __init__(self, generators: Sequence[Poly], order: MonomialOrder | None = None,
                 vars: Sequence[str] | None = None):
        gens = list(generators)
        if vars is None:
            if not gens:
                raise ValueError("need generators or an explicit variable context")
            vars = gens[0].vars
        self.vars = tuple(vars)
        for g in gens:
            if g.vars != self.vars:
                raise ValueError("generators must share the ideal's variable context")
        self.generators = [g for g in gens if not g.is_zero()]
        self.order = order or MonomialOrder.degrevlex(len(self.vars))
        if self.order.nvars != len(self.vars):
            raise ValueError("order does not match the number of variables")
        self._gb: Optional[List[Terms]] = None

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    def _basis_terms(self) -> List[Terms]:
        if self._gb is None:
            self._gb = _buchberger([g.terms for g in self.generators], self.order)
        return self._gb

    def basis(self) -> List[Poly]:
        return [Poly(t, self.vars) for t in self._basis_terms()]

    def _gpolys(self) -> List[_GPoly]:
        return [_GPoly(t, self.order.key, 0) for t in self._basis_terms()]

    def leading_monomials(self) -> List[Mono]:
        key = self.order.key
        return [max(t, key=key) for t in self._basis_terms()]

    def normal_form(self, p: Poly) -> Poly:
        if p.vars != self.vars:
            raise ValueError("variable context mismatch")
        return Poly(_reduce(p.terms, self._gpolys(), self.order.key), self.vars)

    def contains(self, p: Poly) -> bool:
        return self.normal_form(p).is_zero()

    def is_zero(self) -> bool:
        return not self._basis_terms()

    def is_unit(self) -> bool:
        return any(not any(m) for m in self.leading_monomials())

    def staircase(self, limit: int = 10_000):
        """Standard monomials if finitely many, else ``INFINITE``."""
        lms = self.leading_monomials()
        n = len(self.vars)
        if any(not any(m) for m in lms):
            return []
        bounds = []
        for i in range(n):
            pure = [m[i] for m in lms if m[i] and all(m[j] == 0 for j in range(n) if j != i)]
            if not pure:
                return INFINITE
            bounds.append(min(pure))
        out = [m for m in _iproduct(*(range(b) for b in bounds))
               if not any(_divides(l, m) for l in lms)]
        out.sort(key=self.order.key)
        return out

    def quotient_dimension(self):
        st = self.staircase()
        return st if st is INFINITE else len(st)

    def multiplication_matrix(self, p: Poly) -> Matrix:
        """Matrix of multiplication by ``p`` on the quotient, columns indexed by the staircase."""
        st = self.staircase()
        if st is INFINITE:
            raise ValueError("quotient is not finite-dimensional")
        pos = {m: i for i, m in enumerate(st)}
        G = self._gpolys()
        key = self.order.key
        k = len(st)
        M = [[ZERO] * k for _ in range(k)]
        for j, m in enumerate(st):
            prod = {tuple(a + b for a, b in zip(m, pm)): c for pm, c in p.terms.items()}
            nf = _reduce(prod, G, key)
            for mm, c in nf.items():
                M[pos[mm]][j] = c
        return M


def groebner_basis(generators: Sequence[Poly], order: MonomialOrder | None = None,
                   vars: Sequence[str] | None = None) -> List[Poly]:
    """Reduced Groebner basis (monic, sorted by leading monomial)."""
    return Ideal(generators, order, vars).basis()


def quotient_dimension(generators: Sequence[Poly], vars: Sequence[str] | None = None):
    return Ideal(generators, vars=vars).quotient_dimension()


def _extend(p: Poly, new_vars: Tuple[str, ...]) -> Poly:
    return p.change_context(new_vars)


def eliminate(generators: Sequence[Poly], drop: Sequence[str]) -> List[Poly]:
    """Generators of the elimination ideal (reduced basis, in the remaining variables)."""
    if not generators:
        return []
    vars = generators[0].vars
    drop = [v for v in vars if v in drop]
    keep = [v for v in vars if v not in drop]
    ctx = tuple(drop) + tuple(keep)
    gens = [_extend(g, ctx) for g in generators]
    order = MonomialOrder((len(drop), len(keep))) if drop and keep else MonomialOrder.degrevlex(len(ctx))
    basis = Ideal(gens, order, ctx).basis()
    k = len(drop)
    out = []
    for b in basis:
        if all(not any(m[:k]) for m in b.terms):
            out.append(Poly({m[k:]: c for m, c in b.terms.items()}, keep))
    return out


def intersect(A: Sequence[Poly], B: Sequence[Poly], drop: Sequence[str] = ()) -> List[Poly]:
    """Generators of (A ∩ B), optionally intersected further with the subring without ``drop``."""
    vars = (A or B)[0].vars
    t = "_t"
    while t in vars:
        t += "_"
    ctx = (t,) + vars
    T = Poly.var(t, ctx)
    gens = [T * _extend(a, ctx) for a in A] + [(1 - T) * _extend(b, ctx) for b in B]
    res = eliminate(gens, (t,) + tuple(drop))
    return res


def colon_by_poly(gens: Sequence[Poly], f: Poly) -> List[Poly]:
    """Generators of I : f via (I ∩ <f>) / f."""
    return [g.exquo(f) for g in intersect(list(gens), [f])]


def colon_and_eliminate(components: Sequence[Poly]) -> Poly:
    """Generator of the ideal of pairs identified by the map, eliminated to the first copy.

    ``components`` are polynomials in (x, y).  Working in coordinates
    (x, y, a, b) with the second point (x - a, y - b), the fiber-product ideal
    is I = <f(x, y) - f(x - a, y - b)> and the diagonal is <a, b>.  Returns the
    generator of (I : <a, b>) ∩ Q[x, y]: zero for the zero ideal, 1 for the
    unit ideal.  Raises :class:`NotPrincipalError` if more than one generator
    is needed.
    """
    base = components[0].vars if components else ("x", "y")
    if len(base) != 2:
        raise ValueError("components must be bivariate")
    ctx = tuple(base) + ("_a", "_b")
    X, Y, A, B = Poly.gens(ctx)
    I = []
    for f in components:
        fe = f.change_context(ctx)
        g = fe - fe.compose([X - A, Y - B, A, B])
        if not g.is_zero():
            I.append(g)
    if not I:
        return Poly.const(0, base)
    ca = colon_by_poly(I, A)
    cb = colon_by_poly(I, B)
    res = intersect(ca, cb, drop=("_a", "_b"))
    res = [Poly({m[:2]: c for m, c in r.terms.items()}, base) for r in res]
    res = Ideal(res, vars=base).basis() if res else []
    if not res:
        return Poly.const(0, base)
    if len(res) > 1:
        raise NotPrincipalError(f"eliminated ideal has {len(res)} generators: {[str(r) for r in res]}")
    return res[0]


def local_multiplicity(generators: Sequence[Poly], point: Sequence, cap: int = 8) -> int:
    """Length of the local ring at a rational point: dim Q[x]/(I + m_p^N), stabilized over N <= cap."""
    vars = generators[0].vars
    pt = [Q(v) for v in point]
    shifted = [g.compose([Poly.var(v, vars) + c for v, c in zip(vars, pt)]) for g in generators]
    if any(not s.is_zero() and s.constant_value() for s in shifted):
        raise ValueError(f"point {tuple(map(str, pt))} is not a zero of the ideal")
    prev = None
    for N in range(1, cap + 1):
        mons = [Poly({m: 1}, vars) for m in _iproduct(range(N + 1), repeat=len(vars)) if sum(m) == N]
        d = Ideal(shifted + mons, vars=vars).quotient_dimension()
        if d == prev:
            return d
        prev = d
    return prev


def eigen_polynomial(ideal: Ideal, p: Poly) -> List[Rational]:
    """Characteristic polynomial of multiplication by ``p`` on a finite quotient."""
    return charpoly(ideal.multiplication_matrix(p))
