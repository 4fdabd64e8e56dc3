import sympy
from hypothesis import given, settings, strategies as st

from quadorbits.polycore import (Poly, Q, VARS2, bareiss_det, isolate_real_roots, linear_factors, poly_gcd,
                                 qstr, rational_roots, resultant, squarefree_decomposition, sturm_count, u_eval)
from quadorbits.expr import parse_poly
from conftest import to_sympy

X, Y = sympy.symbols("x y")
small = st.integers(-4, 4)
terms = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small, max_size=5)


def mk(d):
    return Poly({m: Q(c) for m, c in d.items()}, VARS2)


def same_up_to_scalar(a, b):
    if a == 0 or b == 0:
        return a == b
    return sympy.simplify(sympy.cancel(a / b)).is_number


def test_q_accepts_strings_and_ints():
    assert Q("3/6") == Q("1/2")
    assert qstr(Q("-4/2")) == "-2"
    assert qstr(Q("1/3")) == "1/3"


def test_str_round_trips_through_parser():
    p = parse_poly("3x^2 - 1/2xy + y - 7")
    assert parse_poly(str(p)) == p


@settings(max_examples=60, deadline=None)
@given(terms, terms)
def test_arithmetic_matches_sympy(a, b):
    p, q = mk(a), mk(b)
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))
    assert to_sympy(p.diff("x")) == sympy.diff(to_sympy(p), X)


@settings(max_examples=40, deadline=None)
@given(terms, terms, terms)
def test_gcd_matches_sympy(a, b, c):
    g, p, q = mk(a), mk(b), mk(c)
    if g.is_zero() or p.is_zero() or q.is_zero():
        return
    ours = poly_gcd(g * p, g * q)
    theirs = sympy.gcd(to_sympy(g * p), to_sympy(g * q))
    assert same_up_to_scalar(to_sympy(ours), theirs)


@settings(max_examples=30, deadline=None)
@given(terms, terms)
def test_squarefree_decomposition_reassembles(a, b):
    p = mk(a) * mk(b) ** 2
    if p.is_constant():
        return
    c, parts = squarefree_decomposition(p)
    out = Poly.const(c)
    for f, k in parts:
        out = out * f ** k
    assert out == p
    # parts are squarefree and pairwise coprime
    for i, (f, _) in enumerate(parts):
        _, sqf = sympy.sqf_list(to_sympy(f))
        assert all(k == 1 for _, k in sqf)
        for g, _ in parts[i + 1:]:
            assert poly_gcd(f, g).is_constant()


@settings(max_examples=30, deadline=None)
@given(terms, terms)
def test_resultant_matches_sympy(a, b):
    p, q = mk(a), mk(b)
    if p.degree("y") < 1 or q.degree("y") < 1:
        return
    ours = to_sympy(resultant(p, q, "y"))
    theirs = sympy.expand(sympy.resultant(to_sympy(p), to_sympy(q), Y))
    assert ours == theirs or ours == -theirs


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4))
def test_sturm_count_on_products_of_linear_factors(roots):
    coeffs = [Q(1)]
    for r in roots:
        coeffs = [Q(0)] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= r * coeffs[i + 1]
    coeffs = [c * 2 for c in coeffs]
    assert sturm_count(coeffs) == len(set(roots))
    assert sorted(rational_roots(coeffs)) == sorted(Q(r) for r in set(roots))
    boxes = isolate_real_roots(coeffs)
    assert len(boxes) == len(set(roots))
    for lo, hi in boxes:
        assert any(lo <= r <= hi for r in roots)


def test_sturm_counts_irrational_roots():
    # x^3 - 2 has one real root; x^4 - 5x^2 + 6 has four
    assert sturm_count([Q(-2), 0, 0, 1]) == 1
    assert sturm_count([Q(6), 0, Q(-5), 0, 1]) == 4
    assert sturm_count([Q(6), 0, Q(-5), 0, 1], Q(0), Q(2)) == 2
    assert u_eval([Q(1), Q(2), Q(3)], Q(2)) == 17


def test_bareiss_det_matches_sympy():
    m = [[parse_poly(s) for s in row] for row in (("x", "y", "1"), ("2", "x+y", "x"), ("y", "1", "3"))]
    M = sympy.Matrix([[to_sympy(p) for p in row] for row in m])
    assert to_sympy(bareiss_det(m)) == sympy.expand(M.det())


def test_linear_factors_splits_line_arrangements():
    p = parse_poly("(x - y)^2 * (x + y - 1) * (x^2 + y^2 + 1)")
    lines, rest = linear_factors(p)
    got = sorted(str(l.monic()) for l in lines)
    assert len(lines) == 3
    assert rest.total_degree() == 2
    assert sorted(set(got)) == sorted({str(parse_poly("x - y").monic()), str(parse_poly("x + y - 1").monic())})
