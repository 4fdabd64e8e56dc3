import sympy
from hypothesis import given, settings, strategies as st

from quadorbits.expr import parse_poly
from quadorbits.groebner import (INFINITE, Ideal, MonomialOrder, colon_and_eliminate,
                                 colon_by_poly, eliminate, groebner_basis, local_multiplicity, quotient_dimension)
from quadorbits.polycore import Poly, Q, VARS2
from conftest import to_sympy

X, Y = sympy.symbols("x y")
coef = st.integers(-3, 3)
quadratic = st.lists(coef, min_size=6, max_size=6)


def quad(c):
    a, b, cc, d, e, g = (Q(v) for v in c)
    return Poly({(2, 0): a, (1, 1): b, (0, 2): cc, (1, 0): d, (0, 1): e, (0, 0): g}, VARS2)


def monic_set(polys):
    return {str(p.monic()) for p in polys}


@settings(max_examples=30, deadline=None)
@given(quadratic, quadratic)
def test_reduced_basis_matches_sympy(c1, c2):
    gens = [quad(c1), quad(c2)]
    if any(g.is_zero() for g in gens):
        return
    ours = groebner_basis(gens, MonomialOrder.degrevlex(2))
    theirs = sympy.groebner([to_sympy(g) for g in gens], X, Y, order="grevlex")
    assert {sympy.expand(to_sympy(p.monic())) for p in ours} == {sympy.expand(sympy.Poly(g, X, Y).monic().as_expr())
                                                                   for g in theirs.exprs}


@settings(max_examples=30, deadline=None)
@given(quadratic, quadratic)
def test_quotient_dimension_counts_solutions(c1, c2):
    gens = [quad(c1), quad(c2)]
    if any(g.is_zero() for g in gens):
        return
    G = sympy.groebner([to_sympy(g) for g in gens], X, Y, order="grevlex")
    if list(G.exprs) == [1]:
        assert quotient_dimension(gens) == 0
    elif G.is_zero_dimensional:
        # vector-space dimension of the quotient, read off the staircase
        lead = [sympy.Poly(g, X, Y).monoms(order="grevlex")[0] for g in G.exprs]
        count = sum(1 for i in range(10) for j in range(10)
                    if not any(i >= a and j >= b for a, b in lead))
        assert quotient_dimension(gens) == count
    else:
        assert quotient_dimension(gens) is INFINITE


def test_membership_and_unit_ideal():
    I = Ideal([parse_poly("x^2 - y"), parse_poly("x*y - 1")])
    assert I.contains(parse_poly("y^3 - 1"))
    assert not I.contains(parse_poly("x - 1"))
    assert Ideal([parse_poly("x"), parse_poly("x - 1")]).is_unit()
    assert I.quotient_dimension() == 3


def test_elimination_projects_the_twisted_cubic():
    ctx = ("t", "x", "y")
    T, Xp, Yp = Poly.gens(ctx)
    out = eliminate([Xp - T ** 2, Yp - T ** 3], ("t",))
    assert len(out) == 1
    assert to_sympy(out[0].monic()) == sympy.expand(X ** 3 - Y ** 2) or \
        to_sympy(out[0].monic()) == sympy.expand(Y ** 2 - X ** 3)


def test_colon_by_a_variable():
    gens = [parse_poly("x^2*y"), parse_poly("x*y^2")]
    out = colon_by_poly(gens, parse_poly("x"))
    # <x^2 y, x y^2> : x = <x y, y^2>
    assert monic_set(groebner_basis(out)) == {"x*y", "y^2"}


def test_colon_and_eliminate_on_a_cusp_parametrization():
    # (t^2, t^3) is injective: no identified pairs
    assert colon_and_eliminate([parse_poly("x^2"), parse_poly("x^3 + y")]).is_constant()


def test_colon_and_eliminate_gives_the_three_line_cubic():
    g = colon_and_eliminate([parse_poly("x^2 + y"), parse_poly("y^2 + x"), parse_poly("x*y")])
    assert to_sympy(g.monic()) == sympy.expand(X ** 3 + Y ** 3 + 3 * X * Y - 1)


def test_local_multiplicity_counts_the_local_ring():
    assert local_multiplicity([parse_poly("x^2"), parse_poly("y")], (0, 0)) == 2
    assert local_multiplicity([parse_poly("x^2 - y^3"), parse_poly("x*y")], (0, 0)) == 5
    assert local_multiplicity([parse_poly("x - 1"), parse_poly("y^2")], (1, 0)) == 2
