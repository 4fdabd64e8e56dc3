import random

import pytest
from hypothesis import given, settings, strategies as st

from quadorbits.expr import parse_components
from quadorbits.polycore import Q
from quadorbits.quadmap import (AffineMap, AffinePair, QuadMap, act, cofactor_transform_check, dim_affine,
                                dim_quadratic, jacobian_minors, phi1)
from conftest import random_affine, random_pair

seeds = st.integers(0, 10 ** 6)


def random_map(rng, n, lo=-3, hi=3):
    return QuadMap([[rng.randint(lo, hi) for _ in range(6)] for _ in range(n)])


def test_components_and_polys_agree():
    F = QuadMap(parse_components("x^2 + y, y^2 + x, xy"))
    assert F.components[0] == tuple(Q(v) for v in (1, 0, 0, 0, 1, 0))
    assert QuadMap(F.polys()) == F
    assert F.evaluate((2, 3)) == [Q(7), Q(11), Q(6)]


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        QuadMap([[1, 2, 3]])
    with pytest.raises(ValueError):
        QuadMap([[1, 0, 0, 0, 0, 0]], field="Q")
    with pytest.raises(ValueError):
        QuadMap(parse_components("x^3"))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 5))
def test_action_is_a_left_action(seed, n):
    rng = random.Random(seed)
    F = random_map(rng, n)
    p, q = random_pair(rng, n), random_pair(rng, n)
    assert act(p, act(q, F)) == act(p.compose(q), F)
    assert act(p.inverse(), act(p, F)) == F
    assert act(AffinePair.identity(n), F) == F


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 5))
def test_span_dimensions_are_invariant(seed, n):
    rng = random.Random(seed)
    F = random_map(rng, n)
    G = act(random_pair(rng, n), F)
    assert dim_affine(G) == dim_affine(F)
    assert dim_quadratic(G) == dim_quadratic(F)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_jacobian_minors_transform_by_the_cofactor_matrix(seed):
    rng = random.Random(seed)
    F = random_map(rng, 3)
    L = random_affine(rng, 3)
    assert cofactor_transform_check(L.matrix, F, L.shift)


def test_minors_of_the_generic_form():
    F = QuadMap(parse_components("x^2 + y, y^2 + x, xy"))
    J = [str(m) for m in jacobian_minors(F)]
    assert J == ["-2*y^2 + x", "-2*x^2 + y", "4*x*y - 1"]
    assert phi1(F) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_embed_pads_with_zeros():
    F = QuadMap(parse_components("x^2, y^2, xy"))
    G = F.embed(5)
    assert G.n == 5 and all(not any(c) for c in G.components[3:])
    with pytest.raises(ValueError):
        F.embed(2)


def test_affine_map_inverse_and_singular_pair():
    A = AffineMap([[1, 2], [3, 4]], [1, -1])
    assert A.compose(A.inverse()).matrix == AffineMap.identity(2).matrix
    with pytest.raises(ValueError):
        act(AffinePair(AffineMap([[1, 0], [0, 0]]), AffineMap.identity(2)), QuadMap([[1] * 6, [0] * 6]))
