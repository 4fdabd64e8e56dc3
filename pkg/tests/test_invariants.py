import random

import pytest

from quadorbits.expr import parse_components, parse_poly
from quadorbits.groebner import INFINITE
from quadorbits.invariants import (CURVE, EMPTY, FINITE, PLANE, DegreeSamplingError, PreconditionError,
                                   critical_scheme, fiber_count, invariant_vector, orbit_dimension, real_signatures,
                                   self_intersection, self_intersection_midpoint, topological_degree)
from quadorbits.orbitdb import COMPLEX_LABELS, PRIMED_LABELS
from quadorbits import invariants
from quadorbits.polycore import Q, squarefree_part
from quadorbits.quadmap import QuadMap, act, dim_affine, dim_quadratic
from conftest import random_pair


def same_curve(p, q):
    """Equal up to a rational scalar."""
    return p.monic() == q.monic()


@pytest.mark.parametrize("label", COMPLEX_LABELS)
def test_stored_invariants_are_recomputed(db, label):
    rec = db.records[label]
    F = rec.normal_form()
    vec, reports = invariant_vector(F)
    assert vec.dim_a == rec.dim_a
    assert vec.dim_q == rec.dim_q
    assert vec.mu == rec.mu
    assert vec.orbit_dim == rec.orbit_dim(F.n)
    crit = reports["critical"]
    assert crit.kind == rec.critical["kind"]
    if crit.kind == FINITE:
        assert list(crit.partition) == sorted(rec.critical["partition"])
    if crit.kind == CURVE:
        assert same_curve(crit.curve_poly, parse_poly(rec.critical["curve"]))
    if rec.si is not None and rec.mu is not INFINITE:
        si = self_intersection(F, reports["degree"])
        if rec.si == "EMPTY":
            assert si.kind == EMPTY
        else:
            assert si.kind == CURVE
            assert same_curve(si.polynomial(), parse_poly(rec.si))


@pytest.mark.parametrize("label", PRIMED_LABELS)
def test_real_split_invariant_of_primed_forms(db, label):
    rec = db.records[label]
    twin = db.records[rec.complex_label]
    key, want = rec.real_split
    assert real_signatures(rec.normal_form()).as_dict()[key] == want
    assert real_signatures(twin.normal_form(field="R")).as_dict()[key] == twin.real_split[1]
    assert want != twin.real_split[1]


def test_three_line_cubic_for_the_generic_form():
    F = QuadMap(parse_components("x^2 + y, y^2 + x, xy"))
    si = self_intersection(F)
    assert same_curve(si.polynomial(), parse_poly("x^3 + y^3 + 3xy - 1"))
    crit = critical_scheme(F)
    assert crit.partition == (1, 1, 1)
    assert ((Q("1/2"), Q("1/2")), 1) in crit.rational_points


def test_double_line_for_the_cusp_form():
    F = QuadMap(parse_components("x^2 + y, y^2 + x, xy + 1/2x + 1/2y"))
    si = self_intersection(F)
    assert sorted((str(f), k) for f, k in si.factors) == [("x + y - 1", 1), ("x - y", 2)]


@pytest.mark.parametrize("label", COMPLEX_LABELS)
def test_midpoint_method_agrees_with_the_colon_ideal(db, label):
    rec = db.records[label]
    if rec.mu != 1:
        return
    F = rec.normal_form()
    si = self_intersection(F)
    mid = self_intersection_midpoint(F)
    colon = si.radical() if si.kind == CURVE else parse_poly("1")
    assert squarefree_part(colon).monic() == mid.monic()


def test_degree_is_invariant_and_samples_agree(db):
    rng = random.Random(5)
    for label in ("F1", "F7", "F10", "F12"):
        N = db.records[label].normal_form()
        F = act(random_pair(rng, 3), N)
        rep = topological_degree(F, seed=1)
        assert rep.value == db.records[label].mu
        assert len(rep.samples) == 7


def test_degree_sampling_detects_disagreement(monkeypatch):
    # (x^2, y) is two-to-one off the line x = 0 and one-to-one on it
    F = QuadMap(parse_components("x^2, y, 0"))
    assert fiber_count(F, (1, 1)) == 2
    assert fiber_count(F, (0, 1)) == 1
    bad = [(Q(0), Q(k)) for k in range(1, 7)] + [(Q(1), Q(1))]
    monkeypatch.setattr(invariants, "sample_points", lambda seed=0, count=7: bad)
    with pytest.raises(DegreeSamplingError):
        topological_degree(F)


def test_infinite_degree_for_positive_dimensional_fibers():
    F = QuadMap(parse_components("x^2, 0, 0"))
    assert topological_degree(F).value is INFINITE
    with pytest.raises(PreconditionError):
        self_intersection(F)


def test_plane_critical_locus():
    assert critical_scheme(QuadMap(parse_components("x^2 + y, 0, 0"))).kind == PLANE
    assert critical_scheme(QuadMap(parse_components("x^2 + y, x, 0"))).kind == EMPTY


def test_orbit_dimension_is_invariant_under_the_action():
    rng = random.Random(3)
    F = QuadMap([[rng.randint(-3, 3) for _ in range(6)] for _ in range(4)])
    G = act(random_pair(rng, 4), F)
    assert orbit_dimension(F) == orbit_dimension(G)
    assert (dim_affine(F), dim_quadratic(F)) == (dim_affine(G), dim_quadratic(G))


def test_real_signatures_need_the_real_field():
    with pytest.raises(PreconditionError):
        real_signatures(QuadMap(parse_components("x^2, y^2, xy")))
