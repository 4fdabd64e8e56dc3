import random

import pytest
from hypothesis import given, settings, strategies as st

from quadorbits.classifier import (REAL_PAIRS, OrbitLabel, UnclassifiableError, classify, expected_orbit_dim,
                                   reduce_ambient, topological_type)
from quadorbits.expr import parse_components
from quadorbits.orbitdb import COMPLEX_LABELS
from quadorbits.quadmap import QuadMap, act, apply_affine
from conftest import random_pair


def cases(db):
    for label in db.labels("R"):
        rec = db.records[label]
        field = "R" if label.endswith("'") else "C"
        for n in range(max(1, rec.min_ambient), 6):
            if n in db.fj_table and rec.complex_label not in db.fj_table[n]:
                continue
            yield label, n, field


def test_normal_forms_classify_to_themselves(db):
    seen = 0
    for label, n, field in cases(db):
        rep = classify(db.records[label].normal_form(n, field))
        assert rep.label.base == label, (label, n)
        assert rep.expected_orbit_dim == db.records[label].orbit_dim(n)
        seen += 1
    assert seen > 100


@pytest.mark.parametrize("unprimed", sorted(REAL_PAIRS))
def test_unprimed_twins_stay_unprimed_over_the_reals(db, unprimed):
    assert classify(db.records[unprimed].normal_form(field="R")).label.base == unprimed
    assert classify(db.records[REAL_PAIRS[unprimed]].normal_form()).label.base == REAL_PAIRS[unprimed]


@pytest.mark.parametrize("text, label", [
    ("x^2 - y^2 + x, 2xy - y, -3x^2 + y^2", "F1'"),
    ("x^2 + y^2, x, y", "F17'"),
    ("x^2 + y^2, 0, 0", "F25'"),
])
def test_real_representatives(text, label):
    F = QuadMap(parse_components(text), "R")
    assert classify(F).label.base == label
    assert classify(F.with_field("C")).label.base == label.rstrip("'")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["F1", "F2", "F4", "F9", "F13", "F20", "F26", "G1"]))
def test_classification_is_equivariant(db, seed, label):
    rng = random.Random(seed)
    N = db.records[label].normal_form()
    assert classify(act(random_pair(rng, N.n), N)).label.base == label


def test_reduce_ambient_keeps_the_orbit(db):
    rng = random.Random(4)
    N = db.records["F5"].normal_form(6)
    F = act(random_pair(rng, 6), N)
    G, pair = reduce_ambient(F)
    assert G.n == 3
    assert apply_affine(pair.L, F, None).components[:3] == G.components
    assert classify(F).label == OrbitLabel("F5", 6)


def test_totality_on_small_random_maps(db):
    rng = random.Random(7)
    for n in range(1, 7):
        for _ in range(15):
            F = QuadMap([[rng.randint(-3, 3) for _ in range(6)] for _ in range(n)])
            rep = classify(F)
            assert rep.label.base in COMPLEX_LABELS
            assert rep.invariant_vector.orbit_dim == db.records[rep.label.base].orbit_dim(rep.reduced_map.n)


def test_orbit_label_validation():
    OrbitLabel("F1'", 3, "R")
    with pytest.raises(ValueError):
        OrbitLabel("F1'", 3, "C")
    with pytest.raises(ValueError):
        OrbitLabel("G0", 4)
    with pytest.raises(ValueError):
        OrbitLabel("F1", 0)


def test_lookup_helpers():
    assert expected_orbit_dim("G1", 4) == 24
    assert expected_orbit_dim(OrbitLabel("F1", 4)) == 22
    assert topological_type("G4", "R") == 7
    assert topological_type(OrbitLabel("F1'", 3, "R")) == topological_type("F1'", "R")


def test_report_serializes():
    rep = classify(QuadMap(parse_components("x^2 + y, y^2 + x, xy")))
    out = rep.as_dict()
    assert out["label"] == "F1" and out["expected_orbit_dim"] == 18
    assert out["self_intersection"]["kind"] == "CURVE"


def test_unclassifiable_carries_candidates():
    err = UnclassifiableError("no match", ["F1", "F2"])
    assert err.code == "UNCLASSIFIABLE" and err.candidates == ("F1", "F2")
