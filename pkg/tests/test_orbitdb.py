import json
from importlib import resources

import pytest

from quadorbits.groebner import INFINITE
from quadorbits.orbitdb import (COMPLEX_LABELS, DATA_FILE, PRIMED_LABELS, UnknownLabelError, canonical_dump,
                                identity_checks, identity_selftests, printed_f2_cubic_holds, printed_f5_witness_holds,
                                printed_f8_step_holds, printed_theta_constants_hold)


def test_data_file_is_in_canonical_form():
    text = resources.files("quadorbits").joinpath("data", DATA_FILE).read_text(encoding="utf-8")
    assert canonical_dump(json.loads(text)) == text


def test_label_sets(db):
    assert len(COMPLEX_LABELS) == 34
    assert len(db.labels("C")) == 34
    assert len(db.labels("R")) == 41
    assert set(db.labels("R")) == set(COMPLEX_LABELS) | set(PRIMED_LABELS)


def test_lookups(db):
    assert db.lookup("F12").mu == 4
    assert db.lookup("F25").mu is INFINITE
    assert db.expected_orbit_dim("G2", 4) == 23
    assert db.expected_orbit_dim("F1", 3) == 18
    assert db.expected_orbit_dim("F1", 4) == 22
    with pytest.raises(UnknownLabelError):
        db.lookup("F30")


def test_normal_form_respects_minimal_ambient(db):
    assert db.records["G0"].normal_form().n == 5
    with pytest.raises(ValueError):
        db.records["G1"].normal_form(3)
    assert db.records["F29"].normal_form(1).n == 1


def test_closure_examples(db):
    assert db.is_in_closure("F1", "F29")
    assert db.is_in_closure("G2", "G3")
    assert not db.is_in_closure("G4", "F4")
    assert db.is_in_closure("F5", "F5")


def test_poset_is_antisymmetric_and_drops_dimension(db):
    for e in db.edges:
        assert not db.is_in_closure(e.lower, e.upper)
        up, low = db.records[e.upper], db.records[e.lower]
        n = max(up.default_ambient, low.default_ambient)
        assert up.orbit_dim(n) > low.orbit_dim(n)


def test_recorded_non_containments_are_absent(db):
    for upper, lower in db.non_containments:
        assert not db.is_in_closure(upper, lower)


def test_every_family_lies_on_the_poset(db):
    assert len(db.families) >= 13
    for f in db.families:
        assert db.is_in_closure(f.upper, f.lower)


@pytest.mark.parametrize("edge", ["F1:F2", "G2:G3", "F3:F7"])
def test_selected_families_verify(db, edge):
    upper, lower = edge.split(":")
    report = db.verify_family(db.family(upper, lower))
    assert report["ok"], report


def test_fj_table_matches_minimal_ambients(db):
    for n, labels in db.fj_table.items():
        for l in labels:
            assert db.records[l].min_ambient <= n


def test_embedding_step_is_one_plus_affine_dimension(db):
    for label in db.labels("R"):
        rec = db.records[label]
        assert rec.slope == 1 + rec.dim_a


def test_topological_types(db):
    # every label sits in exactly one group per field
    for field, labels in (("C", COMPLEX_LABELS), ("R", db.labels("R"))):
        grouped = [l for g in db.topological_groups[field] for l in g]
        assert sorted(grouped) == sorted(labels)
    assert db.topological_type("G4", "R") == 7
    with pytest.raises(UnknownLabelError):
        db.topological_type("F1'", "C")


def test_dot_and_json_exports(db):
    dot = db.to_dot()
    assert dot.count("->") == len(db.edges)
    assert sum(1 for line in dot.splitlines() if "[label=" in line) == 34
    js = db.to_json()
    assert len(js["nodes"]) == 34 and len(js["edges"]) == len(db.edges)


def test_identity_selftests_pass():
    out = identity_selftests()
    assert out["passed"]
    assert all(ok for _, ok in identity_checks())
    assert len(out["checks"]) >= 30


def test_printed_variants_of_corrected_identities_fail():
    # the corrected forms are what the self-tests check
    assert not printed_f5_witness_holds()
    assert not printed_f8_step_holds()
    assert not printed_f2_cubic_holds()
    assert not printed_theta_constants_hold()
