"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (the lines are printed in the terminal summary) or directly:

    python tests/test_acceptance.py

Tolerances are pinned below.  Everything except the witness residuals is exact.
"""

import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import random_pair  # noqa: E402
from quadorbits.classifier import REAL_PAIRS, classify  # noqa: E402
from quadorbits.expr import parse_components, parse_poly  # noqa: E402
from quadorbits.groebner import INFINITE  # noqa: E402
from quadorbits.invariants import (CURVE, EMPTY, PLANE, critical_scheme, orbit_dimension,  # noqa: E402
                                   self_intersection, self_intersection_midpoint, topological_degree)
from quadorbits.normalizer import find_witness  # noqa: E402
from quadorbits.orbitdb import COMPLEX_LABELS, identity_selftests, load  # noqa: E402
from quadorbits.polycore import Q, squarefree_part  # noqa: E402
from quadorbits.quadmap import QuadMap, act, dim_affine  # noqa: E402

WITNESS_TOL = 1e-8
GENERICITY_SHARE = 0.90
SEED = 20240611

F_LABELS = [f"F{i}" for i in range(1, 30)]
ORBIT_DIMS_N3 = (18, 17, 16, 14, 17, 16, 15, 16, 15, 14, 15, 14, 13, 14, 13,
                 12, 14, 13, 13, 12, 12, 11, 10, 9, 10, 9, 8, 7, 3)
ORBIT_DIMS_G_N4 = {"G1": 24, "G2": 23, "G3": 22, "G4": 21}
PRINTED_MU = {"F7": 4, "F10": 3, "F11": 2, "F12": 4, "F13": 4, "F15": 2, "F19": 2, "F21": 2,
              "F25": INFINITE, "F26": INFINITE, "F27": INFINITE, "F28": INFINITE, "F29": INFINITE}
SI_EXPECTED = {"F1": "x^3 + y^3 + 3xy - 1", "F2": "(x - y)^2 (x + y - 1)", "F3": "x^3", "F5": "x + y",
               "F8": "y", "F11": "x", "G2": "x"}
REAL_REPRESENTATIVES = [
    ("x^2 - y^2 + x, 2xy - y, -3x^2 + y^2", "F1'"),
    ("x^2 - y^2 + x, 2xy - y, 0", "F7'"),
    ("x^2 - y^2, xy, 0", "F13'"),
    ("x^2 + y^2, x, y", "F17'"),
    ("x^2 + y^2, x, 0", "F19'"),
    ("x^2 + y^2, 0, 0", "F25'"),
    ("x^2 - y^2, xy, x, y", "G3'"),
]
EQUIVARIANCE_PANEL = ["F1", "F2", "F3", "F4", "F5", "F7", "F8", "F11", "F13", "F17", "F25", "G2"]
EQUIVARIANCE_PAIRS = 200
GENERICITY_SAMPLES = 500
WITNESS_SAMPLES = 50

RESULTS = {}


def record(number, title, ok, detail):
    RESULTS[number] = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    return ok


# ---------------------------------------------------------------------------

def criterion_1():
    db = load()
    bad = []
    for label, want in zip(F_LABELS, ORBIT_DIMS_N3):
        got = orbit_dimension(db.records[label].normal_form(3))
        if got != want or db.records[label].orbit_dim(3) != want:
            bad.append(f"{label}={got}")
    return record(1, "orbit dimensions, n = 3", not bad,
                  f"{29 - len(bad)}/29 exact" + (f", off: {bad}" if bad else ""))


def criterion_2():
    db = load()
    bad = []
    for label, want in ORBIT_DIMS_G_N4.items():
        if orbit_dimension(db.records[label].normal_form(4)) != want:
            bad.append(label)
    for label in F_LABELS:
        rec = db.records[label]
        F = rec.normal_form(3).embed(4)
        if orbit_dimension(F) != rec.orbit_dim(4):
            bad.append(label)
    f1 = orbit_dimension(db.records["F1"].normal_form(3).embed(4))
    return record(2, "orbit dimensions, n = 4", not bad and f1 == 22,
                  f"{33 - len(bad)}/33 exact, (F1, 0) -> {f1}")


def criterion_3():
    db = load()
    checked, bad = 0, []
    for label in db.labels("R"):
        rec = db.records[label]
        field = "R" if label.endswith("'") else "C"
        N = rec.normal_form(rec.min_ambient, field)
        prev = orbit_dimension(N)
        for n in range(N.n + 1, 7):
            cur = orbit_dimension(N.embed(n))
            checked += 1
            if cur - prev != 1 + dim_affine(N):
                bad.append(f"{label}@{n}")
            prev = cur
    return record(3, "embedding increments", not bad, f"{checked - len(bad)}/{checked} steps add 1 + dim_a")


def criterion_4():
    db = load()
    bad = []
    for label in F_LABELS:
        rec = db.records[label]
        got = topological_degree(rec.normal_form(3), seed=SEED).value
        if got != rec.mu or (label in PRINTED_MU and got != PRINTED_MU[label]):
            bad.append(f"{label}={got}")
    return record(4, "topological degrees", not bad,
                  f"{29 - len(bad)}/29 agree over 7 samples, {len(PRINTED_MU)} printed values checked")


def criterion_5():
    db = load()
    bad = []
    for label, text in SI_EXPECTED.items():
        si = self_intersection(db.records[label].normal_form())
        want = parse_poly(text)
        if si.kind != CURVE or si.polynomial().monic() != want.monic():
            bad.append(label)
    return record(5, "self-intersection curves", not bad, f"{len(SI_EXPECTED) - len(bad)}/{len(SI_EXPECTED)} "
                  "match up to scalar with exact multiplicities")


def criterion_6():
    db = load()
    crit = {l: critical_scheme(db.records[l].normal_form()) for l in F_LABELS}
    half = (Q("1/2"), Q("1/2"))
    checks = {
        "F1": crit["F1"].partition == (1, 1, 1) and (half, 1) in crit["F1"].rational_points,
        "F2": crit["F2"].partition == (1, 2),
        "F3": crit["F3"].partition == (3,),
        "F4": crit["F4"].partition == (3,),
    }
    for l in ("F6", "F9", "F17", "F18", "F22", "F24"):
        checks[l] = crit[l].kind == EMPTY
    for l in ("F23", "F25", "F26", "F27", "F28", "F29"):
        checks[l] = crit[l].kind == PLANE
    bad = [l for l, ok in checks.items() if not ok]
    return record(6, "critical schemes", not bad, f"{len(checks) - len(bad)}/{len(checks)} exact")


def criterion_7():
    db = load()
    bad = []
    for text, label in REAL_REPRESENTATIVES:
        if classify(QuadMap(parse_components(text), "R")).label.base != label:
            bad.append(label)
    for unprimed in REAL_PAIRS:
        if classify(db.records[unprimed].normal_form(field="R")).label.base != unprimed:
            bad.append(unprimed)
    total = len(REAL_REPRESENTATIVES) + len(REAL_PAIRS)
    return record(7, "real splits", not bad, f"{total - len(bad)}/{total} resolved")


def criterion_8():
    db = load()
    reports = db.verify_families()
    bad = [r["edge"] for r in reports if not r["ok"]]
    edges = {r["edge"] for r in reports}
    return record(8, "degeneration families", not bad and len(reports) >= 13 and "G2:G3" in edges,
                  f"{len(reports) - len(bad)}/{len(reports)} verify at t in (1, 1/2, 1/3) and t = 0")


def criterion_9():
    db = load()
    rng = random.Random(SEED)
    total, bad = 0, []
    for label in EQUIVARIANCE_PANEL:
        N = db.records[label].normal_form()
        for _ in range(EQUIVARIANCE_PAIRS):
            total += 1
            got = classify(act(random_pair(rng, N.n), N)).label.base
            if got != label:
                bad.append(f"{label}->{got}")
    return record(9, "equivariance", not bad, f"{total - len(bad)}/{total} unchanged")


def criterion_10():
    rng = random.Random(SEED)
    shares = {}
    for n, want in ((3, "F1"), (5, "G0")):
        hits = 0
        for _ in range(GENERICITY_SAMPLES):
            F = QuadMap([[rng.randint(-5, 5) for _ in range(6)] for _ in range(n)])
            hits += classify(F).label.base == want
        shares[want] = hits / GENERICITY_SAMPLES
    ok = all(s >= GENERICITY_SHARE for s in shares.values())
    return record(10, "genericity", ok, ", ".join(f"{k} {v:.1%}" for k, v in shares.items())
                  + f" (threshold {GENERICITY_SHARE:.0%})")


def criterion_11():
    db = load()
    ids = identity_selftests()
    rng = random.Random(SEED)
    worst, failures = 0.0, []
    for label in ("F1", "F2", "F3"):
        N = db.records[label].normal_form()
        for k in range(WITNESS_SAMPLES):
            F = act(random_pair(rng, 3), N)
            try:
                w = find_witness(F, label=label, seed=k, tol=WITNESS_TOL)
                worst = max(worst, w.residual)
            except Exception as exc:  # a failed witness is a criterion failure, not a crash
                failures.append(f"{label}#{k}: {exc}")
    n_ids = len(ids["checks"])
    ok = ids["passed"] and not failures and worst <= WITNESS_TOL
    return record(11, "identities and witnesses", ok,
                  f"{sum(c['ok'] for c in ids['checks'])}/{n_ids} identities exact, "
                  f"{3 * WITNESS_SAMPLES - len(failures)}/{3 * WITNESS_SAMPLES} witnesses, "
                  f"max residual {worst:.1e} (tol {WITNESS_TOL:.0e})")


def criterion_12():
    db = load()
    checked, bad = 0, []
    for label in COMPLEX_LABELS:
        rec = db.records[label]
        if rec.mu != 1:
            continue
        F = rec.normal_form()
        si = self_intersection(F)
        colon = squarefree_part(si.radical()) if si.kind == CURVE else parse_poly("1")
        checked += 1
        if colon.monic() != self_intersection_midpoint(F).monic():
            bad.append(label)
    return record(12, "colon vs midpoint self-intersection", not bad and checked > 0,
                  f"{checked - len(bad)}/{checked} degree-one forms agree at radical level")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 13)])
def test_criterion(criterion):
    assert criterion(), RESULTS.get(CRITERIA.index(criterion) + 1)


if __name__ == "__main__":
    failed = 0
    for c in CRITERIA:
        t0 = time.perf_counter()
        ok = c()
        failed += not ok
        print(f"{RESULTS[CRITERIA.index(c) + 1]}  ({time.perf_counter() - t0:.1f}s)", flush=True)
    sys.exit(1 if failed else 0)
