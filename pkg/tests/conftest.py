import random
import sys

import pytest
import sympy

from quadorbits.orbitdb import load
from quadorbits.polycore import Q
from quadorbits.quadmap import AffineMap, AffinePair


def random_affine(rng, n, lo=-3, hi=3):
    while True:
        M = [[Q(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]
        A = AffineMap(M, [Q(rng.randint(lo, hi)) for _ in range(n)])
        if A.is_invertible():
            return A


def random_pair(rng, n, lo=-3, hi=3):
    return AffinePair(random_affine(rng, n, lo, hi), random_affine(rng, 2, lo, hi))


def to_sympy(p):
    x, y = sympy.symbols("x y")
    return sympy.expand(sympy.sympify(str(p).replace("^", "**"), locals={"x": x, "y": y}))


@pytest.fixture(scope="session")
def db():
    return load()


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
