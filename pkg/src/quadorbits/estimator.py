"""scikit-learn style wrappers.

Samples are QuadMaps, or rows of 6n coefficients [a1,b1,c1,d1,e1,g1, a2,...]
given as integers, Fractions or "p/q" strings.  Floats are rejected, since the
engine is exact.
"""

from __future__ import annotations

from typing import List

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin

from .classifier import classify
from .invariants import CURVE, EMPTY, FINITE, PLANE, invariant_vector
from .orbitdb import load
from .quadmap import QuadMap

CRITICAL_CODES = {EMPTY: 0, FINITE: 1, CURVE: 2, PLANE: 3}
FEATURES = ("dim_a", "dim_q", "mu", "orbit_dim", "critical_kind", "critical_size")


def check_quadmaps(X, field: str = "C") -> List[QuadMap]:
    """Coerce a batch to QuadMaps."""
    out = []
    for i, row in enumerate(X):
        if isinstance(row, QuadMap):
            out.append(row)
            continue
        row = list(np.ravel(np.asarray(row, dtype=object)))
        if not row or len(row) % 6:
            raise ValueError(f"sample {i}: expected 6n coefficients, got {len(row)}")
        out.append(QuadMap([row[k:k + 6] for k in range(0, len(row), 6)], field))
    return out


class OrbitClassifier(ClassifierMixin, BaseEstimator):
    """Assign orbit labels to quadratic maps.

    Parameters
    ----------
    field : {"C", "R"}
        Field for coefficient rows (QuadMap samples keep their own field).
    seed : int
        Seed for the topological-degree samples.
    compute_si : bool
        Whether to include the self-intersection curve in the decision key.
    """

    def __init__(self, field: str = "C", seed: int = 0, compute_si: bool = True):
        self.field = field
        self.seed = seed
        self.compute_si = compute_si

    def fit(self, X=None, y=None):
        # the decision table is fixed; fitting only records the label set
        self.classes_ = np.array(load().labels(self.field), dtype=object)
        return self

    def predict(self, X) -> np.ndarray:
        maps = check_quadmaps(X, self.field)
        return np.array([classify(F, self.seed, self.compute_si).label.base for F in maps], dtype=object)

    def predict_reports(self, X):
        return [classify(F, self.seed, self.compute_si) for F in check_quadmaps(X, self.field)]


class InvariantTransformer(TransformerMixin, BaseEstimator):
    """Numeric invariant features per map; mu = -1 stands for an infinite degree."""

    def __init__(self, field: str = "C", seed: int = 0):
        self.field = field
        self.seed = seed

    def fit(self, X=None, y=None):
        self.feature_names_out_ = np.array(FEATURES, dtype=object)
        return self

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURES, dtype=object)

    def transform(self, X) -> np.ndarray:
        rows = []
        for F in check_quadmaps(X, self.field):
            vec, _ = invariant_vector(F, seed=self.seed)
            kind = vec.critical[0]
            size = sum(vec.critical[1]) if kind == FINITE else (vec.critical[1] if kind == CURVE else 0)
            mu = vec.mu if isinstance(vec.mu, int) else -1
            rows.append([vec.dim_a, vec.dim_q, mu, vec.orbit_dim, CRITICAL_CODES[kind], size])
        return np.array(rows, dtype=np.int64).reshape(len(rows), len(FEATURES))
