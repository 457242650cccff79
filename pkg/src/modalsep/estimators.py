"""scikit-learn style wrappers.

``X`` is always a sequence of pointed models (or a ``ModelClass``), never a
numeric matrix, so these estimators work in pipelines of their own but are
not meant to be fed arrays.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bisim import point_blocks
from .classes import definable
from .errors import ValidationError
from .kripke import ModelClass, PointedModel
from .semantics import eval as eval_formula

__all__ = ["ModalSeparator", "BisimulationQuotient", "check_models", "check_labels"]


def check_models(X) -> list:
    """Validate ``X`` as a nonempty sequence of pointed models."""
    if isinstance(X, PointedModel):
        raise ValidationError("expected a sequence of pointed models, got a single model")
    members = list(X.members) if isinstance(X, ModelClass) else list(X)
    if not members:
        raise ValidationError("no models given")
    for i, m in enumerate(members):
        if not isinstance(m, PointedModel):
            raise ValidationError(f"item {i} is {type(m).__name__}, not a pointed model")
    return members


def check_labels(y, n: int) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValidationError(f"labels must be one-dimensional, got shape {y.shape}")
    if len(y) != n:
        raise ValidationError(f"{n} models but {len(y)} labels")
    return y


class ModalSeparator(ClassifierMixin, BaseEstimator):
    """Binary classifier whose decision rule is a single modal formula.

    ``fit`` finds a formula true exactly on the models labelled with the
    larger class label. It fails if some pair of bisimilar models (or
    ``depth``-bisimilar, when set) carries different labels, since no
    formula can split them.
    """

    def __init__(self, depth=None):
        self.depth = depth

    def fit(self, X, y):
        X = check_models(X)
        y = check_labels(y, len(X))
        classes = np.unique(y)
        if len(classes) > 2:
            raise ValidationError(f"binary labels expected, got {len(classes)} distinct values")
        self.classes_ = classes
        positive = [i for i, label in enumerate(y) if label == classes[-1]] if len(classes) == 2 else list(range(len(X)))
        res = definable(ModelClass(X), positive, self.depth)
        if not res.separable:
            i, j = res.witness
            raise ValidationError(f"models {i} and {j} are indistinguishable but labelled differently")
        self.formula_ = res.formula
        self.depth_ = res.depth
        self.alphabet_ = ModelClass(X).alphabet
        return self

    def predict(self, X):
        check_is_fitted(self, "formula_")
        X = check_models(X)
        alphabet = self.alphabet_ + ModelClass(X).alphabet
        hits = np.array([eval_formula(m, self.formula_, alphabet) for m in X])
        if len(self.classes_) == 1:
            return np.full(len(X), self.classes_[0])
        return np.where(hits, self.classes_[1], self.classes_[0])


class BisimulationQuotient(TransformerMixin, BaseEstimator):
    """One-hot encode models by bisimulation class.

    ``fit`` records one representative per class seen; ``transform`` maps
    each model to an indicator row over those classes (all zeros if it
    matches none).
    """

    def __init__(self, depth=None):
        self.depth = depth

    def fit(self, X, y=None):
        X = check_models(X)
        ids = point_blocks(X, self.depth)
        reps, seen = [], set()
        for m, b in zip(X, ids):
            if b not in seen:
                seen.add(b)
                reps.append(m)
        self.representatives_ = reps
        self.n_blocks_ = len(reps)
        return self

    def transform(self, X):
        check_is_fitted(self, "representatives_")
        X = check_models(X)
        ids = point_blocks(list(self.representatives_) + X, self.depth)
        rep_ids = {b: k for k, b in enumerate(ids[:self.n_blocks_])}
        out = np.zeros((len(X), self.n_blocks_), dtype=np.int8)
        for row, b in enumerate(ids[self.n_blocks_:]):
            k = rep_ids.get(b)
            if k is not None:
                out[row, k] = 1
        return out
