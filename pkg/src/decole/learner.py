"""Regularized logistic regression and out-of-sample probability estimation.

The base classifier is L2-regularized logistic regression fitted by
full-batch gradient descent with backtracking line search (see ``_gd``).
Features are standardized inside :func:`fit` using statistics of the
training rows only; the fitted model stores the transform, so probability
prediction on raw features is self-contained.

:func:`crossval_prob` produces the out-of-sample probability of class 1 for
every instance: rows are split into label-stratified folds, each fold is
predicted by a model fitted on its complement. Any learner exposing
``fit`` / ``predict_prob`` with these signatures can replace the logistic
model without touching the pruning engines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from decole import _gd
from decole.errors import DataError, NumericalError
from decole.rng import make_rng

_P_LO = np.finfo(np.float64).tiny
_P_HI = float(np.nextafter(1.0, 0.0))


@dataclass(frozen=True)
class LearnerConfig:
    """Hyperparameters of the logistic base learner."""

    l2_lambda: float = 1e-4
    max_iterations: int = 10000
    convergence_tolerance: float = 1e-6

    def __post_init__(self):
        if self.l2_lambda < 0:
            raise DataError(f"l2_lambda must be >= 0, got {self.l2_lambda}")
        if self.max_iterations < 1:
            raise DataError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.convergence_tolerance > 0:
            raise DataError(f"convergence_tolerance must be > 0, got {self.convergence_tolerance}")


@dataclass(frozen=True, eq=False)
class LogisticModel:
    """Fitted logistic model: weights in standardized-feature space plus the
    standardization transform. ``feature_mean``/``feature_scale`` of None
    mean the identity transform (used by hand-constructed models)."""

    weights: np.ndarray
    intercept: float
    feature_mean: np.ndarray | None = None
    feature_scale: np.ndarray | None = None
    config: LearnerConfig | None = None
    converged: bool = True
    n_iter: int = 0

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=np.float64))

    @property
    def dim(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True, eq=False)
class ProbEstimates:
    """Out-of-sample probability of class 1 per instance, plus the fold that
    produced it. A fold of -1 marks rows with no estimate (skipped scopes);
    their p_hat is NaN."""

    p_hat: np.ndarray
    fold_assignment: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p_hat", np.asarray(self.p_hat, dtype=np.float64))
        object.__setattr__(self, "fold_assignment", np.asarray(self.fold_assignment, dtype=np.int64))


def _as_matrix(features) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    return X


def fit(features, labels, config: LearnerConfig | None = None) -> LogisticModel:
    """Fit the regularized logistic model by gradient descent.

    Requires at least one instance of each class and finite features.
    Raises :class:`NumericalError` if the optimizer hits a non-finite loss
    or a fully stalled line search; plain non-convergence within
    ``max_iterations`` is reported through ``model.converged``.
    """
    config = config or LearnerConfig()
    X = _as_matrix(features)
    y = np.asarray(labels, dtype=np.float64)
    if X.shape[0] != y.shape[0]:
        raise DataError(f"features have {X.shape[0]} rows but labels have {y.shape[0]}")
    if not np.isfinite(X).all():
        raise DataError("non-finite feature value passed to fit")
    classes = np.unique(y)
    if not np.isin(classes, (0.0, 1.0)).all():
        raise DataError(f"labels must be binary 0/1, got values {classes}")
    if classes.size < 2:
        raise DataError(f"single-class input: all labels equal {int(classes[0])}")

    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    varying = scale != 0.0
    scale = np.where(varying, scale, 1.0)
    # Constant columns standardize to all-zeros and provably keep weight 0,
    # so they are excluded from the optimization and reinserted as zeros.
    Xs = (X[:, varying] - mean[varying]) / scale[varying]

    w_active, b, n_iter, status = _gd.fit_gd(
        Xs, y, config.l2_lambda, config.convergence_tolerance, config.max_iterations
    )
    if status == _gd.STATUS_NON_FINITE:
        raise NumericalError("non-finite loss encountered during optimization")
    if status == _gd.STATUS_STALLED:
        raise NumericalError("line search stalled: no descent step representable")
    w = np.zeros(X.shape[1], dtype=np.float64)
    w[varying] = w_active
    return LogisticModel(
        weights=w,
        intercept=float(b),
        feature_mean=mean,
        feature_scale=scale,
        config=config,
        converged=(status == _gd.STATUS_CONVERGED),
        n_iter=int(n_iter),
    )


def predict_prob(model: LogisticModel, features) -> np.ndarray:
    """sigmoid(w . x + b) per row, on standardized x when the model carries a
    transform. Values are clamped into the open interval (0, 1)."""
    X = _as_matrix(features)
    if X.shape[1] != model.dim:
        raise DataError(f"feature dimension {X.shape[1]} does not match model dimension {model.dim}")
    if model.feature_mean is not None:
        X = (X - model.feature_mean) / model.feature_scale
    z = X @ model.weights + model.intercept
    p = 1.0 / (1.0 + np.exp(-z))
    return np.clip(p, _P_LO, _P_HI)


def stratified_folds(labels, k_cv: int, seed: int) -> np.ndarray:
    """Label-stratified fold assignment, deterministic for a fixed seed.

    Within each class, rows are shuffled and dealt round-robin, so per-fold
    class counts differ by at most one.
    """
    y = np.asarray(labels)
    if k_cv < 2:
        raise DataError(f"k_cv must be >= 2, got {k_cv}")
    for c in (0, 1):
        count = int((y == c).sum())
        if count < k_cv:
            raise DataError(
                f"class {c} has {count} instances, fewer than k_cv={k_cv}; "
                "stratified cross-validation needs at least k_cv per class"
            )
    rng = make_rng(seed)
    fold = np.empty(y.shape[0], dtype=np.int64)
    for c in (0, 1):
        rows = np.where(y == c)[0]
        rows = rows[rng.permutation(rows.size)]
        fold[rows] = np.arange(rows.size) % k_cv
    return fold


def crossval_prob(
    features,
    labels,
    k_cv: int = 5,
    config: LearnerConfig | None = None,
    seed: int = 0,
) -> ProbEstimates:
    """Out-of-sample class-1 probability for every instance via k-fold CV.

    Each instance's estimate comes from the model fitted on the complement
    of its fold, so no instance is ever predicted by a model that saw it.
    Fold models are independent; fitting them in any order (or in parallel)
    yields bit-identical results because the partition is fixed up front
    and each fit is deterministic.
    """
    X = _as_matrix(features)
    y = np.asarray(labels, dtype=np.int64)
    fold = stratified_folds(y, k_cv, seed)
    p_hat = np.empty(X.shape[0], dtype=np.float64)
    for f in range(k_cv):
        holdout = fold == f
        model = fit(X[~holdout], y[~holdout], config)
        p_hat[holdout] = predict_prob(model, X[holdout])
    return ProbEstimates(p_hat=p_hat, fold_assignment=fold)
