"""The three pruning engines and their shared threshold machinery.

All engines consume a labeled dataset and emit a :class:`PruneResult`:

* :func:`decole_prune` runs one confident-learning pass per group: fit and
  cross-validate within the group only, estimate that group's thresholds,
  prune that group's rows, then union the per-group pruned sets.
* :func:`cl_prune` is the coupled baseline: one pooled pass over all rows
  with a single global threshold pair (group index fed to the classifier as
  an extra feature by default).
* :func:`random_prune` removes a uniform sample, as a reference point.

The confident rule prunes an instance when its out-of-sample probability
contradicts its observed label against the class-mean thresholds:
observed 1 with p_hat strictly below the observed-negative mean (ub), or
observed 0 with p_hat strictly above the observed-positive mean (lb).
Ties are never pruned.

A scope that cannot be cross-validated (a class missing or smaller than the
fold count) is skipped with a structured warning rather than failing the
whole run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from decole.dataset import LabeledDataset
from decole.errors import DataError, DegenerateScopeError
from decole.learner import LearnerConfig, ProbEstimates, crossval_prob
from decole.rng import derive_seed, make_rng

METHOD_DECOLE = "decole"
METHOD_CL = "cl"
METHOD_RANDOM = "random"
METHODS = (METHOD_DECOLE, METHOD_CL, METHOD_RANDOM)

GLOBAL_SCOPE = "global"


@dataclass(frozen=True)
class Thresholds:
    """Confident-pruning decision boundaries for one scope.

    ``lb`` is the mean out-of-sample p_hat over observed positives, ``ub``
    the mean over observed negatives. Scope is a group index, or "global"
    for the coupled baseline.
    """

    lb: float
    ub: float
    scope: int | str = GLOBAL_SCOPE

    def __post_init__(self):
        for name in ("lb", "ub"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DataError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class PruneWarning:
    scope: int | str
    reason: str


@dataclass(frozen=True, eq=False)
class PruneResult:
    """Outcome of one pruning run.

    ``pruned_ids`` is in dataset row order. ``prob_estimates`` is aligned
    with the input dataset; rows of skipped scopes carry NaN / fold -1
    (absent entirely for the random method).
    """

    method: str
    seed: int
    pruned_ids: tuple[str, ...]
    thresholds: dict[int | str, Thresholds] = field(default_factory=dict)
    prob_estimates: ProbEstimates | None = None
    warnings: tuple[PruneWarning, ...] = ()

    @property
    def pruned_id_set(self) -> frozenset[str]:
        return frozenset(self.pruned_ids)


def compute_thresholds(p_hat, observed, scope: int | str = GLOBAL_SCOPE) -> Thresholds:
    """Arithmetic means of p_hat over observed positives (lb) and observed
    negatives (ub). Raises :class:`DegenerateScopeError` when either side is
    empty: such a scope cannot be pruned."""
    p = np.asarray(p_hat, dtype=np.float64)
    obs = np.asarray(observed)
    pos = p[obs == 1]
    neg = p[obs == 0]
    if pos.size == 0:
        raise DegenerateScopeError(f"scope {scope!r} has no observed positives")
    if neg.size == 0:
        raise DegenerateScopeError(f"scope {scope!r} has no observed negatives")
    return Thresholds(lb=float(pos.mean()), ub=float(neg.mean()), scope=scope)


def apply_pruning_rule(p_hat, observed, thresholds: Thresholds) -> np.ndarray:
    """Indices flagged for removal under the confident rule (strict
    comparisons, so ties with a threshold survive)."""
    p = np.asarray(p_hat, dtype=np.float64)
    obs = np.asarray(observed)
    flagged = ((obs == 1) & (p < thresholds.ub)) | ((obs == 0) & (p > thresholds.lb))
    return np.where(flagged)[0]


def _scope_matrix(dataset: LabeledDataset, rows: np.ndarray, include_group_feature: bool) -> np.ndarray:
    X = dataset.features[rows]
    if include_group_feature:
        X = np.column_stack([X, dataset.groups[rows].astype(np.float64)])
    return X


def _prune_scoped(
    dataset: LabeledDataset,
    scopes,
    learner_config: LearnerConfig,
    k_cv: int,
    seed: int,
    include_group_feature: bool,
    method: str,
) -> PruneResult:
    # scopes: iterable of (scope_key, substream_ordinal, row indices).
    # Each scope consumes its own derived substream, so scopes are
    # independent: reordering or permuting one never disturbs another.
    n = dataset.n
    p_hat = np.full(n, np.nan)
    fold = np.full(n, -1, dtype=np.int64)
    thresholds: dict[int | str, Thresholds] = {}
    warnings: list[PruneWarning] = []
    pruned_rows: list[np.ndarray] = []

    for scope_key, ordinal, rows in scopes:
        obs = dataset.observed[rows]
        n_pos = int((obs == 1).sum())
        n_neg = int((obs == 0).sum())
        if min(n_pos, n_neg) < k_cv:
            warnings.append(
                PruneWarning(
                    scope=scope_key,
                    reason=(
                        f"skipped: {n_pos} observed positives and {n_neg} observed negatives, "
                        f"need at least k_cv={k_cv} of each for stratified cross-validation"
                    ),
                )
            )
            continue
        X = _scope_matrix(dataset, rows, include_group_feature)
        estimates = crossval_prob(
            X, obs, k_cv=k_cv, config=learner_config, seed=derive_seed(seed, "scope", ordinal)
        )
        th = compute_thresholds(estimates.p_hat, obs, scope=scope_key)
        local = apply_pruning_rule(estimates.p_hat, obs, th)
        pruned_rows.append(rows[local])
        p_hat[rows] = estimates.p_hat
        fold[rows] = estimates.fold_assignment
        thresholds[scope_key] = th

    pruned = np.sort(np.concatenate(pruned_rows)) if pruned_rows else np.empty(0, dtype=np.int64)
    return PruneResult(
        method=method,
        seed=seed,
        pruned_ids=tuple(dataset.ids[pruned]),
        thresholds=thresholds,
        prob_estimates=ProbEstimates(p_hat=p_hat, fold_assignment=fold),
        warnings=tuple(warnings),
    )


def decole_prune(
    dataset: LabeledDataset,
    learner_config: LearnerConfig | None = None,
    k_cv: int = 5,
    seed: int = 0,
    include_group_feature: bool = False,
) -> PruneResult:
    """Group-decoupled confident pruning: an independent classifier,
    threshold pair, and pruning pass per group; the result is the union of
    the per-group pruned sets.

    The group index is excluded from the classifier features by default
    (it is constant within a group). Groups that cannot be cross-validated
    are left unpruned and reported in ``result.warnings``.
    """
    scopes = [
        (g, g, np.where(dataset.groups == g)[0]) for g in range(dataset.n_groups)
    ]
    return _prune_scoped(
        dataset, scopes, learner_config or LearnerConfig(), k_cv, seed, include_group_feature, METHOD_DECOLE
    )


def cl_prune(
    dataset: LabeledDataset,
    learner_config: LearnerConfig | None = None,
    k_cv: int = 5,
    seed: int = 0,
    include_group_feature: bool = True,
) -> PruneResult:
    """Coupled confident-learning baseline: one pooled model over all rows,
    one global threshold pair, one pruning pass.

    The group index is appended to the features by default, giving the
    pooled model its best shot at group structure. On a single-group
    dataset this reduces to exactly :func:`decole_prune` (same seed and
    config): the pooled scope and the only group scope coincide.
    """
    scopes = [(GLOBAL_SCOPE, 0, np.arange(dataset.n))]
    return _prune_scoped(
        dataset, scopes, learner_config or LearnerConfig(), k_cv, seed, include_group_feature, METHOD_CL
    )


def random_prune(dataset: LabeledDataset, count: int, seed: int = 0) -> PruneResult:
    """Remove ``count`` instances chosen uniformly without replacement."""
    if not 0 <= count <= dataset.n:
        raise DataError(f"count must lie in [0, {dataset.n}], got {count}")
    rng = make_rng(seed)
    rows = np.sort(rng.permutation(dataset.n)[:count])
    return PruneResult(
        method=METHOD_RANDOM,
        seed=seed,
        pruned_ids=tuple(dataset.ids[rows]),
        thresholds={},
        prob_estimates=None,
    )


def retain(dataset: LabeledDataset, prune_result: PruneResult) -> LabeledDataset:
    """Dataset restricted to unpruned rows, original order preserved."""
    index = {ident: i for i, ident in enumerate(dataset.ids)}
    drop = np.zeros(dataset.n, dtype=bool)
    for ident in prune_result.pruned_ids:
        row = index.get(ident)
        if row is None:
            raise DataError(f"pruned id {ident!r} not present in dataset")
        drop[row] = True
    return dataset.take(np.where(~drop)[0])
