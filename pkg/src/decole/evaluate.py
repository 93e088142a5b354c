"""Pruning-quality and label-quality metrics, plus multi-run aggregation.

Metrics are reported per scope. Scope keys are strings:

* ``overall`` - all instances;
* ``group=G`` - instances of group G;
* ``group=G:false_negative`` / ``group=G:false_positive`` - error-type
  breakdowns within a group.

For an error-type scope, recall divides by the errors of that type in the
group, while precision divides by everything pruned in the group (the
pruner cannot be charged per error type, since it never observes types).
Undefined ratios (zero denominator) are reported as ``None``, never
coerced to 0 or 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import t as _student_t

from decole.dataset import ERR_FN, ERR_FP, ErrorMask, LabeledDataset, error_mask
from decole.errors import DataError
from decole.prune import PruneResult

OVERALL = "overall"


def group_scope(g: int) -> str:
    return f"group={g}"


def error_type_scope(g: int, error_name: str) -> str:
    return f"group={g}:{error_name}"


@dataclass(frozen=True)
class ScopedCounts:
    """Tallies behind one scope's pruning recall and precision."""

    pruned_and_error: int
    pruned: int
    error: int

    @property
    def recall(self) -> float | None:
        return self.pruned_and_error / self.error if self.error else None

    @property
    def precision(self) -> float | None:
        return self.pruned_and_error / self.pruned if self.pruned else None


@dataclass(frozen=True)
class PruneQuality:
    scopes: dict[str, ScopedCounts]

    def recall(self, scope: str = OVERALL) -> float | None:
        return self.scopes[scope].recall

    def precision(self, scope: str = OVERALL) -> float | None:
        return self.scopes[scope].precision


@dataclass(frozen=True)
class LabelCounts:
    """Confusion tallies of observed vs gold labels within one scope."""

    false_positives: int
    gold_negatives: int
    false_negatives: int
    gold_positives: int

    @property
    def fpr(self) -> float | None:
        return self.false_positives / self.gold_negatives if self.gold_negatives else None

    @property
    def fnr(self) -> float | None:
        return self.false_negatives / self.gold_positives if self.gold_positives else None


@dataclass(frozen=True)
class LabelQuality:
    scopes: dict[str, LabelCounts]

    def fpr(self, scope: str = OVERALL) -> float | None:
        return self.scopes[scope].fpr

    def fnr(self, scope: str = OVERALL) -> float | None:
        return self.scopes[scope].fnr


def prune_quality(prune_result: PruneResult, mask: ErrorMask, dataset: LabeledDataset) -> PruneQuality:
    """Recall and precision of label-error detection at every scope.

    The mask must be derived from the pre-pruning dataset; all pruned ids
    must resolve against ``dataset.ids``.
    """
    if mask.is_error.shape[0] != dataset.n:
        raise DataError(
            f"error mask covers {mask.is_error.shape[0]} rows, dataset has {dataset.n}"
        )
    index = {ident: i for i, ident in enumerate(dataset.ids)}
    pruned = np.zeros(dataset.n, dtype=bool)
    for ident in prune_result.pruned_ids:
        row = index.get(ident)
        if row is None:
            raise DataError(f"pruned id {ident!r} not present in dataset")
        pruned[row] = True

    def counts(pruned_scope: np.ndarray, error_scope: np.ndarray) -> ScopedCounts:
        return ScopedCounts(
            pruned_and_error=int((pruned_scope & error_scope).sum()),
            pruned=int(pruned_scope.sum()),
            error=int(error_scope.sum()),
        )

    scopes = {OVERALL: counts(pruned, mask.is_error)}
    for g in range(dataset.n_groups):
        in_group = dataset.groups == g
        scopes[group_scope(g)] = counts(pruned & in_group, mask.is_error & in_group)
        for code, name in ((ERR_FN, "false_negative"), (ERR_FP, "false_positive")):
            scopes[error_type_scope(g, name)] = counts(
                pruned & in_group, (mask.error_type == code) & in_group
            )
    return PruneQuality(scopes=scopes)


def label_quality(dataset: LabeledDataset) -> LabelQuality:
    """Observed-label FPR and FNR against gold labels, overall and per group."""
    if not dataset.has_gold:
        raise DataError("label_quality requires gold labels, but the dataset has none")
    fp = (dataset.observed == 1) & (dataset.gold == 0)
    fn = (dataset.observed == 0) & (dataset.gold == 1)

    def counts(scope: np.ndarray) -> LabelCounts:
        return LabelCounts(
            false_positives=int((fp & scope).sum()),
            gold_negatives=int(((dataset.gold == 0) & scope).sum()),
            false_negatives=int((fn & scope).sum()),
            gold_positives=int(((dataset.gold == 1) & scope).sum()),
        )

    scopes = {OVERALL: counts(np.ones(dataset.n, dtype=bool))}
    for g in range(dataset.n_groups):
        scopes[group_scope(g)] = counts(dataset.groups == g)
    return LabelQuality(scopes=scopes)


def metrics_dict(
    pq: PruneQuality | None = None, lq: LabelQuality | None = None
) -> dict[str, float | None]:
    """Flatten quality objects into ``{"metric/scope": value}`` pairs."""
    out: dict[str, float | None] = {}
    if pq is not None:
        for scope, c in pq.scopes.items():
            out[f"recall/{scope}"] = c.recall
            out[f"precision/{scope}"] = c.precision
    if lq is not None:
        for scope, c in lq.scopes.items():
            out[f"fpr/{scope}"] = c.fpr
            out[f"fnr/{scope}"] = c.fnr
    return out


@dataclass(frozen=True)
class MetricSummary:
    """Mean, sample sd, and t-based 95% confidence half-width of one metric
    over the runs where it was defined (``n`` of them); ``values`` keeps the
    raw per-run series, None where undefined."""

    mean: float | None
    sd: float | None
    ci95_half_width: float | None
    n: int
    values: tuple[float | None, ...]


@dataclass(frozen=True)
class AggregateReport:
    metrics: dict[str, MetricSummary]
    n_runs: int
    method: str | None = None
    config_fingerprint: str | None = None


def aggregate(
    runs: list[dict[str, float | None]],
    method: str | None = None,
    config_fingerprint: str | None = None,
) -> AggregateReport:
    """Aggregate per-run metric dicts: mean, sample sd (n-1 denominator), and
    t-distribution 95% half-width per metric.

    Requires at least two runs with identical key sets. Values are sorted
    before summation, so the report is exactly invariant to run order.
    """
    if len(runs) < 2:
        raise DataError(f"aggregation needs at least 2 runs, got {len(runs)}")
    keys = set(runs[0])
    for i, run in enumerate(runs[1:], start=1):
        if set(run) != keys:
            raise DataError(
                f"heterogeneous metric keys: run 0 and run {i} differ "
                f"(symmetric difference {sorted(keys ^ set(run))})"
            )
    summaries: dict[str, MetricSummary] = {}
    for key in sorted(keys):
        values = tuple(run[key] for run in runs)
        present = sorted(v for v in values if v is not None)
        n = len(present)
        if n == 0:
            summaries[key] = MetricSummary(None, None, None, 0, values)
        elif n == 1:
            summaries[key] = MetricSummary(float(present[0]), None, None, 1, values)
        else:
            arr = np.asarray(present, dtype=np.float64)
            mean = float(arr.mean())
            sd = float(arr.std(ddof=1))
            half = float(_student_t.ppf(0.975, n - 1) * sd / math.sqrt(n))
            summaries[key] = MetricSummary(mean, sd, half, n, values)
    return AggregateReport(
        metrics=summaries, n_runs=len(runs), method=method, config_fingerprint=config_fingerprint
    )


def evaluate_pruning(
    prune_result: PruneResult, dataset: LabeledDataset, retained: LabeledDataset
) -> dict[str, float | None]:
    """One-call metric bundle: pruning quality against the pre-pruning
    dataset plus label quality of the retained rows."""
    pq = prune_quality(prune_result, error_mask(dataset), dataset)
    lq = label_quality(retained)
    return metrics_dict(pq, lq)
