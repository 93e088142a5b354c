"""Dataset container, validation, and CSV serialization.

A :class:`LabeledDataset` holds a dense real feature matrix, a dense integer
group index per row, observed binary labels, and (optionally) gold binary
labels. Group indices run 0..k-1; a sidecar ``group_names`` tuple can record
the original categorical values. Instances are addressed by stable string
ids.

Datasets are immutable after construction (the backing arrays are frozen),
so they can be shared freely across threads; every transformation builds a
new value.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass

import numpy as np

from decole.errors import DataError

ERR_NONE = 0
ERR_FP = 1
ERR_FN = 2
ERROR_TYPE_NAMES = ("none", "false_positive", "false_negative")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Feature matrix plus group, observed-label, and optional gold-label vectors.

    ``n_groups`` defaults to ``max(groups) + 1`` (0 for an empty dataset);
    pass it explicitly when trailing groups may be empty.
    """

    features: np.ndarray
    groups: np.ndarray
    observed: np.ndarray
    gold: np.ndarray | None = None
    ids: np.ndarray | None = None
    n_groups: int | None = None
    group_names: tuple[str, ...] | None = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim == 1:
            feats = feats.reshape(-1, 1)
        object.__setattr__(self, "features", _frozen(feats))
        object.__setattr__(self, "groups", _frozen(np.asarray(self.groups, dtype=np.int64)))
        object.__setattr__(self, "observed", _frozen(np.asarray(self.observed, dtype=np.int64)))
        if self.gold is not None:
            object.__setattr__(self, "gold", _frozen(np.asarray(self.gold, dtype=np.int64)))
        if self.ids is None:
            object.__setattr__(self, "ids", np.array([str(i) for i in range(feats.shape[0])], dtype=str))
        else:
            object.__setattr__(self, "ids", np.asarray(self.ids, dtype=str))
        _frozen(self.ids)
        if self.n_groups is None:
            k = int(self.groups.max()) + 1 if self.groups.size else 0
            object.__setattr__(self, "n_groups", k)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def has_gold(self) -> bool:
        return self.gold is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        if (self.gold is None) != (other.gold is None):
            return False
        return (
            np.array_equal(self.features, other.features)
            and np.array_equal(self.groups, other.groups)
            and np.array_equal(self.observed, other.observed)
            and (self.gold is None or np.array_equal(self.gold, other.gold))
            and np.array_equal(self.ids, other.ids)
            and self.n_groups == other.n_groups
            and self.group_names == other.group_names
        )

    def replace_observed(self, observed: np.ndarray) -> "LabeledDataset":
        """New dataset with the observed column rewritten, all else shared."""
        return LabeledDataset(
            features=self.features,
            groups=self.groups,
            observed=observed,
            gold=self.gold,
            ids=self.ids,
            n_groups=self.n_groups,
            group_names=self.group_names,
        )

    def take(self, rows: np.ndarray) -> "LabeledDataset":
        """New dataset restricted to ``rows`` (dataset order preserved by caller)."""
        return LabeledDataset(
            features=self.features[rows],
            groups=self.groups[rows],
            observed=self.observed[rows],
            gold=None if self.gold is None else self.gold[rows],
            ids=self.ids[rows],
            n_groups=self.n_groups,
            group_names=self.group_names,
        )


@dataclass(frozen=True, eq=False)
class ErrorMask:
    """Per-instance label-error flags derived from observed vs gold labels.

    ``error_type[i]`` is ``ERR_FP`` when (observed=1, gold=0), ``ERR_FN``
    when (observed=0, gold=1), and ``ERR_NONE`` exactly when
    ``is_error[i]`` is false.
    """

    is_error: np.ndarray
    error_type: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "is_error", _frozen(np.asarray(self.is_error, dtype=bool)))
        object.__setattr__(self, "error_type", _frozen(np.asarray(self.error_type, dtype=np.int8)))


def validate(dataset: LabeledDataset) -> LabeledDataset:
    """Check every dataset invariant; return the dataset unchanged if all hold.

    Raises :class:`DataError` naming the offending row for the first
    violation found: length mismatches, non-binary labels, out-of-range
    group indices, non-finite features, duplicate ids.
    """
    n = dataset.features.shape[0]
    if dataset.features.ndim != 2:
        raise DataError(f"features must be a 2-D matrix, got ndim={dataset.features.ndim}")
    for name in ("groups", "observed", "ids") + (("gold",) if dataset.has_gold else ()):
        vec = getattr(dataset, name)
        if vec.shape != (n,):
            raise DataError(f"length mismatch: {name} has length {vec.shape[0] if vec.ndim == 1 else vec.shape}, expected {n}")
    bad = np.where(~np.isfinite(dataset.features))[0]
    if bad.size:
        raise DataError(f"non-finite feature value at row {bad[0]}")
    for name in ("observed",) + (("gold",) if dataset.has_gold else ()):
        vec = getattr(dataset, name)
        bad = np.where((vec != 0) & (vec != 1))[0]
        if bad.size:
            raise DataError(f"non-binary {name} label {vec[bad[0]]} at row {bad[0]}")
    if dataset.n_groups < 0 or (n > 0 and dataset.n_groups == 0):
        raise DataError(f"n_groups must be positive for a non-empty dataset, got {dataset.n_groups}")
    bad = np.where((dataset.groups < 0) | (dataset.groups >= dataset.n_groups))[0]
    if bad.size:
        raise DataError(
            f"group index {dataset.groups[bad[0]]} at row {bad[0]} out of range [0, {dataset.n_groups})"
        )
    if dataset.group_names is not None and len(dataset.group_names) != dataset.n_groups:
        raise DataError("group_names length does not match n_groups")
    seen: dict[str, int] = {}
    for i, ident in enumerate(dataset.ids):
        if ident in seen:
            raise DataError(f"duplicate id {ident!r} at rows {seen[ident]} and {i}")
        seen[ident] = i
    return dataset


def error_mask(dataset: LabeledDataset) -> ErrorMask:
    """Compare observed labels against gold labels instance by instance."""
    if not dataset.has_gold:
        raise DataError("error_mask requires gold labels, but the dataset has none")
    is_error = dataset.observed != dataset.gold
    error_type = np.zeros(dataset.n, dtype=np.int8)
    error_type[(dataset.observed == 1) & (dataset.gold == 0)] = ERR_FP
    error_type[(dataset.observed == 0) & (dataset.gold == 1)] = ERR_FN
    return ErrorMask(is_error=is_error, error_type=error_type)


_FEATURE_COL = re.compile(r"^f(\d+)$")
_REQUIRED = ("id", "group", "observed")


def write_csv(dataset: LabeledDataset, path) -> None:
    """Serialize to the canonical CSV schema.

    Columns: ``id, f0..f{d-1}, group, observed[, gold]``. Feature values use
    ``repr`` (shortest round-trip form), so write-then-read reproduces the
    dataset bit-exactly.
    """
    header = ["id"] + [f"f{j}" for j in range(dataset.d)] + ["group", "observed"]
    if dataset.has_gold:
        header.append("gold")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(dataset.n):
            row = [dataset.ids[i]]
            row += [repr(float(v)) for v in dataset.features[i]]
            row += [int(dataset.groups[i]), int(dataset.observed[i])]
            if dataset.has_gold:
                row.append(int(dataset.gold[i]))
            writer.writerow(row)


def _parse_int(value: str, row: int, col: str, allowed=None) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise DataError(f"row {row}, column {col}: unparseable integer {value!r}") from None
    if allowed is not None and parsed not in allowed:
        raise DataError(f"row {row}, column {col}: value {parsed} not in {sorted(allowed)}")
    return parsed


def read_csv(path) -> LabeledDataset:
    """Parse a dataset CSV and validate it.

    Raises :class:`DataError` for a missing required column, an unparseable
    cell (reported with row and column), or a duplicate id.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty file: missing header row") from None
        rows = list(reader)

    colpos = {name: i for i, name in enumerate(header)}
    if len(colpos) != len(header):
        raise DataError("duplicate column name in header")
    for name in _REQUIRED:
        if name not in colpos:
            raise DataError(f"missing required column {name!r}")
    feat_idx = sorted(int(_FEATURE_COL.match(c).group(1)) for c in header if _FEATURE_COL.match(c))
    if feat_idx != list(range(len(feat_idx))):
        raise DataError(f"feature columns must be contiguous f0..f{{d-1}}, got {feat_idx}")
    d = len(feat_idx)
    if d == 0:
        raise DataError("missing required column 'f0' (at least one feature column)")
    known = set(_REQUIRED) | {"gold"} | {f"f{j}" for j in range(d)}
    unknown = [c for c in header if c not in known]
    if unknown:
        raise DataError(f"unknown column {unknown[0]!r}")
    has_gold = "gold" in colpos

    n = len(rows)
    features = np.empty((n, d), dtype=np.float64)
    groups = np.empty(n, dtype=np.int64)
    observed = np.empty(n, dtype=np.int64)
    gold = np.empty(n, dtype=np.int64) if has_gold else None
    ids = []
    seen: dict[str, int] = {}
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise DataError(f"row {i}: expected {len(header)} cells, got {len(row)}")
        ident = row[colpos["id"]]
        if ident in seen:
            raise DataError(f"duplicate id {ident!r} at rows {seen[ident]} and {i}")
        seen[ident] = i
        ids.append(ident)
        for j in range(d):
            cell = row[colpos[f"f{j}"]]
            try:
                features[i, j] = float(cell)
            except ValueError:
                raise DataError(f"row {i}, column f{j}: unparseable float {cell!r}") from None
        groups[i] = _parse_int(row[colpos["group"]], i, "group")
        observed[i] = _parse_int(row[colpos["observed"]], i, "observed", allowed={0, 1})
        if has_gold:
            gold[i] = _parse_int(row[colpos["gold"]], i, "gold", allowed={0, 1})

    dataset = LabeledDataset(
        features=features,
        groups=groups,
        observed=observed,
        gold=gold,
        ids=np.array(ids, dtype=str) if ids else np.empty(0, dtype="U1"),
    )
    return validate(dataset)
