"""Synthetic two-group benchmark population and label-noise injection.

The generator draws a two-dimensional population of two groups with a
configurable majority share. Each (group, class) cell is an isotropic
Gaussian cluster; the default means place the two groups' class boundaries
nearly orthogonal to each other, so a single pooled linear model cannot fit
both groups at once.

Noise injection flips observed labels at group- and class-conditional
rates: ``pi[(g, 1)]`` is the fraction of gold-positive instances in group
``g`` relabeled 0, ``pi[(g, 0)]`` the fraction of gold-negatives relabeled
1. The default mode flips an exact count per cell (``floor(pi * m)`` of the
``m`` cell members, sampled without replacement) so downstream rate checks
are deterministic; per-instance Bernoulli flipping is available as a flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from decole.dataset import LabeledDataset
from decole.errors import DataError
from decole.rng import make_rng

# (group, gold class) -> cluster mean
DEFAULT_CLUSTER_MEANS: dict[tuple[int, int], tuple[float, float]] = {
    (0, 1): (2.0, 3.0),
    (0, 0): (7.0, 4.0),
    (1, 0): (6.0, 3.0),
    (1, 1): (5.0, 7.0),
}

# (group, gold class) -> flip probability
DEFAULT_NOISE_RATES: dict[tuple[int, int], float] = {
    (0, 1): 0.4,
    (0, 0): 0.05,
    (1, 0): 0.2,
    (1, 1): 0.05,
}

_CELLS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the synthetic population."""

    n: int = 10000
    majority_fraction: float = 0.7
    within_group_positive_fraction: float = 0.5
    cluster_means: dict[tuple[int, int], tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_CLUSTER_MEANS)
    )
    sigma: float = 1.2
    seed: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DataError(f"population size must be non-negative, got {self.n}")
        for name in ("majority_fraction", "within_group_positive_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DataError(f"{name} must lie in [0, 1], got {v}")
        if not self.sigma > 0:
            raise DataError(f"sigma must be positive, got {self.sigma}")
        missing = [cell for cell in _CELLS if cell not in self.cluster_means]
        if missing:
            raise DataError(f"cluster_means missing (group, class) cells {missing}")


@dataclass(frozen=True)
class NoiseSpec:
    """Group- and class-conditional flip rates, keyed by (group, gold class)."""

    pi: dict[tuple[int, int], float] = field(default_factory=lambda: dict(DEFAULT_NOISE_RATES))

    def __post_init__(self):
        for cell, rate in self.pi.items():
            if not 0.0 <= rate <= 1.0:
                raise DataError(f"noise rate for {cell} must lie in [0, 1], got {rate}")

    def rate(self, group: int, gold_class: int) -> float:
        try:
            return self.pi[(group, gold_class)]
        except KeyError:
            raise DataError(f"noise rate missing for (group={group}, class={gold_class})") from None


def exact_flip_count(rate: float, m: int) -> int:
    """floor(rate * m), evaluated exactly on the binary value of ``rate``."""
    return math.floor(Fraction(rate) * m)


def generate_population(config: SynthConfig) -> LabeledDataset:
    """Draw the synthetic population; gold labels present, observed == gold.

    Group 1 receives ``round(n * majority_fraction)`` instances, and each
    group its configured positive fraction (rounded). Rows are laid out cell
    by cell in (group, class) order; ids are row numbers. Output is a pure
    function of the config (including its seed).
    """
    rng = make_rng(config.seed)
    n1 = round(config.n * config.majority_fraction)
    n0 = config.n - n1
    cell_sizes = {}
    for g, ng in ((0, n0), (1, n1)):
        npos = round(ng * config.within_group_positive_fraction)
        cell_sizes[(g, 1)] = npos
        cell_sizes[(g, 0)] = ng - npos

    blocks = []
    for cell in _CELLS:
        m = cell_sizes[cell]
        mean = np.asarray(config.cluster_means[cell], dtype=np.float64)
        feats = rng.normal(loc=mean, scale=config.sigma, size=(m, mean.shape[0]))
        blocks.append((feats, cell))

    features = np.vstack([feats for feats, _ in blocks])
    groups = np.concatenate([np.full(feats.shape[0], cell[0], dtype=np.int64) for feats, cell in blocks])
    gold = np.concatenate([np.full(feats.shape[0], cell[1], dtype=np.int64) for feats, cell in blocks])
    return LabeledDataset(
        features=features,
        groups=groups,
        observed=gold.copy(),
        gold=gold,
        n_groups=2,
    )


def inject_noise(
    dataset: LabeledDataset,
    spec: NoiseSpec,
    seed: int,
    bernoulli: bool = False,
) -> LabeledDataset:
    """Rewrite observed labels with group- and class-conditional flips.

    Default (exact-count) mode flips exactly ``floor(pi * m)`` instances per
    (group, gold class) cell, chosen uniformly without replacement;
    ``bernoulli=True`` flips each instance independently with probability
    ``pi`` instead. Features, groups, gold labels, and ids are untouched.
    """
    if not dataset.has_gold:
        raise DataError("inject_noise requires gold labels, but the dataset has none")
    rng = make_rng(seed)
    observed = np.asarray(dataset.gold).copy()
    for g in range(dataset.n_groups):
        for c in (0, 1):
            rate = spec.rate(g, c)
            cell_rows = np.where((dataset.groups == g) & (dataset.gold == c))[0]
            m = cell_rows.size
            if m == 0:
                continue
            if bernoulli:
                flip = cell_rows[rng.random(m) < rate]
            else:
                count = exact_flip_count(rate, m)
                flip = cell_rows[rng.permutation(m)[:count]]
            observed[flip] = 1 - c
    return dataset.replace_observed(observed)
