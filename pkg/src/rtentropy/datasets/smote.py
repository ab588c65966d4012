import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from sklearn.metrics import pairwise_distances

from rtentropy.constants import DEFAULT_SEED, DEFAULT_SMOTE_NEIGHBORS, DEFAULT_SMOTE_TARGET, FAILED, NORMAL
from rtentropy.datasets.dataset import Dataset
from rtentropy.errors import MinorityTooSmallError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmoteConfig:
    """SMOTE settings as passed around by cross-validation and the sweep.

    Args:
        target (float): Minority fraction to reach, in (0, 1).
        k (int): Nearest minority neighbors to interpolate towards.
        amount (int, optional): Forces g synthetic instances per minority instance, ignoring `target`.
        before_cv (bool): Oversample the whole dataset before splitting folds instead of each training fold.
    """

    target: float = DEFAULT_SMOTE_TARGET
    k: int = DEFAULT_SMOTE_NEIGHBORS
    amount: Optional[int] = None
    before_cv: bool = False

    def __post_init__(self):
        if not 0 < self.target < 1:
            raise ValueError(f"SMOTE target minority fraction must be in (0, 1), got {self.target}")
        if self.k < 1:
            raise ValueError(f"SMOTE k must be a positive integer, got {self.k}")
        if self.amount is not None and self.amount < 1:
            raise ValueError(f"SMOTE amount must be a positive integer, got {self.amount}")


def minority_class(data: Dataset) -> Tuple[str, int, int]:
    """Returns (minority label, minority count, majority count). Equal counts pick `failed`."""
    counts = data.class_counts()
    if counts[FAILED] <= counts[NORMAL]:
        return FAILED, counts[FAILED], counts[NORMAL]
    return NORMAL, counts[NORMAL], counts[FAILED]


def smote_amount(minority: int, majority: int, target: float) -> int:
    """Smallest g >= 0 such that minority * (1 + g) makes up at least `target` of the data.

    The comparison is done in exact rational arithmetic; 0 means the target is already met.
    """
    target = Fraction(target).limit_denominator(10**9)
    if Fraction(minority, minority + majority) >= target:
        return 0
    # minority * (1 + g) * (1 - target) >= target * majority
    copies = target * majority / (minority * (1 - target))
    return math.ceil(copies) - 1


def smote(
    data: Dataset,
    target_minority_fraction: float = DEFAULT_SMOTE_TARGET,
    k: int = DEFAULT_SMOTE_NEIGHBORS,
    seed: int = DEFAULT_SEED,
    amount: Optional[int] = None,
) -> Dataset:
    """Oversamples the minority class with synthetic instances.

    Every minority instance x receives g synthetic siblings x + u * (x_nn - x), with x_nn drawn
    from its k nearest minority neighbors (Euclidean, ties broken by lower index) and u uniform
    in [0, 1). Originals come first, untouched, followed by the synthetics in minority order.

    Args:
        data (Dataset): Labeled dataset.
        target_minority_fraction (float): Minority fraction to reach; picks the smallest integer g.
        k (int): Neighbor count, clamped to (minority size - 1).
        seed (int): Seed for neighbor choice and interpolation; equal seeds give identical output.
        amount (int, optional): Forces g, overriding `target_minority_fraction`.

    Returns:
        A new Dataset, or `data` itself when the target is already met.
    """
    if not 0 < target_minority_fraction < 1:
        raise ValueError(f"target minority fraction must be in (0, 1), got {target_minority_fraction}")
    label, minority, majority = minority_class(data)
    if minority < 2:
        raise MinorityTooSmallError(f"SMOTE needs at least 2 {label} instances, found {minority}")

    copies = amount if amount is not None else smote_amount(minority, majority, target_minority_fraction)
    if copies == 0:
        logger.warning(
            "Minority class %s already makes up %.4f >= %.4f of the data, SMOTE skipped.",
            label,
            minority / (minority + majority),
            target_minority_fraction,
        )
        return data
    k = min(k, minority - 1)

    minority_idx = np.flatnonzero(data.labels == label)
    x_min = data.features[minority_idx]
    distances = pairwise_distances(x_min, metric="euclidean")
    np.fill_diagonal(distances, np.inf)
    neighbors = np.argsort(distances, axis=1, kind="stable")[:, :k]

    rng = np.random.default_rng(seed)
    choice = rng.integers(0, k, size=(minority, copies))
    gaps = rng.random(size=(minority, copies))

    base = np.repeat(x_min, copies, axis=0)
    partner = x_min[neighbors[np.arange(minority)[:, None], choice].ravel()]
    samples = base + gaps.reshape(-1, 1) * (partner - base)

    origin_ids = np.repeat(data.trace_ids[minority_idx], copies)
    ordinal = np.tile(np.arange(1, copies + 1), minority)
    synthetic = Dataset(
        trace_ids=[f"{origin}~smote{j}" for origin, j in zip(origin_ids, ordinal)],
        features=samples,
        labels=[label] * len(samples),
        synthetic=np.ones(len(samples), dtype=bool),
        feature_names=data.feature_names,
    )
    logger.info(
        "SMOTE %d%% on %s: %d -> %d instances (%d %s in total).",
        copies * 100,
        label,
        len(data),
        len(data) + len(synthetic),
        minority * (1 + copies),
        label,
    )
    return data.concat(synthetic)
