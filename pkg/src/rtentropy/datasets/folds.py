import logging
from typing import List, Tuple

import numpy as np
from sklearn.model_selection import StratifiedKFold

from rtentropy.constants import DEFAULT_FOLDS, DEFAULT_SEED
from rtentropy.datasets.dataset import Dataset
from rtentropy.errors import ClassTooSmallError

logger = logging.getLogger(__name__)


def stratified_kfold(
    data: Dataset, k: int = DEFAULT_FOLDS, seed: int = DEFAULT_SEED
) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Splits `data` into k stratified (train, test) index partitions.

    Every class needs at least k instances. Test folds are disjoint and cover every index once;
    each fold's class counts stay within one instance of the global proportions.

    Args:
        data (Dataset): Labeled dataset.
        k (int): Number of folds.
        seed (int): Shuffling seed; equal seeds give identical partitions.

    Returns:
        A list of k (train_indices, test_indices) pairs of sorted int arrays.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    labels = data.labels.astype(str)
    classes, counts = np.unique(labels, return_counts=True)
    class_counts = {str(label): int(count) for label, count in zip(classes, counts)}
    if len(data) < k or counts.min() < k:
        raise ClassTooSmallError(f"cannot build {k} stratified folds from class counts {class_counts}")
    logger.debug("Building %d stratified folds over class counts %s", k, class_counts)

    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    return [
        (np.sort(train_idx), np.sort(test_idx)) for train_idx, test_idx in splitter.split(np.zeros(len(data)), labels)
    ]
