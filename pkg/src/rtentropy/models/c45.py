"""C4.5-style decision tree over continuous features.

Induction picks binary threshold splits by gain ratio, each branch holding at least M
training instances. Pessimistic error pruning then replaces subtrees by leaves whenever the
leaf's upper-confidence error estimate does not exceed the subtree's. Subtree raising is not
implemented.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import norm

from rtentropy.constants import (
    CLASSES,
    DEFAULT_CONFIDENCE_FACTOR,
    DEFAULT_MIN_LEAF,
    DEFAULT_SEED,
    FEATURE_NAMES,
    MAX_MIN_LEAF,
)
from rtentropy.datasets.dataset import Dataset
from rtentropy.errors import EmptyDatasetError, SchemaMismatchError

logger = logging.getLogger(__name__)

# information gain at or below this many bits counts as no gain
GAIN_EPSILON = 1e-12
# gain ratios closer than this are ties
RATIO_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TrainConfig:
    """Tree induction settings.

    Args:
        min_leaf (int): Parameter M, the minimum number of training instances in each branch of a split.
        confidence_factor (float): Pruning confidence CF in (0, 0.5]; smaller values prune more.
        seed (int): Seed for the stages around training (fold shuffling, SMOTE). Induction is deterministic.
        prune (bool): Apply pessimistic error pruning after growing the tree.
    """

    min_leaf: int = DEFAULT_MIN_LEAF
    confidence_factor: float = DEFAULT_CONFIDENCE_FACTOR
    seed: int = DEFAULT_SEED
    prune: bool = True

    def __post_init__(self):
        if not 2 <= self.min_leaf <= MAX_MIN_LEAF:
            raise ValueError(f"min_leaf (M) must be in [2, {MAX_MIN_LEAF}], got {self.min_leaf}")
        if not 0 < self.confidence_factor <= 0.5:
            raise ValueError(f"confidence_factor (CF) must be in (0, 0.5], got {self.confidence_factor}")


@dataclass(frozen=True)
class Leaf:
    class_counts: Tuple[float, ...]
    predicted: str

    @classmethod
    def from_counts(cls, counts: Sequence[float]) -> "Leaf":
        counts = tuple(float(c) for c in counts)
        # argmax returns the first maximum, so ties go to CLASSES[0] (normal)
        return cls(class_counts=counts, predicted=CLASSES[int(np.argmax(counts))])

    @property
    def total(self) -> float:
        return sum(self.class_counts)

    @property
    def confidence(self) -> float:
        total = self.total
        if total == 0:
            return 0.0
        return self.class_counts[CLASSES.index(self.predicted)] / total


@dataclass(frozen=True)
class Internal:
    attribute_index: int
    threshold: float
    left: "Node"
    right: "Node"
    class_counts: Tuple[float, ...]


Node = Union[Leaf, Internal]


class Prediction(NamedTuple):
    label: str
    confidence: float


def iter_nodes(node: Node) -> Iterator[Node]:
    """Pre-order traversal, left (<=) branch first."""
    yield node
    if isinstance(node, Internal):
        yield from iter_nodes(node.left)
        yield from iter_nodes(node.right)


def _depth(node: Node) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(_depth(node.left), _depth(node.right))


@dataclass(frozen=True)
class TreeModel:
    root: Node
    feature_names: Tuple[str, ...] = FEATURE_NAMES
    classes: Tuple[str, ...] = CLASSES

    @property
    def n_leaves(self) -> int:
        return sum(1 for node in iter_nodes(self.root) if isinstance(node, Leaf))

    @property
    def depth(self) -> int:
        return _depth(self.root)

    @property
    def is_single_leaf(self) -> bool:
        return isinstance(self.root, Leaf)

    def leaf_for(self, features: Sequence[float]) -> Leaf:
        if len(features) != len(self.feature_names):
            raise SchemaMismatchError(
                f"model expects {len(self.feature_names)} features {list(self.feature_names)}, got {len(features)}"
            )
        node = self.root
        while isinstance(node, Internal):
            node = node.left if features[node.attribute_index] <= node.threshold else node.right
        return node

    def predict(self, features: Sequence[float]) -> Prediction:
        leaf = self.leaf_for(features)
        return Prediction(label=leaf.predicted, confidence=leaf.confidence)

    def predict_many(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Predicts every row of X. Returns (labels, confidences)."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise SchemaMismatchError(f"model expects rows of {len(self.feature_names)} features, got {X.shape}")
        labels = np.empty(len(X), dtype=object)
        confidences = np.empty(len(X), dtype=np.float64)
        _route(self.root, X, np.arange(len(X)), labels, confidences)
        return labels, confidences


def _route(node: Node, X: np.ndarray, idx: np.ndarray, labels: np.ndarray, confidences: np.ndarray):
    if len(idx) == 0:
        return
    if isinstance(node, Leaf):
        labels[idx] = node.predicted
        confidences[idx] = node.confidence
        return
    go_left = X[idx, node.attribute_index] <= node.threshold
    _route(node.left, X, idx[go_left], labels, confidences)
    _route(node.right, X, idx[~go_left], labels, confidences)


def class_entropy(counts) -> np.ndarray:
    """Entropy in bits of each row of a class-count matrix (a 1-D vector is one row)."""
    counts = np.atleast_2d(np.asarray(counts, dtype=np.float64))
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / totals, 0.0)
        logs = np.where(p > 0, np.log2(p), 0.0)
    return -(p * logs).sum(axis=1) + 0.0


class Split(NamedTuple):
    attribute_index: int
    threshold: float
    gain: float
    gain_ratio: float
    n_left: int


def _attribute_splits(x: np.ndarray, y: np.ndarray, n_classes: int, min_leaf: int) -> List[Split]:
    n = len(y)
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    parent = np.bincount(ys, minlength=n_classes).astype(np.float64)

    n_left = np.arange(1, n)
    admissible = (xs[:-1] < xs[1:]) & (n_left >= min_leaf) & (n - n_left >= min_leaf)
    positions = np.flatnonzero(admissible)
    if len(positions) == 0:
        return []

    left = np.cumsum(np.eye(n_classes)[ys], axis=0)[positions]
    right = parent - left
    share_left = n_left[positions] / n
    share_right = 1.0 - share_left
    gain = class_entropy(parent)[0] - share_left * class_entropy(left) - share_right * class_entropy(right)
    split_info = class_entropy(np.column_stack([n_left[positions], n - n_left[positions]]))
    ratio = gain / split_info

    splits = []
    for p, g, r in zip(positions, gain, ratio):
        if g <= GAIN_EPSILON:
            continue
        threshold = (xs[p] + xs[p + 1]) / 2
        if threshold >= xs[p + 1]:
            # adjacent floats: the midpoint rounds up onto the right value
            threshold = xs[p]
        splits.append(Split(-1, float(threshold), float(g), float(r), int(p + 1)))
    return splits


def best_split(X: np.ndarray, y: np.ndarray, min_leaf: int, n_classes: int = len(CLASSES)) -> Optional[Split]:
    """Highest gain-ratio admissible split; ties go to the lowest attribute index, then lowest threshold."""
    candidates = []
    for a in range(X.shape[1]):
        candidates.extend(s._replace(attribute_index=a) for s in _attribute_splits(X[:, a], y, n_classes, min_leaf))
    if not candidates:
        return None
    top = max(s.gain_ratio for s in candidates)
    return next(s for s in candidates if s.gain_ratio >= top - RATIO_TOLERANCE)


def grow_tree(X: np.ndarray, y: np.ndarray, min_leaf: int, n_classes: int = len(CLASSES)) -> Node:
    """Grows the unpruned tree top-down."""

    def grow(idx: np.ndarray) -> Node:
        counts = np.bincount(y[idx], minlength=n_classes)
        if np.count_nonzero(counts) <= 1 or len(idx) < 2 * min_leaf:
            return Leaf.from_counts(counts)
        split = best_split(X[idx], y[idx], min_leaf, n_classes)
        if split is None:
            return Leaf.from_counts(counts)
        go_left = X[idx, split.attribute_index] <= split.threshold
        return Internal(
            attribute_index=split.attribute_index,
            threshold=split.threshold,
            left=grow(idx[go_left]),
            right=grow(idx[~go_left]),
            class_counts=tuple(float(c) for c in counts),
        )

    return grow(np.arange(len(y)))


def added_errors(n: float, e: float, cf: float) -> float:
    """Extra errors of the binomial upper confidence limit at level CF over e observed errors in n."""
    if e < 1:
        base = n * (1 - cf ** (1 / n))
        if e == 0:
            return base
        return base + e * (added_errors(n, 1.0, cf) - base)
    if e + 0.5 >= n:
        return max(n - e, 0.0)
    z = norm.isf(cf)
    f = (e + 0.5) / n
    r = (f + z * z / (2 * n) + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n)
    return r * n - e


def estimated_errors(class_counts: Sequence[float], cf: float) -> float:
    """Pessimistic error count of a leaf holding `class_counts`."""
    n = float(sum(class_counts))
    if n == 0:
        return 0.0
    e = n - max(class_counts)
    return e + added_errors(n, e, cf)


def _subtree_errors(node: Node, cf: float) -> float:
    return sum(estimated_errors(leaf.class_counts, cf) for leaf in iter_nodes(node) if isinstance(leaf, Leaf))


def prune_tree(node: Node, cf: float) -> Node:
    """Bottom-up subtree replacement."""
    if isinstance(node, Leaf):
        return node
    pruned = replace(node, left=prune_tree(node.left, cf), right=prune_tree(node.right, cf))
    if estimated_errors(node.class_counts, cf) <= _subtree_errors(pruned, cf) + RATIO_TOLERANCE:
        return Leaf.from_counts(node.class_counts)
    return pruned


def train(data: Dataset, cfg: Optional[TrainConfig] = None) -> TreeModel:
    """Trains a C4.5 tree on a labeled dataset.

    Args:
        data (Dataset): Training instances labeled normal/failed.
        cfg (TrainConfig, optional): M, CF and pruning switch. Defaults to M=2, CF=0.25.

    Returns:
        A TreeModel. Single-class data yields a one-leaf model with a warning.
    """
    cfg = cfg or TrainConfig()
    if len(data) == 0:
        raise EmptyDatasetError("cannot train on an empty dataset")
    y = data.label_codes()
    counts = np.bincount(y, minlength=len(CLASSES))
    if np.count_nonzero(counts) < 2:
        logger.warning("Training data holds a single class %s; the model is a single leaf.", CLASSES[int(y[0])])
        return TreeModel(root=Leaf.from_counts(counts), feature_names=data.feature_names)

    root = grow_tree(data.features, y, cfg.min_leaf)
    if cfg.prune:
        root = prune_tree(root, cfg.confidence_factor)
    model = TreeModel(root=root, feature_names=data.feature_names)
    logger.debug("Trained tree with M=%d CF=%s: %d leaves.", cfg.min_leaf, cfg.confidence_factor, model.n_leaves)
    return model
