import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np
from sklearn.metrics import confusion_matrix

from rtentropy.constants import FAILED, NORMAL
from rtentropy.datasets.dataset import Dataset
from rtentropy.models.c45 import TreeModel

logger = logging.getLogger(__name__)

UNDEFINED = "undefined"
METRICS = ("precision", "tpr", "fpr", "f1")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Binary confusion counts with `failed` as the positive class."""

    tp: int = 0
    fn: int = 0
    fp: int = 0
    tn: int = 0

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            tp=self.tp + other.tp, fn=self.fn + other.fn, fp=self.fp + other.fp, tn=self.tn + other.tn
        )

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn

    def swapped(self) -> "ConfusionMatrix":
        """The same counts read with `normal` as the positive class."""
        return ConfusionMatrix(tp=self.tn, fn=self.fp, fp=self.fn, tn=self.tp)

    @classmethod
    def from_labels(cls, y_true: Sequence[str], y_pred: Sequence[str]) -> "ConfusionMatrix":
        if len(y_true) == 0:
            return cls()
        (tn, fp), (fn, tp) = confusion_matrix(
            np.asarray(y_true, dtype=object), np.asarray(y_pred, dtype=object), labels=[NORMAL, FAILED]
        )
        return cls(tp=int(tp), fn=int(fn), fp=int(fp), tn=int(tn))


class Scores(NamedTuple):
    precision: Optional[float]
    tpr: Optional[float]
    fpr: Optional[float]
    f1: Optional[float]


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    if denominator == 0:
        return None
    return numerator / denominator


def f_measure(precision: Optional[float], recall: Optional[float]) -> Optional[float]:
    """Harmonic mean of precision and recall (F with beta = 1)."""
    if precision is None or recall is None:
        return None
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def score(m: ConfusionMatrix) -> Scores:
    """Precision, TPR, FPR and F1 of a confusion matrix; any 0/0 ratio is None."""
    precision = _ratio(m.tp, m.tp + m.fp)
    tpr = _ratio(m.tp, m.tp + m.fn)
    return Scores(precision=precision, tpr=tpr, fpr=_ratio(m.fp, m.fp + m.tn), f1=f_measure(precision, tpr))


def weighted_scores(m: ConfusionMatrix) -> Scores:
    """Per-class scores of both classes, averaged with weights equal to each class's true support."""
    if m.total == 0:
        return Scores(None, None, None, None)
    per_class = [(m.positives, score(m)), (m.negatives, score(m.swapped()))]
    values = []
    for metric in range(len(METRICS)):
        parts = [(support, s[metric]) for support, s in per_class if support > 0]
        if any(value is None for _, value in parts):
            values.append(None)
        else:
            values.append(sum(support * value for support, value in parts) / m.total)
    return Scores(*values)


def macro_scores(fold_scores: Sequence[Scores]) -> Scores:
    """Mean of each metric over the folds where it is defined."""
    values = []
    for metric in range(len(METRICS)):
        defined = [s[metric] for s in fold_scores if s[metric] is not None]
        values.append(float(np.mean(defined)) if defined else None)
    return Scores(*values)


def confusion(model: TreeModel, data: Dataset) -> ConfusionMatrix:
    if len(data) == 0:
        return ConfusionMatrix()
    data.label_codes()
    predicted, _ = model.predict_many(data.features)
    return ConfusionMatrix.from_labels(data.labels, predicted)


def format_metric(value: Optional[float], digits: int = 3) -> str:
    return UNDEFINED if value is None else f"{value:.{digits}f}"


@dataclass
class EvalReport:
    """Cross-validation outcome: pooled confusion matrix and scores plus the per-fold breakdown."""

    matrix: ConfusionMatrix
    fold_matrices: List[ConfusionMatrix]
    fold_leaves: List[int] = field(default_factory=list)
    config: Dict[str, object] = field(default_factory=dict)

    @property
    def scores(self) -> Scores:
        return score(self.matrix)

    @property
    def fold_scores(self) -> List[Scores]:
        return [score(m) for m in self.fold_matrices]

    @property
    def macro(self) -> Scores:
        return macro_scores(self.fold_scores)

    @property
    def weighted(self) -> Scores:
        return weighted_scores(self.matrix)

    @property
    def mean_leaves(self) -> float:
        return float(np.mean(self.fold_leaves)) if self.fold_leaves else float("nan")

    @property
    def degenerate(self) -> bool:
        """True when some fold trained a single-leaf model."""
        return any(n == 1 for n in self.fold_leaves)

    @classmethod
    def from_folds(
        cls, fold_matrices: Sequence[ConfusionMatrix], fold_leaves: Sequence[int], config: Optional[dict] = None
    ) -> "EvalReport":
        pooled = sum(fold_matrices, ConfusionMatrix())
        return cls(
            matrix=pooled, fold_matrices=list(fold_matrices), fold_leaves=list(fold_leaves), config=config or {}
        )

    def row(self) -> Dict[str, object]:
        """Flat record of the pooled, macro and weighted scores, counts and model size."""
        record: Dict[str, object] = {}
        for prefix, scores in (("", self.scores), ("macro_", self.macro), ("weighted_", self.weighted)):
            for name, value in zip(METRICS, scores):
                record[f"{prefix}{name}"] = value
        record.update(asdict(self.matrix))
        record["mean_leaves"] = self.mean_leaves
        record["degenerate"] = self.degenerate
        return record

    def to_dict(self) -> Dict[str, object]:
        return {
            "config": dict(self.config),
            "pooled": self.row(),
            "folds": [
                {**asdict(m), **dict(zip(METRICS, s)), "leaves": n}
                for m, s, n in zip(self.fold_matrices, self.fold_scores, self.fold_leaves)
            ],
        }

    def summary(self) -> str:
        s = self.scores
        return " ".join(f"{name}={format_metric(value)}" for name, value in zip(METRICS, s)) + (
            f" (tp={self.matrix.tp} fn={self.matrix.fn} fp={self.matrix.fp} tn={self.matrix.tn})"
        )

