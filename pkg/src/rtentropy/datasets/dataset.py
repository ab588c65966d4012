import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from rtentropy.constants import CLASSES, FEATURE_NAMES, LABEL, SYNTHETIC, TRACE_ID, UNKNOWN
from rtentropy.errors import BadLabelError, EmptyDatasetError, SchemaMismatchError

logger = logging.getLogger(__name__)

CSV_COLUMNS = [TRACE_ID, *FEATURE_NAMES, LABEL]
MANIFEST_COLUMNS = [TRACE_ID, LABEL]
_TRUE_VALUES = {"true": True, "false": False, "1": True, "0": False}


@dataclass(frozen=True)
class LabeledInstance:
    trace_id: str
    features: Tuple[float, ...]
    label: str
    synthetic: bool = False


class Dataset:
    """An immutable, ordered collection of labeled feature vectors.

    Columns are held as read-only numpy arrays; every transformation returns a new Dataset.
    """

    def __init__(
        self,
        trace_ids: Sequence[str],
        features,
        labels: Sequence[str],
        synthetic: Optional[Sequence[bool]] = None,
        feature_names: Sequence[str] = FEATURE_NAMES,
        allow_unknown: bool = False,
    ):
        self._feature_names = tuple(feature_names)
        self._trace_ids = np.array(list(trace_ids), dtype=object)
        self._labels = np.array(list(labels), dtype=object)
        n = len(self._trace_ids)
        shape = (n, len(self._feature_names))
        try:
            matrix = np.array(features, dtype=np.float64)
        except (TypeError, ValueError):
            raise SchemaMismatchError("feature values must form a numeric matrix") from None
        if matrix.shape != shape and not (n == 0 and matrix.size == 0):
            raise SchemaMismatchError(f"feature matrix has shape {matrix.shape}, expected {shape}")
        self._features = matrix.reshape(shape)
        if synthetic is None:
            synthetic = np.zeros(n, dtype=bool)
        self._synthetic = np.array(synthetic, dtype=bool)

        if len(self._labels) != n or len(self._synthetic) != n:
            raise SchemaMismatchError("trace_ids, features, labels and synthetic flags must have equal length")
        if not np.all(np.isfinite(self._features)):
            raise SchemaMismatchError("feature values must be finite")
        allowed = set(CLASSES) | ({UNKNOWN} if allow_unknown else set())
        for i, label in enumerate(self._labels):
            if label not in allowed:
                raise BadLabelError(i + 1, label)

        for array in (self._trace_ids, self._labels, self._features, self._synthetic):
            array.setflags(write=False)

    @classmethod
    def from_instances(
        cls, instances: Iterable[LabeledInstance], feature_names: Sequence[str] = FEATURE_NAMES, **kwargs
    ) -> "Dataset":
        instances = list(instances)
        return cls(
            trace_ids=[instance.trace_id for instance in instances],
            features=[instance.features for instance in instances],
            labels=[instance.label for instance in instances],
            synthetic=[instance.synthetic for instance in instances],
            feature_names=feature_names,
            **kwargs,
        )

    @property
    def feature_names(self) -> Tuple[str, ...]:
        return self._feature_names

    @property
    def trace_ids(self) -> np.ndarray:
        return self._trace_ids

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def synthetic(self) -> np.ndarray:
        return self._synthetic

    @property
    def instances(self) -> List[LabeledInstance]:
        return [
            LabeledInstance(trace_id=t, features=tuple(float(v) for v in x), label=y, synthetic=bool(s))
            for t, x, y, s in zip(self._trace_ids, self._features, self._labels, self._synthetic)
        ]

    def __len__(self) -> int:
        return len(self._trace_ids)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self._feature_names == other._feature_names
            and np.array_equal(self._trace_ids, other._trace_ids)
            and np.array_equal(self._labels, other._labels)
            and np.array_equal(self._synthetic, other._synthetic)
            and np.array_equal(self._features, other._features)
        )

    def __repr__(self) -> str:
        return f"Dataset(n={len(self)}, classes={self.class_counts()}, synthetic={int(self._synthetic.sum())})"

    def class_counts(self) -> Dict[str, int]:
        return {label: int(np.sum(self._labels == label)) for label in CLASSES}

    def label_codes(self) -> np.ndarray:
        """Labels as indices into CLASSES."""
        codes = np.full(len(self), -1, dtype=np.int64)
        for code, label in enumerate(CLASSES):
            codes[self._labels == label] = code
        if np.any(codes < 0):
            raise SchemaMismatchError("dataset contains instances without a normal/failed label")
        return codes

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            trace_ids=self._trace_ids[indices],
            features=self._features[indices],
            labels=self._labels[indices],
            synthetic=self._synthetic[indices],
            feature_names=self._feature_names,
            allow_unknown=True,
        )

    def concat(self, other: "Dataset") -> "Dataset":
        if other.feature_names != self._feature_names:
            raise SchemaMismatchError(f"feature schemas differ: {self._feature_names} vs {other.feature_names}")
        return Dataset(
            trace_ids=np.concatenate([self._trace_ids, other.trace_ids]),
            features=np.vstack([self._features, other.features]),
            labels=np.concatenate([self._labels, other.labels]),
            synthetic=np.concatenate([self._synthetic, other.synthetic]),
            feature_names=self._feature_names,
            allow_unknown=True,
        )

    def require_trainable(self):
        if len(self) == 0:
            raise EmptyDatasetError("dataset has no instances")
        self.label_codes()

    def to_frame(self, include_synthetic: Optional[bool] = None) -> pd.DataFrame:
        if include_synthetic is None:
            include_synthetic = bool(self._synthetic.any())
        df = pd.DataFrame({TRACE_ID: self._trace_ids})
        for j, name in enumerate(self._feature_names):
            df[name] = self._features[:, j]
        df[LABEL] = self._labels
        if include_synthetic:
            df[SYNTHETIC] = np.where(self._synthetic, "true", "false")
        return df


def write_csv(data: Dataset, path: str, include_synthetic: Optional[bool] = None):
    """Writes the feature CSV with 17 significant digits so that floats round-trip exactly.

    The `synthetic` column is written only when the dataset holds SMOTE-generated instances,
    unless `include_synthetic` says otherwise.
    """
    if data.feature_names != FEATURE_NAMES:
        raise SchemaMismatchError(
            f"feature CSV requires columns {list(FEATURE_NAMES)}, got {list(data.feature_names)}"
        )
    df = data.to_frame(include_synthetic=include_synthetic)
    df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n", encoding="utf-8")


def _read_header(path: str) -> List[str]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return f.readline().rstrip("\r\n").split(",")


def read_csv(path: str, allow_unknown: bool = False) -> Dataset:
    """Reads a feature CSV with header `trace_id,h_a,h_b,h,label[,synthetic]`.

    Args:
        path (str): CSV file path.
        allow_unknown (bool): Accept the `unknown` label written for unlabeled traces.

    Returns:
        The Dataset, rows in file order.
    """
    columns = _read_header(path)
    if columns not in (CSV_COLUMNS, CSV_COLUMNS + [SYNTHETIC]):
        raise SchemaMismatchError(f"{path}: header {','.join(columns)!r} is not {','.join(CSV_COLUMNS)}[,synthetic]")
    df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")

    allowed = set(CLASSES) | ({UNKNOWN} if allow_unknown else set())
    features = np.empty((len(df), len(FEATURE_NAMES)), dtype=np.float64)
    synthetic = np.zeros(len(df), dtype=bool)
    for i, row in enumerate(df.itertuples(index=False)):
        line_no = i + 2
        record = row._asdict()
        if record[LABEL] not in allowed:
            raise BadLabelError(line_no, record[LABEL])
        try:
            features[i] = [float(record[name]) for name in FEATURE_NAMES]
        except ValueError:
            raise SchemaMismatchError(f"{path}: line {line_no}: feature values must be numeric") from None
        if SYNTHETIC in record:
            flag = record[SYNTHETIC].strip().lower()
            if flag not in _TRUE_VALUES:
                raise SchemaMismatchError(f"{path}: line {line_no}: synthetic flag must be true or false")
            synthetic[i] = _TRUE_VALUES[flag]
    if not np.all(np.isfinite(features)):
        raise SchemaMismatchError(f"{path}: feature values must be finite")

    return Dataset(
        trace_ids=df[TRACE_ID].tolist(),
        features=features,
        labels=df[LABEL].tolist(),
        synthetic=synthetic,
        allow_unknown=allow_unknown,
    )


def read_manifest(path: str) -> Dict[str, str]:
    """Reads a `trace_id,label` manifest into a dict."""
    columns = _read_header(path)
    if columns != MANIFEST_COLUMNS:
        raise SchemaMismatchError(f"{path}: manifest header must be {','.join(MANIFEST_COLUMNS)}")
    df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    manifest = {}
    for i, (trace_id, label) in enumerate(zip(df[TRACE_ID], df[LABEL])):
        if label not in CLASSES:
            raise BadLabelError(i + 2, label)
        manifest[trace_id] = label
    return manifest


def write_manifest(labels: Dict[str, str], path: str):
    df = pd.DataFrame({TRACE_ID: list(labels.keys()), LABEL: list(labels.values())}, columns=MANIFEST_COLUMNS)
    df.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
