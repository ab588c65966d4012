"""Parameter sweep over M and SMOTE settings, one cross-validation per cell."""
import logging
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from rtentropy.constants import (
    DEFAULT_CONFIDENCE_FACTOR,
    DEFAULT_FOLDS,
    DEFAULT_M_VALUES,
    DEFAULT_SEED,
    DEFAULT_SMOTE_NEIGHBORS,
    DEFAULT_SMOTE_TARGET,
)
from rtentropy.datasets.dataset import Dataset
from rtentropy.datasets.smote import SmoteConfig
from rtentropy.errors import SchemaMismatchError
from rtentropy.eval.crossval import crossval
from rtentropy.eval.metrics import METRICS, UNDEFINED, format_metric
from rtentropy.models.c45 import TrainConfig

logger = logging.getLogger(__name__)

PARAMETER_M = "parameter_m"
SMOTE = "smote"
SMOTE_MODES = ("on", "off", "both")
NO_SMOTE = "No"

TABLE_HEADERS = {
    PARAMETER_M: "Parameter M",
    SMOTE: "If SMOTE",
    "precision": "Precision",
    "tpr": "TPR",
    "fpr": "FPR",
    "f1": "F1-measure",
}


def smote_settings(
    smote_mode: str = "both",
    targets: Sequence[float] = (DEFAULT_SMOTE_TARGET,),
    k: int = DEFAULT_SMOTE_NEIGHBORS,
    amount: Optional[int] = None,
    before_cv: bool = False,
) -> List[Tuple[str, Optional[SmoteConfig]]]:
    """Labeled SMOTE settings of a sweep, the no-SMOTE setting first.

    A single target is labeled `Yes`; several targets are labeled `SMOTE-1`, `SMOTE-2`, ... in the given order.
    """
    if smote_mode not in SMOTE_MODES:
        raise ValueError(f"smote mode must be one of {SMOTE_MODES}, got {smote_mode!r}")
    if not targets and smote_mode != "off":
        raise ValueError("at least one SMOTE target is required")
    settings: List[Tuple[str, Optional[SmoteConfig]]] = []
    if smote_mode in ("off", "both"):
        settings.append((NO_SMOTE, None))
    if smote_mode in ("on", "both"):
        for i, target in enumerate(targets, start=1):
            label = "Yes" if len(targets) == 1 else f"SMOTE-{i}"
            settings.append((label, SmoteConfig(target=target, k=k, amount=amount, before_cv=before_cv)))
    return settings


def run_sweep(
    data: Dataset,
    m_values: Sequence[int] = DEFAULT_M_VALUES,
    settings: Optional[Sequence[Tuple[str, Optional[SmoteConfig]]]] = None,
    confidence_factor: float = DEFAULT_CONFIDENCE_FACTOR,
    k: int = DEFAULT_FOLDS,
    seed: int = DEFAULT_SEED,
    mode: str = "seq",
) -> pd.DataFrame:
    """Cross-validates every (M, SMOTE setting) cell.

    Args:
        data (Dataset): Labeled dataset.
        m_values (Sequence[int]): Values of M, in row order.
        settings (Sequence): Labeled SMOTE settings as built by `smote_settings`. Defaults to off and on.
        confidence_factor (float): Pruning CF shared by all cells.
        k (int): Number of folds.
        seed (int): Seed shared by all cells, so cells differ only in M and SMOTE.
        mode (str): "seq" or "ray" fold loop.

    Returns:
        One row per cell with pooled, macro and weighted scores, pooled counts, mean leaf count and a
        `degenerate` flag marking cells where some fold model was a single leaf.
    """
    if settings is None:
        settings = smote_settings()
    rows = []
    for m in m_values:
        cfg = TrainConfig(min_leaf=m, confidence_factor=confidence_factor, seed=seed)
        for label, smote_config in settings:
            report = crossval(data, cfg, k=k, seed=seed, smote_config=smote_config, mode=mode)
            if report.degenerate:
                logger.warning("M=%d SMOTE=%s: some fold model is a single leaf.", m, label)
            rows.append({PARAMETER_M: m, SMOTE: label, **report.row()})
    return pd.DataFrame(rows)


def report_table(df: pd.DataFrame, digits: int = 3) -> str:
    """Human-readable sweep table: Parameter M, If SMOTE, Precision, TPR, FPR, F1-measure."""
    table = df[list(TABLE_HEADERS)].copy()
    for metric in METRICS:
        table[metric] = [format_metric(None if pd.isna(v) else v, digits) for v in table[metric]]
    table = table.rename(columns=TABLE_HEADERS)
    if "degenerate" in df.columns and df["degenerate"].any():
        table["Note"] = ["single-leaf" if flag else "" for flag in df["degenerate"]]
    return table.to_string(index=False) + "\n"


def write_report(df: pd.DataFrame, path: str):
    """Writes the machine-readable sweep CSV; undefined metrics are written as `undefined`."""
    df.to_csv(path, index=False, na_rep=UNDEFINED, float_format="%.17g", lineterminator="\n")


def read_report(path: str) -> pd.DataFrame:
    df = pd.read_csv(path, na_values=[UNDEFINED], keep_default_na=False)
    missing = [c for c in (PARAMETER_M, SMOTE, *METRICS) if c not in df.columns]
    if missing:
        raise SchemaMismatchError(f"{path}: sweep report lacks columns {missing}")
    return df


def plot_sweep(df: pd.DataFrame, path: str, title: Optional[str] = None):
    """Plots Precision, TPR, FPR and F1 against M, one line per SMOTE setting, into a PNG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(2, 2, figsize=(10, 7), dpi=150, sharex=True)
    for ax, metric in zip(axes.flat, METRICS):
        for label, group in df.groupby(SMOTE, sort=False):
            group = group.sort_values(PARAMETER_M)
            ax.plot(group[PARAMETER_M], group[metric].astype(float), marker="o", label=f"SMOTE {label}")
        ax.set(title=TABLE_HEADERS[metric], xlabel="Parameter M", ylim=(-0.02, 1.02))
        ax.grid(True)
    axes.flat[0].legend()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    logger.info("Sweep plot saved to %s", path)
