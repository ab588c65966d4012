import logging
from dataclasses import asdict
from typing import NamedTuple, Optional, Tuple

from rtentropy.constants import DEFAULT_FOLDS
from rtentropy.datasets.dataset import Dataset
from rtentropy.datasets.folds import stratified_kfold
from rtentropy.datasets.smote import SmoteConfig, smote
from rtentropy.eval.metrics import ConfusionMatrix, EvalReport, confusion
from rtentropy.models.c45 import TrainConfig, train
from rtentropy.utils.parallel_utils import loop_func

logger = logging.getLogger(__name__)


class FoldTask(NamedTuple):
    index: int
    train: Dataset
    test: Dataset
    cfg: TrainConfig
    smote: Optional[SmoteConfig]
    smote_seed: int


def evaluate_fold(task: FoldTask) -> Tuple[ConfusionMatrix, int]:
    """Trains on one fold's training part (oversampled if configured) and scores its test part.

    Returns:
        (test confusion matrix, leaf count of the fold model)
    """
    train_data = task.train
    if task.smote is not None:
        train_data = smote(
            train_data,
            target_minority_fraction=task.smote.target,
            k=task.smote.k,
            seed=task.smote_seed,
            amount=task.smote.amount,
        )
    model = train(train_data, task.cfg)
    matrix = confusion(model, task.test)
    logger.debug("Fold %d: %s with %d leaves", task.index, matrix, model.n_leaves)
    return matrix, model.n_leaves


def crossval(
    data: Dataset,
    cfg: Optional[TrainConfig] = None,
    k: int = DEFAULT_FOLDS,
    seed: Optional[int] = None,
    smote_config: Optional[SmoteConfig] = None,
    mode: str = "seq",
) -> EvalReport:
    """Stratified k-fold cross-validation of the C4.5 learner.

    By default SMOTE runs inside each training fold with seed `seed + fold index`, so test folds
    only hold original instances. With `smote_config.before_cv` the whole dataset is
    oversampled once before the folds are drawn.

    Args:
        data (Dataset): Labeled dataset.
        cfg (TrainConfig, optional): Tree settings; its seed is used when `seed` is None.
        k (int): Number of folds.
        seed (int, optional): Seed for fold shuffling and SMOTE.
        smote_config (SmoteConfig, optional): Oversampling settings, None disables SMOTE.
        mode (str): "seq" or "ray"; both give identical reports.

    Returns:
        EvalReport with the pooled matrix of all test folds and the per-fold breakdown.
    """
    cfg = cfg or TrainConfig()
    seed = cfg.seed if seed is None else seed
    data.require_trainable()

    fold_smote = smote_config
    if smote_config is not None and smote_config.before_cv:
        data = smote(
            data,
            target_minority_fraction=smote_config.target,
            k=smote_config.k,
            seed=seed,
            amount=smote_config.amount,
        )
        fold_smote = None

    tasks = [
        FoldTask(
            index=i,
            train=data.subset(train_idx),
            test=data.subset(test_idx),
            cfg=cfg,
            smote=fold_smote,
            smote_seed=seed + i,
        )
        for i, (train_idx, test_idx) in enumerate(stratified_kfold(data, k=k, seed=seed))
    ]
    results = loop_func(evaluate_fold, tasks, mode=mode)

    config = {
        "min_leaf": cfg.min_leaf,
        "confidence_factor": cfg.confidence_factor,
        "prune": cfg.prune,
        "folds": k,
        "seed": seed,
        "smote": asdict(smote_config) if smote_config is not None else None,
    }
    report = EvalReport.from_folds(
        fold_matrices=[matrix for matrix, _ in results],
        fold_leaves=[leaves for _, leaves in results],
        config=config,
    )
    logger.info("M=%d SMOTE=%s: %s", cfg.min_leaf, "on" if smote_config else "off", report.summary())
    return report
