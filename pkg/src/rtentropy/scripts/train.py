import logging

import typer

from rtentropy.constants import (
    DEFAULT_CONFIDENCE_FACTOR,
    DEFAULT_MIN_LEAF,
    DEFAULT_SEED,
    DEFAULT_SMOTE_NEIGHBORS,
    DEFAULT_SMOTE_TARGET,
    MAX_MIN_LEAF,
)
from rtentropy.datasets.dataset import read_csv
from rtentropy.datasets.smote import SmoteConfig, smote
from rtentropy.models.c45 import TrainConfig, train
from rtentropy.models.tree_io import save_model
from rtentropy.utils.cli_utils import exit_on_error

logger = logging.getLogger(__name__)

app = typer.Typer()


@app.command()
def train_model(
    csv: str = typer.Argument(..., help="Labeled feature CSV."),
    out: str = typer.Option(..., "--out", "-o", help="Model file to write."),
    min_leaf: int = typer.Option(
        DEFAULT_MIN_LEAF,
        "--min-leaf",
        "-m",
        min=2,
        max=MAX_MIN_LEAF,
        help="Parameter M, minimum instances per branch.",
    ),
    confidence_factor: float = typer.Option(
        DEFAULT_CONFIDENCE_FACTOR, "--cf", help="Pruning confidence factor CF in (0, 0.5]."
    ),
    prune: bool = typer.Option(True, help="Apply pessimistic error pruning."),
    use_smote: bool = typer.Option(False, "--smote/--no-smote", help="Oversample the minority class first."),
    smote_target: float = typer.Option(DEFAULT_SMOTE_TARGET, help="SMOTE target minority fraction in (0, 1)."),
    smote_k: int = typer.Option(DEFAULT_SMOTE_NEIGHBORS, min=1, help="SMOTE nearest neighbors."),
    smote_amount: int = typer.Option(None, min=1, help="Force this many synthetic copies per minority instance."),
    seed: int = typer.Option(DEFAULT_SEED, help="Random seed."),
):
    """
    Trains a C4.5 tree on a labeled feature CSV and writes it in the text model format.

    Example:
        rtentropy train features.csv --out model.tree --min-leaf 2 --cf 0.25
    """
    with exit_on_error(csv):
        cfg = TrainConfig(min_leaf=min_leaf, confidence_factor=confidence_factor, seed=seed, prune=prune)
        data = read_csv(csv)
        if use_smote:
            config = SmoteConfig(target=smote_target, k=smote_k, amount=smote_amount)
            data = smote(data, target_minority_fraction=config.target, k=config.k, seed=seed, amount=config.amount)
        model = train(data, cfg)
        save_model(model, out)
    logger.info("Trained on %d instances: %d leaves, depth %d.", len(data), model.n_leaves, model.depth)
