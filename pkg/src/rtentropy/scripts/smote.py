import logging

import typer

from rtentropy.constants import DEFAULT_SEED, DEFAULT_SMOTE_NEIGHBORS, DEFAULT_SMOTE_TARGET
from rtentropy.datasets.dataset import read_csv, write_csv
from rtentropy.datasets.smote import SmoteConfig, smote
from rtentropy.utils.cli_utils import exit_on_error

logger = logging.getLogger(__name__)

app = typer.Typer()


@app.command()
def smote_csv(
    csv: str = typer.Argument(..., help="Labeled feature CSV."),
    out: str = typer.Option(..., "--out", "-o", help="Oversampled feature CSV to write."),
    target: float = typer.Option(DEFAULT_SMOTE_TARGET, help="Target minority fraction in (0, 1)."),
    k: int = typer.Option(DEFAULT_SMOTE_NEIGHBORS, "--k", min=1, help="Nearest minority neighbors."),
    amount: int = typer.Option(None, min=1, help="Force this many synthetic copies per minority instance."),
    seed: int = typer.Option(DEFAULT_SEED, help="Random seed."),
):
    """
    Oversamples the minority class of a feature CSV; synthetic rows are appended and flagged in a `synthetic` column.

    Example:
        rtentropy smote features.csv --out balanced.csv --target 0.2
    """
    with exit_on_error(csv):
        config = SmoteConfig(target=target, k=k, amount=amount)
        data = read_csv(csv)
        balanced = smote(data, target_minority_fraction=config.target, k=config.k, seed=seed, amount=config.amount)
        write_csv(balanced, out)
    logger.info("Wrote %d rows (%d synthetic) to %s", len(balanced), int(balanced.synthetic.sum()), out)
