import logging
import os
from typing import List

import typer

from rtentropy.constants import (
    DEFAULT_CONFIDENCE_FACTOR,
    DEFAULT_FOLDS,
    DEFAULT_M_VALUES,
    DEFAULT_SEED,
    DEFAULT_SMOTE_NEIGHBORS,
    DEFAULT_SMOTE_TARGET,
    MAX_MIN_LEAF,
)
from rtentropy.datasets.dataset import read_csv
from rtentropy.eval.sweep import SMOTE_MODES, plot_sweep, report_table, run_sweep, smote_settings, write_report
from rtentropy.utils.cli_utils import exit_on_error
from rtentropy.utils.general_utils import dump_configs
from rtentropy.utils.parallel_utils import LOOP_MODES

logger = logging.getLogger(__name__)

app = typer.Typer()


@app.command()
def sweep(
    csv: str = typer.Argument(..., help="Labeled feature CSV."),
    out: str = typer.Option(..., "--out", "-o", help="Machine-readable report CSV to write."),
    m_values: List[int] = typer.Option(
        None, "--m", min=2, max=MAX_MIN_LEAF, help="Value of M; repeat for several. Default: 2 10 50 100 200."
    ),
    smote: str = typer.Option("both", help=f"SMOTE setting, one of {SMOTE_MODES}."),
    smote_target: List[float] = typer.Option(
        None, help="SMOTE target minority fraction; repeat for several settings. Default: 0.2."
    ),
    smote_k: int = typer.Option(DEFAULT_SMOTE_NEIGHBORS, min=1, help="SMOTE nearest neighbors."),
    smote_amount: int = typer.Option(None, min=1, help="Force this many synthetic copies per minority instance."),
    smote_before_cv: bool = typer.Option(False, help="Oversample the whole dataset before drawing folds."),
    confidence_factor: float = typer.Option(DEFAULT_CONFIDENCE_FACTOR, "--cf", help="Pruning confidence factor."),
    folds: int = typer.Option(DEFAULT_FOLDS, min=2, help="Number of cross-validation folds."),
    seed: int = typer.Option(DEFAULT_SEED, help="Random seed."),
    plot: str = typer.Option(None, help="Also write a PNG plot of the metrics against M."),
    mode: str = typer.Option("seq", help=f"Fold loop mode, one of {LOOP_MODES}."),
):
    """
    Runs k-fold cross-validation for every (M, SMOTE) cell and prints a Parameter M / If SMOTE / Precision /
    TPR / FPR / F1-measure table. The effective settings are saved next to the report as <out>.configs.yaml.

    Example:
        rtentropy sweep features.csv --out sweep.csv --m 2 --m 10 --smote both
    """
    m_values = list(m_values or DEFAULT_M_VALUES)
    targets = list(smote_target or [DEFAULT_SMOTE_TARGET])
    with exit_on_error(csv):
        settings = smote_settings(
            smote, targets=targets, k=smote_k, amount=smote_amount, before_cv=smote_before_cv
        )
        data = read_csv(csv)
        df = run_sweep(
            data,
            m_values=m_values,
            settings=settings,
            confidence_factor=confidence_factor,
            k=folds,
            seed=seed,
            mode=mode,
        )
        write_report(df, out)
        configs = {
            "csv": csv,
            "m_values": m_values,
            "confidence_factor": confidence_factor,
            "folds": folds,
            "seed": seed,
            "smote": {
                "mode": smote,
                "targets": targets,
                "k": smote_k,
                "amount": smote_amount,
                "before_cv": smote_before_cv,
            },
        }
        dump_configs(os.path.dirname(out), configs, os.path.basename(out) + ".configs.yaml")
        if plot:
            plot_sweep(df, plot, title=os.path.basename(csv))
    typer.echo(report_table(df), nl=False)
