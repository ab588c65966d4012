import logging
import os
import sys

import pandas as pd
import typer

from rtentropy.constants import CONFIDENCE, LABEL, TRACE_ID
from rtentropy.datasets.dataset import Dataset, read_csv
from rtentropy.models.c45 import TreeModel
from rtentropy.models.tree_io import load_model
from rtentropy.scripts.featurize import featurize_dir
from rtentropy.utils.cli_utils import exit_on_error

logger = logging.getLogger(__name__)

app = typer.Typer()


def predict_frame(model: TreeModel, data: Dataset) -> pd.DataFrame:
    labels, confidences = model.predict_many(data.features)
    return pd.DataFrame({TRACE_ID: data.trace_ids, LABEL: labels, CONFIDENCE: confidences})


@app.command()
def predict(
    model_file: str = typer.Argument(..., help="Model file written by `rtentropy train`."),
    source: str = typer.Argument(..., help="Feature CSV, or a directory of trace files to featurize first."),
    out: str = typer.Option(None, "--out", "-o", help="Prediction CSV to write; standard output if omitted."),
    pattern: str = typer.Option("*.trace", help="Glob selecting trace files when SOURCE is a directory."),
    lenient: bool = typer.Option(False, help="Repair unbalanced traces instead of rejecting them."),
):
    """
    Classifies every instance and writes `trace_id,label,confidence` rows.

    Example:
        rtentropy predict model.tree features.csv --out predictions.csv
    """
    with exit_on_error(source):
        model = load_model(model_file)
        if os.path.isdir(source):
            data, failures = featurize_dir(source, pattern=pattern, lenient=lenient)
            for failure in failures:
                logger.error("%s: %s", failure.path, failure.error)
        else:
            data, failures = read_csv(source, allow_unknown=True), []
        df = predict_frame(model, data)
        df.to_csv(out if out else sys.stdout, index=False, float_format="%.6f", lineterminator="\n")
    if failures:
        raise typer.Exit(code=1)
