import logging
import sys

import typer

from rtentropy.models.monitor import TraceMonitor
from rtentropy.models.tree_io import load_model
from rtentropy.utils.cli_utils import exit_on_error

logger = logging.getLogger(__name__)

app = typer.Typer()


@app.command()
def stream(
    model_file: str = typer.Argument(..., help="Model file written by `rtentropy train`."),
    lenient: bool = typer.Option(False, help="Skip malformed lines and repair unbalanced frames."),
):
    """
    Reads trace events from standard input and prints `<root_function> <normal|failed> <confidence>`
    each time a top-level frame completes.

    Example:
        tail -f app.trace | rtentropy stream model.tree --lenient
    """
    with exit_on_error(model_file):
        model = load_model(model_file)
    monitor = TraceMonitor(model, lenient=lenient)
    with exit_on_error("<stdin>"):
        for verdict in monitor.run(sys.stdin):
            typer.echo(verdict.to_line())
            sys.stdout.flush()
