import typer

from rtentropy.eval.sweep import plot_sweep, read_report
from rtentropy.utils.cli_utils import exit_on_error

app = typer.Typer()


@app.command()
def plot_sweep_report(
    report: str = typer.Argument(..., help="Report CSV written by `rtentropy sweep`."),
    out: str = typer.Option(..., "--out", "-o", help="PNG file to write."),
    title: str = typer.Option(None, help="Figure title."),
):
    """
    Plots Precision, TPR, FPR and F1 against M for each SMOTE setting of a sweep report.
    """
    with exit_on_error(report):
        plot_sweep(read_report(report), out, title=title)
