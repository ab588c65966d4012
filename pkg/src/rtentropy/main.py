import logging

import typer

from rtentropy import __version__
from rtentropy.scripts.featurize import featurize
from rtentropy.scripts.plot_sweep import plot_sweep_report
from rtentropy.scripts.predict import predict
from rtentropy.scripts.smote import smote_csv
from rtentropy.scripts.stream import stream
from rtentropy.scripts.sweep import sweep
from rtentropy.scripts.synth import synth
from rtentropy.scripts.train import train_model

app = typer.Typer(help="Runtime entropy failure detection: traces -> entropy features -> C4.5.")


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug messages.")):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger(__name__).debug("rtentropy %s", __version__)


app.command()(featurize)
app.command(name="train")(train_model)
app.command(name="smote")(smote_csv)
app.command()(predict)
app.command()(sweep)
app.command()(stream)
app.command()(synth)
app.command(name="plot-sweep")(plot_sweep_report)

if __name__ == "__main__":
    app()
