import glob
import logging
import os
from typing import NamedTuple, Optional, Tuple

import typer

from rtentropy.constants import UNKNOWN
from rtentropy.datasets.dataset import Dataset, read_manifest, write_csv
from rtentropy.errors import RuntimeEntropyError
from rtentropy.features.entropy import featurize_file
from rtentropy.utils.cli_utils import exit_on_error
from rtentropy.utils.parallel_utils import LOOP_MODES, loop_func

logger = logging.getLogger(__name__)

app = typer.Typer()


class FileResult(NamedTuple):
    path: str
    trace_id: str
    features: Optional[Tuple[float, float, float]]
    error: Optional[str]


def featurize_one(path: str, lenient: bool = False) -> FileResult:
    """Featurizes one trace file, capturing its error instead of raising."""
    trace_id = os.path.splitext(os.path.basename(path))[0]
    try:
        trace_id, features = featurize_file(path, lenient=lenient)
    except (RuntimeEntropyError, OSError, UnicodeDecodeError) as e:
        return FileResult(path, trace_id, None, str(e))
    return FileResult(path, trace_id, features.as_vector(), None)


def featurize_dir(
    trace_dir: str, manifest: Optional[str] = None, pattern: str = "*.trace", lenient: bool = False, mode: str = "seq"
) -> Tuple[Dataset, list]:
    """Featurizes every trace file in `trace_dir`.

    Returns:
        (dataset of the traces that succeeded sorted by trace_id, list of failed FileResults)
    """
    if not os.path.isdir(trace_dir):
        raise NotADirectoryError(f"{trace_dir} is not a directory")
    labels = read_manifest(manifest) if manifest else {}
    paths = sorted(p for p in glob.glob(os.path.join(trace_dir, pattern)) if os.path.isfile(p))
    if not paths:
        logger.warning("No files matching %s in %s; writing an empty feature CSV.", pattern, trace_dir)

    results = loop_func(featurize_one, paths, mode=mode, kwargs={"lenient": lenient})
    failures = [r for r in results if r.error is not None]
    rows = sorted((r for r in results if r.error is None), key=lambda r: r.trace_id)
    seen = set()
    for row in rows:
        if row.trace_id in seen:
            raise RuntimeEntropyError(f"duplicate trace id {row.trace_id!r} in {trace_dir}")
        seen.add(row.trace_id)

    unlabeled = [r.trace_id for r in rows if r.trace_id not in labels]
    if labels and unlabeled:
        logger.warning("%d trace(s) have no manifest entry and are labeled %s.", len(unlabeled), UNKNOWN)
    missing = sorted(set(labels) - {r.trace_id for r in results})
    if missing:
        logger.warning("%d manifest entries have no trace file, e.g. %s", len(missing), missing[0])

    data = Dataset(
        trace_ids=[r.trace_id for r in rows],
        features=[r.features for r in rows],
        labels=[labels.get(r.trace_id, UNKNOWN) for r in rows],
        allow_unknown=True,
    )
    return data, failures


@app.command()
def featurize(
    trace_dir: str = typer.Argument(..., help="Directory of trace files."),
    out: str = typer.Option(..., "--out", "-o", help="Feature CSV to write."),
    manifest: str = typer.Option(None, help="Label manifest CSV with header trace_id,label."),
    pattern: str = typer.Option("*.trace", help="Glob selecting the trace files inside TRACE_DIR."),
    lenient: bool = typer.Option(False, help="Repair unbalanced traces instead of rejecting them."),
    mode: str = typer.Option("seq", help=f"Loop mode, one of {LOOP_MODES}."),
):
    """
    Computes h_a, h_b and h for every trace in TRACE_DIR and writes one CSV row per trace, sorted by trace_id.

    Example:
        rtentropy featurize traces/ --manifest traces/manifest.csv --out features.csv
    """
    with exit_on_error(trace_dir):
        data, failures = featurize_dir(trace_dir, manifest=manifest, pattern=pattern, lenient=lenient, mode=mode)
        write_csv(data, out, include_synthetic=False)
    logger.info("Wrote %d feature rows to %s", len(data), out)
    for failure in failures:
        logger.error("%s: %s", failure.path, failure.error)
    if failures:
        logger.error("%d of %d trace files failed.", len(failures), len(failures) + len(data))
        raise typer.Exit(code=1)
