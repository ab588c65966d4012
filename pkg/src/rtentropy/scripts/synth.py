import dataclasses
import logging

import typer

from rtentropy.synth.generator import generate_benchmark, load_synth_config, write_runs
from rtentropy.utils.cli_utils import exit_on_error
from rtentropy.utils.general_utils import dump_configs
from rtentropy.utils.parallel_utils import LOOP_MODES

logger = logging.getLogger(__name__)

app = typer.Typer()


@app.command()
def synth(
    config_file: str = typer.Argument(None, help="YAML benchmark config; the packaged default when omitted."),
    out: str = typer.Option(..., "--out", "-o", help="Directory for the trace files and manifest.csv."),
    normal: int = typer.Option(None, min=0, help="Override runs.normal."),
    faulty: int = typer.Option(None, min=0, help="Override runs.faulty."),
    seed: int = typer.Option(None, min=0, help="Override workload.seed."),
    mode: str = typer.Option("seq", help=f"Loop mode, one of {LOOP_MODES}."),
):
    """
    Generates synthetic traces with injected faults: runs.normal fault-free runs followed by runs.faulty runs
    with the fault plan, written as <trace_id>.trace files plus a trace_id,label manifest.

    Example:
        rtentropy synth sample_configs/synth_benchmark.yaml --out traces/
    """
    with exit_on_error(config_file or "default synth config"):
        config = load_synth_config(config_file)
        overrides = {}
        if normal is not None:
            overrides["normal_runs"] = normal
        if faulty is not None:
            overrides["faulty_runs"] = faulty
        if seed is not None:
            overrides["workload"] = dataclasses.replace(config.workload, seed=seed)
        config = dataclasses.replace(config, **overrides)
        runs = generate_benchmark(config, mode=mode)
        write_runs(runs, out)
        dump_configs(out, config.to_dict(), "synth_configs.yaml")
    logger.info("Wrote %d traces and manifest.csv to %s", len(runs), out)
