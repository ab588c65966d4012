import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from rtentropy.constants import FAILED, NORMAL
from rtentropy.datasets.dataset import write_manifest
from rtentropy.errors import InvalidSpecError
from rtentropy.synth.faults import FaultSpec, apply_faults
from rtentropy.synth.workload import WorkloadModel, WorkloadSpec, copy_forest, render_trace
from rtentropy.utils.general_utils import get_resource
from rtentropy.utils.parallel_utils import loop_func

logger = logging.getLogger(__name__)

TRACE_SUFFIX = ".trace"
MANIFEST_FILE = "manifest.csv"
DEFAULT_WORKLOAD_RESOURCE = "synth_workload"


def trace_id(run_index: int) -> str:
    return f"run{run_index:06d}"


class SyntheticRun(NamedTuple):
    trace_id: str
    text: str
    label: str
    activated: Tuple[str, ...]


def generate_run(spec: WorkloadSpec, run_index: int, faults: Sequence[FaultSpec] = ()) -> SyntheticRun:
    """Generates one run; it is `failed` iff a fault activated and changed the emitted trace."""
    model = WorkloadModel(spec)
    roots = model.sample_run(run_index)
    clean = render_trace(roots)
    if not faults:
        return SyntheticRun(trace_id(run_index), clean, NORMAL, ())

    faulty_roots = copy_forest(roots)
    rng = np.random.default_rng([spec.seed, run_index, 1])
    activated = apply_faults(faulty_roots, faults, model, rng)
    text = render_trace(faulty_roots) if activated else clean
    label = FAILED if activated and text != clean else NORMAL
    return SyntheticRun(trace_id(run_index), text, label, tuple(activated))


def _generate_run_task(task: Tuple[WorkloadSpec, int, Tuple[FaultSpec, ...]]) -> SyntheticRun:
    spec, run_index, faults = task
    return generate_run(spec, run_index, faults)


def generate(
    spec: WorkloadSpec,
    n_runs: int,
    faults: Optional[Sequence[FaultSpec]] = None,
    start_index: int = 0,
    mode: str = "seq",
) -> List[SyntheticRun]:
    """Generates `n_runs` runs with indices start_index, start_index + 1, ...

    Args:
        spec (WorkloadSpec): Program shape and seed.
        n_runs (int): Number of runs.
        faults (Sequence[FaultSpec], optional): Fault plan applied to every run. None or empty gives normal runs only.
        start_index (int): Index of the first run; ids and per-run seeds derive from it.
        mode (str): "seq" or "ray"; output is identical in both.

    Returns:
        The runs in index order.
    """
    if n_runs < 0:
        raise InvalidSpecError(f"n_runs must be non-negative, got {n_runs}")
    faults = tuple(faults or ())
    for fault in faults:
        fault.validate_for(spec.functions)
    tasks = [(spec, i, faults) for i in range(start_index, start_index + n_runs)]
    return loop_func(_generate_run_task, tasks, mode=mode)


def write_runs(runs: Sequence[SyntheticRun], out_dir: str) -> Dict[str, str]:
    """Writes `<trace_id>.trace` files and `manifest.csv` into `out_dir`. Returns the manifest."""
    os.makedirs(out_dir, exist_ok=True)
    manifest = {}
    for run in runs:
        with open(os.path.join(out_dir, run.trace_id + TRACE_SUFFIX), "w", encoding="utf-8", newline="\n") as f:
            f.write(run.text)
        manifest[run.trace_id] = run.label
    write_manifest(manifest, os.path.join(out_dir, MANIFEST_FILE))
    return manifest


@dataclass(frozen=True)
class SynthConfig:
    """A synthetic benchmark: workload, run counts and the fault plan of the faulty batch."""

    workload: WorkloadSpec
    normal_runs: int
    faulty_runs: int
    faults: Tuple[FaultSpec, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.normal_runs < 0 or self.faulty_runs < 0:
            raise InvalidSpecError("run counts must be non-negative")
        if self.faulty_runs > 0 and not self.faults:
            raise InvalidSpecError("faulty runs requested without any fault")
        for fault in self.faults:
            fault.validate_for(self.workload.functions)

    @classmethod
    def from_dict(cls, configs: dict) -> "SynthConfig":
        unknown = sorted(set(configs) - {"workload", "runs", "faults"})
        if unknown:
            raise InvalidSpecError(f"unknown config sections {unknown}")
        runs = configs.get("runs") or {}
        unknown_runs = sorted(set(runs) - {"normal", "faulty"})
        if unknown_runs:
            raise InvalidSpecError(f"unknown keys under runs: {unknown_runs}")
        return cls(
            workload=WorkloadSpec.from_dict(configs.get("workload") or {}),
            normal_runs=int(runs.get("normal", 0)),
            faulty_runs=int(runs.get("faulty", 0)),
            faults=tuple(FaultSpec.from_dict(f) for f in configs.get("faults") or []),
        )

    def to_dict(self) -> dict:
        workload = asdict(self.workload)
        if workload["base_durations"] is None:
            del workload["base_durations"]
        else:
            workload["base_durations"] = list(workload["base_durations"])
        return {
            "workload": workload,
            "runs": {"normal": self.normal_runs, "faulty": self.faulty_runs},
            "faults": [asdict(f) for f in self.faults],
        }


def load_synth_config(config_file: Optional[str] = None) -> SynthConfig:
    """Reads a synthetic benchmark config; keys it leaves out fall back to the packaged default.

    Mappings merge key by key, while a `faults` list in the file replaces the default list.
    """
    return SynthConfig.from_dict(get_resource(DEFAULT_WORKLOAD_RESOURCE, custom_file=config_file))


def generate_benchmark(config: SynthConfig, mode: str = "seq") -> List[SyntheticRun]:
    """Normal runs first, then faulty runs; run indices and trace ids continue across both batches."""
    normal = generate(config.workload, config.normal_runs, faults=None, start_index=0, mode=mode)
    faulty = generate(
        config.workload, config.faulty_runs, faults=config.faults, start_index=config.normal_runs, mode=mode
    )
    runs = normal + faulty
    n_failed = sum(run.label == FAILED for run in runs)
    logger.info("Generated %d runs: %d normal, %d failed.", len(runs), len(runs) - n_failed, n_failed)
    return runs
