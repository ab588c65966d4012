import pytest
import yaml

from rtentropy.datasets.dataset import read_manifest
from rtentropy.errors import InvalidSpecError
from rtentropy.synth.faults import FaultSpec
from rtentropy.synth.generator import (
    SynthConfig,
    generate,
    generate_benchmark,
    generate_run,
    load_synth_config,
    trace_id,
    write_runs,
)
from rtentropy.synth.workload import WorkloadSpec
from rtentropy.trace.trace_model import compute_durations, parse_trace

SPEC = WorkloadSpec(n_functions=5, max_depth=4, branching=0.3, seed=11)
SKEW = FaultSpec("duration_skew", "func_01", intensity=3.0)


def test_trace_ids():
    assert trace_id(7) == "run000007"


def test_normal_runs_are_deterministic():
    first = generate(SPEC, 5)
    assert [run.trace_id for run in first] == [trace_id(i) for i in range(5)]
    assert all(run.label == "normal" and run.activated == () for run in first)
    assert first == generate(SPEC, 5)


def test_faulty_run_shares_the_clean_call_tree():
    clean = generate_run(SPEC, 3)
    faulty = generate_run(SPEC, 3, [SKEW])

    assert faulty.label == "failed"
    assert faulty.activated == ("duration_skew",)
    clean_durations = compute_durations(parse_trace(clean.text))
    faulty_durations = compute_durations(parse_trace(faulty.text))
    assert set(clean_durations.entries) == set(faulty_durations.entries)
    assert faulty_durations["func_01"] > 2 * clean_durations["func_01"]
    assert faulty_durations["main"] == clean_durations["main"]


def test_fault_that_never_activates_leaves_run_normal():
    rare = FaultSpec("duration_skew", "func_01", intensity=3.0, activation_probability=1e-9)
    runs = generate(SPEC, 10, faults=[rare])
    assert all(run.label == "normal" for run in runs)


def test_fault_without_visible_effect_leaves_run_normal():
    run = generate_run(SPEC, 0, [FaultSpec("duration_skew", "func_01", intensity=1.0)])

    assert run.activated == ("duration_skew",)
    assert run.label == "normal"


def test_generate_validates_fault_targets():
    with pytest.raises(InvalidSpecError):
        generate(SPEC, 1, faults=[FaultSpec("duration_skew", "func_07")])
    with pytest.raises(InvalidSpecError):
        generate(SPEC, -1)


def test_benchmark_indices_continue_across_batches():
    config = SynthConfig(workload=SPEC, normal_runs=3, faulty_runs=2, faults=(SKEW,))
    runs = generate_benchmark(config)

    assert [run.trace_id for run in runs] == [trace_id(i) for i in range(5)]
    assert [run.label for run in runs] == ["normal"] * 3 + ["failed"] * 2


def test_write_runs(tmp_path):
    runs = generate_benchmark(SynthConfig(workload=SPEC, normal_runs=2, faulty_runs=1, faults=(SKEW,)))
    manifest = write_runs(runs, str(tmp_path / "out"))

    assert read_manifest(str(tmp_path / "out" / "manifest.csv")) == manifest
    assert manifest == {"run000000": "normal", "run000001": "normal", "run000002": "failed"}
    assert (tmp_path / "out" / "run000002.trace").read_text() == runs[2].text


def test_default_config():
    config = load_synth_config()

    assert (config.normal_runs, config.faulty_runs) == (2000, 500)
    assert [fault.mode for fault in config.faults] == ["duration_skew", "dropped_call"]
    assert config.workload.n_functions == 6


def test_custom_config_overlays_default(tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(
        yaml.safe_dump(
            {
                "workload": {"seed": 9},
                "runs": {"normal": 10},
                "faults": [{"mode": "extra_call", "target_function": "func_03", "intensity": 2}],
            }
        )
    )
    config = load_synth_config(str(path))

    assert config.workload.seed == 9
    assert config.workload.n_functions == 6
    assert (config.normal_runs, config.faulty_runs) == (10, 500)
    assert config.faults == (FaultSpec("extra_call", "func_03", intensity=2),)
    assert SynthConfig.from_dict(config.to_dict()) == config


@pytest.mark.parametrize(
    "configs",
    [
        {"workload": {}, "runs": {"normal": 1}, "extra": {}},
        {"runs": {"normal": 1, "failed": 2}},
        {"runs": {"faulty": 2}},
        {"runs": {"normal": -1}},
    ],
)
def test_invalid_synth_configs(configs):
    with pytest.raises(InvalidSpecError):
        SynthConfig.from_dict(configs)
