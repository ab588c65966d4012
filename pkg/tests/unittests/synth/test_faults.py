import numpy as np
import pytest

from rtentropy.errors import InvalidSpecError
from rtentropy.synth.faults import FaultSpec, apply_faults, fault_registry
from rtentropy.synth.workload import CallNode, WorkloadModel, WorkloadSpec


@pytest.fixture
def model():
    return WorkloadModel(WorkloadSpec(n_functions=5, base_durations=[10, 20, 30, 40, 50], seed=0))


def _forest():
    return [
        CallNode(
            "main",
            10,
            [
                CallNode("func_01", 20, [CallNode("func_02", 30, [CallNode("func_03", 40)])]),
                CallNode("func_02", 30),
            ],
        )
    ]


def _functions(roots):
    return [node.function for root in roots for node, _ in root.walk()]


def test_registered_modes():
    assert fault_registry.list_keys() == ["duration_skew", "dropped_call", "extra_call", "wrong_target"]


def test_duration_skew(model):
    roots = _forest()
    apply_faults(roots, [FaultSpec("duration_skew", "func_02", intensity=3.0)], model, np.random.default_rng(0))

    assert [node.self_time for root in roots for node, _ in root.walk() if node.function == "func_02"] == [90, 90]


def test_dropped_call_removes_whole_subtree(model):
    roots = _forest()
    activated = apply_faults(roots, [FaultSpec("dropped_call", "func_02")], model, np.random.default_rng(0))

    assert activated == ["dropped_call"]
    assert _functions(roots) == ["main", "func_01"]


def test_extra_call_adds_leaf_callees(model):
    roots = _forest()
    apply_faults(roots, [FaultSpec("extra_call", "func_03", intensity=1.5)], model, np.random.default_rng(0))

    (target,) = [node for node, _ in roots[0].walk() if node.function == "func_03"]
    assert [child.function for child in target.children] == ["func_04", "func_04"]
    assert all(not child.children for child in target.children)


def test_extra_call_on_last_function_calls_itself():
    model = WorkloadModel(WorkloadSpec(n_functions=2, base_durations=[5, 5]))
    roots = [CallNode("main", 5, [CallNode("func_01", 5)])]
    apply_faults(roots, [FaultSpec("extra_call", "func_01")], model, np.random.default_rng(0))

    assert _functions(roots) == ["main", "func_01", "func_01"]


def test_wrong_target_renames_calls(model):
    roots = _forest()
    apply_faults(roots, [FaultSpec("wrong_target", "func_02")], model, np.random.default_rng(0))

    functions = _functions(roots)
    assert "func_02" not in functions
    assert len(functions) == 5
    assert functions[0] == "main"


def test_activation_probability(model):
    rng = np.random.default_rng(1)
    fault = FaultSpec("duration_skew", "func_01", intensity=2.0, activation_probability=0.5)
    hits = sum(bool(apply_faults(_forest(), [fault], model, rng)) for _ in range(400))

    assert 150 < hits < 250


@pytest.mark.parametrize(
    "values",
    [
        {"mode": "melt", "target_function": "func_01"},
        {"mode": "duration_skew", "target_function": "func_01", "intensity": 0},
        {"mode": "duration_skew", "target_function": "func_01", "activation_probability": 0},
        {"mode": "duration_skew", "target_function": "func_01", "when": "always"},
        {"mode": "duration_skew"},
    ],
)
def test_invalid_faults_are_rejected(values):
    with pytest.raises(InvalidSpecError):
        FaultSpec.from_dict(values)


def test_validate_for_checks_targets():
    functions = ("main", "func_01", "func_02")
    FaultSpec("duration_skew", "main").validate_for(functions)
    with pytest.raises(InvalidSpecError):
        FaultSpec("duration_skew", "func_09").validate_for(functions)
    with pytest.raises(InvalidSpecError):
        FaultSpec("dropped_call", "main").validate_for(functions)
    with pytest.raises(InvalidSpecError):
        FaultSpec("wrong_target", "func_01").validate_for(("main", "func_01"))
