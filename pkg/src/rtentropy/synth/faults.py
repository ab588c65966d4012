"""Fault modes that perturb a sampled call forest.

`duration_skew` changes exclusive durations, the other modes change the call structure.
Modes are registered in `fault_registry`; new ones take (roots, fault, model, rng) and edit
the forest in place.
"""
import logging
import math
from dataclasses import dataclass, fields
from typing import List, Sequence

import numpy as np

from rtentropy.errors import InvalidSpecError
from rtentropy.synth.workload import ROOT_FUNCTION, CallNode, WorkloadModel
from rtentropy.utils.registry import Registry

logger = logging.getLogger(__name__)

fault_registry = Registry("fault_modes")

# modes that act on calls into the target, which `main` never receives
_CALLEE_MODES = ("dropped_call", "wrong_target")


@dataclass(frozen=True)
class FaultSpec:
    """One injected fault.

    Args:
        mode (str): A registered fault mode.
        target_function (str): Function the fault acts on.
        intensity (float): Mode strength: duration factor for duration_skew, number of extra callees
            (rounded up) for extra_call, per-call probability (capped at 1) for dropped_call and wrong_target.
        activation_probability (float): Chance that the fault is active in a faulty run.
    """

    mode: str
    target_function: str
    intensity: float = 1.0
    activation_probability: float = 1.0

    def __post_init__(self):
        if self.mode not in fault_registry:
            raise InvalidSpecError(f"unknown fault mode {self.mode!r}, expected one of {fault_registry.list_keys()}")
        if not self.intensity > 0:
            raise InvalidSpecError(f"fault intensity must be > 0, got {self.intensity}")
        if not 0 < self.activation_probability <= 1:
            raise InvalidSpecError(f"activation_probability must be in (0, 1], got {self.activation_probability}")

    @classmethod
    def from_dict(cls, values: dict) -> "FaultSpec":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise InvalidSpecError(f"unknown fault keys {unknown}, expected a subset of {sorted(known)}")
        try:
            return cls(**values)
        except TypeError as e:
            raise InvalidSpecError(f"incomplete fault {values}: {e}") from None

    def validate_for(self, functions: Sequence[str]):
        if self.target_function not in functions:
            raise InvalidSpecError(f"fault target {self.target_function!r} is not one of {list(functions)}")
        if self.mode in _CALLEE_MODES and self.target_function == ROOT_FUNCTION:
            raise InvalidSpecError(f"{self.mode} cannot target the root function {ROOT_FUNCTION!r}")
        if self.mode == "wrong_target" and len(functions) < 3:
            raise InvalidSpecError("wrong_target needs at least two non-root functions")


def _frames_of(roots: List[CallNode], function: str) -> List[CallNode]:
    return [node for root in roots for node, _ in root.walk() if node.function == function]


@fault_registry.register("duration_skew")
def duration_skew(roots: List[CallNode], fault: FaultSpec, model: WorkloadModel, rng: np.random.Generator):
    for node in _frames_of(roots, fault.target_function):
        node.self_time = max(1, int(round(node.self_time * fault.intensity)))


@fault_registry.register("dropped_call")
def dropped_call(roots: List[CallNode], fault: FaultSpec, model: WorkloadModel, rng: np.random.Generator):
    probability = min(fault.intensity, 1.0)

    def prune(node: CallNode):
        kept = []
        for child in node.children:
            if child.function == fault.target_function and rng.random() < probability:
                continue
            prune(child)
            kept.append(child)
        node.children = kept

    for root in roots:
        prune(root)


@fault_registry.register("extra_call")
def extra_call(roots: List[CallNode], fault: FaultSpec, model: WorkloadModel, rng: np.random.Generator):
    index = model.functions.index(fault.target_function)
    callees = list(range(index + 1, len(model.functions))) or [index]
    for node in _frames_of(roots, fault.target_function):
        for _ in range(math.ceil(fault.intensity)):
            callee = callees[int(rng.integers(len(callees)))]
            node.children.append(CallNode(function=model.functions[callee], self_time=model.frame_time(callee, rng)))


@fault_registry.register("wrong_target")
def wrong_target(roots: List[CallNode], fault: FaultSpec, model: WorkloadModel, rng: np.random.Generator):
    probability = min(fault.intensity, 1.0)
    alternatives = [f for f in model.functions[1:] if f != fault.target_function]
    for root in roots:
        for node, parent in root.walk():
            if parent is not None and node.function == fault.target_function and rng.random() < probability:
                node.function = alternatives[int(rng.integers(len(alternatives)))]


def apply_faults(
    roots: List[CallNode], faults: Sequence[FaultSpec], model: WorkloadModel, rng: np.random.Generator
) -> List[str]:
    """Activates each fault with its probability and applies the active ones in order.

    Returns:
        Modes of the faults that activated.
    """
    activated = []
    for fault in faults:
        if rng.random() < fault.activation_probability:
            fault_registry.get(fault.mode)(roots, fault, model, rng)
            activated.append(fault.mode)
    return activated
