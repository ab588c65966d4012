"""Random call trees and their trace text.

Functions are `main`, `func_01`, ..., `func_<n-1>`. A frame of function i always calls i + 1
(the backbone) and a Poisson number of extra callees drawn from the higher indices, so call
trees are finite and every backbone function runs in every run down to `max_depth`.
"""
import copy
import logging
from dataclasses import dataclass, field, fields
from typing import Iterator, List, Optional, Tuple

import numpy as np

from rtentropy.constants import DEFAULT_SEED
from rtentropy.errors import InvalidSpecError
from rtentropy.trace.trace_model import Label, TraceEvent

logger = logging.getLogger(__name__)

ROOT_FUNCTION = "main"


def function_names(n_functions: int) -> Tuple[str, ...]:
    return (ROOT_FUNCTION,) + tuple(f"func_{i:02d}" for i in range(1, n_functions))


@dataclass(frozen=True)
class WorkloadSpec:
    """Shape of the synthetic program.

    Args:
        n_functions (int): Number of functions, `main` included.
        max_depth (int): Deepest call level below a root frame.
        branching (float): Mean number of extra (non-backbone) callees per frame.
        duration_min (int): Lower bound of the per-function base exclusive duration, in ticks.
        duration_max (int): Upper bound of the per-function base exclusive duration, in ticks.
        base_durations (tuple, optional): Explicit base duration per function, overriding the range.
        jitter_min (float): Lower bound of the multiplicative jitter applied per frame.
        jitter_max (float): Upper bound of the multiplicative jitter applied per frame.
        root_calls (int): Top-level invocations of `main` per run.
        seed (int): Workload seed; a run is a deterministic function of (seed, run index).
    """

    n_functions: int = 6
    max_depth: int = 5
    branching: float = 0.5
    duration_min: int = 50
    duration_max: int = 500
    base_durations: Optional[Tuple[int, ...]] = None
    jitter_min: float = 0.9
    jitter_max: float = 1.1
    root_calls: int = 1
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.base_durations is not None:
            object.__setattr__(self, "base_durations", tuple(int(d) for d in self.base_durations))
        problems = []
        if self.n_functions < 2:
            problems.append(f"n_functions must be >= 2, got {self.n_functions}")
        if self.max_depth < 1:
            problems.append(f"max_depth must be >= 1, got {self.max_depth}")
        if not self.branching > 0:
            problems.append(f"branching must be > 0, got {self.branching}")
        if not 0 < self.duration_min <= self.duration_max:
            problems.append(f"need 0 < duration_min <= duration_max, got {self.duration_min}, {self.duration_max}")
        if self.base_durations is not None and (
            len(self.base_durations) != self.n_functions or min(self.base_durations) <= 0
        ):
            problems.append(f"base_durations must hold {self.n_functions} positive integers")
        if not 0 < self.jitter_min <= self.jitter_max:
            problems.append(f"need 0 < jitter_min <= jitter_max, got {self.jitter_min}, {self.jitter_max}")
        if self.root_calls < 1:
            problems.append(f"root_calls must be >= 1, got {self.root_calls}")
        if self.seed < 0:
            problems.append(f"seed must be non-negative, got {self.seed}")
        if problems:
            raise InvalidSpecError("invalid workload: " + "; ".join(problems))

    @classmethod
    def from_dict(cls, values: dict) -> "WorkloadSpec":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise InvalidSpecError(f"unknown workload keys {unknown}, expected a subset of {sorted(known)}")
        return cls(**values)

    @property
    def functions(self) -> Tuple[str, ...]:
        return function_names(self.n_functions)

    def durations(self) -> Tuple[int, ...]:
        """Base exclusive duration per function."""
        if self.base_durations is not None:
            return self.base_durations
        rng = np.random.default_rng(self.seed)
        return tuple(int(d) for d in rng.integers(self.duration_min, self.duration_max + 1, size=self.n_functions))


@dataclass
class CallNode:
    function: str
    self_time: int
    children: List["CallNode"] = field(default_factory=list)

    def walk(self) -> Iterator[Tuple["CallNode", Optional["CallNode"]]]:
        """Yields (node, parent) pairs in pre-order."""
        stack: List[Tuple[CallNode, Optional[CallNode]]] = [(self, None)]
        while stack:
            node, parent = stack.pop()
            yield node, parent
            stack.extend((child, node) for child in reversed(node.children))


class WorkloadModel:
    """Samples the call forest of a run from a WorkloadSpec."""

    def __init__(self, spec: WorkloadSpec):
        self.spec = spec
        self.functions = spec.functions
        self.base = spec.durations()

    def frame_time(self, index: int, rng: np.random.Generator) -> int:
        jitter = rng.uniform(self.spec.jitter_min, self.spec.jitter_max)
        return max(1, int(round(self.base[index] * jitter)))

    def sample_frame(self, index: int, depth: int, rng: np.random.Generator) -> CallNode:
        node = CallNode(function=self.functions[index], self_time=self.frame_time(index, rng))
        last = self.spec.n_functions - 1
        if depth >= self.spec.max_depth or index == last:
            return node
        callees = [index + 1]
        callees.extend(int(c) for c in rng.integers(index + 1, last + 1, size=rng.poisson(self.spec.branching)))
        node.children = [self.sample_frame(c, depth + 1, rng) for c in callees]
        return node

    def sample_run(self, run_index: int) -> List[CallNode]:
        rng = np.random.default_rng([self.spec.seed, run_index])
        return [self.sample_frame(0, 0, rng) for _ in range(self.spec.root_calls)]


def copy_forest(roots: List[CallNode]) -> List[CallNode]:
    return copy.deepcopy(roots)


def emit_events(roots: List[CallNode]) -> List[TraceEvent]:
    """Lays the forest out in time: each frame spends half its self time before its callees and the rest after.

    The exclusive duration of every emitted frame equals its `self_time`.
    """
    events: List[TraceEvent] = []
    clock = 0

    def emit(node: CallNode):
        nonlocal clock
        events.append(TraceEvent(id=len(events) + 1, label=Label.IN, function=node.function, timestamp=clock))
        before = node.self_time // 2
        clock += before
        for child in node.children:
            emit(child)
        clock += node.self_time - before
        events.append(TraceEvent(id=len(events) + 1, label=Label.OUT, function=node.function, timestamp=clock))

    for root in roots:
        emit(root)
    return events


def render_trace(roots: List[CallNode]) -> str:
    return "".join(event.to_line() + "\n" for event in emit_events(roots))
