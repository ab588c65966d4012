import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from rtentropy.errors import DegenerateTraceError
from rtentropy.trace.trace_model import CallCountTable, DurationTable, Trace, load_trace, profile_trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EntropyFeatures:
    """Runtime entropy features of one run, in bits."""

    h_a: float
    h_b: float
    h: float

    @classmethod
    def from_components(cls, h_a: float, h_b: float) -> "EntropyFeatures":
        return cls(h_a=h_a, h_b=h_b, h=runtime_entropy(h_a, h_b))

    def as_vector(self) -> Tuple[float, float, float]:
        return (self.h_a, self.h_b, self.h)


def appearance_rates(weights: Sequence[float]) -> np.ndarray:
    """Normalizes non-negative weights into appearance rates that sum to one."""
    weights = np.asarray(weights, dtype=np.float64)
    total = weights.sum()
    if total <= 0:
        raise DegenerateTraceError("appearance rates are undefined when every weight is zero")
    return weights / total


def shannon_entropy(rates: np.ndarray) -> float:
    """-sum(p * log2(p)) with the 0 * log 0 = 0 convention."""
    rates = rates[rates > 0]
    # + 0.0 turns a single-outcome -0.0 into 0.0
    return float(-np.sum(rates * np.log2(rates))) + 0.0


def execution_time_entropy(durations: DurationTable) -> float:
    """Entropy of the share of exclusive execution time spent in each function."""
    if durations.total() == 0:
        raise DegenerateTraceError("execution time entropy needs at least one positive exclusive duration")
    return shannon_entropy(appearance_rates(durations.weights()))


def call_entropy(calls: CallCountTable) -> float:
    """Entropy of the share of invocations along each caller -> callee edge. An empty table gives 0."""
    if len(calls) == 0:
        return 0.0
    return shannon_entropy(appearance_rates(calls.weights()))


def runtime_entropy(h_a: float, h_b: float) -> float:
    if h_a < 0 or h_b < 0:
        raise ValueError(f"entropies must be non-negative, got h_a={h_a}, h_b={h_b}")
    return (h_a + h_b) / 2


def featurize(trace: Trace, lenient: bool = False) -> EntropyFeatures:
    profile = profile_trace(trace, lenient=lenient)
    return EntropyFeatures.from_components(
        h_a=execution_time_entropy(profile.durations),
        h_b=call_entropy(profile.calls),
    )


def featurize_file(path: str, lenient: bool = False) -> Tuple[str, EntropyFeatures]:
    """Loads and featurizes one trace file. Returns (trace_id, features); trace_id is the file stem."""
    trace = load_trace(path)
    return trace.source_id, featurize(trace, lenient=lenient)
