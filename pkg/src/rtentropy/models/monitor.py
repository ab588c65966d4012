import logging
from collections import Counter, defaultdict
from typing import Iterable, Iterator, List, NamedTuple, Optional

from rtentropy.errors import DegenerateTraceError, RuntimeEntropyError
from rtentropy.features.entropy import EntropyFeatures, call_entropy, execution_time_entropy
from rtentropy.models.c45 import TreeModel
from rtentropy.trace.trace_model import CallCountTable, CallStack, ClosedFrame, DurationTable, TraceLineParser

logger = logging.getLogger(__name__)


class Verdict(NamedTuple):
    root: str
    label: str
    confidence: float
    features: EntropyFeatures

    def to_line(self) -> str:
        return f"{self.root} {self.label} {self.confidence:.6f}"


class TraceMonitor:
    """Classifies a live event stream, one verdict per completed top-level frame.

    Durations and call edges accumulate for the current root frame only and are cleared once it
    closes. In lenient mode malformed lines are skipped and stack mismatches repaired; in strict
    mode both raise.
    """

    def __init__(self, model: TreeModel, lenient: bool = False):
        self.model = model
        self.lenient = lenient
        self.skipped_lines = 0
        self._parser = TraceLineParser()
        self._stack = CallStack(lenient=lenient)
        self._reset()

    def _reset(self):
        self._durations = defaultdict(int)
        self._calls = Counter()

    def feed_line(self, line: str, line_no: int) -> Optional[Verdict]:
        try:
            event = self._parser.parse(line, line_no)
        except RuntimeEntropyError as e:
            if not self.lenient:
                raise
            self.skipped_lines += 1
            logger.warning("Skipped %s", e)
            return None
        if event is None:
            return None
        closed = self._stack.feed(event, line_no=line_no)
        return self._account(closed) if closed is not None else None

    def finish(self) -> List[Verdict]:
        """Ends the stream; lenient mode closes the open frames and may emit a last verdict."""
        verdicts = [self._account(frame) for frame in self._stack.finish()]
        if self._stack.dropped_outs or self._stack.closed_at_end:
            logger.warning(
                "Stream repaired: dropped %d unmatched OUT event(s), closed %d open frame(s).",
                self._stack.dropped_outs,
                self._stack.closed_at_end,
            )
        return [v for v in verdicts if v is not None]

    def _account(self, frame: ClosedFrame) -> Optional[Verdict]:
        self._durations[frame.function] += frame.exclusive
        if frame.caller is not None:
            self._calls[(frame.caller, frame.function)] += 1
            return None
        durations, calls = DurationTable(dict(self._durations)), CallCountTable(dict(self._calls))
        self._reset()
        try:
            features = EntropyFeatures.from_components(
                h_a=execution_time_entropy(durations), h_b=call_entropy(calls)
            )
        except DegenerateTraceError as e:
            if not self.lenient:
                raise
            logger.warning("No verdict for root frame %s: %s", frame.function, e)
            return None
        prediction = self.model.predict(features.as_vector())
        return Verdict(frame.function, prediction.label, prediction.confidence, features)

    def run(self, lines: Iterable[str]) -> Iterator[Verdict]:
        for line_no, line in enumerate(lines, start=1):
            verdict = self.feed_line(line, line_no)
            if verdict is not None:
                yield verdict
        yield from self.finish()
