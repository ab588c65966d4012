import logging
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple, Union

from rtentropy.errors import MalformedLineError, NonMonotonicTimestampError, UnbalancedTraceError

logger = logging.getLogger(__name__)


class Label(str, Enum):
    IN = "IN"
    OUT = "OUT"


@dataclass(frozen=True)
class TraceEvent:
    id: int
    label: Label
    function: str
    timestamp: int

    def to_line(self) -> str:
        return f"{self.id} {self.label.value} {self.function} {self.timestamp}"


@dataclass(frozen=True)
class Trace:
    events: Tuple[TraceEvent, ...]
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[TraceEvent]:
        return iter(self.events)

    def to_text(self) -> str:
        """Serializes the trace back to the line-oriented trace file format."""
        return "".join(event.to_line() + "\n" for event in self.events)


def _parse_int(raw: str) -> int:
    if not (raw.isascii() and raw.isdigit()):
        raise ValueError(raw)
    return int(raw)


class TraceLineParser:
    """Parses trace lines one at a time, enforcing id and timestamp ordering across calls.

    The parser is stateful so that a file and a live event stream go through the same checks.
    """

    def __init__(self):
        self._last_id: Optional[int] = None
        self._last_timestamp: Optional[int] = None

    def parse(self, line: str, line_no: int) -> Optional[TraceEvent]:
        """Returns the event on `line`, or None for blank and comment lines."""
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            return None
        tokens = stripped.split()
        if len(tokens) != 4:
            raise MalformedLineError(line_no, f"expected 4 fields, got {len(tokens)}")
        raw_id, raw_label, function, raw_timestamp = tokens
        try:
            event_id = _parse_int(raw_id)
            timestamp = _parse_int(raw_timestamp)
        except ValueError:
            raise MalformedLineError(line_no, "id and timestamp must be non-negative integers") from None
        try:
            label = Label(raw_label)
        except ValueError:
            raise MalformedLineError(line_no, f"unknown label {raw_label!r}") from None
        if event_id == 0:
            raise MalformedLineError(line_no, "id must be positive")
        if self._last_id is not None and event_id <= self._last_id:
            raise MalformedLineError(line_no, f"id {event_id} does not increase over {self._last_id}")
        if self._last_timestamp is not None and timestamp < self._last_timestamp:
            raise NonMonotonicTimestampError(line_no, self._last_timestamp, timestamp)

        self._last_id = event_id
        self._last_timestamp = timestamp
        return TraceEvent(id=event_id, label=label, function=function, timestamp=timestamp)


def parse_trace(text: Union[str, Iterable[str]], source_id: str = "") -> Trace:
    """Parses a trace from a string or any iterable of lines (an open file works).

    Args:
        text (str | Iterable[str]): Trace file content.
        source_id (str): Opaque identifier of the run the trace came from.

    Returns:
        The parsed Trace, one event per data line in file order.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    parser = TraceLineParser()
    events = []
    for line_no, line in enumerate(lines, start=1):
        event = parser.parse(line, line_no)
        if event is not None:
            events.append(event)
    return Trace(events=tuple(events), source_id=source_id)


def load_trace(path: str) -> Trace:
    source_id = os.path.splitext(os.path.basename(path))[0]
    with open(path, "r", encoding="utf-8") as f:
        return parse_trace(f, source_id=source_id)


class ClosedFrame(NamedTuple):
    function: str
    caller: Optional[str]
    t_in: int
    t_out: int
    exclusive: int


@dataclass
class _OpenFrame:
    function: str
    t_in: int
    children_span: int = 0


class CallStack:
    """Reconstructs the call stack from IN/OUT events, one event at a time.

    Strict mode rejects an OUT that does not name the top-of-stack function and any frame
    still open at the end. Lenient mode drops such OUTs and closes open frames at the last
    seen timestamp, counting both repairs.
    """

    def __init__(self, lenient: bool = False):
        self.lenient = lenient
        self.dropped_outs = 0
        self.closed_at_end = 0
        self._frames: List[_OpenFrame] = []
        self._last_timestamp: Optional[int] = None

    @property
    def depth(self) -> int:
        return len(self._frames)

    @property
    def top(self) -> Optional[str]:
        return self._frames[-1].function if self._frames else None

    def feed(self, event: TraceEvent, line_no: Optional[int] = None) -> Optional[ClosedFrame]:
        """Applies one event; returns the frame it closed, if any."""
        self._last_timestamp = event.timestamp
        if event.label is Label.IN:
            self._frames.append(_OpenFrame(function=event.function, t_in=event.timestamp))
            return None
        if self.top != event.function:
            if not self.lenient:
                if not self._frames:
                    raise UnbalancedTraceError(f"OUT {event.function} has no matching IN", line_no=line_no)
                raise UnbalancedTraceError(
                    f"OUT {event.function} does not match open frame {self.top}", line_no=line_no
                )
            self.dropped_outs += 1
            return None
        return self._close(event.timestamp)

    def finish(self) -> List[ClosedFrame]:
        """Ends the trace. Returns the frames closed by lenient repair, innermost first."""
        if not self._frames:
            return []
        if not self.lenient:
            open_functions = " > ".join(frame.function for frame in self._frames)
            raise UnbalancedTraceError(f"{len(self._frames)} frame(s) still open at end of trace: {open_functions}")
        closed = []
        while self._frames:
            closed.append(self._close(self._last_timestamp))
            self.closed_at_end += 1
        return closed

    def _close(self, t_out: int) -> ClosedFrame:
        frame = self._frames.pop()
        span = t_out - frame.t_in
        caller = None
        if self._frames:
            caller = self._frames[-1].function
            self._frames[-1].children_span += span
        return ClosedFrame(
            function=frame.function,
            caller=caller,
            t_in=frame.t_in,
            t_out=t_out,
            exclusive=span - frame.children_span,
        )


def iter_frames(trace: Trace, lenient: bool = False) -> Iterator[ClosedFrame]:
    """Yields every frame of `trace` in closing order."""
    stack = CallStack(lenient=lenient)
    for event in trace.events:
        closed = stack.feed(event, line_no=None)
        if closed is not None:
            yield closed
    yield from stack.finish()
    if stack.dropped_outs or stack.closed_at_end:
        logger.warning(
            "Repaired trace %s: dropped %d unmatched OUT event(s), closed %d open frame(s).",
            trace.source_id or "<unnamed>",
            stack.dropped_outs,
            stack.closed_at_end,
        )


@dataclass(frozen=True)
class DurationTable:
    """Exclusive duration per function name, iterated in lexicographic key order."""

    entries: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(sorted(self.entries.items())))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, function: str) -> int:
        return self.entries[function]

    def total(self) -> int:
        return sum(self.entries.values())

    def weights(self) -> List[int]:
        return list(self.entries.values())


@dataclass(frozen=True)
class CallCountTable:
    """Invocation count per (caller, callee) edge, iterated in lexicographic key order."""

    entries: Dict[Tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(sorted(self.entries.items())))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, edge: Tuple[str, str]) -> int:
        return self.entries[edge]

    def total(self) -> int:
        return sum(self.entries.values())

    def weights(self) -> List[int]:
        return list(self.entries.values())


@dataclass(frozen=True)
class TraceProfile:
    durations: DurationTable
    calls: CallCountTable
    root_frames: int


def profile_trace(trace: Trace, lenient: bool = False) -> TraceProfile:
    """Computes both tables in a single stack walk."""
    durations: Dict[str, int] = defaultdict(int)
    calls: Counter = Counter()
    root_frames = 0
    for frame in iter_frames(trace, lenient=lenient):
        durations[frame.function] += frame.exclusive
        if frame.caller is None:
            root_frames += 1
        else:
            calls[(frame.caller, frame.function)] += 1
    return TraceProfile(
        durations=DurationTable(dict(durations)),
        calls=CallCountTable(dict(calls)),
        root_frames=root_frames,
    )


def compute_durations(trace: Trace, lenient: bool = False) -> DurationTable:
    return profile_trace(trace, lenient=lenient).durations


def compute_call_counts(trace: Trace, lenient: bool = False) -> CallCountTable:
    return profile_trace(trace, lenient=lenient).calls
