import pytest

from rtentropy.errors import MalformedLineError, NonMonotonicTimestampError, UnbalancedTraceError
from rtentropy.trace.trace_model import (
    CallStack,
    Label,
    TraceEvent,
    compute_call_counts,
    compute_durations,
    load_trace,
    parse_trace,
    profile_trace,
)


def test_parse_trace_skips_comments_and_blank_lines(table1_text):
    trace = parse_trace("\n" + table1_text + "\n# trailing comment\n", source_id="run")

    assert len(trace) == 8
    assert trace.source_id == "run"
    assert trace.events[0] == TraceEvent(id=1, label=Label.IN, function="Main", timestamp=10728)
    assert trace.events[-1].label is Label.OUT


def test_load_trace_uses_file_stem(table1_file):
    trace = load_trace(str(table1_file))

    assert trace.source_id == "t1"
    assert trace.to_text().splitlines() == [line for line in table1_file.read_text().splitlines() if line[0] != "#"]


@pytest.mark.parametrize(
    "line",
    [
        "1 IN Main",
        "1 IN Main 10 extra",
        "x IN Main 10",
        "1 IN Main -5",
        "1 ENTER Main 10",
        "0 IN Main 10",
    ],
)
def test_parse_trace_rejects_malformed_lines(line):
    with pytest.raises(MalformedLineError) as exc:
        parse_trace("# header\n" + line + "\n")
    assert exc.value.line_no == 2


def test_parse_trace_rejects_non_increasing_ids():
    with pytest.raises(MalformedLineError):
        parse_trace("2 IN Main 1\n2 OUT Main 2\n")


def test_parse_trace_rejects_decreasing_timestamps():
    with pytest.raises(NonMonotonicTimestampError) as exc:
        parse_trace("1 IN Main 10\n2 OUT Main 9\n")
    assert exc.value.line_no == 2


def test_equal_timestamps_are_allowed():
    trace = parse_trace("1 IN Main 10\n2 IN A 10\n3 OUT A 10\n4 OUT Main 10\n")
    assert compute_durations(trace).entries == {"A": 0, "Main": 0}


def test_compute_durations_matches_worked_example(table1_text):
    durations = compute_durations(parse_trace(table1_text))

    assert durations.entries == {"FuncA": 80, "FuncB": 250, "FuncC": 100, "Main": 132}
    assert list(durations.entries) == sorted(durations.entries)
    assert durations.total() == 11290 - 10728


def test_compute_call_counts_matches_worked_example(table1_text):
    calls = compute_call_counts(parse_trace(table1_text))

    assert calls.entries == {("FuncB", "FuncC"): 1, ("Main", "FuncA"): 1, ("Main", "FuncB"): 1}
    assert calls.total() == 3


def test_recursion_and_repeated_calls_are_aggregated():
    text = """\
1 IN f 0
2 IN f 10
3 IN g 12
4 OUT g 15
5 OUT f 20
6 IN g 30
7 OUT g 31
8 OUT f 40
"""
    profile = profile_trace(parse_trace(text))

    assert profile.durations.entries == {"f": 40 - 10 - 1 + 10 - 3, "g": 4}
    assert profile.calls.entries == {("f", "f"): 1, ("f", "g"): 2}
    assert profile.root_frames == 1


def test_several_root_frames_have_no_caller_edge():
    text = "1 IN a 0\n2 OUT a 5\n3 IN b 5\n4 OUT b 7\n"
    profile = profile_trace(parse_trace(text))

    assert profile.root_frames == 2
    assert len(profile.calls) == 0
    assert profile.durations.entries == {"a": 5, "b": 2}


def test_strict_mode_rejects_mismatched_out():
    trace = parse_trace("1 IN Main 0\n2 IN A 1\n3 OUT Main 2\n4 OUT A 3\n")
    with pytest.raises(UnbalancedTraceError):
        compute_durations(trace)


def test_strict_mode_rejects_unclosed_frames():
    trace = parse_trace("1 IN Main 0\n2 IN A 1\n3 OUT A 2\n")
    with pytest.raises(UnbalancedTraceError, match="still open"):
        compute_durations(trace)


def test_strict_mode_rejects_out_on_empty_stack():
    trace = parse_trace("1 OUT Main 0\n")
    with pytest.raises(UnbalancedTraceError, match="no matching IN"):
        compute_call_counts(trace)


def test_lenient_mode_repairs_and_counts(caplog):
    trace = parse_trace("1 IN Main 0\n2 IN A 1\n3 OUT B 2\n4 OUT A 4\n5 IN C 6\n", source_id="broken")
    stack = CallStack(lenient=True)
    for event in trace:
        stack.feed(event)
    closed = stack.finish()

    assert stack.dropped_outs == 1
    assert stack.closed_at_end == 2
    assert [frame.function for frame in closed] == ["C", "Main"]
    assert all(frame.t_out == 6 for frame in closed)

    with caplog.at_level("WARNING"):
        durations = compute_durations(trace, lenient=True)
    assert durations.entries == {"A": 3, "C": 0, "Main": 3}
    assert "broken" in caplog.text


def test_exclusive_durations_are_never_negative(table1_text):
    profile = profile_trace(parse_trace(table1_text))
    assert all(value >= 0 for value in profile.durations.weights())
