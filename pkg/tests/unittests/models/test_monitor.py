import pytest

from rtentropy.errors import MalformedLineError, UnbalancedTraceError
from rtentropy.features.entropy import featurize
from rtentropy.models.monitor import TraceMonitor
from rtentropy.models.tree_io import deserialize
from rtentropy.trace.trace_model import parse_trace

MODEL = deserialize(
    """\
c45-tree version=1 features=h_a,h_b,h classes=normal,failed
split h_b <= 1
  leaf failed [1,4]
  leaf normal [8,2]
"""
)

SECOND_RUN = """\
9 IN Main 11300
10 IN FuncA 11310
11 OUT FuncA 11390
12 OUT Main 11400
"""


def test_verdict_per_root_frame(table1_text):
    verdicts = list(TraceMonitor(MODEL).run((table1_text + SECOND_RUN).splitlines()))

    assert [v.to_line() for v in verdicts] == ["Main normal 0.800000", "Main failed 0.800000"]
    assert verdicts[0].features == featurize(parse_trace(table1_text))


def test_accumulators_reset_between_roots(table1_text):
    verdicts = list(TraceMonitor(MODEL).run((table1_text + SECOND_RUN).splitlines()))
    second = featurize(parse_trace(SECOND_RUN))

    assert verdicts[1].features == second
    assert second.h_b == 0.0


def test_no_verdict_until_root_closes(table1_text):
    monitor = TraceMonitor(MODEL)
    lines = table1_text.splitlines()
    outputs = [monitor.feed_line(line, i) for i, line in enumerate(lines[:-1], start=1)]

    assert outputs == [None] * (len(lines) - 1)
    assert monitor.feed_line(lines[-1], len(lines)).root == "Main"


def test_strict_mode_raises_on_bad_input():
    with pytest.raises(MalformedLineError):
        list(TraceMonitor(MODEL).run(["1 IN Main 0", "garbage"]))
    with pytest.raises(UnbalancedTraceError):
        list(TraceMonitor(MODEL).run(["1 IN Main 0", "2 OUT Other 3"]))


def test_lenient_mode_skips_and_repairs(caplog):
    lines = ["1 IN Main 0", "garbage", "2 IN A 2", "3 OUT B 3", "4 OUT A 6", "5 IN C 7"]
    monitor = TraceMonitor(MODEL, lenient=True)
    with caplog.at_level("WARNING"):
        verdicts = list(monitor.run(lines))

    assert monitor.skipped_lines == 1
    assert [v.root for v in verdicts] == ["Main"]
    assert verdicts[0].features.h_b == pytest.approx(1.0)
    assert "Stream repaired" in caplog.text


def test_degenerate_root_frame_is_skipped_in_lenient_mode():
    lines = ["1 IN Main 5", "2 OUT Main 5", "3 IN Main 6", "4 IN A 7", "5 OUT A 9", "6 OUT Main 10"]
    verdicts = list(TraceMonitor(MODEL, lenient=True).run(lines))

    assert len(verdicts) == 1
    assert verdicts[0].label == "failed"
