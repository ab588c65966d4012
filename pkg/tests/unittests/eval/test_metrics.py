import random

import numpy as np
import pytest

from rtentropy.eval.metrics import (
    ConfusionMatrix,
    EvalReport,
    Scores,
    confusion,
    f_measure,
    format_metric,
    macro_scores,
    score,
    weighted_scores,
)
from rtentropy.models.tree_io import deserialize

from conftest import make_dataset


def test_score_worked_example():
    scores = score(ConfusionMatrix(tp=90, fn=10, fp=20, tn=80))

    assert scores.precision == pytest.approx(90 / 110)
    assert scores.tpr == pytest.approx(0.9)
    assert scores.fpr == pytest.approx(0.2)
    assert scores.f1 == pytest.approx(2 * (90 / 110) * 0.9 / (90 / 110 + 0.9))
    assert format_metric(scores.f1) == "0.857"


def test_f_measure_is_consistent_with_reported_values():
    assert f_measure(0.933, 0.932) == pytest.approx(0.9325, abs=1e-4)
    assert format_metric(f_measure(0.933, 0.932)) in ("0.932", "0.933")


def test_undefined_ratios():
    scores = score(ConfusionMatrix(tp=0, fn=0, fp=0, tn=10))

    assert scores.precision is None
    assert scores.tpr is None
    assert scores.fpr == 0.0
    assert scores.f1 is None
    assert format_metric(scores.precision) == "undefined"


def test_f1_is_zero_when_nothing_is_detected():
    scores = score(ConfusionMatrix(tp=0, fn=5, fp=3, tn=10))
    assert (scores.precision, scores.tpr, scores.f1) == (0.0, 0.0, 0.0)


def test_random_matrices_stay_in_range():
    rng = np.random.default_rng(0)
    for tp, fn, fp, tn in rng.integers(0, 50, size=(1000, 4)):
        m = ConfusionMatrix(int(tp), int(fn), int(fp), int(tn))
        scores = score(m)
        for value in scores:
            assert value is None or 0.0 <= value <= 1.0
        if scores.f1 is not None and scores.f1 > 0:
            assert min(scores.precision, scores.tpr) - 1e-12 <= scores.f1 <= max(scores.precision, scores.tpr) + 1e-12
        for value in weighted_scores(m):
            assert value is None or 0.0 <= value <= 1.0 + 1e-12


def test_pooling_ignores_fold_order():
    rng = np.random.default_rng(1)
    folds = [ConfusionMatrix(*map(int, row)) for row in rng.integers(0, 30, size=(10, 4))]
    pooled = EvalReport.from_folds(folds, [3] * 10).matrix
    shuffled = folds[:]
    random.Random(5).shuffle(shuffled)

    assert EvalReport.from_folds(shuffled, [3] * 10).matrix == pooled
    assert pooled.total == sum(m.total for m in folds)


def test_scores_are_invariant_to_duplication():
    m = ConfusionMatrix(tp=7, fn=3, fp=2, tn=40)
    doubled = m + m
    assert score(doubled) == pytest.approx(score(m))
    assert weighted_scores(doubled) == pytest.approx(weighted_scores(m))


def test_weighted_scores_average_both_classes():
    m = ConfusionMatrix(tp=90, fn=10, fp=20, tn=80)
    weighted = weighted_scores(m)

    assert weighted.precision == pytest.approx((90 / 110 + 80 / 90) / 2)
    assert weighted.tpr == pytest.approx((0.9 + 0.8) / 2)
    assert weighted.fpr == pytest.approx((0.2 + 0.1) / 2)


def test_macro_scores_skip_undefined_folds():
    folds = [Scores(0.5, 1.0, 0.0, None), Scores(None, 0.5, 0.2, 0.4)]
    assert macro_scores(folds) == Scores(0.5, 0.75, 0.1, 0.4)
    assert macro_scores([Scores(None, None, None, None)]) == Scores(None, None, None, None)


def test_confusion_from_model():
    model = deserialize(
        "c45-tree version=1 features=h_a,h_b,h classes=normal,failed\n"
        "split h <= 1\n  leaf failed [0,1]\n  leaf normal [1,0]\n"
    )
    data = make_dataset([0.5, 0.5, 2.0, 2.0, 0.5], ["failed", "normal", "normal", "failed", "failed"])

    assert confusion(model, data) == ConfusionMatrix(tp=2, fn=1, fp=1, tn=1)
    assert ConfusionMatrix.from_labels([], []) == ConfusionMatrix()


def test_report_row_and_degenerate_flag():
    report = EvalReport.from_folds(
        [ConfusionMatrix(1, 0, 0, 4), ConfusionMatrix(0, 1, 0, 4)], [3, 1], config={"min_leaf": 2}
    )
    row = report.row()

    assert report.degenerate
    assert report.mean_leaves == 2.0
    assert row["tp"] == 1 and row["fn"] == 1 and row["tn"] == 8
    assert row["tpr"] == 0.5
    assert row["macro_tpr"] == 0.5
    assert report.to_dict()["folds"][1]["leaves"] == 1
    assert "tpr=0.500" in report.summary()
