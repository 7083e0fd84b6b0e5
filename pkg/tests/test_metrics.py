import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ldmf.ir import Rect
from ldmf.metrics import (
    EmptyList, EmptyScreen, IdMismatch, macro_average, node_match, pms_distribution,
    preview_match_score, prf1_scores,
)


def R(x, y, w, h):
    return Rect(float(x), float(y), float(w), float(h))


# -- node match ----------------------------------------------------------------------

def test_identical_rects_match():
    assert node_match(R(10, 20, 30, 40), R(10, 20, 30, 40))


def test_five_percent_width_error_fails():
    assert not node_match(R(10, 10, 100, 50), R(10, 10, 105, 50))


def test_three_percent_is_inclusive():
    assert node_match(R(100, 100, 100, 100), R(103, 97, 103, 97))


def test_zero_origin_uses_absolute_fallback():
    assert node_match(R(0, 10, 10, 10), R(0.5, 10, 10, 10))
    assert not node_match(R(0, 10, 10, 10), R(1.5, 10, 10, 10))


# -- PMS -----------------------------------------------------------------------------

def test_all_exact_scores_100():
    rects = {f"n{i}": R(i, i, 10, 10) for i in range(10)}
    assert preview_match_score(rects, dict(rects)).pms == 100.0


def test_one_of_four_off_scores_75():
    orig = {f"n{i}": R(10 * i + 10, 10, 100, 50) for i in range(4)}
    rend = dict(orig, n2=R(30, 10, 105, 50))
    score = preview_match_score(orig, rend)
    assert (score.n, score.m, score.pms) == (4, 3, 75.0)
    assert [(f.node_id, f.attribute) for f in score.failures] == [("n2", "w")]


def test_missing_node_counts_as_unmatched():
    orig = {f"n{i}": R(10, 10, 10, 10) for i in range(5)}
    rend = {k: v for k, v in orig.items() if k != "n3"}
    score = preview_match_score(orig, rend)
    assert score.pms == 80.0
    assert score.failures[0].attribute == "missing" and math.isnan(score.failures[0].original)


def test_extra_rendered_nodes_are_ignored():
    orig = {"a": R(1, 1, 1, 1)}
    assert preview_match_score(orig, {"a": R(1, 1, 1, 1), "wrapper": R(0, 0, 9, 9)}).pms == 100.0


def test_empty_screen_raises():
    with pytest.raises(EmptyScreen):
        preview_match_score({}, {})


coords = st.integers(-500, 2000).map(float)
sizes = st.integers(0, 800).map(float)
rects = st.builds(Rect, coords, coords, sizes, sizes)


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.text("abc", min_size=1, max_size=4), rects, min_size=1, max_size=10))
def test_self_match_is_perfect(orig):
    assert preview_match_score(orig, orig).pms == 100.0


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.text("abc", min_size=1, max_size=4), st.tuples(rects, rects),
                       min_size=1, max_size=10),
       st.floats(0, 0.2), st.floats(0, 0.2))
def test_pms_is_monotone_in_theta(pairs, t1, t2):
    lo, hi = sorted((t1, t2))
    orig = {k: a for k, (a, _) in pairs.items()}
    rend = {k: b for k, (_, b) in pairs.items()}
    assert preview_match_score(orig, rend, lo).pms <= preview_match_score(orig, rend, hi).pms


# -- distribution --------------------------------------------------------------------

def test_frac_above_95():
    d = pms_distribution([96, 97, 80])
    assert Fraction(d.frac_above_95).limit_denominator(10) == Fraction(2, 3)
    assert d.frac_above_95 == 2 / 3
    assert pms_distribution([100] * 4).frac_above_95 == 1.0
    assert pms_distribution([95.0]).frac_above_95 == 0.0


def test_bucket_edges():
    d = pms_distribution([0, 4.99, 5, 95, 100])
    counts = {lo: c for lo, _, c in d.buckets}
    assert (counts[0], counts[5], counts[95]) == (2, 1, 2)
    assert len(d.buckets) == 20


def test_empty_distribution_raises():
    with pytest.raises(EmptyList):
        pms_distribution([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 100), min_size=1, max_size=1000))
def test_bucket_counts_are_conserved(scores):
    d = pms_distribution(scores)
    assert sum(c for _, _, c in d.buckets) == len(scores) == d.count


# -- tagging metrics -----------------------------------------------------------------

def test_perfect_prediction():
    gold = {"a": "button", "b": "input", "c": "grid", "d": "text"}
    report = prf1_scores(gold, gold)
    assert all(t.f1 == 100.0 for t in report.per_tag)
    assert (report.macro_small, report.macro_big) == (100.0, 100.0)


def test_half_recall_button():
    gold = {"a": "button", "b": "button", "c": "text"}
    pred = {"a": "button", "b": "text", "c": "text"}
    button = next(t for t in prf1_scores(pred, gold).per_tag if t.tag == "button")
    assert (button.precision, button.recall, round(button.f1, 2)) == (100.0, 50.0, 66.67)


def test_disjoint_predictions_score_zero():
    gold = {"a": "button", "b": "input"}
    pred = {"a": "input", "b": "button"}
    assert all(t.f1 == 0 for t in prf1_scores(pred, gold).per_tag)


def test_list_form_is_accepted():
    gold = [{"nodeId": "a", "tag": "button"}]
    assert prf1_scores({"a": "button"}, gold).macro_small == 100.0


def test_id_mismatch():
    with pytest.raises(IdMismatch):
        prf1_scores({"a": "button"}, {"b": "button"})


def test_macro_average_rounds_and_rejects_empty():
    assert macro_average([100, 50]) == 75.0
    assert macro_average([1, 2, 2]) == 1.67
    with pytest.raises(EmptyList):
        macro_average([])
