"""Fidelity and tagging metrics: Preview Match Score, its distribution, and
one-vs-rest precision / recall / F1 with macro averages."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .tagger import BIG_TAGS, SMALL_TAGS

DEFAULT_THRESHOLD = 0.03
ZERO_FALLBACK_PX = 1.0
BUCKET_WIDTH = 5


class EmptyScreen(ValueError):
    pass


class IdMismatch(ValueError):
    pass


class EmptyList(ValueError):
    pass


def _xywh(r) -> tuple[float, float, float, float]:
    return (r.x, r.y, r.w, r.h)


def attribute_errors(orig, rend) -> list[tuple[str, float, float, float | None]]:
    """(attribute, original, rendered, relative error or None under the
    absolute fallback) for x, y, w and h."""
    out = []
    for name, a, b in zip("xywh", _xywh(orig), _xywh(rend)):
        rel = abs(a - b) / abs(a) if abs(a) >= ZERO_FALLBACK_PX else None
        out.append((name, a, b, rel))
    return out


def node_match(orig, rend, theta: float = DEFAULT_THRESHOLD) -> bool:
    """True iff every attribute is within ``theta`` relative error (or 1px
    absolute error when the original value is below 1px in magnitude)."""
    for _, a, b, rel in attribute_errors(orig, rend):
        if rel is None:
            if abs(a - b) > ZERO_FALLBACK_PX:
                return False
        elif rel > theta:
            return False
    return True


@dataclass
class Failure:
    node_id: str
    attribute: str
    original: float
    rendered: float | None
    rel_error: float | None

    def to_json(self) -> dict:
        return {"nodeId": self.node_id, "attribute": self.attribute, "original": self.original,
                "rendered": self.rendered, "relError": self.rel_error}


@dataclass
class ScreenScore:
    screen_id: str
    n: int
    m: int
    pms: float
    failures: list[Failure] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"screenId": self.screen_id, "N": self.n, "M": self.m, "pms": self.pms,
                "failures": [f.to_json() for f in self.failures]}


def preview_match_score(orig_rects: Mapping[str, object], rend_rects: Mapping[str, object],
                        theta: float = DEFAULT_THRESHOLD, screen_id: str = "") -> ScreenScore:
    """PMS = 100 * M / N over the original nodes in ``orig_rects``.

    A node with no rendered counterpart counts as unmatched.
    """
    n = len(orig_rects)
    if n == 0:
        raise EmptyScreen(screen_id or "screen has no original nodes")
    m = 0
    failures: list[Failure] = []
    for node_id, orig in orig_rects.items():
        rend = rend_rects.get(node_id)
        if rend is None:
            failures.append(Failure(node_id, "missing", math.nan, None, None))
            continue
        if node_match(orig, rend, theta):
            m += 1
            continue
        for name, a, b, rel in attribute_errors(orig, rend):
            bad = abs(a - b) > ZERO_FALLBACK_PX if rel is None else rel > theta
            if bad:
                failures.append(Failure(node_id, name, a, b, rel))
    return ScreenScore(screen_id, n, m, 100.0 * m / n, failures)


@dataclass
class Distribution:
    buckets: list[tuple[int, int, int]]
    mean: float
    frac_above_95: float
    count: int

    def to_json(self) -> dict:
        return {"count": self.count, "meanPms": self.mean, "fracAbove95": self.frac_above_95,
                "histogram": [{"low": lo, "high": hi, "count": c} for lo, hi, c in self.buckets]}


def pms_distribution(scores: Iterable) -> Distribution:
    """Histogram in 5-point buckets [0,5), ..., [95,100]; 100 lands in the
    last bucket. ``fracAbove95`` counts scores strictly above 95."""
    values = [s.pms if isinstance(s, ScreenScore) else float(s) for s in scores]
    if not values:
        raise EmptyList("no scores")
    nb = 100 // BUCKET_WIDTH
    counts = [0] * nb
    for v in values:
        counts[min(int(v // BUCKET_WIDTH), nb - 1)] += 1
    buckets = [(i * BUCKET_WIDTH, (i + 1) * BUCKET_WIDTH, c) for i, c in enumerate(counts)]
    return Distribution(buckets, sum(values) / len(values),
                        sum(1 for v in values if v > 95) / len(values), len(values))


# -- tagging -----------------------------------------------------------------

@dataclass
class TagScore:
    tag: str
    precision: float
    recall: float
    f1: float
    support: int

    def to_json(self) -> dict:
        return {"tag": self.tag, "precision": self.precision, "recall": self.recall,
                "f1": self.f1, "support": self.support}


@dataclass
class TagEvalReport:
    per_tag: list[TagScore]
    macro_small: float | None
    macro_big: float | None

    def to_json(self) -> dict:
        return {"perTag": [t.to_json() for t in self.per_tag], "macroSmall": self.macro_small,
                "macroBig": self.macro_big}


def f1(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def _as_map(labels) -> dict[str, str]:
    if isinstance(labels, Mapping):
        return {k: (v[0] if isinstance(v, tuple) else v) for k, v in labels.items()}
    return {item["nodeId"]: item["tag"] for item in labels}


def prf1_scores(pred, gold) -> TagEvalReport:
    """Per-tag one-vs-rest P/R/F1 (percent) over the tags that occur in
    either labeling, plus macro F1 over the small and big tags present."""
    p, g = _as_map(pred), _as_map(gold)
    if set(p) != set(g):
        missing = sorted(set(g) ^ set(p))
        raise IdMismatch(f"{len(missing)} node ids differ, e.g. {missing[:3]}")
    present = set(p.values()) | set(g.values())
    order = [t for t in (*SMALL_TAGS, *BIG_TAGS) if t in present]
    order += sorted(present - set(order))
    per_tag = []
    for tag in order:
        tp = sum(1 for k in g if g[k] == tag and p[k] == tag)
        fp = sum(1 for k in g if g[k] != tag and p[k] == tag)
        fn = sum(1 for k in g if g[k] == tag and p[k] != tag)
        prec = 100.0 * tp / (tp + fp) if tp + fp else 0.0
        rec = 100.0 * tp / (tp + fn) if tp + fn else 0.0
        per_tag.append(TagScore(tag, prec, rec, f1(prec, rec), tp + fn))
    small = [t.f1 for t in per_tag if t.tag in SMALL_TAGS]
    big = [t.f1 for t in per_tag if t.tag in BIG_TAGS]
    return TagEvalReport(per_tag, macro_average(small) if small else None,
                         macro_average(big) if big else None)


def macro_average(values: Sequence[float]) -> float:
    """Unweighted mean, rounded to two decimals."""
    if len(values) == 0:
        raise EmptyList("macro average of no values")
    return round(sum(values) / len(values), 2)
