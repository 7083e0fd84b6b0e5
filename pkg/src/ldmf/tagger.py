"""UI element tagging from geometry and layer metadata.

Each node gets exactly one label. Small tags and name-driven big tags come
from a pluggable classifier backend (default :class:`RuleTableBackend`);
geometric big tags (grid, drawer, slider, quantity selector) come from
:func:`detect_composites`, which runs over the grouped tree afterwards.

Default rule table (a rule's score is its base score, plus the name bonus
when one of its name tokens occurs in the layer name, capped at 1):

=================  ==========================================================  =====  ====================
tag                geometry / structure                                        base   name tokens (+0.1)
=================  ==========================================================  =====  ====================
button             fill, single text child, radius >= 4, 1.5 <= aspect <= 8   0.9    button btn cta submit
                   (0.7 when also stroked)
input              stroke, 24 <= h <= 64, aspect >= 3, no child or one text    0.8    input field email password
                   child (0.9 when unfilled)
textarea           stroke, h > 64, w >= 120, no child or one text child        0.8    textarea message comment
checkbox           square, side <= 32, stroke, radius < side / 2               0.7    checkbox check
radio              square, side <= 32, stroke, radius >= side / 2              0.7    radio
switch             fill, 1.6 <= aspect <= 2.4, h <= 40, radius >= h / 2,       0.8    switch toggle
                   exactly one non-text child
progress           fill, h <= 16, aspect >= 10, exactly one child              0.7    progress
select             name token only                                             0.95   select
dropdown           name token only                                             0.95   dropdown
date_time_picker   name token only                                             0.95   date time datepicker calendar
audio_player       name token only, container                                  0.95   audio podcast
video              name token only                                             0.95   video
google_maps        name token only                                             0.95   map maps
file_upload        name token only                                             0.95   upload dropzone
popups             name token only, container                                  0.95   popup modal dialog
text               text kind                                                   1.0
image              image kind; vector leaf fallback                            0.5
container          frame / group / rect fallback                               0.5
=================  ==========================================================  =====  ====================

The name-only tags have no geometric signature in the metadata and are low
precision; with names disabled they are never predicted.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol

from .componentizer import fingerprint_subtree
from .ir import DesignDocument, DesignNode, NodeIndex, Rect, index_nodes, iter_nodes

SMALL_TAGS = ("date_time_picker", "button", "select", "input", "checkbox", "radio",
              "textarea", "dropdown", "switch")
BIG_TAGS = ("audio_player", "drawer", "file_upload", "google_maps", "grid", "popups",
            "progress", "slider", "video", "quantity_selector")
NEUTRAL_TAGS = ("text", "image", "container")
TAXONOMY = SMALL_TAGS + BIG_TAGS + NEUTRAL_TAGS


@dataclass(frozen=True)
class FeatureVector:
    kind: str
    width: float
    height: float
    aspect_ratio: float
    corner_radius: float
    has_fill: bool
    has_stroke: bool
    child_count: int
    single_text_child: bool
    text_length: int
    name_tokens: tuple[str, ...]
    sibling_repeat_count: int
    child_texts: tuple[str, ...] = ()


class ClassifierBackend(Protocol):
    def classify(self, fv: FeatureVector) -> dict[str, float]: ...


def tokenize_name(name: str) -> tuple[str, ...]:
    return tuple(t for t in re.split(r"[^0-9a-z]+", name.lower()) if t)


def extract_features(node: DesignNode, ctx: NodeIndex | None = None,
                     use_names: bool = True) -> FeatureVector:
    b = node.bounds
    text_kids = [c for c in node.children if c.kind == "text"]
    single_text = len(node.children) == 1 and len(text_kids) == 1
    if node.text is not None:
        text_length = len(node.text.content)
    elif single_text:
        text_length = len(text_kids[0].text.content)
    else:
        text_length = 0
    repeat = 1
    if ctx is not None and node.id in ctx.parent_of:
        sig = (node.kind, round(b.w), round(b.h))
        repeat = sum(1 for s in ctx.siblings(node.id)
                     if (s.kind, round(s.bounds.w), round(s.bounds.h)) == sig)
    return FeatureVector(
        kind=node.kind,
        width=b.w,
        height=b.h,
        aspect_ratio=b.w / b.h if b.h > 0 else 0.0,
        corner_radius=node.corner_radius or 0.0,
        has_fill=node.fill is not None,
        has_stroke=node.stroke is not None,
        child_count=len(node.children),
        single_text_child=single_text,
        text_length=text_length,
        name_tokens=tokenize_name(node.name) if use_names else (),
        sibling_repeat_count=repeat,
        child_texts=tuple(c.text.content for c in text_kids),
    )


NAME_TOKENS = {
    "button": {"button", "btn", "cta", "submit"},
    "input": {"input", "field", "textfield", "email", "password"},
    "textarea": {"textarea", "message", "comment"},
    "checkbox": {"checkbox", "check"},
    "radio": {"radio"},
    "switch": {"switch", "toggle"},
    "progress": {"progress"},
    "select": {"select"},
    "dropdown": {"dropdown"},
    "date_time_picker": {"date", "time", "datepicker", "calendar"},
    "audio_player": {"audio", "podcast"},
    "video": {"video"},
    "google_maps": {"map", "maps"},
    "file_upload": {"upload", "dropzone"},
    "popups": {"popup", "modal", "dialog"},
}
NAME_ONLY = {"select", "dropdown", "date_time_picker", "audio_player", "video",
             "google_maps", "file_upload", "popups"}
NAME_BONUS = 0.1
NAME_ONLY_SCORE = 0.95
FALLBACK_SCORE = 0.5


def _square(fv: FeatureVector) -> bool:
    return fv.height > 0 and abs(fv.aspect_ratio - 1.0) <= 0.1


def _geometry_scores(fv: FeatureVector) -> dict[str, float]:
    s: dict[str, float] = {}
    if fv.kind == "text":
        return s
    leafish = fv.child_count == 0 or fv.single_text_child
    if fv.has_fill and fv.single_text_child and fv.corner_radius >= 4 and 1.5 <= fv.aspect_ratio <= 8:
        s["button"] = 0.7 if fv.has_stroke else 0.9
    if fv.has_stroke and 24 <= fv.height <= 64 and fv.aspect_ratio >= 3 and leafish:
        s["input"] = 0.8 if fv.has_fill else 0.9
    if fv.has_stroke and fv.height > 64 and fv.width >= 120 and leafish:
        s["textarea"] = 0.8
    if _square(fv) and fv.width <= 32 and fv.has_stroke and fv.child_count == 0:
        if fv.corner_radius >= fv.width / 2:
            s["radio"] = 0.7
        else:
            s["checkbox"] = 0.7
    if (fv.has_fill and 1.6 <= fv.aspect_ratio <= 2.4 and fv.height <= 40
            and fv.corner_radius >= fv.height / 2 and fv.child_count == 1
            and not fv.single_text_child):
        s["switch"] = 0.8
    if fv.has_fill and 0 < fv.height <= 16 and fv.aspect_ratio >= 10 and fv.child_count == 1:
        s["progress"] = 0.7
    return s


class RuleTableBackend:
    """Deterministic rule table; see the module docstring."""

    def classify(self, fv: FeatureVector) -> dict[str, float]:
        scores = _geometry_scores(fv)
        tokens = set(fv.name_tokens)
        if fv.kind != "text" and tokens:
            for tag, words in NAME_TOKENS.items():
                if not tokens & words:
                    continue
                if tag in NAME_ONLY:
                    if tag in ("audio_player", "popups") and fv.child_count == 0:
                        continue
                    scores[tag] = max(scores.get(tag, 0.0), NAME_ONLY_SCORE)
                elif tag in scores:
                    scores[tag] = min(1.0, scores[tag] + NAME_BONUS)
        for tag, score in _fallback(fv).items():
            scores[tag] = max(scores.get(tag, 0.0), score)
        return scores


def _fallback(fv: FeatureVector) -> dict[str, float]:
    if fv.kind == "text":
        return {"text": 1.0}
    if fv.kind == "image" or (fv.kind == "vector" and fv.child_count == 0):
        return {"image": FALLBACK_SCORE}
    return {"container": FALLBACK_SCORE}


DEFAULT_BACKEND = RuleTableBackend()


def classify_node(fv: FeatureVector, backend: ClassifierBackend = DEFAULT_BACKEND) -> tuple[str, float]:
    """Argmax of the backend scores; ties go to the earlier taxonomy entry."""
    scores = backend.classify(fv)
    best, best_score = None, 0.0
    for tag in TAXONOMY:
        score = scores.get(tag, 0.0)
        if score > best_score:
            best, best_score = tag, score
    if best is None:
        (best, best_score), = _fallback(fv).items()
    return best, min(1.0, best_score)


# -- composites --------------------------------------------------------------

def _texts(node: DesignNode) -> str | None:
    if node.text is not None:
        return node.text.content.strip()
    if len(node.children) == 1 and node.children[0].text is not None:
        return node.children[0].text.content.strip()
    return None


def _is_grid(node: DesignNode, tags: dict[str, str]) -> bool:
    rows = node.children
    if len(rows) < 2:
        return False
    # nested: m lines of n cells each
    if all(len(r.children) >= 2 and r.children for r in rows):
        n = len(rows[0].children)
        cells = [c for r in rows for c in r.children]
        if all(len(r.children) == n for r in rows) and all(c.children for c in cells):
            fps = {fingerprint_subtree(c, tags) for c in cells}
            if len(fps) == 1:
                return True
    # flat: cells directly under the container on >= 2 rows and >= 2 columns
    if len(rows) >= 4 and all(c.children for c in rows):
        if len({fingerprint_subtree(c, tags) for c in rows}) == 1:
            ys = {c.bounds.y for c in rows}
            xs = {c.bounds.x for c in rows}
            if len(ys) >= 2 and len(xs) >= 2 and len(ys) * len(xs) == len(rows):
                return True
    return False


def _is_drawer(node: DesignNode, screen: Rect) -> bool:
    b = node.bounds
    if b == screen or len(node.children) < 2:
        return False
    full_height = b.h >= screen.h - 1 and b.y <= screen.y + 1
    flush = b.x <= screen.x + 1 or b.right >= screen.right - 1
    thin = b.w <= min(400.0, 0.4 * screen.w)
    if not (full_height and flush and thin):
        return False
    spans = sorted((c.bounds.y, c.bounds.bottom) for c in node.children)
    return all(nxt[0] >= cur[1] for cur, nxt in zip(spans, spans[1:]))


def _is_slider(node: DesignNode) -> bool:
    if len(node.children) != 2:
        return False
    for track, thumb in (node.children, node.children[::-1]):
        t, k = track.bounds, thumb.bounds
        if not (t.h > 0 and t.h <= 12 and t.w / t.h >= 8 and not track.children):
            continue
        if not (k.h > 0 and abs(k.w / k.h - 1) <= 0.1 and k.w <= 40 and k.w > t.h):
            continue
        cx, cy = k.x + k.w / 2, k.y + k.h / 2
        if t.x <= cx <= t.right and abs(cy - (t.y + t.h / 2)) <= k.h / 2:
            return True
    return False


_MINUS = {"-", "−", "–"}


def _is_quantity(node: DesignNode) -> bool:
    if len(node.children) != 3:
        return False
    kids = sorted(node.children, key=lambda c: c.bounds.x)
    texts = [_texts(c) for c in kids]
    if any(t is None for t in texts):
        return False
    return texts[0] in _MINUS and texts[1].isdigit() and texts[2] == "+"


def detect_composites(subtree: DesignNode, tags: dict[str, str],
                      screen: Rect | None = None) -> list[tuple[str, str]]:
    """Big-tag structures among containers of ``subtree``, in pre-order."""
    if screen is None:
        screen = subtree.bounds
    out = []
    for node in iter_nodes(subtree):
        if not node.children:
            continue
        if _is_grid(node, tags):
            out.append((node.id, "grid"))
        elif _is_drawer(node, screen):
            out.append((node.id, "drawer"))
        elif _is_slider(node):
            out.append((node.id, "slider"))
        elif _is_quantity(node):
            out.append((node.id, "quantity_selector"))
    return out


# -- document ----------------------------------------------------------------

def predict_tags(doc: DesignDocument, backend: ClassifierBackend = DEFAULT_BACKEND,
                 use_names: bool = True) -> dict[str, tuple[str, float]]:
    """Label and confidence for every node."""
    index = index_nodes(doc)
    out: dict[str, tuple[str, float]] = {}
    for node_id in index.preorder:
        fv = extract_features(index.by_id[node_id], index, use_names)
        out[node_id] = classify_node(fv, backend)
    labels = {k: v[0] for k, v in out.items()}
    for screen in doc.screens:
        area = Rect(0.0, 0.0, screen.width, screen.height)
        for node_id, big in detect_composites(screen.root, labels, area):
            if out[node_id][0] in NEUTRAL_TAGS:
                out[node_id] = (big, 1.0)
    return out


def tag_document(doc: DesignDocument, backend: ClassifierBackend = DEFAULT_BACKEND,
                 use_names: bool = True) -> dict[str, str]:
    return {k: v[0] for k, v in predict_tags(doc, backend, use_names).items()}
