"""Seeded synthetic corpus with ground truth, and the de-optimizer.

Every generated design is a single 1440-wide page: nested row/column frames
with uniform gaps, small-tag widgets drawn as the frames and primitives a
designer would draw, and one row of repeated cards that differ only in their
text. All coordinates are integers. Gold tags are assigned as each node is
built; the gold component structure is always one definition with one
occurrence per card.

:func:`deoptimize` produces the matching "messy" design: unstyled layout
frames are dissolved, their content re-parented to the nearest retained
ancestor with absolute bounds unchanged, siblings shuffled, and all layout
metadata dropped.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .ir import (
    AutoLayoutSpec, CONTAINER_KINDS, DesignDocument, DesignNode, Fill, Padding, Rect, Screen,
    Stroke, TextStyle, iter_nodes,
)

PAGE_PADDING = 40
CARD_WIDTH = 200
GAPS = (8, 12, 16, 24, 32)
PALETTE = ("#2563eb", "#16a34a", "#dc2626", "#9333ea", "#ea580c", "#0f172a")
WORDS = ("alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india",
         "juliet", "kilo", "lima", "mike", "november", "oscar", "papa", "quebec", "romeo")
WIDGETS = ("button", "input", "textarea", "checkbox", "radio", "switch", "select", "dropdown",
           "date_time_picker", "text", "image", "icon")
# 3-node widgets are drawn at most once per design so that no repeat other
# than the card row exists.
_ONCE = {"select", "dropdown", "date_time_picker"}
_MAX_ATTEMPTS = 200


@dataclass(frozen=True)
class CorpusSpec:
    count: int
    seed: int
    depth_range: tuple[int, int] = (2, 7)
    children_range: tuple[int, int] = (2, 6)
    component_repeat_range: tuple[int, int] = (2, 6)
    viewport: tuple[int, int] = (1440, 900)

    def __post_init__(self):
        for name in ("depth_range", "children_range", "component_repeat_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: {lo}..{hi}")
        lo, hi = self.depth_range
        if lo < 1 or hi > 10:
            raise ValueError("depth_range must lie within 1..10")
        if self.children_range[0] < 1 or self.component_repeat_range[0] < 1:
            raise ValueError("ranges must start at 1 or more")
        if self.count < 0:
            raise ValueError("count must be non-negative")


@dataclass
class GroundTruthPair:
    name: str
    optimized: DesignDocument
    deoptimized: DesignDocument
    gold_tags: dict[str, str]
    gold_components: tuple[int, tuple[int, ...]]
    depth: int = 0


# -- abstract boxes ----------------------------------------------------------

@dataclass
class _Box:
    """A node before placement: size is known, position is assigned later."""

    kind: str
    name: str
    tag: str
    w: int
    h: int
    fill: Fill | None = None
    stroke: Stroke | None = None
    radius: float | None = None
    text: TextStyle | None = None
    image_ref: str | None = None
    # children with offsets relative to this box
    children: list[tuple[int, int, _Box]] = field(default_factory=list)
    layout: AutoLayoutSpec | None = None


class _Gen:
    def __init__(self, rng: random.Random, spec: CorpusSpec):
        self.rng = rng
        self.spec = spec
        self.used: set[str] = set()

    def words(self, lo: int, hi: int) -> str:
        return " ".join(self.rng.choice(WORDS) for _ in range(self.rng.randint(lo, hi))).capitalize()

    def color(self) -> str:
        return self.rng.choice(PALETTE)

    def text(self, name: str, w: int, size: int = 16, weight: int = 400) -> _Box:
        h = {16: 20, 24: 32, 32: 40}.get(size, size + 4)
        return _Box("text", name, "text", w, h, fill=Fill("#111827"),
                    text=TextStyle(self.words(1, 4), size, weight))

    def framed(self, kind_name: str, tag: str, w: int, h: int, kids: list[tuple[int, int, _Box]],
               fill=None, stroke=None, radius=None) -> _Box:
        return _Box("frame", kind_name, tag, w, h, fill=fill, stroke=stroke, radius=radius,
                    children=kids)

    def widget(self, kind: str) -> _Box:
        r = self.rng
        if kind == "button":
            w = r.randrange(96, 161, 4)
            label = self.text("Label", w - 32, 16, 600)
            return self.framed("Button", "button", w, 40, [(16, 10, label)],
                               fill=Fill(self.color()), radius=8)
        if kind == "input":
            w = r.randrange(240, 321, 8)
            return self.framed("Input", "input", w, 40, [(12, 10, self.text("Placeholder", w - 24))],
                               stroke=Stroke("#9ca3af", 1), radius=6)
        if kind == "textarea":
            w = r.randrange(240, 361, 8)
            return self.framed("Message", "textarea", w, 120,
                               [(12, 12, self.text("Placeholder", w - 24))],
                               stroke=Stroke("#9ca3af", 1), radius=6)
        if kind == "checkbox":
            return _Box("rect", "Checkbox", "checkbox", 20, 20, stroke=Stroke("#374151", 2), radius=4)
        if kind == "radio":
            return _Box("rect", "Radio", "radio", 20, 20, stroke=Stroke("#374151", 2), radius=10)
        if kind == "switch":
            knob = _Box("rect", "Knob", "container", 20, 20, fill=Fill("#ffffff"), radius=10)
            return self.framed("Switch", "switch", 44, 24, [(r.choice((2, 22)), 2, knob)],
                               fill=Fill(self.color()), radius=12)
        if kind in ("select", "dropdown", "date_time_picker"):
            name = {"select": "Select", "dropdown": "Dropdown",
                    "date_time_picker": "Date picker"}[kind]
            w = r.randrange(200, 281, 8)
            chevron = _Box("vector", "Chevron", "image", 16, 16, fill=Fill("#374151"))
            return self.framed(name, kind, w, 40,
                               [(12, 10, self.text("Value", w - 52)), (w - 28, 12, chevron)],
                               stroke=Stroke("#9ca3af", 1), radius=6)
        if kind == "text":
            size = r.choice((16, 16, 16, 24, 32))
            return self.text("Heading" if size > 16 else "Paragraph",
                             r.randrange(80, 401, 8), size, 700 if size > 16 else 400)
        if kind == "image":
            w, h = r.randrange(80, 321, 8), r.randrange(60, 201, 4)
            return _Box("image", "Photo", "image", w, h, image_ref=f"img/{self.words(1, 1).lower()}.png")
        return _Box("vector", "Icon", "image", 24, 24, fill=Fill(self.color()))

    def pick_widget(self) -> _Box:
        while True:
            kind = self.rng.choice(WIDGETS)
            if kind in _ONCE:
                if kind in self.used:
                    continue
                self.used.add(kind)
            return self.widget(kind)

    def card(self, image_ref: str, radius: int) -> _Box:
        photo = _Box("image", "Cover", "image", CARD_WIDTH - 24, 96, image_ref=image_ref)
        title = self.text("Title", CARD_WIDTH - 24, 16, 600)
        body = self.text("Body", CARD_WIDTH - 24, 16)
        kids = [(12, 12, photo), (12, 120, title), (12, 148, body)]
        return _Box("frame", "Card", "container", CARD_WIDTH, 180, fill=Fill("#f3f4f6"),
                    radius=radius, children=kids)


def _stack(boxes: list[_Box], direction: str, gap: int, pad: int, align: str
           ) -> tuple[int, int, list[tuple[int, int, _Box]]]:
    """Hug-size a flex container and place its children."""
    main = sum((b.w if direction == "row" else b.h) for b in boxes) + gap * (len(boxes) - 1)
    cross = max((b.h if direction == "row" else b.w) for b in boxes)
    kids = []
    cursor = pad
    for b in boxes:
        size_c = b.h if direction == "row" else b.w
        off = pad + ((cross - size_c) // 2 if align == "center" else 0)
        kids.append((cursor, off, b) if direction == "row" else (off, cursor, b))
        cursor += (b.w if direction == "row" else b.h) + gap
    w, h = (main, cross) if direction == "row" else (cross, main)
    return w + 2 * pad, h + 2 * pad, kids


_MAX_ROW = 1440 - 2 * PAGE_PADDING


def _section(gen: _Gen, boxes: list[_Box], direction: str, name: str) -> _Box:
    rng = gen.rng
    gap, pad = rng.choice(GAPS), rng.choice((0, 0, 8, 16))
    align = rng.choice(("start", "center"))
    w, _, _ = _stack(boxes, "row", gap, pad, align)
    if direction == "row" and w > _MAX_ROW:
        direction = "column"
    w, h, kids = _stack(boxes, direction, gap, pad, align)
    return _Box("frame", name, "container", w, h, children=kids,
                layout=AutoLayoutSpec(direction, float(gap), Padding(*(float(pad),) * 4), align))


def _cards(gen: _Gen) -> list[_Box]:
    lo, hi = gen.spec.component_repeat_range
    k = gen.rng.randint(lo, hi)
    radius = gen.rng.choice((8, 12))
    return [gen.card(f"img/card{i}.png", radius) for i in range(k)]


def _build(gen: _Gen, level: int, depth: int, carries: bool) -> list[_Box]:
    """Children of a container at ``level``; ``carries`` marks the chain that
    must reach the full depth and hold the card row."""
    rng = gen.rng
    lo, hi = gen.spec.children_range
    n = rng.randint(lo, hi)
    out: list[_Box] = []
    if level == depth - 1:
        if carries:
            return _cards(gen)
        return [gen.pick_widget() for _ in range(n)]
    if carries:
        slot = rng.randrange(n)
    for i in range(n):
        chain = carries and i == slot
        if chain or (level + 1 < depth and rng.random() < 0.4):
            kids = _build(gen, level + 1, depth, chain)
            out.append(_section(gen, kids, rng.choice(("row", "column")),
                                "Cards" if chain and level + 1 == depth - 1 else "Section"))
        else:
            out.append(gen.pick_widget())
    return out


def _realize(box: _Box, x: int, y: int, ids: list[int], tags: dict[str, str],
             prefix: str) -> DesignNode:
    ids[0] += 1
    node_id = f"{prefix}n{ids[0]}"
    tags[node_id] = box.tag
    kids = tuple(_realize(c, x + dx, y + dy, ids, tags, prefix) for dx, dy, c in box.children)
    return DesignNode(id=node_id, name=box.name, kind=box.kind,
                      bounds=Rect(float(x), float(y), float(box.w), float(box.h)),
                      fill=box.fill, corner_radius=box.radius, stroke=box.stroke,
                      text=box.text, image_ref=box.image_ref, children=kids, layout=box.layout)


def _signature(node: DesignNode, tags: dict[str, str]) -> tuple:
    return (node.kind, tags[node.id], tuple(_signature(c, tags) for c in node.children))


def _size(node: DesignNode) -> int:
    return sum(1 for _ in iter_nodes(node))


def _has_stray_repeat(root: DesignNode, tags: dict[str, str]) -> bool:
    """True when any subtree of >= 3 nodes, other than the cards, repeats."""
    cards = {_signature(n, tags) for n in iter_nodes(root) if n.name == "Card"}
    seen: set[tuple] = set(cards)
    for node in iter_nodes(root):
        if node is root or node.name == "Card" or _size(node) < 3:
            continue
        sig = _signature(node, tags)
        if sig in seen:
            return True
        seen.add(sig)
    return False


def container_depth(node: DesignNode) -> int:
    """Number of frame/group levels on the deepest root-to-leaf path."""
    if node.kind not in CONTAINER_KINDS:
        return 0
    return 1 + max((container_depth(c) for c in node.children), default=0)


def generate_design(spec: CorpusSpec, index: int) -> tuple[DesignDocument, dict[str, str], int, int]:
    """One optimized design, its gold tags, card count and depth."""
    rng = random.Random(f"{spec.seed}/{index}")
    for _ in range(_MAX_ATTEMPTS):
        gen = _Gen(rng, spec)
        depth = rng.randint(*spec.depth_range)
        if depth < 2:
            depth = 2
        kids = _build(gen, 1, depth, True)
        if any(b.w > _MAX_ROW for b in kids):
            continue
        gap = rng.choice(GAPS)
        _, content_h, placed = _stack(kids, "column", gap, PAGE_PADDING, "start")
        width = spec.viewport[0]
        height = max(spec.viewport[1], content_h)
        root_box = _Box("frame", "Page", "container", width, height, fill=Fill("#ffffff"),
                        children=placed,
                        layout=AutoLayoutSpec("column", float(gap),
                                              Padding(*(float(PAGE_PADDING),) * 4)))
        tags: dict[str, str] = {}
        prefix = f"d{index}-"
        root = _realize(root_box, 0, 0, [0], tags, prefix)
        if _has_stray_repeat(root, tags):
            continue
        cards = sum(1 for n in iter_nodes(root) if n.name == "Card")
        screen = Screen(f"{prefix}screen", f"Design {index}", float(width), float(height), root)
        return DesignDocument((screen,)), tags, cards, container_depth(root)
    raise RuntimeError(f"design {index}: no repeat-free sample in {_MAX_ATTEMPTS} attempts")


def gen_corpus(spec: CorpusSpec) -> list[GroundTruthPair]:
    out = []
    for i in range(spec.count):
        doc, tags, cards, depth = generate_design(spec, i)
        out.append(GroundTruthPair(f"design_{i:04d}", doc, deoptimize(doc, spec.seed), tags,
                                   (1, (cards,)), depth))
    return out


# -- de-optimization ---------------------------------------------------------

def _styled(node: DesignNode) -> bool:
    return node.fill is not None or node.stroke is not None


def _flatten(node: DesignNode) -> list[DesignNode]:
    """The retained nodes that replace ``node`` in its retained ancestor."""
    kids = [k for c in node.children for k in _flatten(c)]
    bare = replace(node, layout=None, positioning="flow", origin="original")
    if node.kind in CONTAINER_KINDS and not _styled(node):
        return kids
    return [replace(bare, children=tuple(kids))]


def _shuffle(nodes: list[DesignNode], rng: random.Random) -> list[DesignNode]:
    """Random order that keeps every overlapping pair in paint order."""
    n = len(nodes)
    before = [set() for _ in range(n)]
    for j in range(n):
        for i in range(j):
            if nodes[i].bounds.intersection_area(nodes[j].bounds) > 0:
                before[j].add(i)
    done: set[int] = set()
    out = []
    while len(out) < n:
        ready = [i for i in range(n) if i not in done and before[i] <= done]
        pick = rng.choice(ready)
        done.add(pick)
        out.append(nodes[pick])
    return out


def _shuffle_tree(node: DesignNode, rng: random.Random) -> DesignNode:
    if not node.children:
        return node
    kids = _shuffle([_shuffle_tree(c, rng) for c in node.children], rng)
    return replace(node, children=tuple(kids))


def deoptimize(doc: DesignDocument, seed: int) -> DesignDocument:
    """Flatten, shuffle and strip layout metadata; leaf bounds are untouched."""
    screens = []
    for s in doc.screens:
        rng = random.Random(f"deopt/{seed}/{s.id}")
        kids = [k for c in s.root.children for k in _flatten(c)]
        root = replace(s.root, children=tuple(kids), layout=None, positioning="flow",
                       origin="original")
        screens.append(replace(s, root=_shuffle_tree(root, rng)))
    return DesignDocument(tuple(screens))
