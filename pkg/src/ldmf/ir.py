"""Design document model, canonical JSON format, validation and indexing.

Coordinates are absolute screen-space pixels with the origin at the top-left
of each screen. Child order is paint order: later children draw on top.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator

KINDS = ("frame", "group", "rect", "text", "image", "vector")
CONTAINER_KINDS = frozenset({"frame", "group"})
TEXT_ALIGNS = ("left", "center", "right")


class DesignSyntaxError(ValueError):
    """Input is not well-formed JSON."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class SchemaError(ValueError):
    """Input is JSON but does not match the design schema."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class DuplicateId(ValueError):
    pass


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    @property
    def right(self) -> float:
        return self.x + self.w

    @property
    def bottom(self) -> float:
        return self.y + self.h

    @property
    def area(self) -> float:
        return self.w * self.h

    def contains(self, other: Rect) -> bool:
        return (self.x <= other.x and self.y <= other.y
                and other.right <= self.right and other.bottom <= self.bottom)

    def intersection_area(self, other: Rect) -> float:
        iw = min(self.right, other.right) - max(self.x, other.x)
        ih = min(self.bottom, other.bottom) - max(self.y, other.y)
        if iw <= 0 or ih <= 0:
            return 0.0
        return iw * ih

    @staticmethod
    def union(rects) -> Rect:
        rects = list(rects)
        x0 = min(r.x for r in rects)
        y0 = min(r.y for r in rects)
        x1 = max(r.right for r in rects)
        y1 = max(r.bottom for r in rects)
        return Rect(x0, y0, x1 - x0, y1 - y0)


@dataclass(frozen=True)
class Fill:
    color: str
    opacity: float = 1.0


@dataclass(frozen=True)
class Stroke:
    color: str
    width: float


@dataclass(frozen=True)
class TextStyle:
    content: str
    font_size: float
    font_weight: int = 400
    align: str = "left"


@dataclass(frozen=True)
class Padding:
    top: float = 0.0
    right: float = 0.0
    bottom: float = 0.0
    left: float = 0.0


@dataclass(frozen=True)
class AutoLayoutSpec:
    """Flex-like container description inferred from child geometry.

    ``margins`` holds a leading margin per flow child when gaps are not
    uniform (``gap`` is then 0); ``cross_offsets`` holds each flow child's
    offset from the content box on the cross axis. Both are empty when
    unused.
    """

    direction: str
    gap: float = 0.0
    padding: Padding = Padding()
    align: str = "start"
    sizing: str = "fixed"
    margins: tuple[float, ...] = ()
    cross_offsets: tuple[float, ...] = ()


@dataclass(frozen=True)
class ComponentInstance:
    """Marks a node as an occurrence of a component.

    ``node_ids`` maps template paths to the concrete node ids of this
    occurrence; ``overrides`` holds per-path attributes that differ from the
    template without being props (geometry, names, styling).
    """

    component_id: str
    bindings: tuple[tuple[str, object], ...] = ()
    node_ids: tuple[tuple[str, str], ...] = ()
    overrides: tuple[tuple[str, tuple[tuple[str, object], ...]], ...] = ()

    @property
    def binding_map(self) -> dict:
        return dict(self.bindings)


@dataclass(frozen=True)
class DesignNode:
    id: str
    name: str
    kind: str
    bounds: Rect
    fill: Fill | None = None
    corner_radius: float | None = None
    stroke: Stroke | None = None
    text: TextStyle | None = None
    image_ref: str | None = None
    children: tuple[DesignNode, ...] = ()
    layout: AutoLayoutSpec | None = None
    positioning: str = "flow"
    origin: str = "original"
    instance: ComponentInstance | None = None

    @property
    def is_container(self) -> bool:
        return self.kind in CONTAINER_KINDS


@dataclass(frozen=True)
class Screen:
    id: str
    name: str
    width: float
    height: float
    root: DesignNode


@dataclass(frozen=True)
class DesignDocument:
    screens: tuple[Screen, ...]


@dataclass(frozen=True)
class Violation:
    path: str
    rule: str
    detail: str


@dataclass
class NodeIndex:
    by_id: dict[str, DesignNode]
    preorder: list[str]
    parent_of: dict[str, str]
    screen_of: dict[str, str] = field(default_factory=dict)

    def siblings(self, node_id: str) -> tuple[DesignNode, ...]:
        parent = self.parent_of.get(node_id)
        if parent is None:
            return (self.by_id[node_id],)
        return self.by_id[parent].children


def iter_nodes(node: DesignNode) -> Iterator[DesignNode]:
    """Pre-order walk, children in stored order."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.children))


def iter_document(doc: DesignDocument) -> Iterator[tuple[Screen, DesignNode]]:
    for screen in doc.screens:
        for node in iter_nodes(screen.root):
            yield screen, node


def count_nodes(node: DesignNode) -> int:
    return 1 + sum(count_nodes(c) for c in node.children)


def index_nodes(doc: DesignDocument) -> NodeIndex:
    by_id: dict[str, DesignNode] = {}
    preorder: list[str] = []
    parent_of: dict[str, str] = {}
    screen_of: dict[str, str] = {}
    for screen in doc.screens:
        stack: list[tuple[DesignNode, str | None]] = [(screen.root, None)]
        while stack:
            node, parent = stack.pop()
            if node.id in by_id:
                raise DuplicateId(node.id)
            by_id[node.id] = node
            preorder.append(node.id)
            screen_of[node.id] = screen.id
            if parent is not None:
                parent_of[node.id] = parent
            stack.extend((c, node.id) for c in reversed(node.children))
    return NodeIndex(by_id, preorder, parent_of, screen_of)


# -- parsing -----------------------------------------------------------------

def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _req(obj: dict, key: str, path: str, kind: str):
    if key not in obj:
        raise SchemaError(f"missing required field {key!r}", path)
    return _check(obj[key], f"{path}.{key}", kind)


def _opt(obj: dict, key: str, path: str, kind: str):
    if obj.get(key) is None:
        return None
    return _check(obj[key], f"{path}.{key}", kind)


def _check(value, path: str, kind: str):
    if kind == "number":
        if not _is_number(value):
            raise SchemaError(f"expected number, got {type(value).__name__}", path)
        return float(value)
    if kind == "int":
        if not _is_number(value) or float(value) != int(value):
            raise SchemaError("expected integer", path)
        return int(value)
    if kind == "str":
        if not isinstance(value, str):
            raise SchemaError(f"expected string, got {type(value).__name__}", path)
        return value
    if kind == "object":
        if not isinstance(value, dict):
            raise SchemaError("expected object", path)
        return value
    if kind == "list":
        if not isinstance(value, list):
            raise SchemaError("expected array", path)
        return value
    raise AssertionError(kind)


def _parse_layout(obj: dict, path: str) -> AutoLayoutSpec:
    pad = _opt(obj, "padding", path, "object") or {}
    padding = Padding(*(
        _opt(pad, side, f"{path}.padding", "number") or 0.0
        for side in ("top", "right", "bottom", "left")))
    direction = _req(obj, "direction", path, "str")
    if direction not in ("row", "column"):
        raise SchemaError(f"unknown direction {direction!r}", f"{path}.direction")
    margins = tuple(_check(v, f"{path}.margins[{i}]", "number")
                    for i, v in enumerate(_opt(obj, "margins", path, "list") or []))
    cross = tuple(_check(v, f"{path}.crossOffsets[{i}]", "number")
                  for i, v in enumerate(_opt(obj, "crossOffsets", path, "list") or []))
    return AutoLayoutSpec(
        direction=direction,
        gap=_opt(obj, "gap", path, "number") or 0.0,
        padding=padding,
        align=_opt(obj, "align", path, "str") or "start",
        sizing=_opt(obj, "sizing", path, "str") or "fixed",
        margins=margins,
        cross_offsets=cross,
    )


def _parse_node(obj, path: str, seen: set[str]) -> DesignNode:
    obj = _check(obj, path, "object")
    node_id = _req(obj, "id", path, "str")
    if node_id in seen:
        raise SchemaError(f"duplicate node id {node_id!r}", f"{path}.id")
    seen.add(node_id)
    kind = _req(obj, "kind", path, "str")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}", f"{path}.kind")
    bounds = Rect(*(_req(obj, k, path, "number") for k in ("x", "y", "w", "h")))

    fill = None
    if obj.get("fill") is not None:
        f = _check(obj["fill"], f"{path}.fill", "object")
        opacity = _opt(f, "opacity", f"{path}.fill", "number")
        fill = Fill(_req(f, "color", f"{path}.fill", "str"),
                    1.0 if opacity is None else opacity)
    stroke = None
    if obj.get("stroke") is not None:
        s = _check(obj["stroke"], f"{path}.stroke", "object")
        stroke = Stroke(_req(s, "color", f"{path}.stroke", "str"),
                        _req(s, "width", f"{path}.stroke", "number"))
    text = None
    if obj.get("text") is not None:
        t = _check(obj["text"], f"{path}.text", "object")
        align = _opt(t, "align", f"{path}.text", "str") or "left"
        if align not in TEXT_ALIGNS:
            raise SchemaError(f"unknown align {align!r}", f"{path}.text.align")
        weight = _opt(t, "fontWeight", f"{path}.text", "int")
        text = TextStyle(_req(t, "content", f"{path}.text", "str"),
                         _req(t, "fontSize", f"{path}.text", "number"),
                         400 if weight is None else weight, align)
    layout = None
    if obj.get("layout") is not None:
        layout = _parse_layout(_check(obj["layout"], f"{path}.layout", "object"),
                               f"{path}.layout")
    positioning = _opt(obj, "positioning", path, "str") or "flow"
    if positioning not in ("flow", "absolute"):
        raise SchemaError(f"unknown positioning {positioning!r}", f"{path}.positioning")
    origin = _opt(obj, "origin", path, "str") or "original"

    children_raw = _req(obj, "children", path, "list") if "children" in obj else []
    children = tuple(_parse_node(c, f"{path}.children[{i}]", seen)
                     for i, c in enumerate(children_raw))
    return DesignNode(
        id=node_id,
        name=_opt(obj, "name", path, "str") or "",
        kind=kind,
        bounds=bounds,
        fill=fill,
        corner_radius=_opt(obj, "cornerRadius", path, "number"),
        stroke=stroke,
        text=text,
        image_ref=_opt(obj, "imageRef", path, "str"),
        children=children,
        layout=layout,
        positioning=positioning,
        origin=origin,
    )


def parse_document(data: str | bytes) -> DesignDocument:
    """Parse canonical design JSON. Unknown fields are ignored."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DesignSyntaxError(f"invalid UTF-8 at byte {exc.start}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DesignSyntaxError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    raw = _check(raw, "$", "object")
    screens_raw = _req(raw, "screens", "$", "list")
    seen: set[str] = set()
    screen_ids: set[str] = set()
    screens = []
    for i, s in enumerate(screens_raw):
        path = f"$.screens[{i}]"
        s = _check(s, path, "object")
        sid = _req(s, "id", path, "str")
        if sid in screen_ids:
            raise SchemaError(f"duplicate screen id {sid!r}", f"{path}.id")
        screen_ids.add(sid)
        screens.append(Screen(
            id=sid,
            name=_opt(s, "name", path, "str") or "",
            width=_req(s, "width", path, "number"),
            height=_req(s, "height", path, "number"),
            root=_parse_node(_req(s, "root", path, "object"), f"{path}.root", seen),
        ))
    return DesignDocument(tuple(screens))


# -- serialization -----------------------------------------------------------

def num(v: float):
    """JSON-friendly number: integral floats are written without a fraction."""
    if isinstance(v, float) and v.is_integer() and abs(v) < 2 ** 53:
        return int(v)
    return v


def layout_to_json(spec: AutoLayoutSpec) -> dict:
    out = {
        "direction": spec.direction,
        "gap": num(spec.gap),
        "padding": {side: num(getattr(spec.padding, side))
                    for side in ("top", "right", "bottom", "left")},
        "align": spec.align,
        "sizing": spec.sizing,
    }
    if spec.margins:
        out["margins"] = [num(m) for m in spec.margins]
    if spec.cross_offsets:
        out["crossOffsets"] = [num(c) for c in spec.cross_offsets]
    return out


def node_to_json(node: DesignNode) -> dict:
    if node.instance is not None:
        raise ValueError(f"node {node.id!r} is a component instance; expand it first")
    b = node.bounds
    out: dict = {"id": node.id, "name": node.name, "kind": node.kind,
                 "x": num(b.x), "y": num(b.y), "w": num(b.w), "h": num(b.h)}
    if node.fill is not None:
        out["fill"] = {"color": node.fill.color, "opacity": num(node.fill.opacity)}
    if node.corner_radius is not None:
        out["cornerRadius"] = num(node.corner_radius)
    if node.stroke is not None:
        out["stroke"] = {"color": node.stroke.color, "width": num(node.stroke.width)}
    if node.text is not None:
        t = node.text
        out["text"] = {"content": t.content, "fontSize": num(t.font_size),
                       "fontWeight": t.font_weight, "align": t.align}
    if node.image_ref is not None:
        out["imageRef"] = node.image_ref
    if node.layout is not None:
        out["layout"] = layout_to_json(node.layout)
    if node.positioning != "flow":
        out["positioning"] = node.positioning
    if node.origin != "original":
        out["origin"] = node.origin
    out["children"] = [node_to_json(c) for c in node.children]
    return out


def document_to_json(doc: DesignDocument) -> dict:
    return {"screens": [
        {"id": s.id, "name": s.name, "width": num(s.width), "height": num(s.height),
         "root": node_to_json(s.root)}
        for s in doc.screens]}


def serialize_document(doc: DesignDocument) -> str:
    return json.dumps(document_to_json(doc), indent=2, ensure_ascii=False) + "\n"


# -- validation --------------------------------------------------------------

def _finite(*values) -> bool:
    return all(math.isfinite(v) for v in values)


def validate_document(doc: DesignDocument) -> list[Violation]:
    """Check every type invariant; violations are returned, never raised."""
    out: list[Violation] = []
    seen_ids: set[str] = set()
    seen_screens: set[str] = set()

    def visit(node: DesignNode, path: str) -> None:
        if node.id in seen_ids:
            out.append(Violation(path, "DUPLICATE_ID", f"id {node.id!r} already used"))
        seen_ids.add(node.id)
        if node.kind not in KINDS:
            out.append(Violation(path, "UNKNOWN_KIND", node.kind))
        b = node.bounds
        if not _finite(b.x, b.y, b.w, b.h):
            out.append(Violation(path, "NON_FINITE", f"bounds {b}"))
        elif b.w < 0 or b.h < 0:
            out.append(Violation(path, "NEGATIVE_SIZE", f"w={b.w} h={b.h}"))
        if node.children and node.kind not in CONTAINER_KINDS:
            out.append(Violation(path, "LEAF_KIND_HAS_CHILDREN",
                                 f"{node.kind} node has {len(node.children)} children"))
        if (node.kind == "text") != (node.text is not None):
            out.append(Violation(path, "TEXT_PAYLOAD_MISMATCH",
                                 "text payload present iff kind is text"))
        if node.fill is not None and not (0.0 <= node.fill.opacity <= 1.0):
            out.append(Violation(path, "BAD_OPACITY", str(node.fill.opacity)))
        if node.corner_radius is not None and not (
                _finite(node.corner_radius) and node.corner_radius >= 0):
            out.append(Violation(path, "BAD_CORNER_RADIUS", str(node.corner_radius)))
        for i, child in enumerate(node.children):
            visit(child, f"{path}.children[{i}]")

    for i, screen in enumerate(doc.screens):
        path = f"screens[{i}]"
        if screen.id in seen_screens:
            out.append(Violation(path, "DUPLICATE_SCREEN_ID", screen.id))
        seen_screens.add(screen.id)
        if screen.root.bounds != Rect(0.0, 0.0, screen.width, screen.height):
            out.append(Violation(f"{path}.root", "ROOT_BOUNDS_MISMATCH",
                                 f"root {screen.root.bounds} vs screen "
                                 f"{screen.width}x{screen.height}"))
        visit(screen.root, f"{path}.root")
    return out
