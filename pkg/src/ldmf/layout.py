"""A small flex-layout engine for exactly the subset of CSS the emitter writes.

It stands in for a browser when scoring emitted code: every element has a
fixed (or hugging) size, flow children are stacked along the container's
main axis with gap or per-child margins, and absolute children sit at fixed
offsets from their parent's origin. There is no wrapping, shrinking, or text
measurement.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .instructions import Element, Program, build_tree
from .ir import AutoLayoutSpec, Padding


@dataclass(frozen=True)
class RenderedRect:
    node_id: str
    x: float
    y: float
    w: float
    h: float

    def to_json(self) -> dict:
        return {"nodeId": self.node_id, "x": self.x, "y": self.y, "w": self.w, "h": self.h}


@dataclass(frozen=True)
class LayoutOverflow:
    """A child whose box extends past its parent's content box."""

    node_id: str
    parent_id: str
    detail: str


@dataclass
class LayoutResult:
    rects: dict[str, RenderedRect] = field(default_factory=dict)
    overflows: list[LayoutOverflow] = field(default_factory=list)


_ZERO = Padding(0.0, 0.0, 0.0, 0.0)


def _spec(el: Element) -> AutoLayoutSpec | None:
    return el.layout.container if el.layout is not None else None


def _flow(el: Element) -> list[Element]:
    return [c for c in el.children if c.positioning != "absolute"]


def _flow_offsets(el: Element, sizes: dict[int, tuple[float, float]]) -> list[tuple[float, float]]:
    """Offsets of each flow child relative to the parent's border-box origin."""
    spec = _spec(el)
    pad = spec.padding if spec else _ZERO
    direction = spec.direction if spec else "column"
    flow = _flow(el)
    out = []
    cursor = 0.0
    for i, child in enumerate(flow):
        w, h = sizes[id(child)]
        if spec is not None and spec.margins:
            cursor += spec.margins[i] if i < len(spec.margins) else 0.0
        elif i > 0 and spec is not None:
            cursor += spec.gap
        cross = spec.cross_offsets[i] if spec is not None and i < len(spec.cross_offsets) else 0.0
        if direction == "row":
            out.append((pad.left + cursor, pad.top + cross))
            cursor += w
        else:
            out.append((pad.left + cross, pad.top + cursor))
            cursor += h
    return out


def _measure(el: Element, sizes: dict[int, tuple[float, float]]) -> tuple[float, float]:
    for child in el.children:
        _measure(child, sizes)
    style = el.style
    if style is not None and style.sizing != "hug":
        size = (style.w, style.h)
    else:
        spec = _spec(el)
        pad = spec.padding if spec else _ZERO
        w = h = 0.0
        flow = _flow(el)
        for child, (ox, oy) in zip(flow, _flow_offsets(el, sizes)):
            cw, ch = sizes[id(child)]
            w, h = max(w, ox + cw), max(h, oy + ch)
        if flow:
            w, h = w + pad.right, h + pad.bottom
        for child in el.children:
            if child.positioning == "absolute":
                cw, ch = sizes[id(child)]
                w, h = max(w, child.layout.x + cw), max(h, child.layout.y + ch)
        size = (w, h)
    sizes[id(el)] = size
    return size


def _place(el: Element, x: float, y: float, sizes: dict, result: LayoutResult) -> None:
    w, h = sizes[id(el)]
    result.rects[el.node_id] = RenderedRect(el.node_id, x, y, w, h)
    spec = _spec(el)
    pad = spec.padding if spec else _ZERO
    cx0, cy0 = x + pad.left, y + pad.top
    cx1, cy1 = x + w - pad.right, y + h - pad.bottom
    flow = _flow(el)
    for child, (ox, oy) in zip(flow, _flow_offsets(el, sizes)):
        cw, ch = sizes[id(child)]
        px, py = x + ox, y + oy
        if px < cx0 or py < cy0 or px + cw > cx1 or py + ch > cy1:
            result.overflows.append(LayoutOverflow(
                child.node_id, el.node_id,
                f"({px}, {py}, {cw}, {ch}) exceeds content box ({cx0}, {cy0}, {cx1}, {cy1})"))
        _place(child, px, py, sizes, result)
    for child in el.children:
        if child.positioning == "absolute":
            _place(child, x + child.layout.x, y + child.layout.y, sizes, result)


def layout_tree(roots: list[Element]) -> LayoutResult:
    result = LayoutResult()
    for root in roots:
        sizes: dict[int, tuple[float, float]] = {}
        _measure(root, sizes)
        _place(root, 0.0, 0.0, sizes, result)
    return result


def compute_layout(instrs, viewport: tuple[float, float] = (1440, 900),
                   components=()) -> LayoutResult:
    """Rendered rectangle of every element in ``instrs``; roots sit at (0, 0).

    ``viewport`` is accepted for interface symmetry; pages are laid out at
    their own recorded widths, and content beyond the viewport height simply
    scrolls, so it never changes geometry.
    """
    return layout_tree(build_tree(instrs, components))


def layout_program(program: Program, viewport: tuple[float, float] = (1440, 900)
                   ) -> dict[str, LayoutResult]:
    return {s.screen_id: compute_layout(s.instructions, viewport, program.components)
            for s in program.screens}
