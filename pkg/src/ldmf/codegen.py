"""Lowering of optimized, tagged, componentized documents to instructions,
and HTML/CSS emission from instructions.

Element mapping: button -> ``button``; input, checkbox, radio, switch and
date_time_picker -> typed ``input``; textarea -> ``textarea``; select and
dropdown -> ``select``; text -> ``h1`` (font size >= 32), ``h2`` (>= 24) or
``p``; image -> ``img``; everything else -> ``div``, carrying ``data-tag``
for big tags.

CSS declarations are always written in :data:`CSS_PROPERTY_ORDER`.
"""
from __future__ import annotations

import hashlib
import html
from dataclasses import dataclass, field
from typing import Sequence

from .componentizer import ComponentDef, expand_instance, iter_paths
from .instructions import (
    BeginElement, DefineComponent, Element, EmitImage, EmitText, EndElement,
    Instantiate, Program, ScreenProgram, SetLayout, SetStyle, UnresolvedComponent,
    build_tree, css_class,
)
from .ir import AutoLayoutSpec, DesignDocument, DesignNode, Rect
from .tagger import BIG_TAGS

CSS_PROPERTY_ORDER = (
    "position", "left", "top", "display", "flex-direction", "align-items", "gap",
    "padding", "margin-top", "margin-left", "flex-shrink", "width", "height",
    "background-color", "color", "border", "border-radius", "font-size",
    "font-weight", "text-align",
)

_INPUT_TYPES = {"input": "text", "checkbox": "checkbox", "radio": "radio",
                "switch": "checkbox", "date_time_picker": "datetime-local"}
_VOID_LIKE = {"input", "textarea", "select", "img"}


def element_for(node: DesignNode, tag: str) -> str:
    if tag == "button":
        return "button"
    if tag in _INPUT_TYPES:
        return "input"
    if tag == "textarea":
        return "textarea"
    if tag in ("select", "dropdown"):
        return "select"
    if tag == "text" or node.kind == "text":
        size = node.text.font_size if node.text else 0
        if size >= 32:
            return "h1"
        if size >= 24:
            return "h2"
        return "p"
    if tag == "image" and node.kind in ("image", "vector"):
        return "img"
    return "div"


# -- lowering ----------------------------------------------------------------

@dataclass
class _NodeRecord:
    begin: BeginElement
    layout: SetLayout | None
    style: SetStyle


def _style(node: DesignNode, fill_prop: str | None = None) -> SetStyle:
    sizing = node.layout.sizing if node.layout is not None else "fixed"
    fill = (node.fill.color, node.fill.opacity) if node.fill else None
    if fill_prop is not None:
        fill = (None, node.fill.opacity if node.fill else 1.0)
    return SetStyle(
        w=node.bounds.w, h=node.bounds.h, sizing=sizing, fill=fill,
        corner_radius=node.corner_radius,
        stroke=(node.stroke.color, node.stroke.width) if node.stroke else None,
        typography=((node.text.font_size, node.text.font_weight, node.text.align)
                    if node.text else None),
        fill_prop=fill_prop,
    )


def _layout(node: DesignNode, parent: Rect | None) -> SetLayout | None:
    if node.positioning == "absolute" and parent is not None:
        return SetLayout("absolute", node.bounds.x - parent.x, node.bounds.y - parent.y,
                         node.layout)
    if node.layout is not None:
        return SetLayout("flow", container=node.layout)
    return None


class _Lowerer:
    def __init__(self, tags: dict[str, str], defs: Sequence[ComponentDef]):
        self.tags = tags
        self.defs = {d.component_id: d for d in defs}

    def begin(self, node: DesignNode, tag: str) -> BeginElement:
        return BeginElement(node.id, node.name, tag, element_for(node, tag),
                            css_class(node.name, node.id), node.origin)

    def node(self, node: DesignNode, parent: Rect | None, out: list, tags: dict[str, str],
             props: dict | None = None, path: str = "",
             records: dict[str, _NodeRecord] | None = None) -> None:
        if node.instance is not None:
            out.append(self.instantiate(node, parent))
            return
        tag = tags.get(node.id, "container")
        here = {} if props is None else props.get(path, {})
        begin = self.begin(node, tag)
        layout = _layout(node, parent)
        style = _style(node, here.get("fillColor"))
        if records is not None:
            records[path] = _NodeRecord(begin, layout, style)
        out.append(begin)
        if layout is not None:
            out.append(layout)
        out.append(style)
        if node.kind == "text":
            if "text" in here:
                out.append(EmitText(prop=here["text"]))
            else:
                out.append(EmitText(content=node.text.content))
        if node.kind == "image" or node.image_ref is not None:
            if "imageRef" in here:
                out.append(EmitImage(prop=here["imageRef"]))
            else:
                out.append(EmitImage(ref=node.image_ref))
        for i, child in enumerate(node.children):
            child_path = f"{path}/{i}" if path else str(i)
            self.node(child, node.bounds, out, tags, props, child_path, records)
        out.append(EndElement())

    def define(self, cdef: ComponentDef, parent: Rect | None) -> tuple[DefineComponent, dict]:
        props: dict[str, dict[str, str]] = {}
        for p in cdef.props:
            props.setdefault(p.path, {})[p.kind] = p.name
        out: list = []
        records: dict[str, _NodeRecord] = {}
        self.node(cdef.template, parent, out, cdef.tag_map(), props, "", records)
        return (DefineComponent(cdef.component_id,
                                tuple((p.name, p.kind, p.path) for p in cdef.props),
                                tuple(out)), records)

    def instantiate(self, node: DesignNode, parent: Rect | None) -> Instantiate:
        inst = node.instance
        cdef = self.defs.get(inst.component_id)
        if cdef is None:
            raise UnresolvedComponent(inst.component_id)
        _, template = self.templates[inst.component_id]
        concrete = expand_instance(node, cdef)
        records: dict[str, _NodeRecord] = {}
        self.node(concrete, parent, [], self.tags, None, "", records)
        bindings = inst.binding_map
        overrides = []
        for path, _ in iter_paths(cdef.template):
            t, c = template[path], records[path]
            diff = []
            if c.begin.name != t.begin.name:
                diff.append(("name", c.begin.name))
            if c.begin.origin != t.begin.origin:
                diff.append(("origin", c.begin.origin))
            if c.layout != t.layout:
                diff.append(("layout", c.layout))
            if c.style != t.style.resolve(bindings):
                diff.append(("style", c.style))
            if diff:
                overrides.append((path, tuple(diff)))
        return Instantiate(inst.component_id, node.id, inst.bindings,
                           tuple((p, i) for p, i in inst.node_ids if p), tuple(overrides))


def _first_parents(doc: DesignDocument, defs: Sequence[ComponentDef]) -> dict[str, Rect | None]:
    """Bounds of the parent of each component's first occurrence."""
    out: dict[str, Rect | None] = {}

    def visit(node: DesignNode, parent: Rect | None) -> None:
        if node.instance is not None:
            out.setdefault(node.instance.component_id, parent)
        for c in node.children:
            visit(c, node.bounds)

    for s in doc.screens:
        visit(s.root, None)
    return out


def lower_to_instructions(doc: DesignDocument, tags: dict[str, str],
                          defs: Sequence[ComponentDef] = ()) -> Program:
    """Deterministic instruction program: definitions, then screens in order."""
    low = _Lowerer(tags, defs)
    parents = _first_parents(doc, defs)
    low.templates = {}
    components = []
    for cdef in defs:
        define, records = low.define(cdef, parents.get(cdef.component_id))
        low.templates[cdef.component_id] = (define, records)
        components.append(define)
    screens = []
    for s in doc.screens:
        out: list = []
        low.node(s.root, None, out, tags)
        screens.append(ScreenProgram(s.id, s.name, s.width, s.height, tuple(out)))
    return Program(tuple(components), tuple(screens))


# -- emission ----------------------------------------------------------------

@dataclass
class EmittedSources:
    files: dict[str, bytes] = field(default_factory=dict)

    def digest(self) -> str:
        h = hashlib.sha256()
        for path in sorted(self.files):
            h.update(path.encode("utf-8") + b"\0" + self.files[path] + b"\0")
        return h.hexdigest()


def px(v: float) -> str:
    r = round(float(v), 3)
    if r == 0:
        return "0"
    text = str(int(r)) if r.is_integer() else repr(r)
    return f"{text}px"


def _color(color: str, opacity: float) -> str:
    if opacity >= 1 or not (isinstance(color, str) and len(color) == 7 and color.startswith("#")):
        return color
    r, g, b = (int(color[i:i + 2], 16) for i in (1, 3, 5))
    return f"rgba({r}, {g}, {b}, {round(opacity, 3):g})"


def _declarations(el: Element, parent: Element | None, flow_index: int | None) -> dict[str, str]:
    d: dict[str, str] = {}
    layout, style = el.layout, el.style
    container: AutoLayoutSpec | None = layout.container if layout else None
    if layout is not None and layout.positioning == "absolute":
        d["position"] = "absolute"
        d["left"] = px(layout.x)
        d["top"] = px(layout.y)
    elif el.children or parent is None:
        d["position"] = "relative"
    if container is not None and any(c.positioning != "absolute" for c in el.children):
        d["display"] = "flex"
        d["flex-direction"] = container.direction
        d["align-items"] = "flex-start"
        if container.gap:
            d["gap"] = px(container.gap)
        p = container.padding
        if any((p.top, p.right, p.bottom, p.left)):
            d["padding"] = " ".join(px(v) for v in (p.top, p.right, p.bottom, p.left))
    if parent is not None and flow_index is not None:
        pspec = parent.layout.container if parent.layout else None
        if pspec is not None:
            main = pspec.margins[flow_index] if pspec.margins else 0.0
            cross = pspec.cross_offsets[flow_index] if pspec.cross_offsets else 0.0
            top, left = (cross, main) if pspec.direction == "row" else (main, cross)
            if top:
                d["margin-top"] = px(top)
            if left:
                d["margin-left"] = px(left)
        d["flex-shrink"] = "0"
    if style is not None:
        if style.sizing == "hug":
            d["width"] = "fit-content"
            d["height"] = "fit-content"
        else:
            d["width"] = px(style.w)
            d["height"] = px(style.h)
        if style.fill is not None and style.fill[0] is not None:
            key = "color" if el.text is not None else "background-color"
            d[key] = _color(*style.fill)
        if style.stroke is not None:
            d["border"] = f"{px(style.stroke[1])} solid {style.stroke[0]}"
        if style.corner_radius:
            d["border-radius"] = px(style.corner_radius)
        if style.typography is not None:
            size, weight, align = style.typography
            d["font-size"] = px(size)
            d["font-weight"] = str(weight)
            d["text-align"] = align
    return {k: d[k] for k in CSS_PROPERTY_ORDER if k in d}


def _first_text(el: Element) -> str | None:
    if el.text is not None:
        return el.text
    for c in el.children:
        t = _first_text(c)
        if t is not None:
            return t
    return None


class _Emitter:
    def __init__(self):
        self.lines: list[str] = []
        self.rules: list[str] = []

    def rule(self, el: Element, parent: Element | None, flow_index: int | None) -> None:
        decls = _declarations(el, parent, flow_index)
        body = "".join(f"  {k}: {v};\n" for k, v in decls.items())
        self.rules.append(f".{el.begin.css_class} {{\n{body}}}\n")

    def element(self, el: Element, parent: Element | None, flow_index: int | None,
                depth: int) -> None:
        self.rule(el, parent, flow_index)
        pad = "  " * depth
        b = el.begin
        attrs = [f'class="{b.css_class}"', f'data-node="{html.escape(b.node_id)}"']
        if b.tag in BIG_TAGS:
            attrs.append(f'data-tag="{b.tag}"')
        tag = b.element
        if tag == "input":
            attrs.insert(0, f'type="{_INPUT_TYPES.get(b.tag, "text")}"')
            if b.tag == "switch":
                attrs.append('role="switch"')
            label = _first_text(el)
            if label is not None:
                attrs.append(f'placeholder="{html.escape(label)}"')
            self.lines.append(f"{pad}<input {' '.join(attrs)}>")
            return
        if tag == "img":
            attrs.append(f'src="{html.escape(el.image or "")}"')
            attrs.append(f'alt="{html.escape(b.name)}"')
            self.lines.append(f"{pad}<img {' '.join(attrs)}>")
            return
        if tag == "textarea":
            label = _first_text(el) or ""
            attrs.append(f'placeholder="{html.escape(label)}"')
            self.lines.append(f"{pad}<textarea {' '.join(attrs)}></textarea>")
            return
        if tag == "select":
            label = html.escape(_first_text(el) or "")
            self.lines.append(f"{pad}<select {' '.join(attrs)}>")
            self.lines.append(f"{pad}  <option>{label}</option>")
            self.lines.append(f"{pad}</select>")
            return
        if el.text is not None and not el.children:
            self.lines.append(f"{pad}<{tag} {' '.join(attrs)}>{html.escape(el.text)}</{tag}>")
            return
        self.lines.append(f"{pad}<{tag} {' '.join(attrs)}>")
        if el.text is not None:
            self.lines.append(f"{pad}  {html.escape(el.text)}")
        flow_i = 0
        for child in el.children:
            if child.positioning == "absolute":
                self.element(child, el, None, depth + 1)
            else:
                self.element(child, el, flow_i, depth + 1)
                flow_i += 1
        self.lines.append(f"{pad}</{tag}>")


_CSS_PRELUDE = """*,
*::before,
*::after {
  box-sizing: border-box;
  margin: 0;
  padding: 0;
}

body {
  font-family: sans-serif;
}

.screen {
  position: relative;
  overflow: hidden;
}
"""


def emit_html_css(program: Program) -> EmittedSources:
    em = _Emitter()
    title = html.escape(program.screens[0].name if program.screens else "design")
    em.lines.extend([
        "<!DOCTYPE html>",
        '<html lang="en">',
        "  <head>",
        '    <meta charset="utf-8">',
        '    <meta name="viewport" content="width=device-width, initial-scale=1">',
        f"    <title>{title}</title>",
        '    <link rel="stylesheet" href="style.css">',
        "  </head>",
        "  <body>",
    ])
    for screen in program.screens:
        em.lines.append(f'    <main class="screen" data-screen="{html.escape(screen.screen_id)}">')
        for root in build_tree(screen.instructions, program.components):
            em.element(root, None, None, 3)
        em.lines.append("    </main>")
    em.lines.extend(["  </body>", "</html>"])
    css = _CSS_PRELUDE + "".join("\n" + r for r in em.rules)
    return EmittedSources({
        "index.html": ("\n".join(em.lines) + "\n").encode("utf-8"),
        "style.css": css.encode("utf-8"),
        "instructions.json": program.dumps().encode("utf-8"),
    })
