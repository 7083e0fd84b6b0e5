"""Instruction list: the interpretable IR between design understanding and
code emission.

A screen is a flat, balanced sequence of ``BeginElement`` ... ``EndElement``
blocks. Component bodies are defined once (``DefineComponent``) and used via
``Instantiate``; both the HTML emitter and the layout engine consume the
expanded element tree built by :func:`build_tree`.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from typing import Union

from .ir import AutoLayoutSpec, Padding, num, layout_to_json


class UnresolvedComponent(KeyError):
    pass


class MalformedInstructions(ValueError):
    pass


def css_class(name: str, node_id: str) -> str:
    slug = re.sub(r"[^0-9a-zA-Z]+", "-", name).strip("-").lower() or "node"
    if slug[0].isdigit():
        slug = f"n-{slug}"
    digest = hashlib.sha256(node_id.encode("utf-8")).hexdigest()[:6]
    return f"{slug}-{digest}"


@dataclass(frozen=True)
class BeginElement:
    node_id: str
    name: str
    tag: str
    element: str
    css_class: str
    origin: str = "original"
    op = "BeginElement"

    def to_json(self) -> dict:
        return {"op": self.op, "nodeId": self.node_id, "name": self.name, "tag": self.tag,
                "semanticTag": self.element, "cssClass": self.css_class, "origin": self.origin}


@dataclass(frozen=True)
class SetLayout:
    positioning: str = "flow"
    x: float = 0.0
    y: float = 0.0
    container: AutoLayoutSpec | None = None
    op = "SetLayout"

    def to_json(self) -> dict:
        out: dict = {"op": self.op, "positioning": self.positioning}
        if self.positioning == "absolute":
            out["x"] = num(self.x)
            out["y"] = num(self.y)
        out["container"] = layout_to_json(self.container) if self.container else None
        return out


@dataclass(frozen=True)
class SetStyle:
    w: float
    h: float
    sizing: str = "fixed"
    fill: tuple[str, float] | None = None
    corner_radius: float | None = None
    stroke: tuple[str, float] | None = None
    typography: tuple[float, int, str] | None = None
    fill_prop: str | None = None
    op = "SetStyle"

    def resolve(self, bindings: dict) -> SetStyle:
        """Substitute a fill-color prop reference."""
        if self.fill_prop is None:
            return self
        color = bindings[self.fill_prop]
        fill = None if color is None else (color, self.fill[1] if self.fill else 1.0)
        return replace(self, fill=fill, fill_prop=None)

    def to_json(self) -> dict:
        fill = None
        if self.fill_prop is not None:
            fill = {"prop": self.fill_prop, "opacity": num(self.fill[1] if self.fill else 1.0)}
        elif self.fill is not None:
            fill = {"color": self.fill[0], "opacity": num(self.fill[1])}
        return {
            "op": self.op,
            "size": {"w": num(self.w), "h": num(self.h), "sizing": self.sizing},
            "fill": fill,
            "cornerRadius": None if self.corner_radius is None else num(self.corner_radius),
            "stroke": None if self.stroke is None else {"color": self.stroke[0],
                                                        "width": num(self.stroke[1])},
            "typography": None if self.typography is None else {
                "fontSize": num(self.typography[0]), "fontWeight": self.typography[1],
                "align": self.typography[2]},
        }


@dataclass(frozen=True)
class EmitText:
    content: str | None = None
    prop: str | None = None
    op = "EmitText"

    def to_json(self) -> dict:
        if self.prop is not None:
            return {"op": self.op, "prop": self.prop}
        return {"op": self.op, "content": self.content}


@dataclass(frozen=True)
class EmitImage:
    ref: str | None = None
    prop: str | None = None
    op = "EmitImage"

    def to_json(self) -> dict:
        if self.prop is not None:
            return {"op": self.op, "prop": self.prop}
        return {"op": self.op, "ref": self.ref}


@dataclass(frozen=True)
class EndElement:
    op = "EndElement"

    def to_json(self) -> dict:
        return {"op": self.op}


@dataclass(frozen=True)
class Instantiate:
    """One occurrence of a component.

    ``overrides`` maps a template path to replacement ``layout``/``style``/
    ``name`` payloads where this occurrence differs from the template; a
    ``layout`` override of None removes the template's SetLayout.
    """

    component_id: str
    node_id: str
    bindings: tuple[tuple[str, object], ...] = ()
    node_ids: tuple[tuple[str, str], ...] = ()
    overrides: tuple[tuple[str, tuple[tuple[str, object], ...]], ...] = ()
    op = "Instantiate"

    def to_json(self) -> dict:
        overrides = {}
        for path, diff in self.overrides:
            entry = {}
            for key, value in diff:
                if key in ("name", "origin"):
                    entry[key] = value
                else:
                    entry[key] = None if value is None else value.to_json()
            overrides[path] = entry
        return {"op": self.op, "componentId": self.component_id, "nodeId": self.node_id,
                "bindings": dict(self.bindings), "nodeIds": dict(self.node_ids),
                "overrides": overrides}


@dataclass(frozen=True)
class DefineComponent:
    component_id: str
    props: tuple[tuple[str, str, str], ...]
    instructions: tuple = ()
    op = "DefineComponent"

    def to_json(self) -> dict:
        return {"op": self.op, "componentId": self.component_id,
                "props": [{"name": n, "kind": k, "path": p} for n, k, p in self.props],
                "instructions": [i.to_json() for i in self.instructions]}


Instruction = Union[BeginElement, SetLayout, SetStyle, EmitText, EmitImage, EndElement,
                    Instantiate, DefineComponent]


@dataclass(frozen=True)
class ScreenProgram:
    screen_id: str
    name: str
    width: float
    height: float
    instructions: tuple


@dataclass(frozen=True)
class Program:
    components: tuple[DefineComponent, ...]
    screens: tuple[ScreenProgram, ...]

    def flat(self) -> list:
        """Every instruction in program order: definitions first."""
        out: list = list(self.components)
        for s in self.screens:
            out.extend(s.instructions)
        return out

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components],
                "screens": [{"id": s.screen_id, "name": s.name, "width": num(s.width),
                             "height": num(s.height),
                             "instructions": [i.to_json() for i in s.instructions]}
                            for s in self.screens]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


# -- loading -----------------------------------------------------------------

def _layout_from_json(obj: dict | None) -> AutoLayoutSpec | None:
    if obj is None:
        return None
    pad = obj.get("padding", {})
    return AutoLayoutSpec(
        direction=obj["direction"], gap=float(obj.get("gap", 0)),
        padding=Padding(*(float(pad.get(k, 0)) for k in ("top", "right", "bottom", "left"))),
        align=obj.get("align", "start"), sizing=obj.get("sizing", "fixed"),
        margins=tuple(float(m) for m in obj.get("margins", ())),
        cross_offsets=tuple(float(c) for c in obj.get("crossOffsets", ())),
    )


def instruction_from_json(obj: dict):
    op = obj.get("op")
    if op == "BeginElement":
        return BeginElement(obj["nodeId"], obj.get("name", ""), obj.get("tag", "container"),
                            obj.get("semanticTag", "div"), obj.get("cssClass", ""),
                            obj.get("origin", "original"))
    if op == "SetLayout":
        return SetLayout(obj.get("positioning", "flow"), float(obj.get("x", 0)),
                         float(obj.get("y", 0)), _layout_from_json(obj.get("container")))
    if op == "SetStyle":
        size = obj["size"]
        fill, stroke, typo = obj.get("fill"), obj.get("stroke"), obj.get("typography")
        radius = obj.get("cornerRadius")
        return SetStyle(
            float(size["w"]), float(size["h"]), size.get("sizing", "fixed"),
            None if fill is None else (fill.get("color"), float(fill["opacity"])),
            None if radius is None else float(radius),
            None if stroke is None else (stroke["color"], float(stroke["width"])),
            None if typo is None else (float(typo["fontSize"]), int(typo["fontWeight"]),
                                       typo["align"]),
            None if fill is None else fill.get("prop"),
        )
    if op == "EmitText":
        return EmitText(obj.get("content"), obj.get("prop"))
    if op == "EmitImage":
        return EmitImage(obj.get("ref"), obj.get("prop"))
    if op == "EndElement":
        return EndElement()
    if op == "Instantiate":
        overrides = []
        for path, entry in obj.get("overrides", {}).items():
            diff = []
            for key, value in entry.items():
                if key == "layout":
                    value = None if value is None else instruction_from_json(value)
                elif key == "style":
                    value = instruction_from_json(value)
                diff.append((key, value))
            overrides.append((path, tuple(diff)))
        return Instantiate(obj["componentId"], obj["nodeId"],
                           tuple(obj.get("bindings", {}).items()),
                           tuple(obj.get("nodeIds", {}).items()), tuple(overrides))
    if op == "DefineComponent":
        return DefineComponent(
            obj["componentId"],
            tuple((p["name"], p["kind"], p["path"]) for p in obj.get("props", ())),
            tuple(instruction_from_json(i) for i in obj.get("instructions", ())))
    raise MalformedInstructions(f"unknown op {op!r}")


def load_program(data: str | bytes) -> Program:
    raw = json.loads(data)
    comps = tuple(instruction_from_json(c) for c in raw.get("components", ()))
    screens = tuple(
        ScreenProgram(s["id"], s.get("name", ""), float(s.get("width", 0)),
                      float(s.get("height", 0)),
                      tuple(instruction_from_json(i) for i in s["instructions"]))
        for s in raw.get("screens", ()))
    return Program(comps, screens)


# -- element tree ------------------------------------------------------------

@dataclass
class Element:
    begin: BeginElement
    layout: SetLayout | None = None
    style: SetStyle | None = None
    text: str | None = None
    image: str | None = None
    children: list[Element] = field(default_factory=list)

    @property
    def node_id(self) -> str:
        return self.begin.node_id

    @property
    def positioning(self) -> str:
        return self.layout.positioning if self.layout is not None else "flow"


def check_balance(instrs) -> None:
    depth = 0
    for ins in instrs:
        if isinstance(ins, BeginElement):
            depth += 1
        elif isinstance(ins, EndElement):
            depth -= 1
            if depth < 0:
                raise MalformedInstructions("EndElement without BeginElement")
    if depth != 0:
        raise MalformedInstructions(f"{depth} unclosed elements")


def _expand(inst: Instantiate, cdef: DefineComponent) -> list:
    """Concrete instruction sequence for one component occurrence."""
    ids = dict(inst.node_ids)
    bindings = dict(inst.bindings)
    overrides = {path: dict(diff) for path, diff in inst.overrides}
    out: list = []
    counters: list[int] = []
    paths: list[str] = []
    current = ""
    for ins in cdef.instructions:
        if isinstance(ins, BeginElement):
            if counters:
                parent = paths[-1]
                idx = counters[-1]
                counters[-1] += 1
                current = f"{parent}/{idx}" if parent else str(idx)
            else:
                current = ""
            paths.append(current)
            counters.append(0)
            node_id = inst.node_id if current == "" else ids.get(current)
            if node_id is None:
                raise MalformedInstructions(
                    f"instance {inst.node_id} lacks an id for path {current!r}")
            ov = overrides.get(current, {})
            name = ov.get("name", ins.name)
            out.append(replace(ins, node_id=node_id, name=name,
                               origin=ov.get("origin", ins.origin),
                               css_class=css_class(name, node_id)))
            if "layout" in ov and ov["layout"] is not None:
                out.append(ov["layout"])
        elif isinstance(ins, EndElement):
            paths.pop()
            counters.pop()
            out.append(ins)
        else:
            ov = overrides.get(paths[-1], {}) if paths else {}
            if isinstance(ins, SetLayout):
                if "layout" not in ov:
                    out.append(ins)
            elif isinstance(ins, SetStyle):
                if "style" in ov:
                    out.append(ov["style"])
                else:
                    if ins.fill_prop is not None and ins.fill_prop not in bindings:
                        raise MalformedInstructions(f"missing binding {ins.fill_prop!r}")
                    out.append(ins.resolve(bindings))
            elif isinstance(ins, EmitText) and ins.prop is not None:
                if ins.prop not in bindings:
                    raise MalformedInstructions(f"missing binding {ins.prop!r}")
                out.append(EmitText(content=bindings[ins.prop]))
            elif isinstance(ins, EmitImage) and ins.prop is not None:
                if ins.prop not in bindings:
                    raise MalformedInstructions(f"missing binding {ins.prop!r}")
                out.append(EmitImage(ref=bindings[ins.prop]))
            else:
                out.append(ins)
    return out


def expand_instructions(instrs, components) -> list:
    """Replace every Instantiate by its concrete instruction sequence."""
    table = {c.component_id: c for c in components}
    out: list = []
    for ins in instrs:
        if isinstance(ins, Instantiate):
            cdef = table.get(ins.component_id)
            if cdef is None:
                raise UnresolvedComponent(ins.component_id)
            out.extend(_expand(ins, cdef))
        elif not isinstance(ins, DefineComponent):
            out.append(ins)
    return out


def build_tree(instrs, components=()) -> list[Element]:
    """Element forest for an instruction list (instances expanded)."""
    flat = expand_instructions(instrs, components)
    check_balance(flat)
    roots: list[Element] = []
    stack: list[Element] = []
    for ins in flat:
        if isinstance(ins, BeginElement):
            el = Element(ins)
            (stack[-1].children if stack else roots).append(el)
            stack.append(el)
        elif isinstance(ins, EndElement):
            stack.pop()
        elif not stack:
            raise MalformedInstructions(f"{ins.op} outside an element")
        elif isinstance(ins, SetLayout):
            stack[-1].layout = ins
        elif isinstance(ins, SetStyle):
            stack[-1].style = ins
        elif isinstance(ins, EmitText):
            stack[-1].text = ins.content
        elif isinstance(ins, EmitImage):
            stack[-1].image = ins.ref
    return roots
