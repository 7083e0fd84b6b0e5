"""Repeated-subtree detection, prop inference and component substitution.

Subtrees are compared by a structural fingerprint that ignores ids, names,
geometry, text content, image references and fill colors. Occurrences that
share a fingerprint become instances of one component; attributes that vary
between occurrences become props, everything else lives in the template or
in per-instance overrides so that expansion is lossless.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

from .ir import (
    ComponentInstance, DesignDocument, DesignNode, Fill, Rect, TextStyle, iter_nodes,
)

PROP_KINDS = ("text", "imageRef", "fillColor")
_PROP_ATTR = {"text": "text_content", "imageRef": "image_ref", "fillColor": "fill_color"}


class AlignmentError(ValueError):
    pass


class UnknownComponent(KeyError):
    pass


class MissingBinding(KeyError):
    pass


@dataclass(frozen=True)
class Prop:
    name: str
    kind: str
    path: str


@dataclass(frozen=True)
class ComponentDef:
    component_id: str
    template: DesignNode
    props: tuple[Prop, ...]
    tags: tuple[tuple[str, str], ...] = ()

    def tag_map(self) -> dict[str, str]:
        return dict(self.tags)


@dataclass(frozen=True)
class Candidate:
    fingerprint: str
    size: int
    nodes: tuple[DesignNode, ...]

    @property
    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]


def canonical_form(node: DesignNode, tags: dict[str, str]) -> str:
    """Readable canonical form; equal forms iff equal fingerprints."""
    inner = ",".join(canonical_form(c, tags) for c in node.children)
    return f"({node.kind}:{tags.get(node.id, '')}:{len(node.children)}[{inner}])"


def _digest(node: DesignNode, tags: dict[str, str], memo: dict[int, str]) -> str:
    key = id(node)
    if key not in memo:
        kids = [_digest(c, tags, memo) for c in node.children]
        text = f"{node.kind}|{tags.get(node.id, '')}|{len(kids)}|{','.join(kids)}"
        memo[key] = hashlib.blake2b(text.encode("utf-8"), digest_size=16).hexdigest()
    return memo[key]


def fingerprint_subtree(node: DesignNode, tags: dict[str, str] | None = None) -> str:
    """128-bit hex digest of the subtree's canonical structure."""
    return _digest(node, tags or {}, {})


def iter_paths(node: DesignNode, path: str = "") -> Iterator[tuple[str, DesignNode]]:
    yield path, node
    for i, child in enumerate(node.children):
        yield from iter_paths(child, f"{path}/{i}" if path else str(i))


def sanitize_name(name: str, fallback: str = "node") -> str:
    slug = re.sub(r"[^0-9a-zA-Z]+", "_", name).strip("_").lower()
    if not slug:
        return fallback
    if slug[0].isdigit():
        slug = f"{fallback}_{slug}"
    return slug


# -- detection ---------------------------------------------------------------

def detect_repeats(doc: DesignDocument, tags: dict[str, str], min_nodes: int = 3,
                   min_instances: int = 2) -> list[Candidate]:
    """Groups of equal-fingerprint subtrees, largest first.

    Selection runs with the base threshold of two occurrences so that a
    subtree covered by a larger selected group is never offered on its own;
    ``min_instances`` then filters the selected groups.
    """
    memo: dict[int, str] = {}
    sizes: dict[int, int] = {}
    groups: dict[str, list[DesignNode]] = {}
    first_pos: dict[str, int] = {}

    def size_of(node: DesignNode) -> int:
        key = id(node)
        if key not in sizes:
            sizes[key] = 1 + sum(size_of(c) for c in node.children)
        return sizes[key]

    pos = 0
    for screen in doc.screens:
        for node in iter_nodes(screen.root):
            pos += 1
            if node is screen.root or node.instance is not None:
                continue
            fp = _digest(node, tags, memo)
            if size_of(node) < min_nodes:
                continue
            groups.setdefault(fp, []).append(node)
            first_pos.setdefault(fp, pos)

    ordered = sorted((fp for fp, nodes in groups.items() if len(nodes) >= 2),
                     key=lambda fp: (-size_of(groups[fp][0]), first_pos[fp]))
    covered: set[str] = set()
    selected: list[Candidate] = []
    for fp in ordered:
        remaining = [n for n in groups[fp] if n.id not in covered]
        if len(remaining) < 2:
            continue
        selected.append(Candidate(fp, size_of(remaining[0]), tuple(remaining)))
        for n in remaining:
            covered.update(d.id for d in iter_nodes(n))
    return [c for c in selected if len(c.nodes) >= min_instances]


# -- attribute records -------------------------------------------------------

def _attrs(node: DesignNode) -> dict:
    return {
        "name": node.name,
        "fill_color": node.fill.color if node.fill else None,
        "fill_opacity": node.fill.opacity if node.fill else None,
        "corner_radius": node.corner_radius,
        "stroke": node.stroke,
        "text_content": node.text.content if node.text else None,
        "text_style": ((node.text.font_size, node.text.font_weight, node.text.align)
                       if node.text else None),
        "image_ref": node.image_ref,
        "layout": node.layout,
        "positioning": node.positioning,
        "origin": node.origin,
    }


def _build(kind: str, node_id: str, bounds: Rect, attrs: dict,
           children: tuple[DesignNode, ...]) -> DesignNode:
    fill = None
    if attrs["fill_color"] is not None:
        fill = Fill(attrs["fill_color"], attrs["fill_opacity"])
    text = None
    if attrs["text_style"] is not None:
        size, weight, align = attrs["text_style"]
        text = TextStyle(attrs["text_content"], size, weight, align)
    return DesignNode(
        id=node_id, name=attrs["name"], kind=kind, bounds=bounds, fill=fill,
        corner_radius=attrs["corner_radius"], stroke=attrs["stroke"], text=text,
        image_ref=attrs["image_ref"], children=children, layout=attrs["layout"],
        positioning=attrs["positioning"], origin=attrs["origin"],
    )


def _translated(rect: Rect, src: Rect, dst: Rect) -> Rect:
    return Rect(rect.x - src.x + dst.x, rect.y - src.y + dst.y, rect.w, rect.h)


# -- props and templates -----------------------------------------------------

def infer_props(instances: Sequence[DesignNode], component_id: str = "component",
                tags: dict[str, str] | None = None) -> ComponentDef:
    """Build a component definition from aligned occurrences.

    Text content, image references and fill colors that differ between
    occurrences become props named after the differing layer.
    """
    if len(instances) < 1:
        raise AlignmentError("no instances")
    aligned = [list(iter_paths(n)) for n in instances]
    shape = [(p, n.kind, len(n.children)) for p, n in aligned[0]]
    for other in aligned[1:]:
        if [(p, n.kind, len(n.children)) for p, n in other] != shape:
            raise AlignmentError(f"{other[0][1].id} does not align with {instances[0].id}")

    props: list[Prop] = []
    used: set[str] = set()
    for i, (path, node) in enumerate(aligned[0]):
        for kind in PROP_KINDS:
            attr = _PROP_ATTR[kind]
            values = {_attrs(inst[i][1])[attr] for inst in aligned}
            if len(values) > 1:
                base = sanitize_name(node.name, node.kind)
                name, n = base, 2
                while name in used:
                    name, n = f"{base}_{n}", n + 1
                used.add(name)
                props.append(Prop(name, kind, path))

    def template_id(path: str) -> str:
        return f"{component_id}/{path}" if path else component_id

    def rebuild(node: DesignNode, path: str) -> DesignNode:
        kids = tuple(rebuild(c, f"{path}/{i}" if path else str(i))
                     for i, c in enumerate(node.children))
        return replace(node, id=template_id(path), children=kids, instance=None)

    tag_pairs: tuple[tuple[str, str], ...] = ()
    if tags is not None:
        tag_pairs = tuple((template_id(p), tags[n.id]) for p, n in aligned[0] if n.id in tags)
    return ComponentDef(component_id, rebuild(instances[0], ""), tuple(props), tag_pairs)


def make_instance(node: DesignNode, cdef: ComponentDef) -> DesignNode:
    """Replace the occurrence ``node`` by an instance node of ``cdef``."""
    template_paths = list(iter_paths(cdef.template))
    node_paths = list(iter_paths(node))
    if [(p, n.kind) for p, n in template_paths] != [(p, n.kind) for p, n in node_paths]:
        raise AlignmentError(f"{node.id} does not align with {cdef.component_id}")
    by_path = dict(node_paths)
    bindings = tuple((prop.name, _attrs(by_path[prop.path])[_PROP_ATTR[prop.kind]])
                     for prop in cdef.props)
    prop_attrs: dict[str, set[str]] = {}
    for prop in cdef.props:
        prop_attrs.setdefault(prop.path, set()).add(_PROP_ATTR[prop.kind])

    overrides = []
    t_root = cdef.template.bounds
    for path, tnode in template_paths:
        if not path:
            continue
        actual = by_path[path]
        diff = []
        t_attrs, a_attrs = _attrs(tnode), _attrs(actual)
        for key, value in a_attrs.items():
            if key in prop_attrs.get(path, ()):
                continue
            if t_attrs[key] != value:
                diff.append((key, value))
        if _translated(tnode.bounds, t_root, node.bounds) != actual.bounds:
            diff.append(("bounds", actual.bounds))
        if diff:
            overrides.append((path, tuple(diff)))

    inst = ComponentInstance(
        component_id=cdef.component_id,
        bindings=bindings,
        node_ids=tuple((p, n.id) for p, n in node_paths),
        overrides=tuple(overrides),
    )
    return replace(node, children=(), instance=inst)


def expand_instance(node: DesignNode, cdef: ComponentDef) -> DesignNode:
    inst = node.instance
    bindings = inst.binding_map
    for prop in cdef.props:
        if prop.name not in bindings:
            raise MissingBinding(prop.name)
    ids = dict(inst.node_ids)
    overrides = {path: dict(diff) for path, diff in inst.overrides}
    by_path: dict[str, list[Prop]] = {}
    for prop in cdef.props:
        by_path.setdefault(prop.path, []).append(prop)
    t_root = cdef.template.bounds

    def rebuild(tnode: DesignNode, path: str) -> tuple[DesignNode, ...]:
        return tuple(build(c, f"{path}/{i}" if path else str(i))
                     for i, c in enumerate(tnode.children))

    def build(tnode: DesignNode, path: str) -> DesignNode:
        if path not in ids:
            raise AlignmentError(f"instance {node.id} has no id for template path {path!r}")
        attrs = _attrs(tnode)
        extra = dict(overrides.get(path, {}))
        bounds = extra.pop("bounds", None) or _translated(tnode.bounds, t_root, node.bounds)
        attrs.update(extra)
        for prop in by_path.get(path, ()):
            attrs[_PROP_ATTR[prop.kind]] = bindings[prop.name]
        return _build(tnode.kind, ids[path], bounds, attrs, rebuild(tnode, path))

    return replace(node, instance=None, children=rebuild(cdef.template, ""))


def _replace_nodes(node: DesignNode, fn) -> DesignNode:
    out = fn(node)
    if out is not node:
        return out
    if not node.children:
        return node
    kids = tuple(_replace_nodes(c, fn) for c in node.children)
    if all(a is b for a, b in zip(kids, node.children)):
        return node
    return replace(node, children=kids)


def componentize(doc: DesignDocument, tags: dict[str, str], min_nodes: int = 3,
                 min_instances: int = 2) -> tuple[DesignDocument, list[ComponentDef]]:
    """Substitute every selected repeat group by instances of one component."""
    candidates = detect_repeats(doc, tags, min_nodes, min_instances)
    defs: list[ComponentDef] = []
    swap: dict[str, DesignNode] = {}
    for i, cand in enumerate(candidates):
        root = cand.nodes[0]
        cid = f"{sanitize_name(root.name, root.kind)}_{i}"
        cdef = infer_props(cand.nodes, cid, tags)
        defs.append(cdef)
        for node in cand.nodes:
            swap[node.id] = make_instance(node, cdef)
    if not swap:
        return doc, []
    screens = tuple(replace(s, root=_replace_nodes(s.root, lambda n: swap.get(n.id, n)))
                    for s in doc.screens)
    return DesignDocument(screens), defs


def expand_components(doc: DesignDocument, defs: Sequence[ComponentDef]) -> DesignDocument:
    """Inverse of :func:`componentize`."""
    table = {d.component_id: d for d in defs}

    def fn(node: DesignNode) -> DesignNode:
        if node.instance is None:
            return node
        cdef = table.get(node.instance.component_id)
        if cdef is None:
            raise UnknownComponent(node.instance.component_id)
        return expand_instance(node, cdef)

    return DesignDocument(tuple(replace(s, root=_replace_nodes(s.root, fn))
                                for s in doc.screens))
