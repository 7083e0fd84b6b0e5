"""Structural optimization passes: sub-optimal design detection, layer
grouping by recursive projection cuts, and auto-layout inference.

The passes never move or resize an existing node. They only rearrange the
hierarchy and add synthesized ``group`` wrappers whose ids have the form
``g:<parentId>:<ordinal>``.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass, replace

from .ir import (
    AutoLayoutSpec, CONTAINER_KINDS, DesignDocument, DesignNode, Padding, Rect,
    Screen, iter_document, iter_nodes,
)

FINDING_KINDS = ("UNGROUPED_SIBLINGS", "FLAT_DEEP_LIST", "OVERLAPPING_LAYERS", "ABSOLUTE_ONLY")

UNGROUPED_CHILD_LIMIT = 8
OVERLAP_FRACTION = 0.10
GAP_TOLERANCE = 1.0
FLAT_DEPTH_LIMIT = 3


class NonUniformAxis(ValueError):
    """Flow children overlap along the requested layout axis."""


@dataclass(frozen=True)
class Finding:
    node_id: str
    kind: str
    detail: str

    def to_json(self) -> dict:
        return {"nodeId": self.node_id, "kind": self.kind, "detail": self.detail}


def _span(rect: Rect, axis: str) -> tuple[float, float]:
    if axis == "x":
        return rect.x, rect.right
    return rect.y, rect.bottom


def _clusters(nodes: list[DesignNode], axis: str) -> list[list[DesignNode]]:
    """Connected components of the interval-overlap graph along ``axis``.

    Two nodes connect iff their open intervals intersect; touching edges do
    not connect. Components come back ordered by their start coordinate and
    members keep their input order.
    """
    n = len(nodes)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    spans = [_span(node.bounds, axis) for node in nodes]
    order = sorted(range(n), key=lambda i: (spans[i][0], spans[i][1], i))
    for pos, i in enumerate(order):
        s0, e0 = spans[i]
        for j in order[pos + 1:]:
            s1, e1 = spans[j]
            if s1 >= e0:
                # sorted by start: no later interval can reach back into i
                break
            if s0 < e1 and s1 < e0:
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    comps = sorted(groups.values(),
                   key=lambda idx: (min(spans[i][0] for i in idx), min(idx)))
    return [[nodes[i] for i in idx] for idx in comps]


def _cut(parent_id: str, nodes: list[DesignNode], taken: set[str]) -> list[DesignNode] | None:
    """One level of XY-cut. Returns the new child list, or None when neither
    axis separates the nodes."""
    for axis in ("y", "x"):
        clusters = _clusters(nodes, axis)
        if len(clusters) < 2:
            continue
        out = []
        for ordinal, members in enumerate(clusters):
            if len(members) == 1:
                out.append(members[0])
            else:
                out.append(_wrap(_wrapper_id(parent_id, ordinal, taken), members, taken))
        return out
    return None


def _wrapper_id(parent_id: str, ordinal: int, taken: set[str]) -> str:
    wid = f"g:{parent_id}:{ordinal}"
    while wid in taken:
        wid += "'"
    taken.add(wid)
    return wid


def _wrap(wid: str, members: list[DesignNode], taken: set[str]) -> DesignNode:
    inner = _cut(wid, members, taken)
    if inner is None:
        inner = [replace(m, positioning="absolute") for m in members]
    return DesignNode(
        id=wid, name="group", kind="group",
        bounds=Rect.union(m.bounds for m in members),
        children=tuple(inner), origin="synthesized",
    )


def group_layers(container: DesignNode, children=None, taken: set[str] | None = None) -> DesignNode:
    """Regroup the flow children of ``container`` by recursive projection cuts.

    Clusters of y-connected children become a column; failing that, clusters
    of x-connected children become a row; multi-member clusters are wrapped
    and cut again. When neither axis separates two or more children they are
    positioned absolutely. Absolute children stay after the flow children in
    their original paint order.
    """
    if children is None:
        children = container.children
    if taken is None:
        taken = {n.id for n in iter_nodes(container)}
    flow, absolute = [], []
    for child in children:
        if child.positioning == "absolute":
            absolute.append(child)
        elif not container.bounds.contains(child.bounds):
            absolute.append(replace(child, positioning="absolute"))
        else:
            flow.append(child)
    if len(flow) >= 2:
        arranged = _cut(container.id, flow, taken)
        if arranged is None:
            absolute = [replace(c, positioning="absolute") for c in flow] + absolute
            flow = []
        else:
            flow = arranged
    return replace(container, children=tuple(flow + absolute))


def _flow_direction(flow: list[DesignNode]) -> str:
    if len(flow) <= 1:
        return "column"
    for axis, direction in (("y", "column"), ("x", "row")):
        spans = sorted(_span(c.bounds, axis) for c in flow)
        if all(b[0] >= a[1] for a, b in zip(spans, spans[1:])):
            return direction
    raise NonUniformAxis("flow children overlap on both axes")


def infer_autolayout(group: DesignNode, direction: str | None = None,
                     sizing: str | None = None) -> AutoLayoutSpec:
    """Infer direction, gap, padding and per-child offsets for the flow
    children of ``group``, which must already be ordered along the axis."""
    flow = [c for c in group.children if c.positioning != "absolute"]
    if sizing is None:
        sizing = "hug" if group.origin == "synthesized" else "fixed"
    if not flow:
        return AutoLayoutSpec(direction=direction or "column", sizing=sizing)
    if direction is None:
        direction = _flow_direction(flow)
    main, cross = ("x", "y") if direction == "row" else ("y", "x")

    gaps = []
    for prev, nxt in zip(flow, flow[1:]):
        g = _span(nxt.bounds, main)[0] - _span(prev.bounds, main)[1]
        if g < 0:
            raise NonUniformAxis(f"{prev.id} and {nxt.id} overlap along {main}")
        gaps.append(g)

    c_main0, c_main1 = _span(group.bounds, main)
    c_cross0, c_cross1 = _span(group.bounds, cross)
    main_start = _span(flow[0].bounds, main)[0]
    main_end = max(_span(c.bounds, main)[1] for c in flow)
    cross_starts = [_span(c.bounds, cross)[0] for c in flow]
    cross_start = min(cross_starts)
    cross_end = max(_span(c.bounds, cross)[1] for c in flow)

    lead_main = max(0.0, main_start - c_main0)
    trail_main = max(0.0, c_main1 - main_end)
    lead_cross = max(0.0, cross_start - c_cross0)
    trail_cross = max(0.0, c_cross1 - cross_end)
    if direction == "row":
        padding = Padding(top=lead_cross, right=trail_main, bottom=trail_cross, left=lead_main)
    else:
        padding = Padding(top=lead_main, right=trail_cross, bottom=trail_main, left=lead_cross)

    gap, margins = 0.0, ()
    if gaps:
        med = statistics.median(gaps)
        if max(abs(g - med) for g in gaps) <= GAP_TOLERANCE:
            gap = float(med)
        else:
            margins = (0.0, *gaps)
    offsets = tuple(s - cross_start for s in cross_starts)
    if not any(offsets):
        offsets = ()
    return AutoLayoutSpec(direction=direction, gap=gap, padding=padding, sizing=sizing,
                          margins=margins, cross_offsets=offsets)


# -- document pass -----------------------------------------------------------

def _nest_contained(children: tuple[DesignNode, ...]) -> tuple[DesignNode, ...]:
    """Move each flow child that lies fully inside an earlier (lower) frame or
    group sibling into the smallest such sibling, as an absolute child."""
    kids = list(children)
    target: dict[int, int] = {}
    for i, b in enumerate(kids):
        if b.positioning == "absolute" or b.bounds.area <= 0:
            continue
        best = None
        for j in range(i):
            a = kids[j]
            if (a.kind in CONTAINER_KINDS and a.origin == "original"
                    and a.instance is None and a.bounds.contains(b.bounds)):
                if best is None or a.bounds.area <= kids[best].bounds.area:
                    best = j
        if best is not None:
            target[i] = best
    if not target:
        return children

    adopted: dict[int, list[int]] = {}
    for i, j in target.items():
        adopted.setdefault(j, []).append(i)

    def build(i: int) -> DesignNode:
        node = kids[i]
        if i in target:
            node = replace(node, positioning="absolute")
        extra = [build(k) for k in sorted(adopted.get(i, ()))]
        if extra:
            node = replace(node, children=node.children + tuple(extra))
        return node

    return tuple(build(i) for i in range(len(kids)) if i not in target)


def _containment_pass(node: DesignNode) -> DesignNode:
    if not node.children:
        return node
    kids = _nest_contained(node.children)
    return replace(node, children=tuple(_containment_pass(c) for c in kids))


def _grouping_pass(node: DesignNode, taken: set[str]) -> DesignNode:
    if node.kind not in CONTAINER_KINDS or not node.children:
        return node
    kids = tuple(_grouping_pass(c, taken) for c in node.children)
    return group_layers(node, kids, taken)


def _layout_pass(node: DesignNode) -> DesignNode:
    if not node.children:
        return replace(node, layout=None)
    kids = tuple(_layout_pass(c) for c in node.children)
    node = replace(node, children=kids)
    has_flow = any(c.positioning != "absolute" for c in kids)
    if node.origin == "synthesized" or has_flow:
        return replace(node, layout=infer_autolayout(node))
    return replace(node, layout=None)


def optimize_screen(screen: Screen, taken: set[str]) -> Screen:
    root = replace(screen.root, positioning="flow")
    root = _containment_pass(root)
    root = _grouping_pass(root, taken)
    root = _layout_pass(root)
    return replace(screen, root=root)


def optimize_document(doc: DesignDocument) -> DesignDocument:
    """Containment, grouping and auto-layout inference for every screen."""
    taken = {node.id for _, node in iter_document(doc)}
    return DesignDocument(tuple(optimize_screen(s, taken) for s in doc.screens))


# -- detection ---------------------------------------------------------------

def _cut_depth(node_id: str, nodes: list[DesignNode]) -> int:
    """Depth of the grouping tree an XY-cut would build over ``nodes``."""
    if len(nodes) <= 1:
        return 0
    arranged = _cut(node_id, nodes, set())
    if arranged is None:
        return 1
    originals = {id(n) for n in nodes}

    def depth(node: DesignNode) -> int:
        inner = [c for c in node.children if id(c) not in originals]
        return 1 + max((depth(c) for c in inner), default=0)

    return 1 + max((depth(c) for c in arranged if id(c) not in originals), default=0)


def detect_suboptimal(doc: DesignDocument) -> list[Finding]:
    """Structural smells, ordered by pre-order position then kind.

    - UNGROUPED_SIBLINGS: more than 8 direct children that projection-cluster
      into two or more groups.
    - FLAT_DEEP_LIST: more than 8 children, all leaves, whose XY-cut would
      build at least 3 levels of grouping.
    - OVERLAPPING_LAYERS (on the later sibling): two flow siblings overlap by
      more than 10% of the smaller one's area.
    - ABSOLUTE_ONLY: two or more flow children that no cut separates and no
      overlapping pair explains (interlocking arrangements).
    """
    findings: list[Finding] = []
    for _, node in iter_document(doc):
        if not node.children:
            continue
        flow = [c for c in node.children if c.positioning != "absolute"]
        if len(node.children) > UNGROUPED_CHILD_LIMIT:
            clusters = _clusters(flow, "y")
            if len(clusters) < 2:
                clusters = _clusters(flow, "x")
            if len(clusters) >= 2:
                findings.append(Finding(node.id, "UNGROUPED_SIBLINGS",
                                        f"{len(node.children)} children form "
                                        f"{len(clusters)} projection clusters"))
            if all(not c.children for c in node.children):
                depth = _cut_depth(node.id, flow)
                if depth >= FLAT_DEPTH_LIMIT:
                    findings.append(Finding(node.id, "FLAT_DEEP_LIST",
                                            f"flat list implies {depth} grouping levels"))
        overlapping = []
        for i, b in enumerate(flow):
            for a in flow[:i]:
                smaller = min(a.bounds.area, b.bounds.area)
                overlap = a.bounds.intersection_area(b.bounds)
                if smaller > 0 and overlap > OVERLAP_FRACTION * smaller:
                    overlapping.append(Finding(b.id, "OVERLAPPING_LAYERS",
                                               f"overlaps {a.id} by {overlap / smaller:.0%} "
                                               f"of the smaller layer"))
        # interlocking layouts that no cut separates, without overlaps to blame
        if not overlapping and len(flow) >= 2 and _cut(node.id, flow, set()) is None:
            findings.append(Finding(node.id, "ABSOLUTE_ONLY",
                                    f"{len(flow)} children cannot be separated on either axis"))
        findings.extend(overlapping)
    order = {}
    for pos, (_, node) in enumerate(iter_document(doc)):
        order[node.id] = pos
    return sorted(findings, key=lambda f: (order[f.node_id], FINDING_KINDS.index(f.kind)))
