from __future__ import annotations

from hypothesis import strategies as st

from ldmf.ir import DesignDocument, DesignNode, Fill, Rect, Screen, Stroke, TextStyle

def rect(node_id, x, y, w, h, **kw) -> DesignNode:
    return DesignNode(id=node_id, name=kw.pop("name", node_id), kind=kw.pop("kind", "rect"),
                      bounds=Rect(float(x), float(y), float(w), float(h)), **kw)


def text(node_id, x, y, w, h, content="Hello", size=16, **kw) -> DesignNode:
    return DesignNode(id=node_id, name=kw.pop("name", node_id), kind="text",
                      bounds=Rect(float(x), float(y), float(w), float(h)),
                      text=TextStyle(content, size), **kw)


def frame(node_id, x, y, w, h, children=(), **kw) -> DesignNode:
    return DesignNode(id=node_id, name=kw.pop("name", node_id), kind=kw.pop("kind", "frame"),
                      bounds=Rect(float(x), float(y), float(w), float(h)),
                      children=tuple(children), **kw)


def page(children, w=1440, h=900, screen_id="s1", root_id="root") -> DesignDocument:
    root = frame(root_id, 0, 0, w, h, children, name="Page")
    return DesignDocument((Screen(screen_id, "Screen", float(w), float(h), root),))


def card(prefix, x, y, title="Basic", image="img/a.png", color="#f3f4f6") -> DesignNode:
    """A 200x180 product card: cover image, title and price."""
    return frame(f"{prefix}", x, y, 200, 180, [
        DesignNode(id=f"{prefix}-img", name="Cover", kind="image",
                   bounds=Rect(x + 12.0, y + 12.0, 176.0, 96.0), image_ref=image),
        text(f"{prefix}-title", x + 12, y + 120, 176, 20, title, name="Title"),
        text(f"{prefix}-price", x + 12, y + 148, 176, 20, "$9", name="Price"),
    ], name="Card", fill=Fill(color), corner_radius=12.0)


def five_cards() -> DesignDocument:
    titles = ["Basic", "Pro", "Team", "Business", "Enterprise"]
    cards = [card(f"c{i}", 40 + i * 216, 40, titles[i]) for i in range(5)]
    row = frame("row", 40, 40, 5 * 200 + 4 * 16, 180, cards, name="Cards")
    return page([row])


def button(node_id, x, y, w=120, h=40, label="Submit", name="Button") -> DesignNode:
    return frame(node_id, x, y, w, h, [text(f"{node_id}-t", x + 16, y + 10, w - 32, 20, label)],
                 name=name, fill=Fill("#2563eb"), corner_radius=8.0)


def input_box(node_id, x, y, w=280, h=40, placeholder="Email") -> DesignNode:
    return frame(node_id, x, y, w, h, [text(f"{node_id}-t", x + 12, y + 10, w - 24, 20, placeholder)],
                 name="Field", stroke=Stroke("#9ca3af", 1.0), corner_radius=6.0)


# -- random documents ----------------------------------------------------------

_LEAF_KINDS = ("rect", "text", "image", "vector")


@st.composite
def subtrees(draw, x0: int, y0: int, w: int, h: int, depth: int, prefix: str):
    """A random subtree whose bounds lie inside (x0, y0, w, h)."""
    nw = draw(st.integers(1, max(1, w)))
    nh = draw(st.integers(1, max(1, h)))
    nx = x0 + draw(st.integers(0, max(0, w - nw)))
    ny = y0 + draw(st.integers(0, max(0, h - nh)))
    container = depth > 0 and draw(st.booleans())
    fill = draw(st.sampled_from([None, Fill("#ff0000"), Fill("#00ff00", 0.5)]))
    if not container:
        kind = draw(st.sampled_from(_LEAF_KINDS))
        return DesignNode(
            id=prefix, name=draw(st.sampled_from(["Box", "Label", "Icon", "Button", "Photo"])),
            kind=kind, bounds=Rect(float(nx), float(ny), float(nw), float(nh)), fill=fill,
            text=TextStyle(draw(st.sampled_from(["A", "B", "Hi"])), 16) if kind == "text" else None,
            image_ref="img/x.png" if kind == "image" else None,
        )
    n = draw(st.integers(0, 5))
    kids = tuple(draw(subtrees(nx, ny, nw, nh, depth - 1, f"{prefix}.{i}")) for i in range(n))
    return DesignNode(id=prefix, name="Frame", kind=draw(st.sampled_from(["frame", "group"])),
                      bounds=Rect(float(nx), float(ny), float(nw), float(nh)), fill=fill,
                      children=kids)


@st.composite
def grid_children(draw, prefix: str, w: int, h: int):
    """Children on a coarse grid: mostly disjoint, some repeated, few overlaps."""
    n = draw(st.integers(0, 10))
    out = []
    for i in range(n):
        col, row = draw(st.integers(0, 5)), draw(st.integers(0, 5))
        jitter = draw(st.integers(0, 30))
        x, y = 10 + col * (w // 6) + jitter, 10 + row * (h // 6) + jitter
        cw, ch = draw(st.integers(5, w // 6)), draw(st.integers(5, h // 6))
        out.append(draw(subtrees(x, y, cw, ch, 2, f"{prefix}{i}")))
    return out


@st.composite
def documents(draw, max_screens: int = 2):
    screens = []
    for s in range(draw(st.integers(1, max_screens))):
        w, h = draw(st.sampled_from([(400, 300), (800, 600), (1440, 900)]))
        kids = draw(grid_children(f"s{s}n", w, h))
        root = DesignNode(id=f"s{s}root", name="Page", kind="frame",
                          bounds=Rect(0.0, 0.0, float(w), float(h)), children=tuple(kids))
        screens.append(Screen(f"s{s}", f"Screen {s}", float(w), float(h), root))
    return DesignDocument(tuple(screens))


@st.composite
def documents_with_repeats(draw):
    """Random documents plus a row of copies of one random subtree."""
    doc = draw(documents(max_screens=1))
    proto = draw(subtrees(0, 0, 120, 80, 2, "p"))
    k = draw(st.integers(2, 4))

    s = doc.screens[0]

    def shift(node: DesignNode, dx: float, suffix: str) -> DesignNode:
        b = node.bounds
        return DesignNode(id=node.id + suffix, name=node.name, kind=node.kind,
                          bounds=Rect(b.x + dx, b.y + s.height + 10, b.w, b.h), fill=node.fill,
                          text=node.text, image_ref=node.image_ref,
                          children=tuple(shift(c, dx, suffix) for c in node.children))

    copies = tuple(shift(proto, 20 + i * 130, f"#{i}") for i in range(k))
    root = s.root
    band = DesignNode(id="band", name="Band", kind="frame",
                      bounds=Rect(0.0, float(s.height), float(s.width), 100.0), children=copies)
    new_root = DesignNode(id=root.id, name=root.name, kind=root.kind,
                          bounds=Rect(0.0, 0.0, s.width, s.height + 100), children=root.children + (band,))
    return DesignDocument((Screen(s.id, s.name, s.width, s.height + 100, new_root),))


# -- acceptance report ---------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
