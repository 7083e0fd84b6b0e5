from dataclasses import replace

from hypothesis import given, settings

from conftest import button, card, documents, frame, input_box, page, rect, text
from ldmf.ir import Fill, Stroke, index_nodes, iter_document
from ldmf.optimizer import optimize_document
from ldmf.tagger import (
    BIG_TAGS, SMALL_TAGS, TAXONOMY, classify_node, detect_composites, extract_features,
    predict_tags, tag_document, tokenize_name,
)


def features(node, doc=None, **kw):
    doc = doc or page([node])
    return extract_features(node, index_nodes(doc), **kw)


def test_taxonomy_layout():
    assert len(SMALL_TAGS) == 9 and len(BIG_TAGS) == 10
    assert TAXONOMY[-3:] == ("text", "image", "container")


def test_button_features():
    b = button("b", 0, 0, 120, 40, "Submit", name="Login Button")
    fv = features(b)
    assert fv.aspect_ratio == 3.0
    assert fv.single_text_child and fv.text_length == len("Submit")
    assert fv.name_tokens == ("login", "button")


def test_bare_text_features():
    t = text("t", 0, 0, 100, 20, "hello world")
    fv = features(t)
    assert (fv.child_count, fv.single_text_child, fv.text_length) == (0, False, 11)


def test_tokenizer():
    assert tokenize_name("Login Button") == ("login", "button")
    assert tokenize_name("cta_primary-2") == ("cta", "primary", "2")
    assert tokenize_name("") == ()


def test_button_rule():
    # hand evaluation: fill, one text child, radius 8 >= 4, aspect 3 in [1.5, 8]
    # -> base 0.9; the name "Button" adds 0.1
    tag, conf = classify_node(features(button("b", 0, 0, 120, 40, name="Shape")))
    assert (tag, conf) == ("button", 0.9)
    tag, conf = classify_node(features(button("b", 0, 0, 120, 40, name="Button")))
    assert (tag, conf) == ("button", 1.0)


def test_text_is_text():
    assert classify_node(features(text("t", 0, 0, 10, 10))) == ("text", 1.0)


def test_stroked_square_is_checkbox():
    tag, conf = classify_node(features(rect("c", 0, 0, 20, 20, stroke=Stroke("#000", 1.0))))
    assert tag == "checkbox" and conf >= 0.6


def test_circle_is_radio():
    node = rect("r", 0, 0, 20, 20, stroke=Stroke("#000", 1.0), corner_radius=10.0)
    assert classify_node(features(node))[0] == "radio"


def test_input_and_textarea():
    assert classify_node(features(input_box("i", 0, 0)))[0] == "input"
    area = frame("a", 0, 0, 300, 120, [text("t", 12, 12, 200, 20)], stroke=Stroke("#999", 1.0))
    assert classify_node(features(area))[0] == "textarea"


def test_switch_and_progress():
    sw = frame("s", 0, 0, 44, 24, [rect("k", 2, 2, 20, 20, fill=Fill("#fff"))],
               fill=Fill("#2563eb"), corner_radius=12.0)
    assert classify_node(features(sw))[0] == "switch"
    bar = frame("p", 0, 0, 200, 8, [rect("v", 0, 0, 80, 8, fill=Fill("#0f0"))], fill=Fill("#ccc"))
    assert classify_node(features(bar))[0] == "progress"


def test_name_only_tags_need_names():
    sel = frame("s", 0, 0, 240, 40, [text("t", 12, 10, 100, 20), rect("v", 200, 12, 16, 16)],
                stroke=Stroke("#999", 1.0), name="Country select")
    assert classify_node(features(sel))[0] == "select"
    assert classify_node(features(sel, use_names=False))[0] == "container"


def test_fallbacks():
    assert classify_node(features(rect("r", 0, 0, 500, 300)))[0] == "container"
    assert classify_node(features(rect("v", 0, 0, 24, 24, kind="vector")))[0] == "image"


class ConstantBackend:
    def classify(self, fv):
        return {tag: 0.5 for tag in TAXONOMY}


def test_ties_follow_taxonomy_order():
    assert classify_node(features(rect("r", 0, 0, 5, 5)), ConstantBackend()) == (TAXONOMY[0], 0.5)


def test_login_form():
    doc = page([frame("form", 40, 40, 360, 200, [
        input_box("email", 40, 40), input_box("password", 40, 90),
        button("go", 40, 140, label="Log in", name="Rectangle 4")])])
    tags = tag_document(optimize_document(doc))
    assert [tags[i] for i in ("email", "password", "go")] == ["input", "input", "button"]


def test_one_text_document():
    doc = page([text("t1", 10, 10, 100, 20)])
    assert tag_document(doc) == {"root": "container", "t1": "text"}


def test_tagging_is_deterministic():
    doc = page([button("b", 10, 10), input_box("i", 10, 60)])
    assert tag_document(doc) == tag_document(doc)


# -- composites ----------------------------------------------------------------------

def test_grid_of_cards():
    rows = [frame(f"row{r}", 0, r * 200, 650, 180,
                  [card(f"c{r}{c}", c * 216, r * 200, f"T{r}{c}") for c in range(3)])
            for r in range(2)]
    grid = frame("grid", 0, 0, 650, 380, rows)
    doc = page([grid])
    tags = tag_document(doc)
    assert ("grid", "grid") in detect_composites(doc.screens[0].root, tags)
    assert tags["grid"] == "grid"


def test_left_drawer():
    items = [text(f"i{k}", 16, 24 + k * 40, 200, 20, f"Item {k}") for k in range(5)]
    drawer = frame("nav", 0, 0, 280, 900, items, fill=Fill("#111"))
    doc = page([drawer, rect("main", 300, 0, 1140, 900)])
    assert detect_composites(doc.screens[0].root, tag_document(doc)) == [("nav", "drawer")]


def test_slider_and_quantity():
    slider = frame("sl", 0, 0, 200, 24, [rect("track", 0, 10, 200, 4, fill=Fill("#ccc")),
                                        rect("thumb", 90, 0, 24, 24, corner_radius=12.0,
                                             fill=Fill("#00f"))])
    qty = frame("q", 300, 0, 120, 32, [button("minus", 300, 0, 32, 32, "-"),
                                      text("n", 340, 6, 40, 20, "3"),
                                      button("plus", 388, 0, 32, 32, "+")])
    doc = page([slider, qty])
    assert detect_composites(doc.screens[0].root, tag_document(doc)) == [
        ("sl", "slider"), ("q", "quantity_selector")]


def test_empty_container_has_no_composites():
    assert detect_composites(frame("e", 0, 0, 10, 10), {}) == []


@settings(max_examples=150, deadline=None)
@given(documents())
def test_totality_and_composite_precedence(doc):
    opt = optimize_document(doc)
    plain = {}
    for node_id in index_nodes(opt).preorder:
        node = index_nodes(opt).by_id[node_id]
        plain[node_id] = classify_node(extract_features(node, index_nodes(opt)))[0]
    tags = tag_document(opt)
    assert len(tags) == sum(1 for _ in iter_document(opt))
    changed = {k for k in tags if tags[k] != plain[k]}
    # only containers can be relabelled, and only to big tags
    assert all(tags[k] in BIG_TAGS for k in changed)
    assert all(predict_tags(opt)[k][1] == 1.0 for k in changed)


def test_names_off_never_predicts_name_only_tags():
    doc = page([replace(input_box("i", 0, 0), name="Date picker")])
    assert tag_document(doc, use_names=False)["i"] == "input"
    assert tag_document(doc)["i"] == "date_time_picker"
