from collections import Counter

import pytest

from conftest import frame, page, rect, text
from ldmf.corpus import CorpusSpec, container_depth, deoptimize, gen_corpus
from ldmf.ir import Fill, iter_document, serialize_document, validate_document


def leaf_bounds(doc):
    return Counter((n.id, n.bounds) for _, n in iter_document(doc) if not n.children)


def count_nodes(node):
    # independent recursive counter used as oracle
    return 1 + sum(count_nodes(c) for c in node.children)


def test_same_spec_same_bytes():
    a = gen_corpus(CorpusSpec(1, seed=42))[0]
    b = gen_corpus(CorpusSpec(1, seed=42))[0]
    assert serialize_document(a.optimized) == serialize_document(b.optimized)
    assert serialize_document(a.deoptimized) == serialize_document(b.deoptimized)
    assert a.gold_tags == b.gold_tags


def test_different_seeds_differ():
    a = gen_corpus(CorpusSpec(1, seed=1))[0]
    b = gen_corpus(CorpusSpec(1, seed=2))[0]
    assert serialize_document(a.optimized) != serialize_document(b.optimized)


def test_two_hundred_valid_pairs():
    pairs = gen_corpus(CorpusSpec(200, seed=7))
    assert len(pairs) == 200
    for p in pairs:
        assert validate_document(p.optimized) == []
        assert validate_document(p.deoptimized) == []
        ids = [n.id for _, n in iter_document(p.optimized)]
        assert set(p.gold_tags) == set(ids)
        assert len(ids) == sum(count_nodes(s.root) for s in p.optimized.screens)


def test_fixed_depth():
    for p in gen_corpus(CorpusSpec(30, seed=5, depth_range=(2, 2))):
        assert p.depth == 2
        assert container_depth(p.optimized.screens[0].root) == 2


def test_depth_range_is_covered():
    depths = {p.depth for p in gen_corpus(CorpusSpec(60, seed=42))}
    assert min(depths) >= 2 and max(depths) <= 7 and len(depths) >= 4


def test_invalid_specs():
    with pytest.raises(ValueError):
        CorpusSpec(-1, seed=0)
    with pytest.raises(ValueError):
        CorpusSpec(1, seed=0, depth_range=(5, 3))


def test_gold_components_match_cards():
    for p in gen_corpus(CorpusSpec(10, seed=3)):
        cards = sum(1 for _, n in iter_document(p.optimized) if n.name == "Card")
        assert p.gold_components == (1, (cards,))


# -- de-optimization -----------------------------------------------------------------

def test_two_row_design_flattens():
    rows = [frame(f"row{r}", 40, 40 + r * 60, 210, 50,
                  [text(f"t{r}{c}", 40 + c * 110, 40 + r * 60, 100, 50) for c in range(2)], kind="group")
            for r in range(2)]
    doc = page(rows)
    flat = deoptimize(doc, 1)
    root = flat.screens[0].root
    assert sorted(k.id for k in root.children) == ["t00", "t01", "t10", "t11"]
    assert leaf_bounds(flat) == leaf_bounds(doc)


def test_styled_frames_survive():
    doc = page([frame("card", 0, 0, 100, 100, [rect("a", 10, 10, 10, 10)], fill=Fill("#fff"))])
    root = deoptimize(doc, 1).screens[0].root
    assert [k.id for k in root.children] == ["card"]


def test_deopt_is_deterministic_and_preserves_leaves():
    for p in gen_corpus(CorpusSpec(20, seed=42)):
        again = deoptimize(p.optimized, 42)
        assert serialize_document(again) == serialize_document(p.deoptimized)
        assert leaf_bounds(p.deoptimized) == leaf_bounds(p.optimized)
        assert all(n.layout is None for _, n in iter_document(p.deoptimized))


def test_overlapping_pairs_keep_paint_order():
    for p in gen_corpus(CorpusSpec(20, seed=9)):
        for _, node in iter_document(p.deoptimized):
            kids = node.children
            for i, a in enumerate(kids):
                for b in kids[i + 1:]:
                    if a.bounds.intersection_area(b.bounds) > 0:
                        orig_order = [n.id for _, n in iter_document(p.optimized)]
                        assert orig_order.index(a.id) < orig_order.index(b.id)
