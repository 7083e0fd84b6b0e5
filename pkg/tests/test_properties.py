"""Structural invariants over randomized documents."""
from __future__ import annotations

from hypothesis import HealthCheck, given, settings

from conftest import documents, documents_with_repeats
from ldmf.codegen import lower_to_instructions
from ldmf.componentizer import componentize, detect_repeats, expand_components
from ldmf.instructions import BeginElement, EndElement, check_balance, expand_instructions
from ldmf.ir import iter_document, iter_nodes, validate_document
from ldmf.optimizer import optimize_document
from ldmf.pipeline import convert_document, score_program
from ldmf.tagger import tag_document

SETTINGS = settings(max_examples=1000, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])


def _leaves(doc):
    return {n.id: n.bounds for _, n in iter_document(doc) if not n.children}


def _shape(node):
    return (node.id, node.layout, node.positioning, node.bounds,
            tuple(_shape(c) for c in node.children))


@SETTINGS
@given(documents())
def test_optimize_preserves_leaves_and_ids(doc):
    out = optimize_document(doc)
    assert validate_document(out) == []
    bounds = {n.id: n.bounds for _, n in iter_document(out)}
    assert {k: bounds[k] for k in _leaves(doc)} == _leaves(doc)
    before = sorted(n.id for _, n in iter_document(doc))
    after = sorted(n.id for _, n in iter_document(out) if n.origin == "original")
    assert before == after


@SETTINGS
@given(documents())
def test_optimize_is_idempotent(doc):
    once = optimize_document(doc)
    twice = optimize_document(once)
    assert [_shape(s.root) for s in twice.screens] == [_shape(s.root) for s in once.screens]


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(documents_with_repeats())
def test_componentize_round_trip(doc):
    opt = optimize_document(doc)
    tags = tag_document(opt)
    comp, defs = componentize(opt, tags)
    assert expand_components(comp, defs) == opt


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(documents_with_repeats())
def test_candidates_are_disjoint_and_monotone(doc):
    opt = optimize_document(doc)
    tags = tag_document(opt)
    cands = detect_repeats(opt, tags)
    covered = [n.id for c in cands for inst in c.nodes for n in iter_nodes(inst)]
    assert len(covered) == len(set(covered))
    counts = [len(detect_repeats(opt, tags, min_instances=k)) for k in range(2, 7)]
    assert counts == sorted(counts, reverse=True)


@SETTINGS
@given(documents())
def test_instruction_lists_are_balanced_and_complete(doc):
    result = convert_document(doc)
    program = result.program
    for comp in program.components:
        check_balance(comp.instructions)
    for s in program.screens:
        flat = expand_instructions(s.instructions, program.components)
        check_balance(flat)
        assert sum(isinstance(i, BeginElement) for i in flat) == sum(
            isinstance(i, EndElement) for i in flat)
    ids = [i.node_id for s in program.screens
           for i in expand_instructions(s.instructions, program.components)
           if isinstance(i, BeginElement)]
    assert len(ids) == len(set(ids))
    originals = {n.id for _, n in iter_document(doc)}
    assert originals <= set(ids)


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(documents())
def test_emitted_layout_reproduces_design(doc):
    result = convert_document(doc)
    report = score_program(doc, result.program)
    for s in report.per_screen:
        assert s.pms == 100.0, s.failures[:3]


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(documents())
def test_lowering_is_deterministic(doc):
    opt = optimize_document(doc)
    tags = tag_document(opt)
    a = lower_to_instructions(*componentize(opt, tags)[:1], tags, componentize(opt, tags)[1])
    b = lower_to_instructions(*componentize(opt, tags)[:1], tags, componentize(opt, tags)[1])
    assert a.dumps() == b.dumps()
