"""End-to-end operations shared by the command line and the experiment
scripts: convert a design to code, and score emitted code against a design."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .codegen import EmittedSources, emit_html_css, lower_to_instructions
from .componentizer import ComponentDef, componentize
from .instructions import BeginElement, Program, expand_instructions
from .ir import DesignDocument, Rect, Violation, iter_nodes, parse_document, validate_document
from .layout import compute_layout
from .metrics import (
    DEFAULT_THRESHOLD, Distribution, EmptyScreen, IdMismatch, ScreenScore, pms_distribution,
    preview_match_score,
)
from .optimizer import Finding, detect_suboptimal, optimize_document
from .tagger import tag_document


class ValidationFailed(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__(f"{len(violations)} validation violation(s)")
        self.violations = violations


@dataclass(frozen=True)
class ConvertOptions:
    tag_names: bool = True
    components: bool = True
    min_nodes: int = 3
    min_instances: int = 2


@dataclass
class ConvertResult:
    sources: EmittedSources
    findings: list[Finding]
    program: Program
    optimized: DesignDocument
    tags: dict[str, str]
    components: list[ComponentDef] = field(default_factory=list)

    def files(self) -> dict[str, bytes]:
        out = dict(self.sources.files)
        out["findings.json"] = (json.dumps([f.to_json() for f in self.findings], indent=2)
                                + "\n").encode("utf-8")
        return out


def convert_document(doc: DesignDocument, options: ConvertOptions = ConvertOptions()) -> ConvertResult:
    violations = validate_document(doc)
    if violations:
        raise ValidationFailed(violations)
    findings = detect_suboptimal(doc)
    optimized = optimize_document(doc)
    tags = tag_document(optimized, use_names=options.tag_names)
    defs: list[ComponentDef] = []
    structured = optimized
    if options.components:
        structured, defs = componentize(optimized, tags, options.min_nodes, options.min_instances)
    program = lower_to_instructions(structured, tags, defs)
    return ConvertResult(emit_html_css(program), findings, program, optimized, tags, defs)


def convert_bytes(data: str | bytes, options: ConvertOptions = ConvertOptions()) -> ConvertResult:
    return convert_document(parse_document(data), options)


# -- scoring -----------------------------------------------------------------

@dataclass
class PmsReport:
    per_screen: list[ScreenScore]
    summary: Distribution
    threshold: float

    def to_json(self) -> dict:
        return {"threshold": self.threshold,
                "perScreen": [s.to_json() for s in self.per_screen],
                "summary": self.summary.to_json()}


def original_rects(doc: DesignDocument) -> dict[str, dict[str, Rect]]:
    """Design bounds of every original (non-synthesized) node, per screen."""
    return {s.id: {n.id: n.bounds for n in iter_nodes(s.root) if n.origin == "original"}
            for s in doc.screens}


def score_program(doc: DesignDocument, program: Program, theta: float = DEFAULT_THRESHOLD,
                  viewport: tuple[float, float] = (1440, 900)) -> PmsReport:
    if not doc.screens:
        raise EmptyScreen("design has no screens")
    by_id = {s.screen_id: s for s in program.screens}
    missing = [s.id for s in doc.screens if s.id not in by_id]
    if missing:
        raise IdMismatch(f"screens without instructions: {missing}")
    orig = original_rects(doc)
    scores = []
    for s in doc.screens:
        rendered = compute_layout(by_id[s.id].instructions, viewport, program.components).rects
        scores.append(preview_match_score(orig[s.id], rendered, theta, s.id))
    return PmsReport(scores, pms_distribution(scores), theta)


def program_tags(program: Program, original_only: bool = True) -> dict[str, str]:
    """Node id -> tag as recorded in the instruction stream."""
    out = {}
    for s in program.screens:
        for ins in expand_instructions(s.instructions, program.components):
            if isinstance(ins, BeginElement) and (ins.origin == "original" or not original_only):
                out[ins.node_id] = ins.tag
    return out
