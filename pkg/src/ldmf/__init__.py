"""Layout-aware design-to-code conversion: structural optimization, semantic
tagging, componentization, instruction lowering, HTML/CSS emission and
fidelity scoring for a closed JSON design format."""

from .codegen import emit_html_css, lower_to_instructions
from .componentizer import componentize, detect_repeats, expand_components, fingerprint_subtree
from .corpus import CorpusSpec, deoptimize, gen_corpus
from .ir import DesignDocument, DesignNode, Rect, parse_document, serialize_document, validate_document
from .layout import compute_layout
from .metrics import macro_average, node_match, pms_distribution, preview_match_score, prf1_scores
from .optimizer import detect_suboptimal, group_layers, infer_autolayout, optimize_document
from .pipeline import ConvertOptions, convert_bytes, convert_document, score_program
from .tagger import predict_tags, tag_document

__version__ = "0.1.0"

__all__ = [
    "ConvertOptions", "CorpusSpec", "DesignDocument", "DesignNode", "Rect", "compute_layout",
    "componentize", "convert_bytes", "convert_document", "deoptimize", "detect_repeats",
    "detect_suboptimal", "emit_html_css", "expand_components", "fingerprint_subtree",
    "gen_corpus", "group_layers", "infer_autolayout", "lower_to_instructions", "macro_average",
    "node_match", "optimize_document", "parse_document", "pms_distribution", "predict_tags",
    "preview_match_score", "prf1_scores", "score_program", "serialize_document", "tag_document",
    "validate_document",
]
