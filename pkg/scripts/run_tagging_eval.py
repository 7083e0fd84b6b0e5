"""Per-tag precision / recall / F1 of the default tagger against the corpus
gold labels, with and without layer names.

    python3 scripts/run_tagging_eval.py --n 200 --seed 42
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from ldmf import reports
from ldmf.corpus import CorpusSpec, gen_corpus
from ldmf.metrics import TagEvalReport, prf1_scores
from ldmf.pipeline import ConvertOptions, convert_document, program_tags


@dataclass
class TaggingConfig:
    n: int = 200
    seed: int = 42
    out: str = "runs/tagging"


def evaluate(cfg: TaggingConfig, use_names: bool) -> TagEvalReport:
    pred, gold = {}, {}
    for pair in gen_corpus(CorpusSpec(cfg.n, seed=cfg.seed)):
        result = convert_document(pair.optimized, ConvertOptions(tag_names=use_names))
        pred.update(program_tags(result.program))
        gold.update(pair.gold_tags)
    return prf1_scores(pred, gold)


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=TaggingConfig.n)
    p.add_argument("--seed", type=int, default=TaggingConfig.seed)
    p.add_argument("--out", default=TaggingConfig.out)
    cfg = TaggingConfig(**vars(p.parse_args(argv)))
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for label, names in (("names-on", True), ("names-off", False)):
        report = evaluate(cfg, names)
        (out / f"tags.{label}.json").write_text(reports.dumps(report.to_json()))
        (out / f"tags.{label}.md").write_text(reports.tags_markdown(report))
        print(f"{label}: macro small {report.macro_small}, macro big {report.macro_big}")


if __name__ == "__main__":
    main()
