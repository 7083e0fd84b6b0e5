"""Generate a corpus, convert every optimized design and score the emitted
code against the design. Every screen is expected to score 100.

    python3 scripts/run_roundtrip.py --n 200 --seed 42 --out runs/roundtrip
"""
from __future__ import annotations

import argparse
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from ldmf import reports
from ldmf.corpus import CorpusSpec, gen_corpus
from ldmf.metrics import DEFAULT_THRESHOLD, pms_distribution
from ldmf.pipeline import PmsReport, convert_document, score_program


@dataclass
class RoundTripConfig:
    n: int = 200
    seed: int = 42
    threshold: float = DEFAULT_THRESHOLD
    source: str = "optimized"  # or "deoptimized"
    out: str = "runs/roundtrip"


def run(cfg: RoundTripConfig) -> PmsReport:
    scores = []
    for pair in gen_corpus(CorpusSpec(cfg.n, seed=cfg.seed)):
        doc = getattr(pair, cfg.source)
        scores += score_program(doc, convert_document(doc).program, cfg.threshold).per_screen
    return PmsReport(scores, pms_distribution(scores), cfg.threshold)


def main(argv=None, defaults: RoundTripConfig = RoundTripConfig()) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for key, value in asdict(defaults).items():
        p.add_argument(f"--{key}", type=type(value), default=value)
    cfg = RoundTripConfig(**vars(p.parse_args(argv)))
    start = time.perf_counter()
    report = run(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "pms.json").write_text(reports.pms_json(report))
    (out / "pms.md").write_text(reports.pms_markdown(report))
    (out / "histogram.csv").write_text(reports.histogram_csv(report))
    s = report.summary
    print(f"{cfg.source}: {s.count} screens, mean PMS {s.mean:.2f}, "
          f"PMS>95 on {100 * s.frac_above_95:.1f}% ({time.perf_counter() - start:.1f}s) -> {out}")


if __name__ == "__main__":
    main()
