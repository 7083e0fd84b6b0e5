"""Command-line entry point.

Exit codes: 0 on success, 1 on invalid input (syntax, schema or validation
errors, id mismatches, empty screens), 2 on internal errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import reports
from .corpus import CorpusSpec, deoptimize, gen_corpus
from .instructions import load_program
from .ir import (
    DesignSyntaxError, DuplicateId, SchemaError, parse_document, serialize_document,
)
from .metrics import EmptyScreen, IdMismatch, prf1_scores
from .pipeline import ConvertOptions, ValidationFailed, convert_bytes, program_tags, score_program

log = logging.getLogger("ldmf")

DEFAULT_SEED = 42


def default_seed() -> int:
    return int(os.environ.get("LDMF_SEED", DEFAULT_SEED))


class UsageError(ValueError):
    pass


def _write(out_dir: Path, files: dict[str, bytes | str]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, data in sorted(files.items()):
        if isinstance(data, str):
            data = data.encode("utf-8")
        (out_dir / name).write_bytes(data)


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None


def _viewport(text: str) -> tuple[int, int]:
    w, sep, h = text.lower().partition("x")
    try:
        if not sep:
            raise ValueError
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None


# -- commands ----------------------------------------------------------------

def cmd_convert(args) -> int:
    data = Path(args.inp).read_bytes()
    options = ConvertOptions(tag_names=args.tag_names == "on", components=not args.no_components)
    try:
        result = convert_bytes(data, options)
    except ValidationFailed as e:
        for v in e.violations:
            print(f"{v.path}: {v.rule}: {v.detail}", file=sys.stderr)
        return 1
    _write(Path(args.out), result.files())
    log.info("wrote %d files to %s", len(result.files()), args.out)
    return 0


def cmd_score(args) -> int:
    doc = parse_document(Path(args.design).read_bytes())
    program = load_program(Path(args.instructions).read_bytes())
    report = score_program(doc, program, args.threshold, args.viewport)
    _write(Path(args.out), {"pms.json": reports.pms_json(report),
                            "pms.md": reports.pms_markdown(report),
                            "histogram.csv": reports.histogram_csv(report)})
    s = report.summary
    print(f"screens={s.count} mean_pms={s.mean:.2f} frac_above_95={s.frac_above_95:.4f}")
    return 0


def cmd_gen_corpus(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    spec = CorpusSpec(count=args.n, seed=seed, depth_range=args.depth)
    out = Path(args.out)
    manifest = []
    files: dict[str, str] = {}
    for pair in gen_corpus(spec):
        files[f"{pair.name}.json"] = serialize_document(pair.optimized)
        files[f"{pair.name}.deopt.json"] = serialize_document(pair.deoptimized)
        files[f"{pair.name}.tags.json"] = reports.dumps(
            [{"nodeId": k, "tag": v} for k, v in pair.gold_tags.items()])
        defs, counts = pair.gold_components
        manifest.append({"name": pair.name, "depth": pair.depth,
                         "goldComponents": {"definitions": defs, "instances": list(counts)}})
    files["manifest.json"] = reports.dumps({"seed": seed, "count": args.n,
                                            "depthRange": list(args.depth), "designs": manifest})
    _write(out, files)
    return 0


def cmd_deopt(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    doc = parse_document(Path(args.inp).read_bytes())
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(serialize_document(deoptimize(doc, seed)), encoding="utf-8")
    return 0


def _load_tags(path: str) -> dict[str, str]:
    raw = json.loads(Path(path).read_bytes())
    if isinstance(raw, dict) and "screens" in raw and "components" in raw:
        return program_tags(load_program(Path(path).read_bytes()))
    if isinstance(raw, dict):
        return {str(k): str(v) for k, v in raw.items()}
    return {item["nodeId"]: item["tag"] for item in raw}


def cmd_eval_tags(args) -> int:
    report = prf1_scores(_load_tags(args.pred), _load_tags(args.gold))
    _write(Path(args.out), {"tags.json": reports.dumps(report.to_json()),
                            "tags.md": reports.tags_markdown(report)})
    print(f"macro_small={report.macro_small} macro_big={report.macro_big}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ldmf", description="Design-to-code conversion and scoring.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="convert a design file to HTML/CSS")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--tag-names", choices=("on", "off"), default="on")
    c.add_argument("--no-components", action="store_true")
    c.set_defaults(func=cmd_convert)

    s = sub.add_parser("score", help="Preview Match Score of instructions against a design")
    s.add_argument("--design", required=True)
    s.add_argument("--instructions", required=True)
    s.add_argument("--threshold", type=float, default=0.03)
    s.add_argument("--viewport", type=_viewport, default=(1440, 900))
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_score)

    g = sub.add_parser("gen-corpus", help="generate a synthetic corpus with ground truth")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--depth", type=_range, default=(2, 7))
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_corpus)

    d = sub.add_parser("deopt", help="flatten and shuffle an optimized design")
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--seed", type=int, default=None)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_deopt)

    e = sub.add_parser("eval-tags", help="precision/recall/F1 of predicted tags")
    e.add_argument("--pred", required=True)
    e.add_argument("--gold", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_eval_tags)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DesignSyntaxError, SchemaError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (DuplicateId, IdMismatch, EmptyScreen, ValueError, OSError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - top-level guard
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
