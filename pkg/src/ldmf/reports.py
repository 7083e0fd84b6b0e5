"""JSON, Markdown and CSV renderings of score and tag reports."""
from __future__ import annotations

import csv
import io
import json

from .metrics import TagEvalReport


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _clean(obj):
    """Replace NaN (missing originals) by None so output is strict JSON."""
    if isinstance(obj, float) and obj != obj:
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return obj


def pms_json(report) -> str:
    return dumps(_clean(report.to_json()))


def pms_markdown(report) -> str:
    s = report.summary
    lines = [
        "# Preview Match Score",
        "",
        f"Threshold: {report.threshold:g}",
        "",
        "| screen | N | M | PMS |",
        "|---|---:|---:|---:|",
    ]
    for sc in report.per_screen:
        lines.append(f"| {sc.screen_id} | {sc.n} | {sc.m} | {sc.pms:.2f} |")
    lines += [
        "",
        f"Screens: {s.count}  ",
        f"Mean PMS: {s.mean:.2f}  ",
        f"Fraction of screens with PMS > 95: {s.frac_above_95:.4f}",
        "",
    ]
    return "\n".join(lines)


def histogram_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bucket_low", "bucket_high", "count"])
    for lo, hi, c in report.summary.buckets:
        w.writerow([lo, hi, c])
    return buf.getvalue()


def _fmt(v) -> str:
    return "n/a" if v is None else f"{v:.2f}"


def tags_markdown(report: TagEvalReport) -> str:
    lines = ["# Tagging", "", "| tag | precision | recall | F1 | support |",
             "|---|---:|---:|---:|---:|"]
    for t in report.per_tag:
        lines.append(f"| {t.tag} | {t.precision:.2f} | {t.recall:.2f} | {t.f1:.2f} | {t.support} |")
    lines += ["", f"Macro F1, small tags: {_fmt(report.macro_small)}  ",
              f"Macro F1, big tags: {_fmt(report.macro_big)}", ""]
    return "\n".join(lines)
