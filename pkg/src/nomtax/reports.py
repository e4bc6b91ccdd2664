"""Renderers for the pipeline's report files (CSV, markdown, JSON, NDJSON)."""

from __future__ import annotations

import csv
import io
import json

from .classes import ClassLabel
from .classifier import EvalReport
from .embeddings import text_key
from .records import DistributionStats, LexicalRecord, definition_embedding_text
from .taxonomy import (
    DescriptorScore,
    JointDistribution,
    gloss_embedding_text,
)
from .wordnet import TaxonomyGraph


def _csv_buffer() -> tuple[io.StringIO, csv.writer]:
    buf = io.StringIO()
    return buf, csv.writer(buf, lineterminator="\n")


def distribution_csv(stats: DistributionStats) -> str:
    buf, w = _csv_buffer()
    w.writerow(["subject_concord", "nominal_class", "count", "retained"])
    retained = set(stats.retained_concords)
    for label in sorted(stats.counts, key=lambda c: (-stats.counts[c], c.concord)):
        w.writerow(
            [
                label.concord,
                label.nominal_class,
                stats.counts[label],
                str(label.concord in retained).lower(),
            ]
        )
    return buf.getvalue()


def collect_texts(records: list[LexicalRecord], graph: TaxonomyGraph) -> list[tuple[str, str]]:
    """Unique (key, text) pairs needing embeddings, sorted by key.

    Texts are the lowercased record definitions plus the lowercased synset
    glosses; duplicates collapse by key.
    """
    by_key: dict[str, str] = {}
    for r in records:
        text = definition_embedding_text(r.definition)
        by_key.setdefault(text_key(text), text)
    for syn in graph.synsets.values():
        text = gloss_embedding_text(syn.gloss)
        by_key.setdefault(text_key(text), text)
    return sorted(by_key.items())


def texts_ndjson(pairs: list[tuple[str, str]]) -> str:
    lines = [
        json.dumps({"key": k, "text": t}, ensure_ascii=False, separators=(",", ":"))
        for k, t in pairs
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def cohesion_csv(d: JointDistribution, cohesion: dict[ClassLabel, float]) -> str:
    """Per-class cohesion, ordered by class mass (most populous first)."""
    buf, w = _csv_buffer()
    w.writerow(["subject_concord", "nominal_class", "cohesion_shannons"])
    order = sorted(
        range(len(d.classes)), key=lambda i: (-d.p_class[i], d.classes[i].concord)
    )
    for i in order:
        c = d.classes[i]
        w.writerow([c.concord, c.nominal_class, repr(cohesion[c])])
    return buf.getvalue()


def descriptors_csv(tables: dict[ClassLabel, list[DescriptorScore]]) -> str:
    buf, w = _csv_buffer()
    w.writerow(
        ["subject_concord", "rank", "descriptor", "wpmi", "scaled", "score", "bold", "shadowed"]
    )
    for c in sorted(tables):
        for rank, ds in enumerate(tables[c], 1):
            w.writerow(
                [
                    c.concord,
                    rank,
                    ds.display_name,
                    repr(ds.wpmi),
                    repr(ds.scaled),
                    f"{ds.scaled:.1f}",
                    str(ds.bold).lower(),
                    str(ds.shadowed).lower(),
                ]
            )
    return buf.getvalue()


def descriptors_markdown(tables: dict[ClassLabel, list[DescriptorScore]]) -> str:
    """One row per descriptor; scores to one decimal, bold ones starred."""
    lines = [
        "| Subject Concord | Rank | Descriptor | Score | Shadowed |",
        "| --- | --- | --- | --- | --- |",
    ]
    for c in sorted(tables):
        for rank, ds in enumerate(tables[c], 1):
            score = f"{ds.scaled:.1f}"
            if ds.bold:
                score = f"**{score}**"
            shadowed = "yes" if ds.shadowed else ""
            lines.append(
                f"| {c.concord} | {rank} | {ds.display_name} | {score} | {shadowed} |"
            )
    return "\n".join(lines) + "\n"


def run_summary_json(
    *,
    parameters: dict,
    record_count: int,
    matched_count: int,
    unmatched_count: int,
    cohesion: dict[ClassLabel, float],
    total_dep: float,
    warnings: list[str],
) -> str:
    summary = {
        "parameters": dict(sorted(parameters.items())),
        "records": record_count,
        "matched_records": matched_count,
        "unmatched_records": unmatched_count,
        "cohesion": {c.concord: cohesion[c] for c in sorted(cohesion)},
        "total_dependency_shannons": total_dep,
        "warnings": warnings,
    }
    return json.dumps(summary, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def confusion_csv(report: EvalReport) -> str:
    buf, w = _csv_buffer()
    w.writerow(["true\\predicted"] + [c.concord for c in report.classes])
    for i, c in enumerate(report.classes):
        row = [c.concord] + [repr(float(x)) for x in report.confusion[i]]
        w.writerow(row)
    return buf.getvalue()


def eval_markdown(report: EvalReport, baseline: EvalReport | None = None) -> str:
    """Mean ± half-width per metric, macro/micro first then per class."""

    def fmt(report: EvalReport, name: str, value: float) -> str:
        if name in report.ci95:
            lo, hi = report.ci95[name]
            return f"{100 * value:.1f} ± {100 * (hi - lo) / 2:.1f}"
        return f"{100 * value:.1f}"

    header = ["M", "µ"] + [c.concord for c in report.classes]
    values = [
        fmt(report, "macro_f1", report.macro_f1),
        fmt(report, "micro_f1", report.micro_f1),
    ] + [fmt(report, f"f1:{c.concord}", report.per_class_f1[c]) for c in report.classes]
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
        "| " + " | ".join(values) + " |",
    ]
    if baseline is not None:
        lines += [
            "",
            f"Probability-weighted random baseline: macro F1 "
            f"{100 * baseline.macro_f1:.1f} over {baseline.repetitions} trials "
            f"(analytic expectation {100.0 / len(baseline.classes):.1f}).",
        ]
    lines += ["", *(f"Convention: {c}" for c in report.conventions)]
    return "\n".join(lines) + "\n"
