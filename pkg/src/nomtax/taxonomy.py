"""Class-hypernym association: record matching, path weighting, wPMI scores.

Pipeline: records are matched to synsets by embedding similarity (at most 10,
score >= 0.5); each record's matched synsets contribute all their hypernymy
paths, and every hypernym is weighted by its occurrence count across those
paths divided by the record's total path count. Per-record weights are summed
into a class x hypernym mass table (hypernyms seen in fewer than 10 records
are dropped first), normalized into a joint distribution, and scored with

    wPMI(c, h) = p(c, h) * log2( p(c, h) / (p(c) * p(h)) )

Positive cells mark hypernyms that describe a class; their per-class sum is
the class's semantic cohesion, and the global sum is the total dependency
between classes and hypernyms, in shannons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classes import ClassLabel
from .embeddings import EmbeddingStore, SimilarityMatch, top_k_matches, text_key
from .kernels import accumulate_mass
from .records import LexicalRecord, definition_embedding_text
from .wordnet import SynsetId, TaxonomyGraph, hypernym_paths, is_hyponym_of


@dataclass(frozen=True)
class RecordMatches:
    record_id: int
    matches: tuple[SimilarityMatch, ...]  # descending score; may be empty


@dataclass(frozen=True)
class RecordHypernymWeights:
    record_id: int
    weights: dict[SynsetId, float]
    counts: dict[SynsetId, int]  # raw path-occurrence counts behind the weights
    total_paths: int


def gloss_embedding_text(gloss: str) -> str:
    return gloss.lower()


def match_records(
    records: list[LexicalRecord],
    store: EmbeddingStore,
    graph: TaxonomyGraph,
    k: int = 10,
    min_score: float = 0.5,
) -> list[RecordMatches]:
    """Top-k synset matches per record over the full Cartesian product.

    Pure delegation to the embedding store's `top_k_matches`; candidate ids
    are synset ids, queries are keyed by lowercased definitions.
    """
    queries = [
        (r.record_id, text_key(definition_embedding_text(r.definition))) for r in records
    ]
    candidates = [
        (sid, text_key(gloss_embedding_text(syn.gloss))) for sid, syn in graph.synsets.items()
    ]
    by_query = top_k_matches(queries, candidates, store, k=k, min_score=min_score)
    return [
        RecordMatches(record_id=r.record_id, matches=tuple(by_query[r.record_id]))
        for r in records
    ]


def hypernym_weights(
    matches: RecordMatches,
    graph: TaxonomyGraph,
    include_source: bool = True,
    _path_cache: dict | None = None,
) -> RecordHypernymWeights | None:
    """Pool the hypernymy paths of all matched synsets and weight their nodes.

    weight(h) = occurrences of h across pooled paths / total path count.
    With `include_source` False, matched synsets do not count themselves
    (path heads are skipped). Returns None for an unmatched record, which is
    then excluded downstream.
    """
    if not matches.matches:
        return None
    counts: dict[SynsetId, int] = {}
    total = 0
    for m in matches.matches:
        sid = m.candidate_id
        if _path_cache is not None and sid in _path_cache:
            paths = _path_cache[sid]
        else:
            paths = hypernym_paths(graph, sid)
            if _path_cache is not None:
                _path_cache[sid] = paths
        total += len(paths)
        for path in paths:
            for node in path if include_source else path[1:]:
                counts[node] = counts.get(node, 0) + 1
    weights = {h: n / total for h, n in counts.items()}
    return RecordHypernymWeights(
        record_id=matches.record_id, weights=weights, counts=counts, total_paths=total
    )


@dataclass
class JointDistribution:
    """p(class, hypernym) with marginals; entries >= 0, total mass 1."""

    classes: list[ClassLabel]
    hypernyms: list[SynsetId]
    p_joint: np.ndarray
    p_class: np.ndarray
    p_hyp: np.ndarray
    _class_row: dict = field(default_factory=dict, repr=False)
    _hyp_col: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._class_row = {c: i for i, c in enumerate(self.classes)}
        self._hyp_col = {h: j for j, h in enumerate(self.hypernyms)}

    def cell(self, c: ClassLabel, h: SynsetId) -> tuple[int, int]:
        return self._class_row[c], self._hyp_col[h]

    @classmethod
    def from_masses(
        cls, classes: list[ClassLabel], hypernyms: list[SynsetId], mass: np.ndarray
    ) -> "JointDistribution":
        mass = np.asarray(mass, dtype=np.float64)
        if mass.shape != (len(classes), len(hypernyms)):
            raise ValueError("mass matrix shape does not match class/hypernym lists")
        if np.any(mass < 0):
            raise ValueError("mass entries must be non-negative")
        total = mass.sum()
        if total <= 0:
            raise ValueError("total mass is zero; nothing to normalize")
        p = mass / total
        return cls(
            classes=list(classes),
            hypernyms=list(hypernyms),
            p_joint=p,
            p_class=p.sum(axis=1),
            p_hyp=p.sum(axis=0),
        )


def build_joint(
    all_weights: list[RecordHypernymWeights],
    labels: dict[int, ClassLabel],
    min_global_occurrences: int = 10,
    occurrence_mode: str = "records",
) -> JointDistribution:
    """Accumulate per-record weights into a normalized joint distribution.

    Hypernyms below the global-occurrence floor are dropped *before*
    normalization, so the retained cells form a proper distribution.
    `occurrence_mode` picks what the floor counts: contributing records
    (default) or raw path hits.
    """
    if occurrence_mode not in ("records", "path-hits"):
        raise ValueError(f"unknown occurrence_mode {occurrence_mode!r}")
    for rw in all_weights:
        if rw.record_id not in labels:
            raise ValueError(f"record {rw.record_id} has no class label")

    occurrences: dict[SynsetId, int] = {}
    for rw in all_weights:
        for h, n in rw.counts.items():
            occurrences[h] = occurrences.get(h, 0) + (1 if occurrence_mode == "records" else n)
    kept_hyps = sorted(h for h, n in occurrences.items() if n >= min_global_occurrences)
    if not kept_hyps:
        raise ValueError(
            f"no hypernym reaches {min_global_occurrences} global occurrences; nothing to model"
        )

    classes = sorted({labels[rw.record_id] for rw in all_weights})
    class_row = {c: i for i, c in enumerate(classes)}
    hyp_col = {h: j for j, h in enumerate(kept_hyps)}

    # deterministic accumulation order: records sorted by id, hypernyms by id
    rows, cols, vals = [], [], []
    for rw in sorted(all_weights, key=lambda rw: rw.record_id):
        row = class_row[labels[rw.record_id]]
        for h in sorted(rw.weights):
            col = hyp_col.get(h)
            if col is not None:
                rows.append(row)
                cols.append(col)
                vals.append(rw.weights[h])
    mass = accumulate_mass(
        np.asarray(rows), np.asarray(cols), np.asarray(vals), (len(classes), len(kept_hyps))
    )
    return JointDistribution.from_masses(classes, kept_hyps, mass)


def pmi(d: JointDistribution, c: ClassLabel, h: SynsetId) -> float:
    """log2( p(c,h) / (p(c) p(h)) ); -inf when the joint cell is empty."""
    i, j = d.cell(c, h)
    pc, ph = d.p_class[i], d.p_hyp[j]
    if pc <= 0 or ph <= 0:
        raise ValueError(f"pmi undefined: zero marginal for ({c.concord}, {h})")
    pj = d.p_joint[i, j]
    if pj == 0.0:
        return float("-inf")
    return math.log2(pj / (pc * ph))


def wpmi(d: JointDistribution, c: ClassLabel, h: SynsetId) -> float:
    """p(c,h) * PMI(c,h), with the x*log(x) -> 0 convention at zero mass."""
    i, j = d.cell(c, h)
    if d.p_joint[i, j] == 0.0:
        return 0.0
    return d.p_joint[i, j] * pmi(d, c, h)


def _wpmi_matrix(d: JointDistribution) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = d.p_joint / np.outer(d.p_class, d.p_hyp)
        w = d.p_joint * np.log2(ratio)
    w[d.p_joint == 0.0] = 0.0
    return w


def class_cohesion(d: JointDistribution) -> dict[ClassLabel, float]:
    """Per class: sum of positive wPMI over hypernyms (semantic cohesion)."""
    w = _wpmi_matrix(d)
    pos = np.where(w > 0.0, w, 0.0).sum(axis=1)
    return {c: float(pos[i]) for i, c in enumerate(d.classes)}


def total_dependency(d: JointDistribution) -> float:
    """Sum of positive wPMI over all cells, in shannons."""
    w = _wpmi_matrix(d)
    return float(np.where(w > 0.0, w, 0.0).sum())


@dataclass(frozen=True)
class DescriptorScore:
    class_label: ClassLabel
    hypernym: SynsetId
    display_name: str
    wpmi: float
    scaled: float  # 100 * wpmi / p(class)
    bold: bool
    shadowed: bool


def descriptor_table(
    d: JointDistribution,
    graph: TaxonomyGraph,
    top_n: int = 20,
    bold_threshold: float = 1.0,
) -> dict[ClassLabel, list[DescriptorScore]]:
    """Ranked positive-wPMI descriptors per class.

    Scores are scaled by 100/p(class) for cross-class comparison; `bold`
    compares the unrounded scaled score against the threshold; `shadowed`
    marks descriptors that are hyponyms of a strictly higher-scoring
    descriptor of the same class.
    """
    w = _wpmi_matrix(d)
    tables: dict[ClassLabel, list[DescriptorScore]] = {}
    for i, c in enumerate(d.classes):
        entries = []
        for j, h in enumerate(d.hypernyms):
            if w[i, j] <= 0.0:
                continue
            scaled = 100.0 * w[i, j] / d.p_class[i]
            entries.append((h, w[i, j], scaled))
        entries.sort(key=lambda e: (-e[2], graph.get(e[0]).display_name))
        scores = [
            DescriptorScore(
                class_label=c,
                hypernym=h,
                display_name=graph.get(h).display_name,
                wpmi=wv,
                scaled=scaled,
                bold=scaled > bold_threshold,
                shadowed=any(
                    other_scaled > scaled and is_hyponym_of(graph, h, other_h)
                    for other_h, _, other_scaled in entries
                ),
            )
            for h, wv, scaled in entries
        ]
        tables[c] = scores[:top_n]
    return tables
