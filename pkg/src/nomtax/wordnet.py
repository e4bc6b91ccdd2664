"""WordNet 3.0 noun database parsing and hypernymy queries.

Reads the flat `data.noun` / `index.noun` files into an immutable taxonomy
graph. Both plain hypernym (`@`) and instance hypernym (`@i`) pointers
become edges; without the latter, instances (e.g. place names) would turn
into spurious roots. Glosses keep only the definition text before the first
quoted example. Display names follow the usual ``lemma.pos.NN`` convention,
with the sense number taken from the lemma's offset order in `index.noun`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

_GLOSS_EXAMPLE_RE = re.compile(r';\s*"')


@dataclass(frozen=True, order=True)
class SynsetId:
    offset: int
    pos: str = "n"

    def __str__(self) -> str:
        return f"{self.pos}{self.offset:08d}"


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    lemmas: tuple[str, ...]
    gloss: str
    hypernyms: tuple[SynsetId, ...]  # in file pointer order
    display_name: str


@dataclass
class TaxonomyGraph:
    """Noun synsets with hypernym edges; acyclic, validated on build."""

    synsets: dict[SynsetId, Synset]
    roots: frozenset[SynsetId] = field(init=False)

    def __post_init__(self):
        for syn in self.synsets.values():
            for h in syn.hypernyms:
                if h not in self.synsets:
                    raise ValueError(f"dangling hypernym pointer {h} from {syn.id}")
        self._check_acyclic()
        self.roots = frozenset(s.id for s in self.synsets.values() if not s.hypernyms)

    def _check_acyclic(self):
        # Kahn's algorithm over hypernym edges
        out_deg = {sid: len(syn.hypernyms) for sid, syn in self.synsets.items()}
        incoming: dict[SynsetId, list[SynsetId]] = {sid: [] for sid in self.synsets}
        for sid, syn in self.synsets.items():
            for h in syn.hypernyms:
                incoming[h].append(sid)
        queue = [sid for sid, d in out_deg.items() if d == 0]
        seen = 0
        while queue:
            node = queue.pop()
            seen += 1
            for child in incoming[node]:
                out_deg[child] -= 1
                if out_deg[child] == 0:
                    queue.append(child)
        if seen != len(self.synsets):
            raise ValueError("hypernym relation contains a cycle")

    def __contains__(self, sid: SynsetId) -> bool:
        return sid in self.synsets

    def __len__(self) -> int:
        return len(self.synsets)

    def get(self, sid: SynsetId) -> Synset:
        if sid not in self.synsets:
            raise KeyError(f"unknown synset {sid}")
        return self.synsets[sid]

    def by_display_name(self, name: str) -> Synset:
        for syn in self.synsets.values():
            if syn.display_name == name:
                return syn
        raise KeyError(f"no synset named {name}")


def strip_gloss_examples(gloss: str) -> str:
    """Definition text before the first `; "`-introduced example."""
    return _GLOSS_EXAMPLE_RE.split(gloss, 1)[0].strip()


def _parse_data_line(line: str, lineno: int) -> tuple[SynsetId, tuple[str, ...], tuple[SynsetId, ...], str]:
    try:
        fields_part, gloss = line.split("|", 1)
        tokens = fields_part.split()
        offset = int(tokens[0])
        pos = tokens[2]
        w_cnt = int(tokens[3], 16)
        lemmas = tuple(tokens[4 + 2 * i] for i in range(w_cnt))
        p_base = 4 + 2 * w_cnt
        p_cnt = int(tokens[p_base])
        hypernyms = []
        for i in range(p_cnt):
            sym = tokens[p_base + 1 + 4 * i]
            tgt_offset = int(tokens[p_base + 2 + 4 * i])
            tgt_pos = tokens[p_base + 3 + 4 * i]
            if sym in ("@", "@i") and tgt_pos == "n":
                hypernyms.append(SynsetId(tgt_offset, "n"))
        if pos != "n":
            raise ValueError(f"expected noun record, got part of speech {pos!r}")
        if not lemmas:
            raise ValueError("record carries no words")
    except (IndexError, ValueError) as exc:
        raise ValueError(f"data.noun:{lineno}: malformed record: {exc}") from exc
    return SynsetId(offset, "n"), lemmas, tuple(hypernyms), strip_gloss_examples(gloss)


def _parse_index(path: Path) -> dict[str, list[int]]:
    senses: dict[str, list[int]] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line or line.startswith(" "):
            continue
        tokens = line.split()
        try:
            lemma = tokens[0]
            p_cnt = int(tokens[3])
            # offsets follow: sense_cnt tagsense_cnt after the pointer symbols
            offsets = [int(t) for t in tokens[6 + p_cnt :]]
            if not offsets:
                raise ValueError("no synset offsets")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"index.noun:{lineno}: malformed entry: {exc}") from exc
        senses[lemma] = offsets
    return senses


def parse_wordnet(directory: str | Path) -> TaxonomyGraph:
    """Build the taxonomy graph from `data.noun` + `index.noun` in `directory`.

    Malformed lines and dangling pointers are hard errors with positions.
    """
    directory = Path(directory)
    data_path = directory / "data.noun"
    index_path = directory / "index.noun"
    for p in (data_path, index_path):
        if not p.exists():
            raise FileNotFoundError(f"missing WordNet database file {p}")

    senses = _parse_index(index_path)

    parsed: dict[SynsetId, tuple[tuple[str, ...], tuple[SynsetId, ...], str]] = {}
    for lineno, line in enumerate(data_path.read_text(encoding="utf-8").splitlines(), 1):
        if not line or line.startswith(" "):
            continue  # license header
        sid, lemmas, hypernyms, gloss = _parse_data_line(line, lineno)
        parsed[sid] = (lemmas, hypernyms, gloss)

    synsets: dict[SynsetId, Synset] = {}
    for sid, (lemmas, hypernyms, gloss) in parsed.items():
        head = lemmas[0].lower()
        offsets = senses.get(head)
        if offsets is None or sid.offset not in offsets:
            raise ValueError(f"synset {sid} ({head}) is missing from index.noun")
        sense_no = offsets.index(sid.offset) + 1
        synsets[sid] = Synset(
            id=sid,
            lemmas=lemmas,
            gloss=gloss,
            hypernyms=hypernyms,
            display_name=f"{head}.n.{sense_no:02d}",
        )
    return TaxonomyGraph(synsets)


def hypernym_paths(graph: TaxonomyGraph, s: SynsetId) -> list[tuple[SynsetId, ...]]:
    """All source-to-root paths of `s`, depth-first in edge file order.

    The source synset is the first node of every path (a synset is its own
    weakest generalization); the last node is always a root.
    """
    syn = graph.get(s)
    if not syn.hypernyms:
        return [(s,)]
    paths = []
    for h in syn.hypernyms:
        for tail in hypernym_paths(graph, h):
            paths.append((s,) + tail)
    return paths


def count_hypernym_paths(graph: TaxonomyGraph) -> dict[SynsetId, int]:
    """Path counts for every synset via N(s) = 1 if root else sum N(parent)."""
    counts: dict[SynsetId, int] = {}

    def count(sid: SynsetId) -> int:
        if sid in counts:
            return counts[sid]
        syn = graph.get(sid)
        n = 1 if not syn.hypernyms else sum(count(h) for h in syn.hypernyms)
        counts[sid] = n
        return n

    for sid in graph.synsets:
        count(sid)
    return counts


def is_hyponym_of(graph: TaxonomyGraph, a: SynsetId, b: SynsetId) -> bool:
    """True iff `b` is reachable from `a` via one or more hypernym edges.

    Strict: is_hyponym_of(x, x) is False.
    """
    graph.get(a)
    graph.get(b)
    stack = list(graph.get(a).hypernyms)
    seen: set[SynsetId] = set()
    while stack:
        node = stack.pop()
        if node == b:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(graph.get(node).hypernyms)
    return False


def build_graph(
    edges: dict[SynsetId, Iterable[SynsetId]],
    lemmas: dict[SynsetId, str] | None = None,
    glosses: dict[SynsetId, str] | None = None,
) -> TaxonomyGraph:
    """Construct a graph directly (tests, synthetic DAGs)."""
    synsets = {}
    for sid, hyps in edges.items():
        lemma = (lemmas or {}).get(sid, f"node_{sid.offset}")
        synsets[sid] = Synset(
            id=sid,
            lemmas=(lemma,),
            gloss=(glosses or {}).get(sid, ""),
            hypernyms=tuple(hyps),
            display_name=f"{lemma}.n.01",
        )
    return TaxonomyGraph(synsets)
