"""Dictionary entry pages -> lexical records.

A cached page holds one or more homograph entries in the dictionary's fixed
markup:

    <div class="entry">
      <span class="headword">yahe</span>
      <div class="sense-group">
        <span class="concord">a-/wa-</span>
        <ol class="meanings">
          <li>friend, comrade</li>
          <li>commoner</li>
        </ol>
      </div>
    </div>

A sense group's concord cell may list several markers separated by commas;
each (meaning, marker) pair becomes one record. Inside a meaning,
``<i>...</i>`` spans (usage examples, apothegms, editorial comments) and
``[...]`` bracketed notes are linguistic metadata and are stripped. A single
trailing period is dropped. Definitions are NFC-normalized with collapsed
whitespace and kept in their original case; lowercasing happens only when
deriving embedding text.

Nothing is dropped silently: every (meaning, marker) pair either yields a
record or is accounted for by a ParseWarning's ``dropped`` count.
"""

from __future__ import annotations

import json
import re
import unicodedata
import warnings as _warnings
from collections import Counter
from dataclasses import dataclass, replace
from html.parser import HTMLParser
from pathlib import Path
from typing import Iterable

from .classes import DEFAULT_YA_NOMINAL, ClassLabel, make_class_label
from .textkeys import collapse_ws

_BRACKET_RE = re.compile(r"\[[^\]]*\]")


@dataclass(frozen=True)
class RawEntry:
    """A fetched (or fixture) page: source URL, body text, fetch time."""

    source_url: str
    body: str
    fetched_at: float = 0.0


@dataclass(frozen=True)
class LexicalRecord:
    record_id: int
    entry: str
    definition: str
    class_label: ClassLabel

    def triple(self) -> tuple[str, str, str]:
        return (self.entry, self.definition, self.class_label.concord)


@dataclass(frozen=True)
class CorrectionRule:
    scope: str  # entry | definition | concord
    pattern: str
    replacement: str


class CorrectionTable:
    """Ordered, deterministic text fixes applied before record splitting.

    ``entry`` and ``definition`` rules are literal substring replacements;
    ``concord`` rules replace a whole marker token when it matches exactly.
    """

    SCOPES = ("entry", "definition", "concord")

    def __init__(self, rules: Iterable[CorrectionRule] = ()):
        self.rules = list(rules)
        for rule in self.rules:
            if rule.scope not in self.SCOPES:
                raise ValueError(f"unknown correction scope {rule.scope!r}")

    @classmethod
    def load(cls, path: str | Path) -> "CorrectionTable":
        """Load rules from a TSV file: scope<TAB>pattern<TAB>replacement."""
        rules = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
            rules.append(CorrectionRule(scope=parts[0], pattern=parts[1], replacement=parts[2]))
        return cls(rules)

    def apply(self, scope: str, text: str) -> str:
        for rule in self.rules:
            if rule.scope != scope:
                continue
            if scope == "concord":
                if text == rule.pattern:
                    text = rule.replacement
            else:
                text = text.replace(rule.pattern, rule.replacement)
        return text


@dataclass(frozen=True)
class ParseWarning:
    source: str
    entry: str | None
    kind: str
    message: str
    dropped: int = 0  # (meaning, marker) pairs lost to this warning


@dataclass(frozen=True)
class DistributionStats:
    counts: dict
    retained_concords: tuple[str, ...]
    retained_fraction: float
    total: int
    kept: int


class _PageParser(HTMLParser):
    """Collects the raw entry/sense-group/meaning structure of one page."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.entries: list[dict] = []
        self._entry: dict | None = None
        self._group: dict | None = None
        self._buf: list[str] | None = None
        self._buf_role: str | None = None
        self._skip_depth = 0

    @staticmethod
    def _classes(attrs) -> set[str]:
        return set((dict(attrs).get("class") or "").split())

    def handle_starttag(self, tag, attrs):
        cls = self._classes(attrs)
        if tag == "i" and self._buf is not None:
            self._skip_depth += 1
        elif tag == "div" and "entry" in cls:
            self._entry = {"headword": None, "groups": []}
            self.entries.append(self._entry)
        elif tag == "div" and "sense-group" in cls and self._entry is not None:
            self._group = {"concord": None, "meanings": []}
            self._entry["groups"].append(self._group)
        elif tag == "span" and "headword" in cls and self._entry is not None:
            self._buf, self._buf_role = [], "headword"
        elif tag == "span" and "concord" in cls and self._group is not None:
            self._buf, self._buf_role = [], "concord"
        elif tag == "li" and self._group is not None:
            self._buf, self._buf_role = [], "meaning"

    def handle_endtag(self, tag):
        if tag == "i" and self._skip_depth:
            self._skip_depth -= 1
            return
        if self._buf is None:
            return
        if tag == "span" and self._buf_role == "headword":
            self._entry["headword"] = "".join(self._buf)
            self._buf = self._buf_role = None
        elif tag == "span" and self._buf_role == "concord":
            self._group["concord"] = "".join(self._buf)
            self._buf = self._buf_role = None
        elif tag == "li" and self._buf_role == "meaning":
            self._group["meanings"].append("".join(self._buf))
            self._buf = self._buf_role = None

    def handle_data(self, data):
        if self._buf is not None and not self._skip_depth:
            self._buf.append(data)


def _clean_definition(text: str) -> str:
    text = _BRACKET_RE.sub(" ", text)
    text = collapse_ws(unicodedata.normalize("NFC", text))
    if text.endswith("."):
        text = text[:-1].rstrip()
    return text


def definition_embedding_text(definition: str) -> str:
    """The text actually embedded for a record: the definition, lowercased."""
    return definition.lower()


def parse_entry_page(
    raw: RawEntry,
    corrections: CorrectionTable,
    ya_nominal: str = DEFAULT_YA_NOMINAL,
) -> tuple[list[LexicalRecord], list[ParseWarning]]:
    """Parse one cached page into records (record_id unassigned, -1).

    Deterministic: identical (body, corrections) always yields identical
    records in identical order.
    """
    if not raw.body:
        raise ValueError(f"{raw.source_url}: empty page body")

    parser = _PageParser()
    parser.feed(raw.body)
    parser.close()

    records: list[LexicalRecord] = []
    warns: list[ParseWarning] = []

    def warn(entry, kind, message, dropped=0):
        warns.append(ParseWarning(raw.source_url, entry, kind, message, dropped))

    if not parser.entries:
        warn(None, "unparseable-page", "no dictionary entries found on page")
        return records, warns

    for ent in parser.entries:
        headword = ent["headword"]
        n_pairs = sum(
            len(g["meanings"]) * max(1, len((g["concord"] or "").split(",")))
            for g in ent["groups"]
        )
        if not headword or not collapse_ws(headword):
            warn(None, "missing-headword", "entry without a headword", dropped=n_pairs)
            continue
        headword = collapse_ws(unicodedata.normalize("NFC", corrections.apply("entry", headword)))
        if not ent["groups"]:
            warn(headword, "no-sense-groups", f"entry {headword!r} has no sense groups")
            continue
        for group in ent["groups"]:
            concord_cell = group["concord"]
            if concord_cell is None or not collapse_ws(concord_cell):
                warn(
                    headword,
                    "missing-concord",
                    f"sense group of {headword!r} lacks a concord marker",
                    dropped=len(group["meanings"]),
                )
                continue
            markers = [
                corrections.apply("concord", collapse_ws(tok))
                for tok in concord_cell.split(",")
                if collapse_ws(tok)
            ]
            for meaning_raw in group["meanings"]:
                definition = _clean_definition(corrections.apply("definition", meaning_raw))
                if not definition:
                    warn(
                        headword,
                        "empty-definition",
                        f"meaning of {headword!r} is empty after metadata stripping",
                        dropped=len(markers),
                    )
                    continue
                for marker in markers:
                    label = make_class_label(marker, ya_nominal)
                    if not label.is_named:
                        warn(
                            headword,
                            "unknown-concord",
                            f"{headword!r} carries unrecognized concord marker {marker!r}",
                        )
                    records.append(
                        LexicalRecord(
                            record_id=-1, entry=headword, definition=definition, class_label=label
                        )
                    )
    return records, warns


def assemble_records(
    pages: Iterable[RawEntry],
    corrections: CorrectionTable,
    ya_nominal: str = DEFAULT_YA_NOMINAL,
) -> tuple[list[LexicalRecord], list[ParseWarning]]:
    """Parse a whole corpus, deduplicate triples, assign stable record ids.

    Ids are positions in the sorted (entry, definition, concord) order, so
    reruns over identical inputs are byte-identical.
    """
    pooled: list[LexicalRecord] = []
    warns: list[ParseWarning] = []
    for raw in sorted(pages, key=lambda r: r.source_url):
        recs, w = parse_entry_page(raw, corrections, ya_nominal)
        pooled.extend(recs)
        warns.extend(w)

    seen: set[tuple[str, str, str]] = set()
    unique: list[LexicalRecord] = []
    for rec in sorted(pooled, key=LexicalRecord.triple):
        t = rec.triple()
        if t in seen:
            warns.append(
                ParseWarning(
                    source="<corpus>",
                    entry=rec.entry,
                    kind="duplicate-record",
                    message=f"duplicate triple {t!r} removed",
                    dropped=1,
                )
            )
            continue
        seen.add(t)
        unique.append(replace(rec, record_id=len(unique)))
    return unique, warns


def class_distribution(records: Iterable[LexicalRecord]) -> dict[ClassLabel, int]:
    """Occurrence count per class label; counts sum to len(records)."""
    return dict(Counter(r.class_label for r in records))


def filter_top_classes(
    records: list[LexicalRecord], k: int
) -> tuple[list[LexicalRecord], DistributionStats]:
    """Keep records of the k most frequent concords (ties: lexicographic)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = Counter(r.class_label.concord for r in records)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    if len(ranked) < k:
        _warnings.warn(
            f"asked for top {k} classes but only {len(ranked)} are present; keeping all",
            stacklevel=2,
        )
    retained = tuple(c for c, _ in ranked[:k])
    retained_set = set(retained)
    kept = [r for r in records if r.class_label.concord in retained_set]
    stats = DistributionStats(
        counts={make_class_label(c): n for c, n in ranked},
        retained_concords=retained,
        retained_fraction=(len(kept) / len(records)) if records else 0.0,
        total=len(records),
        kept=len(kept),
    )
    return kept, stats


# --- NDJSON interfaces ---------------------------------------------------

def record_to_json(rec: LexicalRecord) -> str:
    obj = {
        "entry": rec.entry,
        "definition": rec.definition,
        "subject_concord": rec.class_label.concord,
        "record_id": rec.record_id,
    }
    return json.dumps(obj, ensure_ascii=False)


def write_records_ndjson(records: Iterable[LexicalRecord], path: str | Path) -> None:
    lines = [record_to_json(r) for r in records]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_records_ndjson(
    path: str | Path, ya_nominal: str = DEFAULT_YA_NOMINAL
) -> list[LexicalRecord]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        records.append(
            LexicalRecord(
                record_id=int(obj["record_id"]),
                entry=obj["entry"],
                definition=obj["definition"],
                class_label=make_class_label(obj["subject_concord"], ya_nominal),
            )
        )
    return records


def warning_to_json(w: ParseWarning) -> str:
    return json.dumps(
        {
            "source": w.source,
            "entry": w.entry,
            "kind": w.kind,
            "message": w.message,
            "dropped": w.dropped,
        },
        ensure_ascii=False,
    )
