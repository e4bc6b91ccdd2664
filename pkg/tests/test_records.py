"""Dictionary parsing, corrections, class filtering."""

import contextlib
import json

import pytest
from hypothesis import given, strategies as st

from nomtax.classes import NAMED_CONCORDS, make_class_label
from nomtax.records import (
    CorrectionRule,
    CorrectionTable,
    LexicalRecord,
    RawEntry,
    assemble_records,
    class_distribution,
    filter_top_classes,
    parse_entry_page,
    read_records_ndjson,
    record_to_json,
    write_records_ndjson,
)

from conftest import page

EMPTY = CorrectionTable()


@contextlib.contextmanager
def _no_warning():
    yield


def _mk_records(spec: dict[str, int]) -> list[LexicalRecord]:
    """spec: concord -> count; entries/definitions invented per index."""
    records = []
    for concord, count in spec.items():
        for i in range(count):
            records.append(
                LexicalRecord(
                    record_id=len(records),
                    entry=f"w{concord}{i}",
                    definition=f"meaning {i} of {concord}",
                    class_label=make_class_label(concord),
                )
            )
    return records


class TestParseEntryPage:
    def test_yahe_splits_to_two_records(self):
        records, warnings = parse_entry_page(page("p01_yahe.html"), EMPTY)
        assert [r.triple() for r in records] == [
            ("yahe", "friend, comrade", "a-/wa-"),
            ("yahe", "commoner", "a-/wa-"),
        ]
        assert warnings == []

    def test_single_meaning_single_concord(self):
        records, _ = parse_entry_page(page("p03_kitabu_maji.html"), EMPTY)
        kitabu = [r for r in records if r.entry == "kitabu"]
        assert len(kitabu) == 1
        assert kitabu[0].definition == "book"
        assert kitabu[0].class_label.concord == "ki-/vi-"

    def test_unknown_concord_kept_with_warning(self):
        records, warnings = parse_entry_page(page("p06_gumzo.html"), EMPTY)
        assert len(records) == 1
        assert records[0].class_label.concord == "xx-"
        assert not records[0].class_label.is_named
        assert records[0].class_label.nominal_class == "?"
        assert any(w.kind == "unknown-concord" and "xx-" in w.message for w in warnings)

    def test_metadata_stripped_from_definition(self):
        records, _ = parse_entry_page(page("p02_mti.html"), EMPTY)
        assert records[0].definition == "tree"

    def test_multi_concord_meaning_yields_record_per_concord(self):
        records, _ = parse_entry_page(page("p05_rafiki.html"), EMPTY)
        assert [r.triple() for r in records] == [
            ("rafiki", "friend", "a-/wa-"),
            ("rafiki", "friend", "i-/zi-"),
        ]

    def test_corrections_apply_before_splitting(self, corrections):
        records, _ = parse_entry_page(page("p08_mttu.html"), corrections)
        assert records[0].triple() == ("mtu", "person, human being", "a-/wa-")

    def test_empty_definition_warned_not_silent(self):
        records, warnings = parse_entry_page(page("p07_tupu.html"), EMPTY)
        assert records == []
        assert [w.kind for w in warnings] == ["empty-definition"]
        assert warnings[0].dropped == 1

    def test_unparseable_page_names_source(self):
        records, warnings = parse_entry_page(page("p10_broken.html"), EMPTY)
        assert records == []
        assert warnings[0].kind == "unparseable-page"
        assert warnings[0].source == "p10_broken.html"

    def test_empty_body_rejected(self):
        with pytest.raises(ValueError):
            parse_entry_page(RawEntry(source_url="x", body=""), EMPTY)

    def test_parse_is_deterministic(self, corrections):
        raw = page("p04_ua.html")
        first = parse_entry_page(raw, corrections)
        second = parse_entry_page(raw, corrections)
        assert first == second

    def test_every_concord_named_or_other(self, fixture_records):
        records, _ = fixture_records
        for r in records:
            assert r.class_label.is_named or r.class_label.nominal_class == "?"


class TestAssembly:
    def test_accounting_covers_every_meaning_pair(self, fixture_records):
        # hand count over tests/fixtures/pages: 13 (meaning, marker) pairs
        records, warnings = fixture_records
        assert len(records) + sum(w.dropped for w in warnings) == 13

    def test_homographs_split_never_merge(self, fixture_pages, corrections):
        n_entries = sum(r.body.count('class="entry"') for r in fixture_pages)
        records, warnings = fixture_records_from(fixture_pages, corrections)
        assert len(records) + sum(w.dropped for w in warnings) >= n_entries

    def test_duplicate_triples_removed(self, fixture_records):
        records, warnings = fixture_records
        assert len({r.triple() for r in records}) == len(records)
        assert any(w.kind == "duplicate-record" for w in warnings)

    def test_record_ids_follow_sorted_triples(self, fixture_records):
        records, _ = fixture_records
        assert [r.record_id for r in records] == list(range(len(records)))
        assert records == sorted(records, key=LexicalRecord.triple)


def fixture_records_from(pages, corrections):
    return assemble_records(pages, corrections)


class TestFilterTopClasses:
    def test_hand_counted_5_3_2(self):
        records = _mk_records({"a-/wa-": 5, "ki-/vi-": 3, "u-": 2})
        kept, stats = filter_top_classes(records, 2)
        assert len(kept) == 8
        assert stats.retained_fraction == pytest.approx(0.8)
        assert stats.retained_concords == ("a-/wa-", "ki-/vi-")

    def test_k_at_least_distinct_is_identity(self):
        records = _mk_records({"a-/wa-": 2, "u-": 1})
        with pytest.warns(UserWarning):
            kept, _ = filter_top_classes(records, 9)
        assert kept == records

    def test_idempotent(self):
        records = _mk_records({"a-/wa-": 5, "ki-/vi-": 3, "u-": 2, "i-": 1})
        once, _ = filter_top_classes(records, 2)
        twice, _ = filter_top_classes(once, 2)
        assert twice == once

    @given(
        st.dictionaries(st.sampled_from(NAMED_CONCORDS), st.integers(1, 9), min_size=1),
        st.integers(1, 9),
    )
    def test_idempotence_and_fraction_bounds_hold_generally(self, spec, k):
        records = _mk_records(spec)
        with pytest.warns(UserWarning) if len(spec) < k else _no_warning():
            once, stats = filter_top_classes(records, k)
            twice, _ = filter_top_classes(once, k)
        assert twice == once
        assert 0.0 < stats.retained_fraction <= 1.0
        assert stats.kept == len(once)

    def test_ties_break_lexicographically(self):
        records = _mk_records({"ya-": 1, "i-": 1, "u-": 2})
        kept, stats = filter_top_classes(records, 2)
        assert stats.retained_concords == ("u-", "i-")

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            filter_top_classes([], 0)


class TestClassDistribution:
    def test_empty(self):
        assert class_distribution([]) == {}

    def test_hand_counted(self):
        records = _mk_records({"a-/wa-": 5, "ki-/vi-": 3, "u-": 2})
        dist = class_distribution(records)
        assert dist == {
            make_class_label("a-/wa-"): 5,
            make_class_label("ki-/vi-"): 3,
            make_class_label("u-"): 2,
        }

    @given(
        st.lists(
            st.sampled_from(NAMED_CONCORDS).map(lambda c: (c, "m")), max_size=40
        )
    )
    def test_counts_sum_to_record_count(self, pairs):
        records = [
            LexicalRecord(i, f"e{i}", d, make_class_label(c))
            for i, (c, d) in enumerate(pairs)
        ]
        assert sum(class_distribution(records).values()) == len(records)


class TestNdjson:
    def test_field_order_matches_published_format(self):
        rec = LexicalRecord(7, "yahe", "commoner", make_class_label("a-/wa-"))
        line = record_to_json(rec)
        assert line == (
            '{"entry": "yahe", "definition": "commoner", '
            '"subject_concord": "a-/wa-", "record_id": 7}'
        )
        assert list(json.loads(line)) == ["entry", "definition", "subject_concord", "record_id"]

    def test_round_trip(self, tmp_path, fixture_records):
        records, _ = fixture_records
        path = tmp_path / "records.ndjson"
        write_records_ndjson(records, path)
        assert read_records_ndjson(path) == records


class TestCorrections:
    def test_rules_apply_in_order(self):
        table = CorrectionTable(
            [
                CorrectionRule("definition", "aa", "bb"),
                CorrectionRule("definition", "bb", "cc"),
            ]
        )
        assert table.apply("definition", "aa") == "cc"

    def test_concord_scope_is_whole_token(self):
        table = CorrectionTable([CorrectionRule("concord", "a/wa-", "a-/wa-")])
        assert table.apply("concord", "a/wa-") == "a-/wa-"
        assert table.apply("concord", "xa/wa-") == "xa/wa-"

    def test_unknown_scope_rejected(self):
        with pytest.raises(ValueError):
            CorrectionTable([CorrectionRule("page", "x", "y")])

    def test_load_rejects_malformed_file(self, tmp_path):
        bad = tmp_path / "corr.tsv"
        bad.write_text("definition only-two-fields\n")
        with pytest.raises(ValueError):
            CorrectionTable.load(bad)
