"""CLI contract: subcommands, exit codes, manifests, determinism."""

import hashlib
import json
import shutil
from pathlib import Path

import pytest

from nomtax.cli import main
from nomtax.fixtures import store_from_texts_file

from conftest import FIXTURES


def write_config(tmp_path: Path, **extra) -> Path:
    values = {
        "paths.cache_dir": FIXTURES / "pages",
        "paths.wordnet_dir": FIXTURES / "wordnet",
        "paths.embedding_store": tmp_path / "store.jsonl",
        "paths.out_dir": tmp_path / "out",
        "ingest.offline": "true",
        "ingest.top_classes": 5,
        "match.min_score": 0.2,
        "model.min_global_occurrences": 1,
        "classifier.epochs": 40,
        "classifier.baseline_trials": 25,
    }
    values.update(extra)
    conf = tmp_path / "pipeline.conf"
    conf.write_text("".join(f"{k} = {v}\n" for k, v in values.items()))
    return conf


@pytest.fixture
def prepared(tmp_path):
    """Config + records + texts + fixture store, ready for model/eval."""
    conf = write_config(tmp_path)
    assert main(["--config", str(conf), "ingest"]) == 0
    assert main(["--config", str(conf), "texts"]) == 0
    store_from_texts_file(tmp_path / "out" / "texts.ndjson", tmp_path / "store.jsonl", dim=16)
    return conf, tmp_path


class TestIngest:
    def test_fixture_corpus_counts(self, tmp_path):
        conf = write_config(tmp_path)
        assert main(["--config", str(conf), "ingest"]) == 0
        lines = (tmp_path / "out" / "records.ndjson").read_text().splitlines()
        assert len(lines) == 9  # top-5 classes of the 11 unique fixture records
        dist = (tmp_path / "out" / "class_distribution.csv").read_text().splitlines()
        assert dist[0] == "subject_concord,nominal_class,count,retained"
        assert "a-/wa-,1/2,4,true" in dist[1]
        assert any(line.startswith("xx-,?,1,false") for line in dist)

    def test_offline_with_empty_cache_exits_2(self, tmp_path, capsys):
        empty = tmp_path / "empty"
        empty.mkdir()
        conf = write_config(tmp_path, **{"paths.cache_dir": empty})
        assert main(["--config", str(conf), "ingest"]) == 2
        assert "no cached pages" in capsys.readouterr().err

    def test_flag_overrides_config(self, tmp_path):
        conf = write_config(tmp_path)
        assert main(["--config", str(conf), "ingest", "--top-k", "2"]) == 0
        lines = (tmp_path / "out" / "records.ndjson").read_text().splitlines()
        assert len(lines) == 6  # a-/wa- (4) + u-/i- (2)


class TestTexts:
    def test_unique_texts_with_verifiable_keys(self, prepared):
        conf, tmp_path = prepared
        lines = (tmp_path / "out" / "texts.ndjson").read_text().splitlines()
        # 8 unique lowercased definitions (rafiki's two records share one) + 12 glosses
        assert len(lines) == 20
        keys = []
        for line in lines:
            obj = json.loads(line)
            recomputed = hashlib.sha256(obj["text"].encode("utf-8")).hexdigest()
            assert obj["key"] == recomputed  # texts are already canonical
            keys.append(obj["key"])
        assert keys == sorted(keys)

    def test_requires_records(self, tmp_path, capsys):
        conf = write_config(tmp_path)
        assert main(["--config", str(conf), "texts"]) == 2
        assert "records" in capsys.readouterr().err


class TestModel:
    def test_missing_store_exits_2(self, tmp_path):
        conf = write_config(tmp_path)
        main(["--config", str(conf), "ingest"])
        assert main(["--config", str(conf), "model"]) == 2

    def test_coverage_gap_exits_3_and_names_key(self, prepared, capsys):
        conf, tmp_path = prepared
        store_path = tmp_path / "store.jsonl"
        lines = store_path.read_text().splitlines()
        dropped = json.loads(lines[-1])["key"]
        store_path.write_text("\n".join(lines[:-1]) + "\n")
        assert main(["--config", str(conf), "model"]) == 3
        assert dropped in capsys.readouterr().err

    def test_outputs_written(self, prepared):
        conf, tmp_path = prepared
        assert main(["--config", str(conf), "model"]) == 0
        out = tmp_path / "out"
        for name in ("cohesion.csv", "descriptors.csv", "descriptors.md", "run_summary.json"):
            assert (out / name).exists()
        summary = json.loads((out / "run_summary.json").read_text())
        assert summary["records"] == 9
        assert "total_dependency_shannons" in summary
        assert summary["parameters"]["min_score"] == 0.2

    def test_cohesion_csv_has_one_row_per_class(self, prepared):
        conf, tmp_path = prepared
        main(["--config", str(conf), "model"])
        rows = (tmp_path / "out" / "cohesion.csv").read_text().splitlines()
        assert rows[0] == "subject_concord,nominal_class,cohesion_shannons"
        assert len(rows) == 1 + 5


class TestEval:
    def test_report_includes_baseline(self, prepared):
        conf, tmp_path = prepared
        assert main(["--config", str(conf), "eval"]) == 0
        payload = json.loads((tmp_path / "out" / "eval_report.json").read_text())
        assert set(payload) >= {"trained", "baseline", "split", "hyper"}
        assert payload["baseline"]["repetitions"] == 25
        md = (tmp_path / "out" / "eval_report.md").read_text()
        assert "baseline" in md

    def test_same_config_twice_identical_bytes(self, prepared):
        conf, tmp_path = prepared
        main(["--config", str(conf), "eval"])
        first = (tmp_path / "out" / "eval_report.json").read_bytes()
        main(["--config", str(conf), "eval"])
        assert (tmp_path / "out" / "eval_report.json").read_bytes() == first


class TestContract:
    def test_unknown_config_key_exits_1_before_writes(self, tmp_path, capsys):
        conf = write_config(tmp_path, **{"paths.bogus": "x"})
        assert main(["--config", str(conf), "ingest"]) == 1
        assert not (tmp_path / "out").exists()

    def test_usage_error_exits_1(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_lock_file_blocks_concurrent_runs(self, tmp_path, capsys):
        conf = write_config(tmp_path)
        out = tmp_path / "out"
        out.mkdir()
        (out / ".nomtax.lock").touch()
        assert main(["--config", str(conf), "ingest"]) == 1
        assert "lock" in capsys.readouterr().err

    def test_lock_released_after_run(self, tmp_path):
        conf = write_config(tmp_path)
        assert main(["--config", str(conf), "ingest"]) == 0
        assert not (tmp_path / "out" / ".nomtax.lock").exists()

    def test_manifest_digest_tracks_input_bytes(self, tmp_path):
        pages = tmp_path / "pages"
        shutil.copytree(FIXTURES / "pages", pages)
        conf = write_config(tmp_path, **{"paths.cache_dir": pages})
        main(["--config", str(conf), "ingest"])
        digest1 = json.loads((tmp_path / "out" / "manifest.json").read_text())["inputs"][
            "cache_dir"
        ]["sha256"]
        main(["--config", str(conf), "ingest"])
        digest2 = json.loads((tmp_path / "out" / "manifest.json").read_text())["inputs"][
            "cache_dir"
        ]["sha256"]
        assert digest1 == digest2
        page = pages / "p01_yahe.html"
        page.write_text(page.read_text() + " ")
        main(["--config", str(conf), "ingest"])
        digest3 = json.loads((tmp_path / "out" / "manifest.json").read_text())["inputs"][
            "cache_dir"
        ]["sha256"]
        assert digest3 != digest1

    def test_internal_invariant_violation_exits_4(self, prepared, capsys):
        # an occurrence floor nothing can reach trips the empty-model invariant
        conf, tmp_path = prepared
        extra = conf.read_text() + "model.min_global_occurrences = 10000\n"
        conf2 = tmp_path / "strict.conf"
        conf2.write_text(extra)
        assert main(["--config", str(conf2), "model"]) == 4
        assert "internal error" in capsys.readouterr().err

    def test_manifest_records_backend_and_config(self, prepared):
        conf, tmp_path = prepared
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["backend"] in ("numba", "numpy")
        assert manifest["config"]["match.min_score"] == 0.2
        assert manifest["tool"]["name"] == "nomtax"
