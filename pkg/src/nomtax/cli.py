"""Command-line pipeline orchestration.

Subcommands: ``ingest`` (pages -> records), ``texts`` (embedding worklist),
``model`` (taxonomy descriptors + cohesion), ``eval`` (classifier baseline),
``all`` (everything in order). One config file drives every stage; flags win
over config values. Every output is written atomically and a run manifest
records input digests, counts and the kernel backend.

Exit codes (stable contract):
    0 success, 1 usage/config error, 2 missing input,
    3 embedding coverage gap, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from .classifier import (
    SplitSpec,
    TrainHyper,
    featurize,
    repeat_and_aggregate,
    split,
    weighted_random_baseline,
)
from .config import ConfigError, PipelineConfig, load_config
from .embeddings import load_store, text_key
from .fetch import fetch_category_pages, load_cached_pages
from .io_utils import atomic_write_text, run_timestamp
from .manifest import build_manifest, manifest_json
from .records import (
    CorrectionTable,
    assemble_records,
    class_distribution,
    definition_embedding_text,
    filter_top_classes,
    read_records_ndjson,
    record_to_json,
    warning_to_json,
)
from .reports import (
    cohesion_csv,
    collect_texts,
    confusion_csv,
    descriptors_csv,
    descriptors_markdown,
    distribution_csv,
    eval_markdown,
    run_summary_json,
    texts_ndjson,
)
from .taxonomy import (
    build_joint,
    class_cohesion,
    descriptor_table,
    gloss_embedding_text,
    hypernym_weights,
    match_records,
    total_dependency,
)
from .wordnet import parse_wordnet

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISSING_INPUT = 2
EXIT_COVERAGE_GAP = 3
EXIT_INTERNAL = 4

LOCK_NAME = ".nomtax.lock"


class MissingInputError(Exception):
    pass


class CoverageGapError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit((EXIT_USAGE, f"error: {message}"))


def _default_corrections() -> Path:
    return Path(str(resources.files("nomtax").joinpath("data/corrections.tsv")))


def _require(path: Path, what: str) -> Path:
    if not path.exists():
        raise MissingInputError(f"{what} not found: {path}")
    return path


class _Run:
    """Shared state for one CLI invocation over an output directory."""

    def __init__(self, cfg: PipelineConfig, out_dir: Path):
        self.cfg = cfg
        self.out = out_dir
        self.counts: dict[str, int] = {}
        self.inputs: dict[str, Path] = {}
        self.stages: list[str] = []
        self.records = None
        self.graph = None

    def write(self, name: str, content: str) -> None:
        atomic_write_text(self.out / name, content)

    # --- stages ----------------------------------------------------------

    def ingest(self) -> None:
        cfg = self.cfg
        cache_dir = cfg.path("paths.cache_dir")
        corrections_path = (
            Path(str(cfg["paths.corrections"]))
            if cfg["paths.corrections"]
            else _default_corrections()
        )
        _require(corrections_path, "corrections file")
        corrections = CorrectionTable.load(corrections_path)
        ya = str(cfg["ingest.ya_nominal_class"])

        if cfg["ingest.offline"]:
            _require(cache_dir, "page cache directory")
            pages = load_cached_pages(cache_dir)
            if not pages:
                raise MissingInputError(f"offline ingest but no cached pages in {cache_dir}")
        else:
            pages, errors = fetch_category_pages(
                str(cfg["ingest.base_url"]),
                str(cfg["ingest.category"]),
                cache_dir,
                float(cfg["ingest.rate_limit"]),
            )
            for err in errors:
                print(f"fetch error: {err.url}: {err.message}", file=sys.stderr)
            if not pages:
                raise MissingInputError("fetch produced no pages (see errors above)")

        records, warnings = assemble_records(pages, corrections, ya)
        if not records:
            raise MissingInputError("parsing produced zero records")
        kept, stats = filter_top_classes(records, int(cfg["ingest.top_classes"]))

        self.write("records.ndjson", "".join(record_to_json(r) + "\n" for r in kept))
        self.write("class_distribution.csv", distribution_csv(stats))
        self.write("parse_warnings.ndjson", "".join(warning_to_json(w) + "\n" for w in warnings))
        self.records = kept
        self.inputs["corrections"] = corrections_path
        self.inputs["cache_dir"] = cache_dir
        self.counts.update(
            {
                "pages": len(pages),
                "parsed_records": len(records),
                "records": len(kept),
                "parse_warnings": len(warnings),
            }
        )
        self.stages.append("ingest")
        print(
            f"ingest: {len(pages)} pages -> {len(records)} records, kept {len(kept)} "
            f"({stats.retained_fraction:.1%}) across top {len(stats.retained_concords)} classes"
        )

    def _load_records(self):
        if self.records is None:
            path = self.out / "records.ndjson"
            _require(path, "records file (run `nomtax ingest` first)")
            self.records = read_records_ndjson(path, str(self.cfg["ingest.ya_nominal_class"]))
            self.inputs["records"] = path
        return self.records

    def _load_graph(self):
        if self.graph is None:
            wn_dir = self.cfg.path("paths.wordnet_dir")
            _require(wn_dir / "data.noun", "WordNet data.noun")
            _require(wn_dir / "index.noun", "WordNet index.noun")
            self.graph = parse_wordnet(wn_dir)
            self.inputs["wordnet_data"] = wn_dir / "data.noun"
            self.inputs["wordnet_index"] = wn_dir / "index.noun"
            self.counts["synsets"] = len(self.graph)
        return self.graph

    def _load_store(self):
        store_path = self.cfg.path("paths.embedding_store")
        _require(store_path, "embedding store")
        self.inputs["embedding_store"] = store_path
        return load_store(store_path)

    @staticmethod
    def _check_coverage(store, needed: dict[str, str], what: str) -> None:
        missing = sorted(k for k in needed if k not in store)
        if missing:
            shown = "\n".join(
                f"  {k}  ({needed[k][:60]!r})" for k in missing[:20]
            )
            raise CoverageGapError(
                f"embedding store lacks {len(missing)} {what} keys:\n{shown}"
            )

    def texts(self) -> None:
        records = self._load_records()
        graph = self._load_graph()
        pairs = collect_texts(records, graph)
        self.write("texts.ndjson", texts_ndjson(pairs))
        self.counts["texts"] = len(pairs)
        self.stages.append("texts")
        print(f"texts: {len(pairs)} unique texts need embeddings")

    def model(self) -> None:
        cfg = self.cfg
        records = self._load_records()
        graph = self._load_graph()
        store = self._load_store()

        needed = {
            text_key(definition_embedding_text(r.definition)): r.definition for r in records
        }
        needed.update(
            {text_key(gloss_embedding_text(s.gloss)): s.gloss for s in graph.synsets.values()}
        )
        self._check_coverage(store, needed, "definition/gloss")

        matches = match_records(
            records, store, graph, k=int(cfg["match.top_k"]), min_score=float(cfg["match.min_score"])
        )
        path_cache: dict = {}
        weights = []
        unmatched = 0
        for m in matches:
            rw = hypernym_weights(
                m, graph, include_source=bool(cfg["model.leaf_inclusion"]), _path_cache=path_cache
            )
            if rw is None:
                unmatched += 1
            else:
                weights.append(rw)
        labels = {r.record_id: r.class_label for r in records}
        joint = build_joint(
            weights,
            labels,
            min_global_occurrences=int(cfg["model.min_global_occurrences"]),
            occurrence_mode=str(cfg["model.occurrence_mode"]),
        )
        cohesion = class_cohesion(joint)
        total_dep = total_dependency(joint)
        tables = descriptor_table(
            joint, graph, top_n=int(cfg["model.top_n"]), bold_threshold=float(cfg["model.bold_threshold"])
        )

        soft_warnings = []
        a_wa = [c for c in cohesion if c.concord == "a-/wa-"]
        if a_wa and cohesion[a_wa[0]] < max(cohesion.values()):
            msg = (
                "soft check: a-/wa- is not the most cohesive class in this run "
                "(expected it to rank first on the full dictionary)"
            )
            soft_warnings.append(msg)
            print(f"warning: {msg}", file=sys.stderr)

        parameters = {
            "top_k": int(cfg["match.top_k"]),
            "min_score": float(cfg["match.min_score"]),
            "min_global_occurrences": int(cfg["model.min_global_occurrences"]),
            "occurrence_mode": str(cfg["model.occurrence_mode"]),
            "leaf_inclusion": bool(cfg["model.leaf_inclusion"]),
            "top_n": int(cfg["model.top_n"]),
            "bold_threshold": float(cfg["model.bold_threshold"]),
        }
        self.write("cohesion.csv", cohesion_csv(joint, cohesion))
        self.write("descriptors.csv", descriptors_csv(tables))
        self.write("descriptors.md", descriptors_markdown(tables))
        self.write(
            "run_summary.json",
            run_summary_json(
                parameters=parameters,
                record_count=len(records),
                matched_count=len(weights),
                unmatched_count=unmatched,
                cohesion=cohesion,
                total_dep=total_dep,
                warnings=soft_warnings,
            ),
        )
        self.counts.update(
            {
                "matched_records": len(weights),
                "unmatched_records": unmatched,
                "kept_hypernyms": len(joint.hypernyms),
                "model_classes": len(joint.classes),
            }
        )
        self.stages.append("model")
        print(
            f"model: {len(weights)} matched records, {len(joint.hypernyms)} hypernyms, "
            f"total dependency {total_dep:.4f} shannons"
        )

    def eval(self) -> None:
        cfg = self.cfg
        records = self._load_records()
        store = self._load_store()
        needed = {
            text_key(definition_embedding_text(r.definition)): r.definition for r in records
        }
        self._check_coverage(store, needed, "definition")

        features = featurize(records, store)
        labels = {r.record_id: r.class_label for r in records}
        ids = sorted(labels)
        seed = int(cfg["seed"])
        hyper = TrainHyper(
            learning_rate=float(cfg["classifier.learning_rate"]),
            epochs=int(cfg["classifier.epochs"]),
            l2=float(cfg["classifier.l2"]),
            seed=seed,
        )
        spec = SplitSpec(train_fraction=float(cfg["classifier.train_fraction"]), seed=seed)
        report = repeat_and_aggregate(
            ids, features, labels, spec, hyper, n=int(cfg["classifier.repetitions"])
        )
        dist = class_distribution(records)
        baseline = weighted_random_baseline(
            dist, trials=int(cfg["classifier.baseline_trials"]), seed=seed
        )
        train_ids, eval_ids = split(ids, spec)

        payload = {
            "split": {
                "train": len(train_ids),
                "eval": len(eval_ids),
                "train_fraction": spec.train_fraction,
                "seed": spec.seed,
            },
            "hyper": {
                "learning_rate": hyper.learning_rate,
                "epochs": hyper.epochs,
                "l2": hyper.l2,
                "repetitions": int(cfg["classifier.repetitions"]),
            },
            "trained": report.to_json_dict(),
            "baseline": baseline.to_json_dict(),
            "baseline_analytic_macro_f1": 1.0 / len(baseline.classes),
        }
        self.write(
            "eval_report.json",
            json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        )
        self.write("confusion.csv", confusion_csv(report))
        self.write("eval_report.md", eval_markdown(report, baseline))
        self.counts.update({"train_records": len(train_ids), "eval_records": len(eval_ids)})
        self.stages.append("eval")
        print(
            f"eval: macro F1 {report.macro_f1:.3f}, micro F1 {report.micro_f1:.3f} "
            f"over {report.repetitions} repetitions; baseline macro {baseline.macro_f1:.3f}"
        )

    def finish(self) -> None:
        started = self._started
        finished = run_timestamp()
        manifest = build_manifest(
            self.cfg, self.stages, self.inputs, self.counts, started, finished
        )
        self.write("manifest.json", manifest_json(manifest))

    def __enter__(self):
        self.out.mkdir(parents=True, exist_ok=True)
        self._lock = self.out / LOCK_NAME
        try:
            fd = os.open(self._lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            os.close(fd)
        except FileExistsError:
            raise SystemExit(
                (EXIT_USAGE, f"error: {self._lock} exists; another run owns this output dir")
            )
        self._started = run_timestamp()
        return self

    def __exit__(self, *exc):
        try:
            self._lock.unlink()
        except FileNotFoundError:
            pass
        return False


def _build_parser() -> _Parser:
    parser = _Parser(prog="nomtax", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="pipeline config file (flat dotted keys)")
    parser.add_argument("--out", help="output directory (config paths.out_dir)")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--offline", action="store_true", help="never touch the network")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="fetch/parse dictionary pages into records")
    p_ingest.add_argument("--cache-dir", help="page cache directory")
    p_ingest.add_argument("--corrections", help="corrections TSV (default: packaged rules)")
    p_ingest.add_argument("--top-k", type=int, help="number of classes to retain (default 9)")

    p_texts = sub.add_parser("texts", help="emit the unique texts requiring embeddings")
    p_texts.add_argument("--wordnet-dir", help="directory with data.noun/index.noun")

    p_model = sub.add_parser("model", help="descriptor tables and cohesion scores")
    p_model.add_argument("--wordnet-dir", help="directory with data.noun/index.noun")
    p_model.add_argument("--store", help="embedding store file")

    p_eval = sub.add_parser("eval", help="train/evaluate the classification baseline")
    p_eval.add_argument("--store", help="embedding store file")

    p_all = sub.add_parser("all", help="run ingest, texts, model and eval in order")
    p_all.add_argument("--cache-dir", help="page cache directory")
    p_all.add_argument("--corrections", help="corrections TSV")
    p_all.add_argument("--top-k", type=int, help="number of classes to retain")
    p_all.add_argument("--wordnet-dir", help="directory with data.noun/index.noun")
    p_all.add_argument("--store", help="embedding store file")
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, object]:
    mapping = {
        "out": "paths.out_dir",
        "seed": "seed",
        "cache_dir": "paths.cache_dir",
        "corrections": "paths.corrections",
        "top_k": "ingest.top_classes",
        "wordnet_dir": "paths.wordnet_dir",
        "store": "paths.embedding_store",
    }
    overrides: dict[str, object] = {}
    for attr, key in mapping.items():
        if getattr(args, attr, None) is not None:
            overrides[key] = getattr(args, attr)
    if args.offline:
        overrides["ingest.offline"] = True
    return overrides


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        try:
            cfg = load_config(args.config, _overrides(args))
        except (ConfigError, FileNotFoundError) as exc:
            raise SystemExit((EXIT_USAGE, f"error: {exc}"))

        with _Run(cfg, cfg.path("paths.out_dir")) as run:
            try:
                if args.command in ("ingest", "all"):
                    run.ingest()
                if args.command in ("texts", "all"):
                    run.texts()
                if args.command in ("model", "all"):
                    run.model()
                if args.command in ("eval", "all"):
                    run.eval()
                run.finish()
            except MissingInputError as exc:
                raise SystemExit((EXIT_MISSING_INPUT, f"error: {exc}"))
            except CoverageGapError as exc:
                raise SystemExit((EXIT_COVERAGE_GAP, f"error: {exc}"))
            except (ValueError, KeyError, AssertionError) as exc:
                raise SystemExit((EXIT_INTERNAL, f"internal error: {exc}"))
        return EXIT_OK
    except SystemExit as exc:
        if isinstance(exc.code, tuple):
            code, message = exc.code
            print(message, file=sys.stderr)
            return code
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
