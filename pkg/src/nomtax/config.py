"""Pipeline configuration: one flat dotted-key file, overridable by flags.

Config files are plain text, one ``key = value`` pair per line, ``#``
comments allowed. Values parse as bool/int/float when they look like one,
else as strings. Unknown keys are rejected so typos fail fast. Command-line
flags win over file values; defaults carry the published thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .classes import DEFAULT_YA_NOMINAL

DEFAULTS: dict[str, object] = {
    "paths.cache_dir": "cache",
    "paths.corrections": "",  # empty -> packaged default rules
    "paths.wordnet_dir": "wordnet",
    "paths.embedding_store": "embeddings.jsonl",
    "paths.out_dir": "out",
    "ingest.base_url": "https://swahili-dictionary.com",
    "ingest.category": "swahili-nouns",
    "ingest.rate_limit": 1.0,
    "ingest.top_classes": 9,
    "ingest.offline": False,
    "ingest.ya_nominal_class": DEFAULT_YA_NOMINAL,
    "match.top_k": 10,
    "match.min_score": 0.5,
    "model.min_global_occurrences": 10,
    "model.occurrence_mode": "records",
    "model.leaf_inclusion": True,
    "model.top_n": 20,
    "model.bold_threshold": 1.0,
    "classifier.train_fraction": 0.75,
    "classifier.epochs": 300,
    "classifier.learning_rate": 0.5,
    "classifier.l2": 1e-4,
    "classifier.repetitions": 3,
    "classifier.baseline_trials": 1000,
    "seed": 13,
}

_POSITIVE_KEYS = (
    "ingest.rate_limit",
    "ingest.top_classes",
    "match.top_k",
    "match.min_score",
    "model.min_global_occurrences",
    "model.top_n",
    "model.bold_threshold",
    "classifier.epochs",
    "classifier.learning_rate",
    "classifier.repetitions",
    "classifier.baseline_trials",
)


class ConfigError(ValueError):
    pass


def _parse_value(text: str) -> object:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config_file(path: str | Path) -> dict[str, object]:
    values: dict[str, object] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        values[key.strip()] = _parse_value(raw)
    return values


@dataclass
class PipelineConfig:
    values: dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        merged = dict(DEFAULTS)
        for key, val in self.values.items():
            if key not in DEFAULTS:
                raise ConfigError(f"unknown config key {key!r}")
            merged[key] = val
        self.values = merged
        self._validate()

    def _validate(self):
        for key in _POSITIVE_KEYS:
            val = self.values[key]
            if not isinstance(val, (int, float)) or isinstance(val, bool) or val <= 0:
                raise ConfigError(f"config key {key} must be a positive number, got {val!r}")
        frac = self.values["classifier.train_fraction"]
        if not isinstance(frac, (int, float)) or not 0 < float(frac) < 1:
            raise ConfigError("classifier.train_fraction must be in (0, 1)")
        if self.values["model.occurrence_mode"] not in ("records", "path-hits"):
            raise ConfigError("model.occurrence_mode must be 'records' or 'path-hits'")

    def __getitem__(self, key: str) -> object:
        return self.values[key]

    def path(self, key: str) -> Path:
        return Path(str(self.values[key]))

    def snapshot(self) -> dict[str, object]:
        return {k: self.values[k] for k in sorted(self.values)}


def load_config(path: str | Path | None, overrides: dict[str, object] | None = None) -> PipelineConfig:
    values = parse_config_file(path) if path else {}
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    return PipelineConfig(values)
