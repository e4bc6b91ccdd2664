"""Run manifest: enough provenance to re-run a pipeline stage identically."""

from __future__ import annotations

import json
from pathlib import Path

from . import __version__
from .backend import active_backend
from .config import PipelineConfig
from .io_utils import sha256_file, sha256_tree


def input_digest(path: str | Path) -> dict[str, object]:
    path = Path(path)
    if path.is_dir():
        return {"path": str(path), "sha256": sha256_tree(path), "kind": "tree"}
    return {
        "path": str(path),
        "sha256": sha256_file(path),
        "bytes": path.stat().st_size,
        "kind": "file",
    }


def build_manifest(
    config: PipelineConfig,
    stages: list[str],
    inputs: dict[str, str | Path],
    counts: dict[str, int],
    started: str,
    finished: str,
) -> dict:
    return {
        "tool": {"name": "nomtax", "version": __version__},
        "backend": active_backend(),
        "stages": stages,
        "config": config.snapshot(),
        "inputs": {label: input_digest(p) for label, p in sorted(inputs.items())},
        "counts": dict(sorted(counts.items())),
        "timestamps": {"started": started, "finished": finished},
        "wordnet_version_assumed": "3.0",
    }


def manifest_json(manifest: dict) -> str:
    return json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
