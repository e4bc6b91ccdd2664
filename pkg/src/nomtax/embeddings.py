"""Embedding store: the only bridge between text and vectors.

File format (newline-delimited JSON, UTF-8, bit-exact contract with the
exporter):

    line 1:  {"model": <text>, "dim": <int>, "normalized": <bool>}
    line 2+: {"key": <64-hex>, "vec": [<floats>]}

Canonical form: keys sorted ascending, floats in shortest round-trip decimal
(Python float repr), no whitespace padding. `write_store` always emits the
canonical form, so load -> write canonicalizes any conforming file.

Similarity is the cosine of the stored vectors exactly as stored — no
renormalization at query time — computed in double precision.
"""

from __future__ import annotations

import json
import re
import warnings as _warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .kernels import topk_cosine
from .textkeys import canonical_text, text_key  # noqa: F401  (re-exported API)

_KEY_RE = re.compile(r"^[0-9a-f]{64}$")


@dataclass(frozen=True)
class StoreManifest:
    model: str
    dim: int
    normalized: bool


@dataclass(frozen=True)
class SimilarityMatch:
    query_key: str
    candidate_id: object
    score: float


class EmbeddingStore:
    """Immutable keyed vector collection with a declared manifest."""

    def __init__(self, manifest: StoreManifest, vectors: Mapping[str, Sequence[float]]):
        if manifest.dim < 1:
            raise ValueError("manifest dim must be a positive integer")
        self.manifest = manifest
        self._keys = sorted(vectors)
        self._matrix = np.zeros((len(self._keys), manifest.dim), dtype=np.float64)
        for row, key in enumerate(self._keys):
            if not _KEY_RE.match(key):
                raise ValueError(f"invalid embedding key {key!r}")
            vec = np.asarray(vectors[key], dtype=np.float64)
            if vec.shape != (manifest.dim,):
                raise ValueError(
                    f"vector for key {key} has dimension {vec.shape[0] if vec.ndim == 1 else vec.shape},"
                    f" manifest says {manifest.dim}"
                )
            self._matrix[row] = vec
        self._row_of = {k: i for i, k in enumerate(self._keys)}
        if manifest.normalized and len(self._keys):
            norms = np.linalg.norm(self._matrix, axis=1)
            bad = np.flatnonzero(np.abs(norms - 1.0) > 1e-4)
            if bad.size:
                raise ValueError(
                    f"manifest declares normalized vectors but key {self._keys[bad[0]]}"
                    f" has norm {norms[bad[0]]!r}"
                )

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, key: str) -> bool:
        return key in self._row_of

    def keys(self) -> list[str]:
        return list(self._keys)

    def vector(self, key: str) -> np.ndarray:
        try:
            return self._matrix[self._row_of[key]].copy()
        except KeyError:
            raise KeyError(f"embedding store has no vector for key {key}") from None

    def matrix_for(self, keys: Sequence[str]) -> np.ndarray:
        rows = []
        for key in keys:
            if key not in self._row_of:
                raise KeyError(f"embedding store has no vector for key {key}")
            rows.append(self._row_of[key])
        return self._matrix[np.asarray(rows, dtype=np.intp)] if rows else np.zeros(
            (0, self.manifest.dim)
        )


def load_store(path: str | Path) -> EmbeddingStore:
    """Parse and validate a store file.

    Hard errors: missing/invalid manifest line, wrong vector dimension
    (names the key), duplicate key with a different vector. A duplicate key
    with an identical vector is deduplicated with a warning. Record order in
    the file is irrelevant.
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty store file (manifest line required)")
    try:
        head = json.loads(lines[0])
        manifest = StoreManifest(
            model=str(head["model"]), dim=int(head["dim"]), normalized=bool(head["normalized"])
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: first line is not a valid manifest: {exc}") from exc
    if manifest.dim < 1:
        raise ValueError(f"{path}: manifest dim must be positive, got {manifest.dim}")

    vectors: dict[str, list[float]] = {}
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            key, vec = obj["key"], obj["vec"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"{path}:{lineno}: malformed record line: {exc}") from exc
        if not isinstance(key, str) or not _KEY_RE.match(key):
            raise ValueError(f"{path}:{lineno}: invalid key {key!r}")
        if len(vec) != manifest.dim:
            raise ValueError(
                f"{path}:{lineno}: vector for key {key} has {len(vec)} components,"
                f" manifest dim is {manifest.dim}"
            )
        vec = [float(x) for x in vec]
        if key in vectors:
            if vectors[key] == vec:
                _warnings.warn(f"{path}: duplicate key {key} with identical vector; deduplicated")
            else:
                raise ValueError(f"{path}: duplicate key {key} with conflicting vectors")
            continue
        vectors[key] = vec
    return EmbeddingStore(manifest, vectors)


def dump_store(store: EmbeddingStore) -> str:
    """Canonical byte content of a store (sorted keys, shortest-repr floats)."""
    out = [
        json.dumps(
            {
                "model": store.manifest.model,
                "dim": store.manifest.dim,
                "normalized": store.manifest.normalized,
            },
            ensure_ascii=False,
            separators=(",", ":"),
        )
    ]
    for key in store.keys():
        vec = store.vector(key)
        out.append(
            json.dumps({"key": key, "vec": vec.tolist()}, ensure_ascii=False, separators=(",", ":"))
        )
    return "\n".join(out) + "\n"


def write_store(store: EmbeddingStore, path: str | Path) -> None:
    Path(path).write_text(dump_store(store), encoding="utf-8")


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine similarity of two equal-length nonzero vectors, in float64."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"cosine needs equal-length vectors, got {a.shape} and {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity of a zero vector is undefined")
    return float(np.dot(a, b) / (na * nb))


def top_k_matches(
    queries: Iterable[tuple[object, str]],
    candidates: Iterable[tuple[object, str]],
    store: EmbeddingStore,
    k: int,
    min_score: float,
) -> dict[object, list[SimilarityMatch]]:
    """Per query: the best k candidates scoring >= min_score.

    Descending score, ties broken by ascending candidate id. Every key must
    be present in the store (hard error naming the missing key).
    """
    queries = list(queries)
    candidates = sorted(candidates, key=lambda c: c[0])  # id order implements tie-break
    q_keys = [key for _, key in queries]
    c_keys = [key for _, key in candidates]
    Q = store.matrix_for(q_keys)
    C = store.matrix_for(c_keys)
    result: dict[object, list[SimilarityMatch]] = {qid: [] for qid, _ in queries}
    if not queries or not candidates:
        return result
    idx, scores, counts = topk_cosine(Q, C, k, min_score)
    for qi, (qid, qkey) in enumerate(queries):
        result[qid] = [
            SimilarityMatch(
                query_key=qkey,
                candidate_id=candidates[idx[qi, j]][0],
                score=float(scores[qi, j]),
            )
            for j in range(int(counts[qi]))
        ]
    return result
