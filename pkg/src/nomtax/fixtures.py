"""Deterministic pseudo-random fixture embeddings.

Derives a reproducible vector from an embedding key alone, so test and demo
pipelines never need a real encoder. The derivation is pure SHA-256 + IEEE
doubles and is documented here as a contract (the embedding exporter ships
the same generator):

    seed      = SHA-256(utf8(key))
    block[j]  = SHA-256(seed || uint32_be(j))          # 8 uint32 per block
    comp[i]   = u32 / 2^32 * 2 - 1                     # in [-1, 1)
    vector    = first `dim` components, L2-normalized when requested

Run it directly to turn a texts file into a store:

    python -m nomtax.fixtures texts.ndjson store.jsonl --dim 16
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path
from typing import Iterable

import numpy as np

from .embeddings import EmbeddingStore, StoreManifest, write_store


def fixture_vector(key: str, dim: int, normalize: bool = True) -> np.ndarray:
    if dim < 1:
        raise ValueError("dim must be positive")
    seed = hashlib.sha256(key.encode("utf-8")).digest()
    comps: list[float] = []
    block = 0
    while len(comps) < dim:
        digest = hashlib.sha256(seed + struct.pack(">I", block)).digest()
        comps.extend(u / 2**32 * 2 - 1 for u in struct.unpack(">8I", digest))
        block += 1
    vec = np.array(comps[:dim], dtype=np.float64)
    if normalize:
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:  # pragma: no cover - 2^-256-ish
            raise ValueError(f"degenerate zero fixture vector for key {key}")
        vec /= norm
    return vec


def fixture_model_id(dim: int, normalize: bool = True) -> str:
    return f"fixture-sha256-d{dim}" + ("" if normalize else "-raw")


def generate_store(keys: Iterable[str], dim: int, normalize: bool = True) -> EmbeddingStore:
    vectors = {key: fixture_vector(key, dim, normalize) for key in keys}
    return EmbeddingStore(
        StoreManifest(model=fixture_model_id(dim, normalize), dim=dim, normalized=normalize),
        vectors,
    )


def store_from_texts_file(
    texts_path: str | Path, out_path: str | Path, dim: int, normalize: bool = True
) -> int:
    """Generate a store covering every key in a texts NDJSON file."""
    keys = []
    for line in Path(texts_path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            keys.append(json.loads(line)["key"])
    write_store(generate_store(keys, dim, normalize), out_path)
    return len(keys)


def _main() -> None:  # pragma: no cover - thin wrapper
    import argparse

    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("texts", help="texts NDJSON with key/text lines")
    ap.add_argument("out", help="output store path")
    ap.add_argument("--dim", type=int, default=16)
    ap.add_argument("--no-normalize", action="store_true")
    args = ap.parse_args()
    n = store_from_texts_file(args.texts, args.out, args.dim, not args.no_normalize)
    print(f"wrote {n} fixture vectors (dim {args.dim}) to {args.out}")


if __name__ == "__main__":  # pragma: no cover
    _main()
