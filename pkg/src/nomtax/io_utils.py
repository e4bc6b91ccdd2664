"""Small IO helpers: atomic writes, digests, deterministic timestamps."""

from __future__ import annotations

import hashlib
import os
import tempfile
import time
from pathlib import Path


def atomic_write_text(path: str | Path, content: str) -> None:
    """Write via temp file + rename so interrupted runs never leave partials."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def sha256_tree(directory: str | Path, pattern: str = "**/*") -> str:
    """Digest of a directory: hash of sorted (relative name, file digest) pairs."""
    directory = Path(directory)
    h = hashlib.sha256()
    for p in sorted(directory.glob(pattern)):
        if not p.is_file():
            continue
        h.update(p.relative_to(directory).as_posix().encode("utf-8"))
        h.update(b"\x00")
        h.update(sha256_file(p).encode("ascii"))
        h.update(b"\x00")
    return h.hexdigest()


def run_timestamp() -> str:
    """UTC ISO timestamp; honors SOURCE_DATE_EPOCH for reproducible runs."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else time.time()
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))
