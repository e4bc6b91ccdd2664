"""Hot numeric kernels: brute-force cosine top-k scan and sparse mass accumulation.

Each kernel has a numba ``@njit`` implementation and a pure-numpy fallback;
`nomtax.backend` decides which one runs (``NOMTAX_BACKEND`` env var). Both
paths implement the same contract:

* scores are cosines of the stored vectors, computed in float64;
* a candidate is kept iff its score >= ``min_score``;
* per query at most ``k`` survivors, ordered by (score desc, candidate index asc).

The two backends may disagree in the last ulp of a score (different float
summation order); ranking is identical unless two candidates are closer
than that.
"""

from __future__ import annotations

import numpy as np

from .backend import BACKEND


def _topk_numpy(Q, C, qn, cn, k, min_score, out_idx, out_score, out_n):
    nq, nc = Q.shape[0], C.shape[0]
    # keep each score block around 4M doubles
    block = max(1, (1 << 22) // max(1, nc))
    for start in range(0, nq, block):
        stop = min(start + block, nq)
        S = (Q[start:stop] @ C.T) / np.outer(qn[start:stop], cn)
        for r in range(stop - start):
            row = S[r]
            sel = np.flatnonzero(row >= min_score)
            if sel.size == 0:
                continue
            order = np.lexsort((sel, -row[sel]))[:k]
            n = order.size
            i = start + r
            out_idx[i, :n] = sel[order]
            out_score[i, :n] = row[sel[order]]
            out_n[i] = n


if BACKEND == "numba":
    from numba import njit, prange

    # fastmath lets LLVM vectorize the dot-product reduction; the summation
    # order is fixed at compile time, so results stay run-to-run deterministic
    # (they may differ from the numpy path in the last ulp). Inputs are
    # finite and norms nonzero, checked by the wrapper.
    @njit(parallel=True, cache=True, fastmath=True)
    def _topk_numba(Q, C, qn, cn, k, min_score, out_idx, out_score, out_n):
        nq = Q.shape[0]
        nc = C.shape[0]
        d = Q.shape[1]
        for i in prange(nq):
            n = 0
            for j in range(nc):
                s = 0.0
                for t in range(d):
                    s += Q[i, t] * C[j, t]
                s /= qn[i] * cn[j]
                if s < min_score:
                    continue
                if n == k and s <= out_score[i, k - 1]:
                    # ties keep the earlier candidate index
                    continue
                pos = n if n < k else k - 1
                while pos > 0 and out_score[i, pos - 1] < s:
                    out_score[i, pos] = out_score[i, pos - 1]
                    out_idx[i, pos] = out_idx[i, pos - 1]
                    pos -= 1
                out_score[i, pos] = s
                out_idx[i, pos] = j
                if n < k:
                    n += 1
            out_n[i] = n

    @njit(cache=True)
    def _accumulate_numba(rows, cols, values, out):
        for i in range(rows.shape[0]):
            out[rows[i], cols[i]] += values[i]


def topk_cosine(
    queries: np.ndarray,
    candidates: np.ndarray,
    k: int,
    min_score: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact cosine top-k of every query row against every candidate row.

    Returns ``(idx, scores, counts)`` where ``idx`` is (nq, k) int64 padded
    with -1, ``scores`` is (nq, k) float64, and ``counts[i]`` is the number
    of valid entries in row ``i``. Raises ValueError on zero-norm vectors
    (cosine undefined) or mismatched dimensions.
    """
    Q = np.ascontiguousarray(queries, dtype=np.float64)
    C = np.ascontiguousarray(candidates, dtype=np.float64)
    if Q.ndim != 2 or C.ndim != 2 or Q.shape[1] != C.shape[1]:
        raise ValueError(f"dimension mismatch: queries {Q.shape}, candidates {C.shape}")
    if k < 1:
        raise ValueError("k must be >= 1")
    qn = np.sqrt(np.einsum("ij,ij->i", Q, Q))
    cn = np.sqrt(np.einsum("ij,ij->i", C, C))
    if np.any(qn == 0.0) or np.any(cn == 0.0):
        raise ValueError("zero vector has no cosine similarity")

    nq = Q.shape[0]
    out_idx = np.full((nq, k), -1, dtype=np.int64)
    out_score = np.zeros((nq, k), dtype=np.float64)
    out_n = np.zeros(nq, dtype=np.int64)
    if nq and C.shape[0]:
        if BACKEND == "numba":
            _topk_numba(Q, C, qn, cn, k, float(min_score), out_idx, out_score, out_n)
        else:
            _topk_numpy(Q, C, qn, cn, k, float(min_score), out_idx, out_score, out_n)
    return out_idx, out_score, out_n


def accumulate_mass(
    rows: np.ndarray,
    cols: np.ndarray,
    values: np.ndarray,
    shape: tuple[int, int],
) -> np.ndarray:
    """Sum COO triples into a dense matrix, in input order (bitwise stable)."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    if not (rows.shape == cols.shape == values.shape):
        raise ValueError("rows, cols and values must have equal length")
    out = np.zeros(shape, dtype=np.float64)
    if rows.size == 0:
        return out
    if BACKEND == "numba":
        _accumulate_numba(rows, cols, values, out)
    else:
        np.add.at(out, (rows, cols), values)
    return out
