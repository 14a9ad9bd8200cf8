"""Binary linear algebra over GF(2) on numpy uint8 arrays."""

from __future__ import annotations

import numpy as np


def as_bits(values) -> np.ndarray:
    """Coerce to a uint8 array of 0/1 entries."""
    arr = np.asarray(values)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("entries must be 0 or 1")
    return arr.astype(np.uint8)


def matmul(a, b) -> np.ndarray:
    """Matrix product mod 2."""
    return (as_bits(a).astype(np.int64) @ as_bits(b).astype(np.int64) % 2).astype(np.uint8)


def rref(mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns over GF(2)."""
    work = as_bits(mat).copy()
    rows, cols = work.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(work[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        others = np.nonzero(work[:, c])[0]
        others = others[others != r]
        if others.size:
            work[others] ^= work[r]
        pivots.append(c)
        r += 1
    return work, pivots


def rank(mat) -> int:
    return len(rref(mat)[1])


def nullspace(mat) -> np.ndarray:
    """Basis of {v : mat v = 0 mod 2}, one vector per row (may be empty)."""
    reduced, pivots = rref(mat)
    cols = reduced.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for r, p in enumerate(pivots):
            basis[row, p] = reduced[r, f]
    return basis


def in_rowspace(vector, mat) -> bool:
    """Whether ``vector`` lies in the row space of ``mat`` over GF(2)."""
    vec = as_bits(vector).reshape(1, -1)
    base = as_bits(mat)
    if base.shape[0] == 0:
        return not vec.any()
    stacked = np.vstack([base, vec])
    return rank(stacked) == rank(base)


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Big-endian bit vector of ``value`` (leftmost bit most significant)."""
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    out = 0
    for b in as_bits(bits).reshape(-1):
        out = (out << 1) | int(b)
    return out
