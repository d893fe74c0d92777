"""Dense linear algebra over GF(2) on numpy uint8 matrices."""

from __future__ import annotations

import numpy as np


def as_bits(m) -> np.ndarray:
    a = np.array(m, dtype=np.uint8) & 1
    return a


def row_reduce(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``m`` over GF(2).

    Returns:
        The reduced matrix (zero rows dropped) and the list of pivot columns.
    """
    a = as_bits(m).copy()
    if a.ndim == 1:
        a = a[None, :]
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        mask = a[:, c].astype(bool)
        mask[r] = False
        a[mask] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m) -> int:
    a = as_bits(m)
    if a.size == 0:
        return 0
    return len(row_reduce(a)[1])


def nullspace(m) -> np.ndarray:
    """Basis (as rows) of the right kernel ``{v : m v = 0}``."""
    a = as_bits(m)
    if a.ndim == 1:
        a = a[None, :]
    n = a.shape[1]
    red, pivots = row_reduce(a)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            basis[i, p] = red[r, f]
    return basis


def in_rowspace(m, v) -> bool:
    a = as_bits(m)
    v = as_bits(v)
    if a.size == 0:
        return not v.any()
    return rank(np.vstack([a, v[None, :]])) == rank(a)


def span(m) -> np.ndarray:
    """All 2^r vectors of the row space, r = rank(m). Only for small r."""
    red, _ = row_reduce(m)
    r = red.shape[0]
    if r > 20:
        raise ValueError(f"row space of dimension {r} too large to enumerate")
    coeffs = (np.arange(2**r)[:, None] >> np.arange(r)[None, :]) & 1
    return (coeffs.astype(np.uint8) @ red) & 1 if r else np.zeros((1, as_bits(m).shape[-1]), np.uint8)
