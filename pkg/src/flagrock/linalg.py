"""Small sparse-matrix and rank utilities over Q2i (exact) or complex (float)."""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from .field import Q2i, conj, is_exact, is_zero

# A sparse matrix is a dict {(row, col): scalar} with no stored zeros.
Sparse = dict


def sp_clean(m: Sparse, tol: float = 0.0) -> Sparse:
    return {k: v for k, v in m.items() if not is_zero(v, tol)}


def sp_add(a: Sparse, b: Sparse, scale=1) -> Sparse:
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + scale * v if k in out else scale * v
    return sp_clean(out)


def sp_scale(a: Sparse, c) -> Sparse:
    return sp_clean({k: c * v for k, v in a.items()})


def sp_mul(a: Sparse, b: Sparse) -> Sparse:
    rows = defaultdict(list)
    for (r, c), v in b.items():
        rows[r].append((c, v))
    out: dict = {}
    for (r, k), v in a.items():
        for c, w in rows.get(k, ()):
            key = (r, c)
            out[key] = out[key] + v * w if key in out else v * w
    return sp_clean(out)


def sp_commutator(a: Sparse, b: Sparse) -> Sparse:
    return sp_add(sp_mul(a, b), sp_mul(b, a), scale=-1)


def sp_adjoint(a: Sparse) -> Sparse:
    return {(c, r): conj(v) for (r, c), v in a.items()}


def sp_equal(a: Sparse, b: Sparse, tol: float = 0.0) -> bool:
    return all(is_zero(v, tol) for v in sp_add(a, b, scale=-1).values())


def sp_trace(a: Sparse):
    return sum((v for (r, c), v in a.items() if r == c), Q2i())


def rank(rows, tol: float = 1e-9) -> int:
    """Rank of a matrix given as a list of rows.

    Exact Gaussian elimination when every entry is exact, numpy SVD rank
    (with ``tol``) otherwise.
    """
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    if all(is_exact(x) for r in rows for x in r):
        return _exact_rank([[Q2i.coerce(x) for x in r] for r in rows])
    arr = np.array([[complex(x) for x in r] for r in rows], dtype=complex)
    return int(np.linalg.matrix_rank(arr, tol=tol))


def _exact_rank(m: list[list[Q2i]]) -> int:
    m = [r[:] for r in m]
    nrows, ncols = len(m), len(m[0])
    rk, col = 0, 0
    while rk < nrows and col < ncols:
        pivot = next((i for i in range(rk, nrows) if m[i][col]), None)
        if pivot is None:
            col += 1
            continue
        m[rk], m[pivot] = m[pivot], m[rk]
        inv = m[rk][col].inverse()
        prow = [x * inv for x in m[rk]]
        m[rk] = prow
        for i in range(rk + 1, nrows):
            f = m[i][col]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], prow)]
        rk += 1
        col += 1
    return rk
