"""Independent dense numpy oracles.

Nothing here imports the closed-form tables of the package: frame vectors are
built as explicit matrices, brackets are literal commutators projected onto
the fiber, and the exterior algebra comes from Jordan-Wigner matrices.
"""

from __future__ import annotations

import itertools
from functools import reduce

import numpy as np

S2 = np.sqrt(2.0)


def roots_u(p, q, p1):
    n = p + q
    return [(i, j) for i in range(1, p1 + 1) for j in range(p1 + 1, n + 1)]


def roots_lp(p, q, p1):
    n = p + q
    return [(i, j) for i in range(p1 + 1, p + 1) for j in range(p + 1, n + 1)]


def compact(root, p):
    return (root[0] <= p) == (root[1] <= p)


def unit(n, i, j):
    m = np.zeros((n, n), dtype=complex)
    m[i - 1, j - 1] = 1
    return m


def frame_matrix(n, p, kind, root):
    i, j = root
    e, f = unit(n, i, j), unit(n, j, i)
    if compact(root, p):
        return (e - f) / S2 if kind == "X" else -1j * (e + f) / S2
    return (e + f) / S2 if kind == "X" else -1j * (e - f) / S2


def in_u_pq(m, p, n):
    J = np.diag([1] * p + [-1] * (n - p))
    return np.allclose(m.conj().T @ J + J @ m, 0)


def layers(p, q, p1):
    h = [(k, r) for k in "XY" for r in roots_u(p, q, p1)]
    f = [(k, r) for k in "XY" for r in roots_lp(p, q, p1)]
    return h, f


def nil_bracket(p, q, p1, u, v):
    """Fiber coordinates of [u, v] for horizontal frame vectors u, v."""
    n = p + q
    a, b = frame_matrix(n, p, *u), frame_matrix(n, p, *v)
    c = a @ b - b @ a
    _, fib = layers(p, q, p1)
    return {w: np.trace(c @ frame_matrix(n, p, *w).conj().T).real for w in fib}


def skew_form(p, q, p1, l):
    """B_l over (horizontal + fiber) with l given as {frame vector: value}."""
    h, f = layers(p, q, p1)
    basis = h + f
    B = np.zeros((len(basis), len(basis)))
    for x, y in itertools.product(range(len(h)), repeat=2):
        br = nil_bracket(p, q, p1, h[x], h[y])
        B[x, y] = sum(c * l.get(w, 0.0) for w, c in br.items())
    return basis, B


def hormander_rank(p, q, p1):
    h, f = layers(p, q, p1)
    rows = [[nil_bracket(p, q, p1, u, v)[w] for w in f] for u, v in itertools.combinations(h, 2)]
    return np.linalg.matrix_rank(np.array(rows)) if rows and f else 0, len(f)


# Jordan-Wigner fermions; kron factor k <-> bit k of the mask basis
_Z = np.diag([1.0, -1.0])
_UP = np.array([[0.0, 0.0], [1.0, 0.0]])  # |0> -> |1>
_I = np.eye(2)


def creation(m, k):
    return reduce(np.kron, [_Z] * k + [_UP] + [_I] * (m - k - 1))


def kron_index(mask, m):
    return sum(((mask >> k) & 1) << (m - 1 - k) for k in range(m))


def to_kron(dense_mask_ordered, masks, m):
    """Re-express a matrix given on ``masks`` in the kron basis."""
    out = np.zeros((1 << m, 1 << m), dtype=complex)
    pos = [kron_index(s, m) for s in masks]
    for a, ra in enumerate(pos):
        for b, rb in enumerate(pos):
            out[ra, rb] = dense_mask_ordered[a, b]
    return out


def degree_projector(m, k):
    idx = [kron_index(s, m) for s in range(1 << m) if bin(s).count("1") == k]
    return idx


def m_total(p, q, p1, l, nconst):
    """sum of (i N/sqrt2)[(xi + i eta) c_a^+ c_b - (xi - i eta) c_b^+ c_a] in the kron basis.

    ``nconst(a, b)`` is the structure constant read off a literal commutator.
    """
    us = roots_u(p, q, p1)
    m = len(us)
    cr = {r: creation(m, k) for k, r in enumerate(us)}
    lp = set(roots_lp(p, q, p1))
    total = np.zeros((1 << m, 1 << m), dtype=complex)
    for a in us:
        for b in us:
            if not compact(a, p) or compact(b, p):
                continue
            d = (a[0], b[0]) if a[1] == b[1] else (a[1], b[1]) if a[0] == b[0] else None
            if d is None:
                continue
            c = (min(d), max(d))
            if c not in lp:
                continue
            xi, eta = l.get(("X", c), 0.0), l.get(("Y", c), 0.0)
            N = nconst(a, b)
            ca, cb = cr[a], cr[b]
            total += 1j * N / S2 * ((xi + 1j * eta) * ca @ cb.T - (xi - 1j * eta) * cb @ ca.T)
    return total


def literal_n(n):
    """N_{-a,b} read off [E_{-a}, E_b] for E_{(i,j)} = e_ij."""
    def nconst(a, b):
        e_neg_a, e_b = unit(n, a[1], a[0]), unit(n, *b)
        c = e_neg_a @ e_b - e_b @ e_neg_a
        nz = np.argwhere(np.abs(c) > 0)
        if len(nz) != 1:
            return 0
        r, s = nz[0]
        return int(round(c[r, s].real))
    return nconst
