"""Sparse operators on the exterior algebra of u.

A basis element Z_S of the exterior algebra is a subset S of the ordered
roots of u, stored as a bitmask (bit k <-> k-th root).  Operators are sparse
dicts {(row mask, col mask): scalar}; ``masks`` lists the domain, so a
degree block is the same operator with fewer masks.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .field import Q2i, conj, is_zero
from .rootsys import ParabolicData, Root


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def masks_of_degree(m: int, k: int) -> tuple[int, ...]:
    return tuple(sum(1 << i for i in c) for c in itertools.combinations(range(m), k))


def all_masks(m: int) -> tuple[int, ...]:
    return tuple(x for k in range(m + 1) for x in masks_of_degree(m, k))


class ExtOp:
    __slots__ = ("m", "masks", "entries")

    def __init__(self, m: int, entries: dict | None = None, masks=None):
        self.m = m
        self.masks = tuple(masks) if masks is not None else all_masks(m)
        self.entries = {k: v for k, v in (entries or {}).items() if not is_zero(v)}

    @classmethod
    def identity(cls, m: int, masks=None) -> "ExtOp":
        op = cls(m, masks=masks)
        op.entries = {(s, s): Q2i(1) for s in op.masks}
        return op

    def _like(self, entries: dict) -> "ExtOp":
        return ExtOp(self.m, entries, self.masks)

    def __bool__(self):
        return bool(self.entries)

    def __add__(self, other: "ExtOp") -> "ExtOp":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return self._like(out)

    def __neg__(self):
        return self._like({k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExtOp":
        return self._like({k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "ExtOp") -> "ExtOp":
        cols: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            cols.setdefault(r, []).append((c, v))
        out: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in cols.get(k, ()):
                out[(r, c)] = out[(r, c)] + v * w if (r, c) in out else v * w
        return self._like(out)

    def anticommutator(self, other: "ExtOp") -> "ExtOp":
        return self @ other + other @ self

    def adjoint(self) -> "ExtOp":
        return self._like({(c, r): conj(v) for (r, c), v in self.entries.items()})

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for (r, c), v in self.entries.items():
            if c in vec:
                out[r] = out[r] + v * vec[c] if r in out else v * vec[c]
        return {k: v for k, v in out.items() if not is_zero(v)}

    def restrict(self, k: int) -> "ExtOp":
        if not 0 <= k <= self.m:
            raise ValueError(f"degree {k} outside 0..{self.m}")
        masks = masks_of_degree(self.m, k)
        keep = set(masks)
        return ExtOp(self.m, {(r, c): v for (r, c), v in self.entries.items()
                              if r in keep and c in keep}, masks)

    def preserves_degree(self) -> bool:
        return all(popcount(r) == popcount(c) for r, c in self.entries)

    def equals(self, other: "ExtOp", tol: float = 0.0) -> bool:
        return all(is_zero(v, tol) for v in (self - other).entries.values())

    def __eq__(self, other):
        return isinstance(other, ExtOp) and self.equals(other)

    def is_hermitian(self, tol: float = 0.0) -> bool:
        return self.equals(self.adjoint(), tol)

    def dense(self, masks=None) -> np.ndarray:
        masks = tuple(masks) if masks is not None else self.masks
        pos = {s: k for k, s in enumerate(masks)}
        out = np.zeros((len(masks), len(masks)), dtype=complex)
        for (r, c), v in self.entries.items():
            if r in pos and c in pos:
                out[pos[r], pos[c]] = complex(v)
        return out

    def __repr__(self):
        return f"ExtOp(m={self.m}, nnz={len(self.entries)})"


class ExteriorAlgebra:
    """e_g (wedge by Z_g) and i_g (contraction) for every root g of u."""

    def __init__(self, roots):
        self.roots: tuple[Root, ...] = tuple(roots)
        self.m = len(self.roots)
        self.index = {r: k for k, r in enumerate(self.roots)}
        self.masks = all_masks(self.m)
        self.e = {r: self._wedge(k) for k, r in enumerate(self.roots)}
        self.i = {r: self._contract(k) for k, r in enumerate(self.roots)}

    @property
    def dim(self) -> int:
        return 1 << self.m

    def degree_dim(self, k: int) -> int:
        return comb(self.m, k)

    @staticmethod
    def _sign(mask: int, k: int) -> int:
        # (-1)^{number of roots in S preceding the k-th}
        return -1 if popcount(mask & ((1 << k) - 1)) % 2 else 1

    def _wedge(self, k: int) -> ExtOp:
        bit = 1 << k
        return ExtOp(self.m, {(s | bit, s): Q2i(self._sign(s, k))
                              for s in self.masks if not s & bit})

    def _contract(self, k: int) -> ExtOp:
        bit = 1 << k
        return ExtOp(self.m, {(s & ~bit, s): Q2i(self._sign(s, k))
                              for s in self.masks if s & bit})

    def identity(self) -> ExtOp:
        return ExtOp.identity(self.m)

    def zero(self) -> ExtOp:
        return ExtOp(self.m)

    def mask_of(self, roots) -> int:
        return sum(1 << self.index[r] for r in roots)

    def wedge_vector(self, roots) -> dict:
        """Z_{r1} ^ ... ^ Z_{rk} in the given order, as {mask: coeff}."""
        vec = {0: Q2i(1)}
        for r in reversed(list(roots)):
            vec = self.e[r].apply(vec)
        return vec

    def label(self, mask: int) -> str:
        if not mask:
            return "1"
        return "^".join(f"Z{self.roots[k]}" for k in range(self.m) if mask >> k & 1)

    def anticommutation_violations(self) -> list[str]:
        out = []
        ident = self.identity()
        for a, b in itertools.product(self.roots, repeat=2):
            expected = ident if a == b else self.zero()
            if not self.e[a].anticommutator(self.i[b]).equals(expected):
                out.append(f"{{e{a}, i{b}}}")
            if self.e[a].anticommutator(self.e[b]) or self.i[a].anticommutator(self.i[b]):
                out.append(f"e/i self-anticommutation at {a},{b}")
        return out


def exterior_ops(pd: ParabolicData) -> ExteriorAlgebra:
    return ExteriorAlgebra(pd.u)
