"""Type-A root data for u(p,q) and the parabolic split attached to
L = U(p1) x U(p2, q).

Roots are e_i - e_j with 1-based indices.  Root vectors are normalized as
matrix units, E_(i,j) = e_ij, which makes every structure constant 0 or +-1
and gives an orthonormal basis for <X, Y> = tr(X Y^*).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ConsistencyError, InvalidParabolicError
from .field import Q2i
from .linalg import Sparse, sp_adjoint, sp_commutator, sp_equal, sp_scale


@dataclass(frozen=True, order=True)
class Root:
    """The root e_i - e_j."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"not a root: e_{self.i} - e_{self.j}")

    @property
    def positive(self) -> bool:
        return self.i < self.j

    def compact(self, p: int) -> bool:
        return (self.i <= p) == (self.j <= p)

    def __neg__(self) -> "Root":
        return Root(self.j, self.i)

    def abs(self) -> "Root":
        return self if self.positive else -self

    def epsilon(self) -> int:
        return 1 if self.positive else -1

    def vector(self, n: int) -> tuple[int, ...]:
        v = [0] * n
        v[self.i - 1] += 1
        v[self.j - 1] -= 1
        return tuple(v)

    def __str__(self):
        return f"({self.i},{self.j})"


def root_sum(a: Root, b: Root) -> Root | None:
    """a + b if it is a root, else None (a + b = 0 also gives None)."""
    if a.j == b.i and a.i != b.j:
        return Root(a.i, b.j)
    if a.i == b.j and a.j != b.i:
        return Root(b.i, a.j)
    return None


def root_diff(a: Root, b: Root) -> Root | None:
    return root_sum(a, -b)


def all_roots(n: int) -> list[Root]:
    return [Root(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


@dataclass(frozen=True)
class ParabolicData:
    p: int
    q: int
    p1: int
    u: tuple[Root, ...] = field(init=False)
    u_k: tuple[Root, ...] = field(init=False)
    u_p: tuple[Root, ...] = field(init=False)
    l_p: tuple[Root, ...] = field(init=False)
    l_k: tuple[Root, ...] = field(init=False)

    def __post_init__(self):
        n, p, p1 = self.n, self.p, self.p1
        # index blocks: [1..p1] | (p1..p] | (p..n]
        block = lambda k: 0 if k <= p1 else (1 if k <= p else 2)
        pos = [r for r in all_roots(n) if r.positive]
        u = tuple(r for r in pos if block(r.i) == 0 and block(r.j) > 0)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "u_k", tuple(r for r in u if r.compact(p)))
        object.__setattr__(self, "u_p", tuple(r for r in u if not r.compact(p)))
        object.__setattr__(
            self, "l_p",
            tuple(r for r in pos if block(r.i) == 1 and block(r.j) == 2))
        object.__setattr__(
            self, "l_k",
            tuple(r for r in pos if block(r.i) == block(r.j)))

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def p2(self) -> int:
        return self.p - self.p1

    @property
    def s(self) -> int:
        return len(self.u_k)

    @property
    def t(self) -> int:
        return len(self.u_p)

    @property
    def degenerate(self) -> bool:
        """p2 = 0: the fiber l∩p is trivial and the Rockland analysis does not apply."""
        return not self.l_p

    @cached_property
    def u_index(self) -> dict[Root, int]:
        return {r: k for k, r in enumerate(self.u)}

    def key(self) -> tuple[int, int, int]:
        return (self.p, self.q, self.p1)

    def __str__(self):
        return f"U({self.p},{self.q}) / U({self.p1}) x U({self.p2},{self.q})"


def build_parabolic(p: int, q: int, p1: int) -> ParabolicData:
    for name, val in (("p", p), ("q", q), ("p1", p1)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise InvalidParabolicError(f"{name} must be an integer, got {val!r}")
    if p < 1 or q < 1:
        raise InvalidParabolicError(f"need p >= 1 and q >= 1, got p={p}, q={q}")
    if not 1 <= p1 <= p:
        raise InvalidParabolicError(f"need 1 <= p1 <= p, got p1={p1}, p={p}")
    return ParabolicData(p, q, p1)


def valid_parameters(max_n: int):
    """All (p, q, p1) with p + q <= max_n, in lexicographic order."""
    for n in range(2, max_n + 1):
        for p in range(1, n):
            for p1 in range(1, p + 1):
                yield (p, n - p, p1)


class StructureConstants:
    """N_{a,b} with [E_a, E_b] = N_{a,b} E_{a+b}, for the matrix-unit basis."""

    def __init__(self, n: int, table: dict[tuple[Root, Root], int]):
        self.n = n
        self.table = table

    def N(self, a: Root, b: Root) -> int:
        return self.table.get((a, b), 0)

    def __getitem__(self, key):
        return self.N(*key)

    def violations(self) -> list[str]:
        out = []
        roots = all_roots(self.n)
        for a, b in itertools.product(roots, roots):
            nab = self.N(a, b)
            if nab != -self.N(b, a):
                out.append(f"antisymmetry at {a},{b}")
            if nab != -self.N(-a, -b):
                out.append(f"N(a,b) = -N(-a,-b) fails at {a},{b}")
            if (nab != 0) != (root_sum(a, b) is not None):
                out.append(f"support mismatch at {a},{b}")
            if nab not in (0, 1, -1):
                out.append(f"N({a},{b}) = {nab} not in {{0, +-1}}")
        return out


def structure_constants(pd: ParabolicData) -> StructureConstants:
    # closed form of [e_ij, e_kl] = d_jk e_il - d_li e_kj
    table = {}
    roots = all_roots(pd.n)
    for a, b in itertools.product(roots, roots):
        if a.j == b.i and a.i != b.j:
            table[(a, b)] = 1
        elif a.i == b.j and a.j != b.i:
            table[(a, b)] = -1
    return StructureConstants(pd.n, table)


class MatrixRealization:
    """gl(n, C) with E_a = e_ij, H_a = e_ii - e_jj, as sparse exact matrices.

    The real form is u(p,q): conjugation X -> -J X^* J with J = diag(1_p, -1_q),
    Cartan involution theta(X) = J X J.
    """

    def __init__(self, pd: ParabolicData):
        self.pd = pd
        self.n = pd.n

    def E(self, a: Root) -> Sparse:
        return {(a.i, a.j): Q2i(1)}

    def H(self, a: Root) -> Sparse:
        return {(a.i, a.i): Q2i(1), (a.j, a.j): Q2i(-1)}

    def cartan(self, h) -> Sparse:
        return {(k + 1, k + 1): Q2i.coerce(x) for k, x in enumerate(h) if x}

    def _J(self, k: int) -> int:
        return 1 if k <= self.pd.p else -1

    def theta(self, m: Sparse) -> Sparse:
        return {(r, c): self._J(r) * self._J(c) * v for (r, c), v in m.items()}

    def conj(self, m: Sparse) -> Sparse:
        return sp_scale(self.theta(sp_adjoint(m)), -1)

    def bracket(self, a: Sparse, b: Sparse) -> Sparse:
        return sp_commutator(a, b)

    def inner(self, a: Sparse, b: Sparse):
        """<a, b> = tr(a b^*), the trace-form version of -B(a, theta(conj b))."""
        return sum((v * b[k].conjugate() for k, v in a.items() if k in b), Q2i())

    def is_real(self, m: Sparse) -> bool:
        return sp_equal(self.conj(m), m)


def matrix_oracle(pd: ParabolicData) -> MatrixRealization:
    return MatrixRealization(pd)


def oracle_structure_constant(mr: MatrixRealization, a: Root, b: Root) -> int:
    """Read N_{a,b} off a literal matrix commutator."""
    c = mr.bracket(mr.E(a), mr.E(b))
    s = root_sum(a, b)
    if s is None:
        if c and a != -b:
            raise ConsistencyError("structure-constants",
                                   f"[E{a}, E{b}] nonzero but {a}+{b} is not a root")
        return 0
    if not set(c) <= {(s.i, s.j)}:
        raise ConsistencyError("structure-constants", f"[E{a}, E{b}] = {c}")
    v = c.get((s.i, s.j), Q2i())
    return int(v.a)


def oracle_violations(pd: ParabolicData, sc: StructureConstants) -> list[str]:
    """Every disagreement between ``sc`` and literal matrix commutators."""
    mr = matrix_oracle(pd)
    roots = all_roots(pd.n)
    out = []
    for a, b in itertools.product(roots, roots):
        if a == -b:
            if not sp_equal(mr.bracket(mr.E(a), mr.E(b)), mr.H(a)):
                out.append(f"[E{a}, E{-a}] != H{a}")
            continue
        expected = sc.N(a, b)
        got = oracle_structure_constant(mr, a, b)
        if expected != got:
            out.append(f"N{a}{b}: table {expected}, oracle {got}")
    return out
