"""The graded 2-step nilpotent algebra n0 on T_e(G / L∩K).

Layer 1 is the horizontal block (roots of u), layer 2 the fiber block
(roots of l∩p).  The only nonzero brackets are compact x noncompact pairs
of layer 1, landing in layer 2 with coefficient N'_{a,-b} / sqrt2, where
N' keeps N_{a,-b} only when a - b is (up to sign) a root of l∩p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ConsistencyError, NoFiberRootsError, UniquenessViolation
from .field import INV_SQRT2, Q2i
from .linalg import rank
from .realframe import Frame, FrameBrackets, FrameVector, build_frame
from .rootsys import (
    ParabolicData,
    Root,
    StructureConstants,
    root_diff,
    root_sum,
    structure_constants,
)

Combo = dict  # {basis index: scalar}


class NilpotentAlgebra:
    def __init__(self, pd: ParabolicData, frame: Frame,
                 table: dict[tuple[int, int], Combo]):
        self.pd = pd
        self.frame = frame
        self.basis: list[FrameVector] = frame.vectors
        self.layer1: list[FrameVector] = frame.horizontal
        self.layer2: list[FrameVector] = frame.fiber
        self.index = {v: k for k, v in enumerate(self.basis)}
        # antisymmetric: both (a, b) and (b, a) stored
        self._table = table

    @property
    def dim(self) -> int:
        return len(self.basis)

    def layer(self, k: int) -> int:
        return 1 if k < len(self.layer1) else 2

    def bracket_basis(self, a: int, b: int) -> Combo:
        return self._table.get((a, b), {})

    def bracket_vectors(self, u: FrameVector, v: FrameVector) -> dict[FrameVector, Q2i]:
        combo = self.bracket_basis(self.index[u], self.index[v])
        return {self.basis[k]: c for k, c in combo.items()}

    def bracket(self, x: Combo, y: Combo) -> Combo:
        out: Combo = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for k, c in self.bracket_basis(a, b).items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return {k: c for k, c in out.items() if c}

    @cached_property
    def nonzero_pairs(self) -> list[tuple[int, int]]:
        return sorted(k for k in self._table if k[0] < k[1])

    def violations(self) -> list[str]:
        """2-step grading, antisymmetry and Jacobi, checked on the basis."""
        out = []
        n = self.dim
        for (a, b), combo in self._table.items():
            if self.layer(a) != 1 or self.layer(b) != 1:
                out.append(f"bracket [{self.basis[a]},{self.basis[b]}] outside layer1 x layer1")
            if any(self.layer(k) != 2 for k in combo):
                out.append(f"bracket [{self.basis[a]},{self.basis[b]}] not in layer2")
            neg = self._table.get((b, a), {})
            if {k: -c for k, c in combo.items()} != neg:
                out.append(f"antisymmetry fails at {self.basis[a]},{self.basis[b]}")
        for a, b, c in itertools.combinations(range(n), 3):
            total: Combo = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                inner = self.bracket_basis(y, z)
                for k, v in self.bracket({x: 1}, inner).items():
                    total[k] = total.get(k, 0) + v
            if any(total.values()):
                out.append(f"Jacobi fails at {self.basis[a]},{self.basis[b]},{self.basis[c]}")
        return out


def _nil_pair(u: FrameVector, v: FrameVector, pd: ParabolicData,
              sc: StructureConstants) -> dict[FrameVector, Q2i]:
    """Layer-2 bracket of a compact-root vector u with a noncompact-root v."""
    a, b = u.root, v.root
    d = root_diff(a, b)
    if d is None or d.abs() not in pd.l_p:
        return {}
    n_prime = sc.N(a, -b)
    if not n_prime:
        return {}
    c, eps, h = d.abs(), d.epsilon(), INV_SQRT2
    pair = u.kind + v.kind
    if pair == "XX":
        return {FrameVector("X", c): h * n_prime}
    if pair == "XY":
        return {FrameVector("Y", c): -h * eps * n_prime}
    if pair == "YX":
        return {FrameVector("Y", c): h * eps * n_prime}
    return {FrameVector("X", c): h * n_prime}


def nilpotentize(pd: ParabolicData, sc: StructureConstants | None = None) -> NilpotentAlgebra:
    sc = sc or structure_constants(pd)
    frame = build_frame(pd)
    index = {v: k for k, v in enumerate(frame.vectors)}
    table: dict[tuple[int, int], Combo] = {}
    for u, v in itertools.product(frame.horizontal, frame.horizontal):
        uc, vc = u.root.compact(pd.p), v.root.compact(pd.p)
        if uc and not vc:
            combo = _nil_pair(u, v, pd, sc)
            sign = 1
        elif vc and not uc:
            combo = _nil_pair(v, u, pd, sc)
            sign = -1
        else:
            continue
        if combo:
            table[(index[u], index[v])] = {index[w]: sign * c for w, c in combo.items()}
    return NilpotentAlgebra(pd, frame, table)


def oracle_nilpotent_violations(n: NilpotentAlgebra) -> list[str]:
    """Compare the nilpotent table with the fiber part of oracle brackets."""
    fb = FrameBrackets(n.pd)
    out = []
    for u, v in itertools.product(n.layer1, n.layer1):
        if u == v:
            continue
        expected = fb.bracket(u, v).f_part
        got = n.bracket_vectors(u, v)
        if expected != got:
            out.append(f"[[{u},{v}]]: table {got} vs oracle fiber part {expected}")
    return out


def check_hormander(pd: ParabolicData, n: NilpotentAlgebra | None = None) -> bool:
    """Is wedge^2(layer1) -> layer2 onto?  Exact rank computation."""
    n = n or nilpotentize(pd)
    if not n.layer2:
        return True
    off = len(n.layer1)
    rows = []
    for a, b in itertools.combinations(range(len(n.layer1)), 2):
        combo = n.bracket_basis(a, b)
        if combo:
            rows.append([combo.get(off + k, Q2i()) for k in range(len(n.layer2))])
    return bool(rows) and rank(rows) == len(n.layer2)


@dataclass(frozen=True)
class OrthogonalSequence:
    roots: tuple[Root, ...]

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def r(self) -> int:
        return len(self.roots)


def strongly_orthogonal(roots) -> bool:
    for a, b in itertools.combinations(roots, 2):
        if a == b or a == -b:
            return False
        if root_sum(a, b) is not None or root_diff(a, b) is not None:
            return False
    return True


def strongly_orthogonal_sequence(pd: ParabolicData) -> OrthogonalSequence:
    """A maximal strongly orthogonal sequence in l∩p of length min(p2, q).

    Tries gamma_i = e_{p1+i} - e_{p+q-i} first; that formula runs out of room
    on the q side when r = q, in which case the anti-diagonal
    gamma_i = e_{p1+i} - e_{p+q+1-i} is used.  Either way the result is
    checked exhaustively before it is returned.
    """
    if not pd.l_p:
        raise NoFiberRootsError(f"l∩p has no roots for {pd.key()} (p2 = 0)")
    r = min(pd.p2, pd.q)
    p, q, p1 = pd.p, pd.q, pd.p1
    cands = [Root(p1 + i, p + q - i) for i in range(1, r + 1)
             if p + q - i > p]
    if len(cands) != r or not strongly_orthogonal(cands):
        cands = [Root(p1 + i, p + q + 1 - i) for i in range(1, r + 1)]
    gamma = OrthogonalSequence(tuple(cands))
    if not all(g in pd.l_p for g in gamma) or not strongly_orthogonal(gamma):
        raise ConsistencyError("strong-orthogonality", f"bad sequence {gamma.roots}")
    # maximality: nothing in l∩p can be appended
    for extra in pd.l_p:
        if extra not in gamma.roots and strongly_orthogonal(gamma.roots + (extra,)):
            raise ConsistencyError("strong-orthogonality",
                                   f"{gamma.roots} extends by {extra}")
    uniqueness_report(pd, gamma)
    return gamma


@dataclass
class UniquenessReport:
    matches: dict[Root, list[tuple[int, Root]]] = field(default_factory=dict)
    all_compact_match: bool = False
    all_noncompact_match: bool = False

    @property
    def dichotomy(self) -> bool:
        return self.all_compact_match or self.all_noncompact_match

    def partner(self, root: Root) -> Root | None:
        m = self.matches.get(root)
        return m[0][1] if m else None


def uniqueness_report(pd: ParabolicData, gamma: OrthogonalSequence) -> UniquenessReport:
    u = set(pd.u)
    matches: dict[Root, list[tuple[int, Root]]] = {}
    for a in pd.u:
        found = []
        for i, g in enumerate(gamma):
            for shifted in (root_sum(a, g), root_diff(a, g)):
                if shifted is not None and shifted in u:
                    found.append((i, shifted))
        if len(found) > 1:
            raise UniquenessViolation(f"{a} matches {found}")
        matches[a] = found
    return UniquenessReport(
        matches=matches,
        all_compact_match=bool(pd.u_k) and all(matches[a] for a in pd.u_k),
        all_noncompact_match=bool(pd.u_p) and all(matches[b] for b in pd.u_p),
    )
