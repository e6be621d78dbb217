"""The real orthonormal frame X_g, Y_g of T_e(G / L∩K) and its bracket table.

For a compact root a:      X_a = (E_a - E_-a)/sqrt2,   Y_a = -i(E_a + E_-a)/sqrt2
For a noncompact root b:   X_b = (E_b + E_-b)/sqrt2,   Y_b = -i(E_b - E_-b)/sqrt2

The frame is indexed by positive roots outside l∩k: the horizontal block E
(roots of u) and the fiber block F (roots of l∩p).  Brackets are computed
through the matrix realization and re-expanded in the frame, with the l∩k
component split off.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ConsistencyError
from .field import INV_SQRT2, I, Q2i
from .linalg import Sparse, sp_add, sp_scale
from .rootsys import (
    MatrixRealization,
    ParabolicData,
    Root,
    StructureConstants,
    matrix_oracle,
    root_diff,
    root_sum,
    structure_constants,
)

KINDS = ("X", "Y")


@dataclass(frozen=True, order=True)
class FrameVector:
    kind: str
    root: Root

    def __str__(self):
        return f"{self.kind}{self.root}"


def frame_vector(kind: str, root: Root) -> tuple[FrameVector, int]:
    """The frame vector for an arbitrary noncompact root, with its sign.

    X_{-d} = X_d and Y_{-d} = -Y_d for noncompact d, which is where the
    epsilon(d) factors of the bracket formulas come from.
    """
    if root.positive:
        return FrameVector(kind, root), 1
    return FrameVector(kind, -root), (1 if kind == "X" else -1)


@dataclass
class Frame:
    pd: ParabolicData
    horizontal: list[FrameVector]
    fiber: list[FrameVector]

    @property
    def vectors(self) -> list[FrameVector]:
        return self.horizontal + self.fiber

    def __len__(self):
        return len(self.horizontal) + len(self.fiber)

    def __iter__(self):
        return iter(self.vectors)

    def in_fiber(self, v: FrameVector) -> bool:
        return v.root in self.pd.l_p


def build_frame(pd: ParabolicData) -> Frame:
    """Horizontal block first, then the fiber; each sorted by (kind, root)."""
    horizontal = [FrameVector(k, r) for k in KINDS for r in pd.u]
    fiber = [FrameVector(k, r) for k in KINDS for r in pd.l_p]
    return Frame(pd, horizontal, fiber)


def frame_matrix(mr: MatrixRealization, v: FrameVector) -> Sparse:
    a = v.root
    ea, ena = mr.E(a), mr.E(-a)
    compact = a.compact(mr.pd.p)
    if v.kind == "X":
        m = sp_add(ea, ena, scale=-1 if compact else 1)
        return sp_scale(m, INV_SQRT2)
    m = sp_add(ea, ena, scale=1 if compact else -1)
    return sp_scale(m, -I * INV_SQRT2)


@dataclass
class BracketEntry:
    """A bracket re-expanded as E-part + F-part + (l∩k part)."""

    e_part: dict[FrameVector, Q2i] = field(default_factory=dict)
    f_part: dict[FrameVector, Q2i] = field(default_factory=dict)
    k_part: Sparse = field(default_factory=dict)

    def frame_part(self) -> dict[FrameVector, Q2i]:
        return {**self.e_part, **self.f_part}


class FrameBrackets:
    """Oracle-backed bracket table of one frame."""

    def __init__(self, pd: ParabolicData):
        self.pd = pd
        self.frame = build_frame(pd)
        self.mr = matrix_oracle(pd)
        self.mats = {v: frame_matrix(self.mr, v) for v in self.frame}
        self._cache: dict[tuple[FrameVector, FrameVector], BracketEntry] = {}

    def is_lk_entry(self, r: int, c: int) -> bool:
        if r == c:
            return True
        return Root(min(r, c), max(r, c)) in self.pd.l_k

    def decompose(self, m: Sparse) -> BracketEntry:
        entry = BracketEntry()
        rest = dict(m)
        for v in self.frame:
            fm = self.mats[v]
            c = self.mr.inner(m, fm)
            if not c:
                continue
            if not c.is_real():
                raise ConsistencyError(
                    "frame-expressibility", f"non-real coefficient {c} on {v}")
            (entry.f_part if self.frame.in_fiber(v) else entry.e_part)[v] = c
            rest = sp_add(rest, fm, scale=-c)
        entry.k_part = {k: x for k, x in rest.items() if self.is_lk_entry(*k)}
        leftover = {k: x for k, x in rest.items() if not self.is_lk_entry(*k)}
        if leftover:
            raise ConsistencyError(
                "frame-expressibility",
                f"component outside frame + l∩k: {leftover}")
        return entry

    def bracket(self, u: FrameVector, v: FrameVector) -> BracketEntry:
        key = (u, v)
        if key not in self._cache:
            self._cache[key] = self.decompose(
                self.mr.bracket(self.mats[u], self.mats[v]))
        return self._cache[key]


def frame_bracket(u: FrameVector, v: FrameVector, pd: ParabolicData) -> BracketEntry:
    return FrameBrackets(pd).bracket(u, v)


def gram_matrix(pd: ParabolicData) -> list[list[Q2i]]:
    fb = FrameBrackets(pd)
    vs = fb.frame.vectors
    return [[fb.mr.inner(fb.mats[a], fb.mats[b]) for b in vs] for a in vs]


def _add(out: dict, v: FrameVector, c) -> None:
    if not c:
        return
    out[v] = out.get(v, Q2i()) + c
    if not out[v]:
        del out[v]


def symbolic_bracket(u: FrameVector, v: FrameVector, pd: ParabolicData,
                     sc: StructureConstants | None = None) -> dict[FrameVector, Q2i]:
    """Closed-form bracket of a compact-root frame vector with a noncompact one.

    Arguments may come in either order; the result is the full frame expansion.
    """
    sc = sc or structure_constants(pd)
    ua, va = u.root.compact(pd.p), v.root.compact(pd.p)
    if ua and not va:
        return _compact_noncompact(u, v, sc)
    if va and not ua:
        return {k: -c for k, c in _compact_noncompact(v, u, sc).items()}
    raise ValueError("symbolic_bracket needs one compact and one noncompact root")


def _compact_noncompact(u: FrameVector, v: FrameVector,
                        sc: StructureConstants) -> dict[FrameVector, Q2i]:
    a, b = u.root, v.root
    out: dict[FrameVector, Q2i] = {}
    plus = root_sum(a, b)
    minus = root_diff(a, b)
    n_plus = sc.N(a, b) if plus else 0
    n_minus = sc.N(a, -b) if minus else 0
    eps = minus.epsilon() if minus else 0
    h = INV_SQRT2
    if plus is not None and not plus.positive:
        raise ValueError(f"{a}+{b} is a negative root")
    pair = u.kind + v.kind
    if pair == "XX":
        if n_plus:
            _add(out, FrameVector("X", plus), h * n_plus)
        if n_minus:
            _add(out, FrameVector("X", minus.abs()), h * n_minus)
    elif pair == "XY":
        if n_plus:
            _add(out, FrameVector("Y", plus), h * n_plus)
        if n_minus:
            _add(out, FrameVector("Y", minus.abs()), -h * eps * n_minus)
    elif pair == "YX":
        if n_plus:
            _add(out, FrameVector("Y", plus), h * n_plus)
        if n_minus:
            _add(out, FrameVector("Y", minus.abs()), h * eps * n_minus)
    else:
        if n_plus:
            _add(out, FrameVector("X", plus), -h * n_plus)
        if n_minus:
            _add(out, FrameVector("X", minus.abs()), h * n_minus)
    return out


@dataclass
class FrameCheck:
    ok: bool
    checked: int
    diffs: list[str]

    def __bool__(self):
        return self.ok


def verify_frame_relations(pd: ParabolicData,
                           sc: StructureConstants | None = None) -> FrameCheck:
    """Compare closed-form brackets with oracle brackets over the whole frame.

    Compact x noncompact pairs must match exactly; every other pair of frame
    vectors must have zero fiber component.
    """
    sc = sc or structure_constants(pd)
    fb = FrameBrackets(pd)
    diffs, checked = [], 0
    for u, v in itertools.combinations(fb.frame.vectors, 2):
        entry = fb.bracket(u, v)
        uc, vc = u.root.compact(pd.p), v.root.compact(pd.p)
        in_u = u.root in pd.u and v.root in pd.u
        if in_u and uc != vc:
            checked += 1
            expected = symbolic_bracket(u, v, pd, sc)
            got = entry.frame_part()
            if expected != got or entry.k_part:
                diffs.append(f"[{u},{v}]: formula {_fmt(expected)} vs oracle "
                             f"{_fmt(got)} (l∩k part {entry.k_part or 0})")
        elif entry.f_part:
            checked += 1
            diffs.append(f"[{u},{v}] has fiber part {_fmt(entry.f_part)}")
    return FrameCheck(not diffs, checked, diffs)


def _fmt(combo: dict) -> str:
    if not combo:
        return "0"
    return " + ".join(f"({c}){v}" for v, c in sorted(combo.items()))
