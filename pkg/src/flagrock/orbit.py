"""Coadjoint orbit data: linear forms, the skew form B_l, hypothesis (H),
the polarization and the induced representation pi_l.

pi_l is realized on functions of the transverse coordinates (x_r, y_r),
one pair per root r outside the polarization:
    pi(w_k) = d/dv_k + i l(w_k)                 (transverse basis vectors)
    pi(h)   = i l(h) + i sum_k B_l(w_k, h) v_k  (h in the polarization)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    ConsistencyError,
    HypothesisFailedError,
    InvalidFormError,
    UnsupportedFormError,
)
from .diffops import DiffOp, Poly
from .field import I, INV_SQRT2, SQRT2, Q2i, as_scalar, is_exact, is_zero
from .linalg import rank
from .nilpotent import NilpotentAlgebra, OrthogonalSequence
from .realframe import FrameVector
from .rootsys import ParabolicData, Root, root_diff, structure_constants


@dataclass
class LinearForm:
    """l in n0^*, stored by its values on frame vectors (xi on X, eta on Y)."""

    coords: dict[FrameVector, object] = field(default_factory=dict)

    def __post_init__(self):
        self.coords = {v: as_scalar(c) for v, c in self.coords.items()
                       if not is_zero(as_scalar(c))}

    def __call__(self, v: FrameVector):
        return self.coords.get(v, Q2i())

    def xi(self, root: Root):
        return self(FrameVector("X", root))

    def eta(self, root: Root):
        return self(FrameVector("Y", root))

    def on_combo(self, n: NilpotentAlgebra, combo: dict):
        return sum((c * self(n.basis[k]) for k, c in combo.items()), Q2i())

    def scaled(self, c) -> "LinearForm":
        return LinearForm({v: c * x for v, x in self.coords.items()})

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coords.values())

    def satisfies_orbite(self, pd: ParabolicData) -> bool:
        """Zero on every horizontal (layer-1) vector."""
        return all(v.root in pd.l_p for v in self.coords)

    def support(self) -> set[Root]:
        return {v.root for v in self.coords}


def _positive(w) -> bool:
    if isinstance(w, Q2i):
        return w.is_real() and w.sign() > 0
    return isinstance(w, (int, float)) and w > 0 or (
        isinstance(w, complex) and w.imag == 0 and w.real > 0)


def canonical_form(gamma: OrthogonalSequence, weights) -> LinearForm:
    """xi_{gamma_i} = weights[i]; every other coordinate zero."""
    weights = [as_scalar(w) for w in weights]
    if len(gamma) == 0:
        raise InvalidFormError("empty strongly orthogonal sequence")
    if len(weights) != len(gamma):
        raise InvalidFormError(f"{len(weights)} weights for {len(gamma)} roots")
    for w in weights:
        if not _positive(w):
            raise InvalidFormError(f"weight {w} is not positive")
    return LinearForm({FrameVector("X", g): w for g, w in zip(gamma, weights)})


def default_weights(gamma: OrthogonalSequence) -> list[Q2i]:
    # weight sqrt2 makes r = 1 for every matched root
    return [SQRT2] * len(gamma)


class SkewForm:
    """B_l(u, v) = l([[u, v]]) over the n0 basis, with its distinguished block A."""

    def __init__(self, l: LinearForm, n: NilpotentAlgebra):
        self.l = l
        self.n = n
        dim = n.dim
        self.matrix = [[Q2i()] * dim for _ in range(dim)]
        for a, b in itertools.product(range(dim), range(dim)):
            combo = n.bracket_basis(a, b)
            if combo:
                self.matrix[a][b] = l.on_combo(n, combo)
        pd = n.pd
        self.row_vectors = [FrameVector(k, r) for r in pd.u_k for k in ("X", "Y")]
        self.col_vectors = [FrameVector(k, r) for r in pd.u_p for k in ("X", "Y")]

    def __call__(self, u: FrameVector, v: FrameVector):
        return self.matrix[self.n.index[u]][self.n.index[v]]

    @cached_property
    def A(self) -> list[list]:
        return [[self(u, v) for v in self.col_vectors] for u in self.row_vectors]

    @cached_property
    def rank(self) -> int:
        return rank(self.matrix) if self.matrix else 0

    @cached_property
    def rank_A(self) -> int:
        if not self.row_vectors or not self.col_vectors:
            return 0
        return rank(self.A)

    def is_skew(self) -> bool:
        m = self.matrix
        return all(m[a][b] == -m[b][a]
                   for a in range(len(m)) for b in range(len(m)))

    def expected_cell(self, a: Root, b: Root) -> list[list]:
        """(N'_{a,-b}/sqrt2) [[xi, -eps eta], [eps eta, xi]] at c = |a - b|."""
        pd = self.n.pd
        d = root_diff(a, b)
        if d is None or d.abs() not in pd.l_p:
            return [[Q2i(), Q2i()], [Q2i(), Q2i()]]
        n_prime = structure_constants(pd).N(a, -b)
        c, eps = d.abs(), d.epsilon()
        xi, eta = self.l.xi(c), self.l.eta(c)
        f = INV_SQRT2 * n_prime
        return [[f * xi, -f * eps * eta], [f * eps * eta, f * xi]]


def bl_and_A(l: LinearForm, n: NilpotentAlgebra) -> SkewForm:
    return SkewForm(l, n)


def check_hypothesis_H(sf: SkewForm) -> bool:
    return sf.rank_A == min(len(sf.row_vectors), len(sf.col_vectors))


@dataclass
class Polarization:
    basis: list[int]
    transverse: list[int]
    case: str  # "first" or "second"

    @property
    def codim(self) -> int:
        return len(self.transverse)


def choose_polarization(sf: SkewForm, pd: ParabolicData) -> Polarization:
    if not check_hypothesis_H(sf):
        raise HypothesisFailedError(
            f"rank A = {sf.rank_A} < {min(len(sf.row_vectors), len(sf.col_vectors))}")
    n = sf.n
    case = "first" if pd.t >= pd.s else "second"
    # first case: h0 = p0 (noncompact horizontal + fiber); second: compact horizontal + fiber
    keep_compact = case == "second"
    basis, transverse = [], []
    for k, v in enumerate(n.basis):
        if n.layer(k) == 2 or v.root.compact(pd.p) == keep_compact:
            basis.append(k)
        else:
            transverse.append(k)
    pol = Polarization(basis, transverse, case)
    for a, b in itertools.combinations(basis, 2):
        if n.bracket_basis(a, b):
            raise ConsistencyError("polarization-abelian",
                                   f"[[{n.basis[a]},{n.basis[b]}]] != 0")
        if not is_zero(sf.matrix[a][b]):
            raise ConsistencyError("polarization-isotropic",
                                   f"B_l({n.basis[a]},{n.basis[b]}) != 0")
    if 2 * pol.codim != sf.rank:
        raise ConsistencyError("polarization-codimension",
                               f"codim {pol.codim} vs rank B_l / 2 = {sf.rank / 2}")
    return pol


@dataclass
class Representation:
    """pi_l on the basis of n0, as first-order polynomial-coefficient operators."""

    n: NilpotentAlgebra
    l: LinearForm
    polarization: Polarization
    variables: list[FrameVector]  # transverse vector whose coordinate is each variable
    ops: dict[FrameVector, DiffOp]

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def case(self) -> str:
        return self.polarization.case

    def var_name(self, k: int) -> str:
        v = self.variables[k]
        return f"{v.kind.lower()}{v.root}"

    def var_roots(self) -> list[Root]:
        return [v.root for v in self.variables]

    def of_combo(self, combo: dict) -> DiffOp:
        out = DiffOp(self.nvars)
        for k, c in combo.items():
            out = out + self.ops[self.n.basis[k]].scale(c)
        return out


def realize_rep(l: LinearForm, pol: Polarization, n: NilpotentAlgebra) -> Representation:
    pd = n.pd
    if not l.satisfies_orbite(pd):
        raise UnsupportedFormError(
            "the linear form must vanish on the horizontal directions")
    # variables ordered (x_r, y_r) by root
    transverse = sorted((n.basis[k] for k in pol.transverse),
                        key=lambda v: (v.root, v.kind))
    nv = len(transverse)
    var_of = {v: k for k, v in enumerate(transverse)}
    sf_cache: dict[tuple[int, int], object] = {}

    def b_l(a: int, b: int):
        if (a, b) not in sf_cache:
            combo = n.bracket_basis(a, b)
            sf_cache[(a, b)] = l.on_combo(n, combo) if combo else Q2i()
        return sf_cache[(a, b)]

    ops: dict[FrameVector, DiffOp] = {}
    for k, v in enumerate(n.basis):
        lv = l(v)
        if v in var_of:
            op = DiffOp.partial(nv, var_of[v])
            if not is_zero(lv):
                op = op + DiffOp.const(nv, I * lv)
        else:
            poly = Poly.const(nv, lv) if not is_zero(lv) else Poly(nv)
            for w in transverse:
                c = b_l(n.index[w], k)
                if not is_zero(c):
                    poly = poly + Poly.var(nv, var_of[w], c)
            op = DiffOp.mult(poly.scale(I))
        ops[v] = op
    return Representation(n, l, pol, transverse, ops)


def check_rep_homomorphism(rep: Representation, n: NilpotentAlgebra | None = None,
                           tol: float = 1e-12) -> bool:
    """pi([[u, v]]) == [pi(u), pi(v)] for every pair of basis vectors."""
    n = n or rep.n
    for a, b in itertools.combinations(range(n.dim), 2):
        lhs = rep.of_combo(n.bracket_basis(a, b))
        rhs = rep.ops[n.basis[a]].commutator(rep.ops[n.basis[b]])
        if not lhs.equals(rhs, tol):
            return False
    return True


@dataclass
class InductionCheck:
    forms_independent: bool
    l_recovered: bool
    kernel_is_polarization: bool
    triangular: bool

    def __bool__(self):
        return (self.forms_independent and self.l_recovered
                and self.kernel_is_polarization and self.triangular)


def check_induction_hypotheses(rep: Representation) -> InductionCheck:
    """The hypotheses under which pi is unitarily equivalent to Ind_H^N e^{il}.

    pi(X) = sum_k P_k(X) d_k + i Q(X) with P_k depending on earlier variables
    only, the forms X -> P_k(0; X) linearly independent, l(X) = Q(0; X), and
    h0 = intersection of their kernels.
    """
    n, nv = rep.n, rep.nvars
    zero = (0,) * nv
    rows, triangular, l_ok = [], True, True
    for k in range(nv):
        key = tuple(1 if j == k else 0 for j in range(nv))
        row = []
        for v in n.basis:
            coeff = rep.ops[v].coefficient(key)
            if any(e[j] for e in coeff.terms for j in range(k, nv)):
                triangular = False
            row.append(coeff.at_zero())
        rows.append(row)
    for v in n.basis:
        q0 = rep.ops[v].coefficient(zero).at_zero()
        if not is_zero(q0 - I * rep.l(v), 1e-12):
            l_ok = False
        if rep.ops[v].order() > 1:
            triangular = False
    independent = rank(rows) == nv if nv else True
    kernel = [k for k in range(n.dim) if all(is_zero(r[k], 1e-12) for r in rows)]
    return InductionCheck(independent, l_ok,
                          sorted(kernel) == sorted(rep.polarization.basis), triangular)
