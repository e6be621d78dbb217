"""pi_l applied to the Laplacian symbol, the oscillator-plus-M splitting, and
kernel witnesses.

Under pi_l the symbol becomes
    sum_r D_r (x) 1 + 1 (x) sum_r M_r,
    D_r = -1/2 (d_x^2 + d_y^2) + 1/2 r^2 (x^2 + y^2)
with one oscillator per transverse root r.  D_r has ground energy r on the
Gaussian exp(-r (x^2 + y^2) / 2), so a vector v of the exterior algebra with
sum M_r v = -(sum r) v gives a kernel element Gaussian (x) v.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .diffops import DiffOp, Poly, apply_weighted, weighted_inner
from .errors import (
    ConsistencyError,
    HypothesisFailedError,
    NoFiberRootsError,
    ZeroVectorCollapseError,
)
from .exterior import ExteriorAlgebra, ExtOp, exterior_ops, masks_of_degree, popcount
from .field import I, INV_SQRT2, Q2i, as_scalar, conj, is_exact, is_zero
from .nilpotent import check_hormander, nilpotentize, strongly_orthogonal_sequence
from .orbit import (
    LinearForm,
    Representation,
    bl_and_A,
    canonical_form,
    check_hypothesis_H,
    check_induction_hypotheses,
    check_rep_homomorphism,
    choose_polarization,
    default_weights,
    realize_rep,
)
from .rootsys import ParabolicData, Root, structure_constants
from .symbol import ESymbol, fiber_pairs, laplacian_symbol, local_formula

FLOAT_TOL = 1e-10


# -- oscillator frequencies and M operators -----------------------------------

def _partners(pd: ParabolicData, root: Root):
    """(c, a, b) fiber pairs in which ``root`` is the compact a or noncompact b."""
    return [(c, a, b) for c, a, b in fiber_pairs(pd) if root in (a, b)]


def r_squared(l: LinearForm, pd: ParabolicData, root: Root):
    sc = structure_constants(pd)
    total = Q2i()
    for c, a, b in _partners(pd, root):
        nc = sc.N(a, -b)
        xi, eta = l.xi(c), l.eta(c)
        total = total + (nc * nc) * (xi * xi + eta * eta) * Q2i(1, 0) / 2
    return total


def compute_r(l: LinearForm, pd: ParabolicData, root: Root):
    """Exact value in Q(sqrt2) when the square root lies there, else float."""
    r2 = r_squared(l, pd, root)
    if isinstance(r2, Q2i):
        root_exact = r2.sqrt()
        if root_exact is not None:
            return root_exact
        return math.sqrt(float(r2))
    return math.sqrt(abs(complex(r2)))


def m_pair(l: LinearForm, pd: ParabolicData, ext: ExteriorAlgebra,
           c: Root, a: Root, b: Root) -> ExtOp:
    """(i N/sqrt2) [(xi + i eta) e_a i_b - (xi - i eta) e_b i_a], N = N_{-a,b}."""
    nc = structure_constants(pd).N(-a, b)
    xi, eta = l.xi(c), l.eta(c)
    pref = I * INV_SQRT2 * nc
    return ((ext.e[a] @ ext.i[b]).scale(pref * (xi + I * eta))
            - (ext.e[b] @ ext.i[a]).scale(pref * (xi - I * eta)))


@dataclass
class MOperator:
    root: Root
    r: object
    pairs: dict[Root, ExtOp]  # partner root -> M_{a,b}
    matrix: ExtOp

    def restrict(self, k: int) -> ExtOp:
        return self.matrix.restrict(k)


def build_M(l: LinearForm, pd: ParabolicData, root: Root,
            ext: ExteriorAlgebra | None = None) -> MOperator:
    ext = ext or exterior_ops(pd)
    pairs: dict[Root, ExtOp] = {}
    total = ext.zero()
    for c, a, b in _partners(pd, root):
        op = m_pair(l, pd, ext, c, a, b)
        pairs[b if root == a else a] = op
        total = total + op
    return MOperator(root, compute_r(l, pd, root), pairs, total)


@dataclass
class HermiteModel:
    roots: list[Root]
    r: dict[Root, object]

    @property
    def ground_energy(self):
        return sum((self.r[x] for x in self.roots), Q2i())

    def levels(self, max_total: int) -> list[float]:
        """Energies sum_r r (m_r + n_r + 1) over total polynomial degree <= max_total."""
        rs = [float(complex(self.r[x]).real) for x in self.roots]
        out = []
        for degs in _pair_degree_splits(len(rs), max_total):
            out.extend([sum(r * (d + 1) for r, d in zip(rs, degs))] * math.prod(
                d + 1 for d in degs))
        return sorted(out)


def _pair_degree_splits(npairs: int, max_total: int):
    for degs in itertools.product(range(max_total + 1), repeat=npairs):
        if sum(degs) <= max_total:
            yield degs


# -- the represented Laplacian ----------------------------------------------

class RepOp:
    """sum x^e d^a (x) A_{a,e}, with A an operator on the exterior algebra."""

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms: dict[tuple, ExtOp] = {k: a for k, a in (terms or {}).items() if a}

    def add(self, a: tuple, e: tuple, op: ExtOp) -> None:
        key = (a, e)
        if key in self.terms:
            op = self.terms[key] + op
        if op:
            self.terms[key] = op
        else:
            self.terms.pop(key, None)

    def add_product(self, ext_op: ExtOp, d: DiffOp) -> None:
        for a, poly in d.terms.items():
            for e, c in poly.terms.items():
                self.add(a, e, ext_op.scale(c))

    def equals(self, other: "RepOp", tol: float = 0.0) -> bool:
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            mine, theirs = self.terms.get(k), other.terms.get(k)
            if mine is None:
                mine = theirs.scale(0)
            if theirs is None:
                theirs = mine.scale(0)
            if not mine.equals(theirs, tol):
                return False
        return True

    def apply(self, state: dict[int, Poly], widths) -> dict[int, Poly]:
        """Act on sum_S P_S(x) g(x) Z_S, g the Gaussian with the given widths."""
        out: dict[int, Poly] = {}
        cache: dict[tuple, Poly] = {}
        for (a, e), op in self.terms.items():
            for (row, col), v in op.entries.items():
                if col not in state:
                    continue
                key = (col, a)
                if key not in cache:
                    cache[key] = apply_weighted(DiffOp(self.nvars, {a: Poly.const(self.nvars, Q2i(1))}),
                                                state[col], widths)
                q = cache[key]
                for k, ek in enumerate(e):
                    for _ in range(ek):
                        q = q.mul_var(k)
                term = q.scale(v)
                out[row] = out[row] + term if row in out else term
        return {k: p for k, p in out.items() if p}


@dataclass
class RepLaplacian:
    rep: Representation
    op: RepOp
    model: HermiteModel
    Ms: list[MOperator]
    ext: ExteriorAlgebra

    @property
    def widths(self) -> list:
        return [self.model.r[v.root] for v in self.rep.variables]

    @property
    def m_total(self) -> ExtOp:
        total = self.ext.zero()
        for m in self.Ms:
            total = total + m.matrix
        return total

    @property
    def exact(self) -> bool:
        return (all(is_exact(w) for w in self.widths)
                and all(is_exact(v) for m in self.Ms for v in m.matrix.entries.values()))


def oscillator(nvars: int, k: int, r2) -> DiffOp:
    """-1/2 d_k^2 + 1/2 r^2 x_k^2 on one variable."""
    e2 = tuple(2 if j == k else 0 for j in range(nvars))
    half = Q2i(1, 0) / 2
    return DiffOp(nvars, {e2: Poly.const(nvars, -half),
                          (0,) * nvars: Poly(nvars, {e2: half * r2})})


def rep_laplacian(rep: Representation, sym: ESymbol, pd: ParabolicData) -> RepLaplacian:
    """Substitute pi_l into the symbol and check the oscillator-plus-M splitting."""
    ext, nv = sym.ext, rep.nvars
    op = RepOp(nv)
    for word, a in sym.terms.items():
        d = DiffOp.const(nv, Q2i(1))
        for k in word:
            d = d * rep.ops[rep.n.basis[k]]
        op.add_product(a, d)

    roots = sorted(set(rep.var_roots()))
    Ms = [build_M(rep.l, pd, x, ext) for x in roots]
    model = HermiteModel(roots, {m.root: m.r for m in Ms})
    expected = RepOp(nv)
    ident = ext.identity()
    for k, v in enumerate(rep.variables):
        expected.add_product(ident, oscillator(nv, k, r_squared(rep.l, pd, v.root)))
    zero_key = ((0,) * nv, (0,) * nv)
    for m in Ms:
        expected.add(*zero_key, m.matrix)
    if not op.equals(expected, 1e-12):
        raise ConsistencyError(
            "rep-laplacian-decomposition",
            f"{pd.key()}: pi_l(symbol) is not sum D (x) 1 + 1 (x) sum M")
    return RepLaplacian(rep, op, model, Ms, ext)


# -- witnesses --------------------------------------------------------------

def _apply_vec(op: ExtOp, vec: dict) -> dict:
    return op.apply(vec)


def _vec_add(u: dict, v: dict, scale=1) -> dict:
    out = dict(u)
    for k, x in v.items():
        out[k] = out[k] + scale * x if k in out else scale * x
    return {k: x for k, x in out.items() if not is_zero(x, 1e-14)}


def _vec_close(u: dict, v: dict, tol: float) -> bool:
    return all(is_zero(x, tol) for x in _vec_add(u, v, -1).values())


def build_eigenvector(Ms: list[MOperator], sign: int, start: dict,
                      tol: float = 1e-12) -> dict:
    """v_k = (M_k + sign r_k) v_{k-1}; an eigenvector of every M_k for sign r_k."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    v = dict(start)
    for m in Ms:
        v = _vec_add(m.matrix.apply(v), v, sign * m.r)
        if not v:
            raise ZeroVectorCollapseError(f"recursion vanished at M{m.root}")
    for m in Ms:
        if not _vec_close(m.matrix.apply(v), {k: sign * m.r * x for k, x in v.items()}, tol):
            raise ConsistencyError("m-eigenvector",
                                   f"v is not an eigenvector of M{m.root}")
    return v


def product_vector(Ms: list[MOperator], start: dict) -> dict:
    """prod_k M_k applied to start, in the given order."""
    v = dict(start)
    for m in Ms:
        v = m.matrix.apply(v)
    return v


@dataclass
class KernelWitness:
    degree: int
    eigenvalue: object
    vector: dict[int, object]
    widths: list
    residual: float
    exact: bool
    route: str
    labels: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.residual == 0 if self.exact else self.residual < FLOAT_TOL


def state_norm(state: dict[int, Poly], widths) -> float:
    return math.sqrt(max(sum(weighted_inner(p, p, widths).real for p in state.values()), 0.0))


def kernel_residual(rl: RepLaplacian, vector: dict) -> tuple[float, bool]:
    """Norm of pi_l(Laplacian) on Gaussian (x) vector, and whether it is exact."""
    nv = rl.rep.nvars
    widths = rl.widths
    state = {k: Poly.const(nv, x) for k, x in vector.items()}
    out = rl.op.apply(state, widths)
    exact = rl.exact and all(is_exact(x) for x in vector.values())
    if exact and not out:
        return 0.0, True
    return state_norm(out, widths), exact


def hodge_star(ext: ExteriorAlgebra, vector: dict, antilinear: bool = True) -> dict:
    """Z_S -> sigma(S) Z_{S^c}, with Z_S ^ Z_{S^c} = sigma(S) Z_top."""
    full = (1 << ext.m) - 1
    out = {}
    for s, x in vector.items():
        out[full & ~s] = _shuffle_sign(s, ext.m) * (conj(x) if antilinear else x)
    return out


def _shuffle_sign(s: int, m: int) -> int:
    # sign of the permutation putting S then S^c in increasing order
    inversions, seen_c = 0, 0
    for k in range(m):
        if s >> k & 1:
            inversions += seen_c
        else:
            seen_c += 1
    return -1 if inversions % 2 else 1


def _degree(vector: dict) -> int:
    return popcount(next(iter(vector)))


def _witness(rl: RepLaplacian, vector: dict, eigenvalue, route: str) -> KernelWitness:
    res, exact = kernel_residual(rl, vector)
    return KernelWitness(
        degree=_degree(vector), eigenvalue=eigenvalue, vector=vector,
        widths=rl.widths, residual=res, exact=exact, route=route,
        labels=[rl.ext.label(s) for s in sorted(vector)])


def find_witnesses(rl: RepLaplacian) -> list[KernelWitness]:
    """The recursion witness in the primary degree and its dual-degree partner."""
    roots = rl.model.roots
    start = rl.ext.wedge_vector(roots)
    total = rl.model.ground_energy
    found: list[KernelWitness] = []
    eigvecs = {}
    for sign in (-1, 1):
        try:
            eigvecs[sign] = build_eigenvector(rl.Ms, sign, start)
        except ZeroVectorCollapseError:
            continue
    for sign, v in eigvecs.items():
        w = _witness(rl, v, sign * total, f"recursion(sign={sign:+d})")
        if w.ok:
            found.append(w)
            break
    for sign, v in eigvecs.items():
        for antilinear in (True, False):
            dual = hodge_star(rl.ext, v, antilinear)
            kind = "antilinear" if antilinear else "linear"
            w = _witness(rl, dual, -sign * total if antilinear else None,
                         f"duality({kind}, from sign={sign:+d})")
            if w.ok and all(x.degree != w.degree for x in found):
                w.eigenvalue = -total
                found.append(w)
                break
        else:
            continue
        break
    return found


# -- spectra ------------------------------------------------------------------

def m_spectrum(rl: RepLaplacian, k: int) -> list[float]:
    block = rl.m_total.dense(masks_of_degree(rl.ext.m, k))
    if not block.size:
        return []
    return [float(x) for x in np.linalg.eigvalsh(block)]


def m_spectra(rl: RepLaplacian) -> dict[int, list[float]]:
    return {k: m_spectrum(rl, k) for k in range(rl.ext.m + 1)}


def kernel_degrees(rl: RepLaplacian, tol: float = 1e-8) -> list[int]:
    """Degrees where -sum r is an eigenvalue of sum M."""
    target = float(complex(rl.model.ground_energy).real)
    return [k for k, spec in m_spectra(rl).items()
            if any(abs(x + target) < tol for x in spec)]


@dataclass
class TruncatedSpectrum:
    degree: int
    max_total: int
    size: int
    dense: list[float]
    predicted: list[float]

    def agrees(self, count: int | None = None, tol: float = 1e-8) -> bool:
        n = count or len(self.predicted)
        a, b = self.dense[:n], self.predicted[:n]
        return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))

    @property
    def has_zero(self) -> bool:
        return any(abs(x) < 1e-8 for x in self.dense)


def _monomials(nvars: int, max_total: int):
    for e in itertools.product(range(max_total + 1), repeat=nvars):
        if sum(e) <= max_total:
            yield e


def choose_truncation(nvars: int, degree_dim: int, cap: int = 800,
                      max_total: int = 6) -> int:
    for n in range(max_total, -1, -1):
        if math.comb(n + nvars, nvars) * degree_dim <= cap:
            return n
    return 0


def truncated_spectrum(rl: RepLaplacian, k: int, max_total: int | None = None,
                       cap: int = 800) -> TruncatedSpectrum:
    """Dense eigenvalues of pi_l(Laplacian) on polynomials of total degree <= N.

    That space is invariant, so the projected generalized problem H c = E G c
    in the (non-orthogonal) monomial-times-Gaussian basis is exact.
    """
    nv = rl.rep.nvars
    masks = masks_of_degree(rl.ext.m, k)
    if max_total is None:
        max_total = choose_truncation(nv, len(masks), cap)
    widths = rl.widths
    monos = list(_monomials(nv, max_total))
    basis = [(s, e) for s in masks for e in monos]
    pos = {b: j for j, b in enumerate(basis)}
    size = len(basis)
    coeff = np.zeros((size, size), dtype=complex)
    for j, (s, e) in enumerate(basis):
        image = rl.op.apply({s: Poly(nv, {e: Q2i(1)})}, widths)
        for row, poly in image.items():
            for ee, c in poly.terms.items():
                if (row, ee) not in pos:
                    raise ConsistencyError("truncation-invariance",
                                           f"image leaves degree <= {max_total}")
                coeff[pos[(row, ee)], j] += complex(c)
    gram_mono = np.array([[weighted_inner(Poly(nv, {a: Q2i(1)}), Poly(nv, {b: Q2i(1)}), widths)
                           for b in monos] for a in monos], dtype=complex)
    gram = np.kron(np.eye(len(masks)), gram_mono)
    h = gram @ coeff
    h = (h + h.conj().T) / 2
    dense = sorted(float(x) for x in scipy.linalg.eigh(h, gram, eigvals_only=True))
    mu = m_spectrum(rl, k)
    levels = rl.model.levels(max_total)
    predicted = sorted(e + m for e in levels for m in mu)
    return TruncatedSpectrum(k, max_total, size, dense, predicted)


# -- the verdict --------------------------------------------------------------

@dataclass
class Verdict:
    parameters: tuple[int, int, int]
    s: int
    t: int
    dim_e: int
    dim_f: int
    hormander: bool
    gamma: list[Root]
    weights: list
    hypothesis_H: bool | None
    case: str
    r_values: dict[Root, object] = field(default_factory=dict)
    m_spectra: dict[int, list[float]] = field(default_factory=dict)
    witnesses: list[KernelWitness] = field(default_factory=list)
    kernel_degrees: list[int] = field(default_factory=list)
    degree0_bottom: float | None = None
    crosscheck: list[TruncatedSpectrum] = field(default_factory=list)
    exact: bool = False
    note: str = ""

    @property
    def witness_degrees(self) -> list[int]:
        return sorted({w.degree for w in self.witnesses if w.ok})

    @property
    def rockland_fails(self) -> bool | None:
        if self.case in ("degenerate", "H-failed"):
            return None
        return bool(self.witness_degrees)

    @property
    def maximal_hypoelliptic(self) -> bool | None:
        # Rockland failure is equivalent to failure of maximal hypoellipticity
        rf = self.rockland_fails
        return None if rf is None else not rf


def analyze(pd: ParabolicData, l: LinearForm | None = None, weights=None,
            crosscheck: bool = True, cap: int = 800) -> Verdict:
    n = nilpotentize(pd)
    base = dict(parameters=pd.key(), s=pd.s, t=pd.t, dim_e=len(n.layer1),
                dim_f=len(n.layer2), hormander=check_hormander(pd, n))
    try:
        gamma = strongly_orthogonal_sequence(pd)
    except NoFiberRootsError as exc:
        return Verdict(**base, gamma=[], weights=[], hypothesis_H=None,
                       case="degenerate", note=str(exc))
    if l is None:
        weights = list(weights) if weights is not None else default_weights(gamma)
        l = canonical_form(gamma, weights)
    else:
        weights = [l.xi(g) for g in gamma]
    sf = bl_and_A(l, n)
    if not check_hypothesis_H(sf):
        return Verdict(**base, gamma=list(gamma), weights=weights, hypothesis_H=False,
                       case="H-failed", note="hypothesis (H) fails for this form")
    pol = choose_polarization(sf, pd)
    rep = realize_rep(l, pol, n)
    if not check_rep_homomorphism(rep):
        raise ConsistencyError("rep-homomorphism", f"{pd.key()}")
    if not check_induction_hypotheses(rep):
        raise ConsistencyError("induction-hypotheses", f"{pd.key()}")
    ext = exterior_ops(pd)
    sym = laplacian_symbol(pd, n, ext)
    if not sym.equals(local_formula(pd, n, ext)):
        raise ConsistencyError("laplacian-symbol", f"{pd.key()}")
    rl = rep_laplacian(rep, sym, pd)
    if any(is_zero(complex(r), 1e-14) for r in rl.model.r.values()):
        raise HypothesisFailedError("a transverse oscillator has zero frequency")
    v = Verdict(**base, gamma=list(gamma), weights=weights, hypothesis_H=True,
                case=pol.case, r_values=dict(rl.model.r), exact=rl.exact)
    v.m_spectra = m_spectra(rl)
    v.kernel_degrees = kernel_degrees(rl)
    v.witnesses = find_witnesses(rl)
    deg0 = truncated_spectrum(rl, 0, cap=cap)
    v.degree0_bottom = deg0.dense[0]
    if crosscheck:
        v.crosscheck = [deg0] + [truncated_spectrum(rl, k, cap=cap)
                                 for k in sorted(set(v.witness_degrees) | set(v.kernel_degrees))
                                 if k]
    return v
