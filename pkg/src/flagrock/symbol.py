"""Principal E-symbols of the Dolbeault operator, its adjoint and the Laplacian.

A symbol is a finite sum  sum_w A_w (x) w  where A_w is an operator on the
exterior algebra of u and w a PBW-ordered word of n0 basis indices of length
at most 2.  Layer 1 precedes layer 2 in the basis, so index order is the PBW
order, and reordering a word only costs a bracket, which is central.
"""

from __future__ import annotations

from .exterior import ExteriorAlgebra, ExtOp, exterior_ops
from .field import I, INV_SQRT2, Q2i
from .nilpotent import NilpotentAlgebra, nilpotentize
from .realframe import FrameVector
from .rootsys import ParabolicData, root_diff, structure_constants

Word = tuple


class ESymbol:
    def __init__(self, n: NilpotentAlgebra, ext: ExteriorAlgebra,
                 terms: dict[Word, ExtOp] | None = None):
        self.n = n
        self.ext = ext
        self.terms: dict[Word, ExtOp] = {w: a for w, a in (terms or {}).items() if a}

    def _like(self, terms) -> "ESymbol":
        return ESymbol(self.n, self.ext, terms)

    def add_term(self, word: Word, op: ExtOp) -> None:
        if word in self.terms:
            op = self.terms[word] + op
        if op:
            self.terms[word] = op
        else:
            self.terms.pop(word, None)

    def __add__(self, other: "ESymbol") -> "ESymbol":
        out = self._like(dict(self.terms))
        for w, a in other.terms.items():
            out.add_term(w, a)
        return out

    def __neg__(self):
        return self._like({w: -a for w, a in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "ESymbol") -> "ESymbol":
        out = self._like({})
        for w1, a in self.terms.items():
            for w2, b in other.terms.items():
                ab = a @ b
                if not ab:
                    continue
                for word, c in normalize(self.n, w1 + w2).items():
                    out.add_term(word, ab.scale(c))
        return out

    def adjoint(self) -> "ESymbol":
        """Formal adjoint; real frame vectors are skew-adjoint."""
        out = self._like({})
        for w, a in self.terms.items():
            sign = -1 if len(w) % 2 else 1
            for word, c in normalize(self.n, tuple(reversed(w))).items():
                out.add_term(word, a.adjoint().scale(sign * c))
        return out

    def equals(self, other: "ESymbol", tol: float = 0.0) -> bool:
        diff = self - other
        return all(a.equals(ExtOp(a.m, masks=a.masks), tol) for a in diff.terms.values())

    def __eq__(self, other):
        return isinstance(other, ESymbol) and self.equals(other)

    def order(self, k: int) -> "ESymbol":
        """The part made of words of length k."""
        return self._like({w: a for w, a in self.terms.items() if len(w) == k})

    def word_label(self, w: Word) -> str:
        return "".join(str(self.n.basis[k]) for k in w) or "1"

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return "ESymbol(" + ", ".join(
            f"{self.word_label(w)}: {a!r}" for w, a in sorted(self.terms.items())) + ")"


def normalize(n: NilpotentAlgebra, word: Word) -> dict[Word, object]:
    """Rewrite a word in PBW order: uv = vu + [[u, v]] for u > v."""
    for k in range(len(word) - 1):
        u, v = word[k], word[k + 1]
        if u > v:
            out: dict[Word, object] = {}
            swapped = word[:k] + (v, u) + word[k + 2:]
            for w, c in normalize(n, swapped).items():
                out[w] = out.get(w, 0) + c
            for z, cz in n.bracket_basis(u, v).items():
                for w, c in normalize(n, word[:k] + (z,) + word[k + 2:]).items():
                    out[w] = out.get(w, 0) + cz * c
            return {w: c for w, c in out.items() if c}
    return {word: Q2i(1)}


def _setup(pd: ParabolicData, n: NilpotentAlgebra | None, ext: ExteriorAlgebra | None):
    return n or nilpotentize(pd), ext or exterior_ops(pd)


def dolbeault_symbol(pd: ParabolicData, n: NilpotentAlgebra | None = None,
                     ext: ExteriorAlgebra | None = None) -> ESymbol:
    """sum_g e_g (X_g - i Y_g) / sqrt2."""
    n, ext = _setup(pd, n, ext)
    sym = ESymbol(n, ext)
    for g in pd.u:
        e = ext.e[g]
        sym.add_term((n.index[FrameVector("X", g)],), e.scale(INV_SQRT2))
        sym.add_term((n.index[FrameVector("Y", g)],), e.scale(-I * INV_SQRT2))
    return sym


def adjoint_symbol(pd: ParabolicData, n: NilpotentAlgebra | None = None,
                   ext: ExteriorAlgebra | None = None) -> ESymbol:
    """-sum_g i_g (X_g + i Y_g) / sqrt2."""
    n, ext = _setup(pd, n, ext)
    sym = ESymbol(n, ext)
    for g in pd.u:
        i = ext.i[g]
        sym.add_term((n.index[FrameVector("X", g)],), i.scale(-INV_SQRT2))
        sym.add_term((n.index[FrameVector("Y", g)],), i.scale(-I * INV_SQRT2))
    return sym


def laplacian_symbol(pd: ParabolicData, n: NilpotentAlgebra | None = None,
                     ext: ExteriorAlgebra | None = None) -> ESymbol:
    n, ext = _setup(pd, n, ext)
    d = dolbeault_symbol(pd, n, ext)
    ds = adjoint_symbol(pd, n, ext)
    return d @ ds + ds @ d


def fiber_pairs(pd: ParabolicData):
    """(c, a, b) with a compact, b noncompact in u and |a - b| = c in l∩p."""
    lp = set(pd.l_p)
    for a in pd.u_k:
        for b in pd.u_p:
            d = root_diff(a, b)
            if d is not None and d.abs() in lp:
                yield d.abs(), a, b


def local_formula(pd: ParabolicData, n: NilpotentAlgebra | None = None,
                  ext: ExteriorAlgebra | None = None,
                  reading: str = "N(-a,b)") -> ESymbol:
    """Closed form of the Laplacian symbol.

    -1/2 sum_g (X_g^2 + Y_g^2)
      + 1/sqrt2 sum_c [ (sum* N (e_a i_b - e_b i_a)) X_c + i (sum* N (e_a i_b + e_b i_a)) Y_c ]

    ``reading`` picks the structure constant in the first-order part:
    "N(-a,b)" (the one composition produces) or "N(a,-b)".
    """
    n, ext = _setup(pd, n, ext)
    sc = structure_constants(pd)
    sym = ESymbol(n, ext)
    half = ext.identity().scale(Q2i(-1, 0) / 2)
    for g in pd.u:
        for kind in ("X", "Y"):
            k = n.index[FrameVector(kind, g)]
            sym.add_term((k, k), half)
    for c, a, b in fiber_pairs(pd):
        if reading == "N(-a,b)":
            nc = sc.N(-a, b)
        elif reading == "N(a,-b)":
            nc = sc.N(a, -b)
        else:
            raise ValueError(f"unknown reading {reading!r}")
        if not nc:
            continue
        ea_ib = ext.e[a] @ ext.i[b]
        eb_ia = ext.e[b] @ ext.i[a]
        sym.add_term((n.index[FrameVector("X", c)],),
                     (ea_ib - eb_ia).scale(INV_SQRT2 * nc))
        sym.add_term((n.index[FrameVector("Y", c)],),
                     (ea_ib + eb_ia).scale(I * INV_SQRT2 * nc))
    return sym


def restrict_degree(s: ESymbol, k: int) -> ESymbol:
    return s._like({w: a.restrict(k) for w, a in s.terms.items()})


def symbol_violations(pd: ParabolicData) -> list[str]:
    """Composition vs closed form, self-adjointness and degree preservation."""
    n, ext = nilpotentize(pd), exterior_ops(pd)
    lap = laplacian_symbol(pd, n, ext)
    out = []
    if not lap.equals(local_formula(pd, n, ext)):
        out.append(f"{pd.key()}: composed Laplacian symbol differs from the closed form")
    if not lap.equals(lap.adjoint()):
        out.append(f"{pd.key()}: Laplacian symbol is not formally self-adjoint")
    if not dolbeault_symbol(pd, n, ext).adjoint().equals(adjoint_symbol(pd, n, ext)):
        out.append(f"{pd.key()}: adjoint symbol is not the adjoint of the Dolbeault symbol")
    for w, a in lap.terms.items():
        if not a.preserves_degree():
            out.append(f"{pd.key()}: term {lap.word_label(w)} changes exterior degree")
    return out
