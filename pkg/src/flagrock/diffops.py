"""Polynomial-coefficient differential operators on R^n.

``Poly`` is a sparse polynomial {exponent tuple: scalar}; ``DiffOp`` maps a
derivative multi-index to its polynomial coefficient, so that
    D = sum_a P_a(x) d^a.
Composition uses the Leibniz rule.  ``apply_weighted`` acts on functions of
the form P(x) * exp(-sum_k w_k x_k^2 / 2), which is where the Hermite ground
states of the representation live.
"""

from __future__ import annotations

import math
from math import comb

from .field import Q2i, as_scalar, conj, is_zero


def _zero_key(n: int) -> tuple[int, ...]:
    return (0,) * n


class Poly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if not is_zero(v)}

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        return cls(n, {_zero_key(n): c})

    @classmethod
    def var(cls, n: int, k: int, c=1) -> "Poly":
        e = [0] * n
        e[k] = 1
        return cls(n, {tuple(e): as_scalar(c)})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Poly(self.n, out)

    def __neg__(self) -> "Poly":
        return Poly(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        return Poly(self.n, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out[k] + v1 * v2 if k in out else v1 * v2
        return Poly(self.n, out)

    __rmul__ = scale

    def deriv(self, k: int) -> "Poly":
        out: dict = {}
        for e, v in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                out[tuple(f)] = e[k] * v
        return Poly(self.n, out)

    def mul_var(self, k: int, c=1) -> "Poly":
        out: dict = {}
        for e, v in self.terms.items():
            f = list(e)
            f[k] += 1
            out[tuple(f)] = c * v
        return Poly(self.n, out)

    def at_zero(self):
        return self.terms.get(_zero_key(self.n), Q2i())

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def equals(self, other: "Poly", tol: float = 0.0) -> bool:
        return all(is_zero(v, tol) for v in (self - other).terms.values())

    def __eq__(self, other):
        return isinstance(other, Poly) and self.equals(other)

    def __repr__(self):
        return f"Poly({self.terms})"


class DiffOp:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {k: p for k, p in (terms or {}).items() if p}

    @classmethod
    def mult(cls, p: Poly) -> "DiffOp":
        return cls(p.n, {_zero_key(p.n): p})

    @classmethod
    def const(cls, n: int, c) -> "DiffOp":
        return cls.mult(Poly.const(n, c))

    @classmethod
    def partial(cls, n: int, k: int) -> "DiffOp":
        e = [0] * n
        e[k] = 1
        return cls(n, {tuple(e): Poly.const(n, Q2i(1))})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = out[k] + p if k in out else p
        return DiffOp(self.n, out)

    def __neg__(self):
        return DiffOp(self.n, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        return DiffOp(self.n, {k: p.scale(c) for k, p in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, DiffOp):
            return self.scale(other)
        out: dict = {}
        for a, p in self.terms.items():
            for b, q in other.terms.items():
                for c in _below(a):
                    coeff = 1
                    dq = q
                    for k, ck in enumerate(c):
                        coeff *= comb(a[k], ck)
                        for _ in range(ck):
                            dq = dq.deriv(k)
                    if not dq:
                        continue
                    key = tuple(ai - ci + bi for ai, ci, bi in zip(a, c, b))
                    term = (p * dq).scale(coeff)
                    out[key] = out[key] + term if key in out else term
        return DiffOp(self.n, out)

    def commutator(self, other: "DiffOp") -> "DiffOp":
        return self * other - other * self

    def order(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def coefficient(self, multi_index) -> Poly:
        return self.terms.get(tuple(multi_index), Poly(self.n))

    def equals(self, other: "DiffOp", tol: float = 0.0) -> bool:
        diff = self - other
        return all(p.equals(Poly(self.n), tol) for p in diff.terms.values())

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.equals(other)

    def __repr__(self):
        return f"DiffOp({self.terms})"


def _below(a):
    if not a:
        yield ()
        return
    for head in range(a[0] + 1):
        for rest in _below(a[1:]):
            yield (head,) + rest


def weighted_partial(p: Poly, k: int, widths) -> Poly:
    """d/dx_k of P * exp(-sum w x^2 / 2), divided by the Gaussian."""
    return p.deriv(k) - p.mul_var(k, widths[k])


def apply_weighted(d: DiffOp, p: Poly, widths) -> Poly:
    out = Poly(p.n)
    for a, coeff in d.terms.items():
        q = p
        for k, ak in enumerate(a):
            for _ in range(ak):
                q = weighted_partial(q, k, widths)
        out = out + coeff * q
    return out


def gaussian_moment(e: int, w: float) -> float:
    """Integral of x^e exp(-w x^2) over R."""
    if e % 2:
        return 0.0
    return math.gamma((e + 1) / 2) / w ** ((e + 1) / 2)


def weighted_inner(p: Poly, q: Poly, widths) -> complex:
    """<P g, Q g> in L^2(R^n) with g = exp(-sum w x^2 / 2)."""
    ws = [float(complex(w).real) for w in widths]
    total = 0j
    for e1, v1 in p.terms.items():
        for e2, v2 in q.terms.items():
            m = 1.0
            for k, (a, b) in enumerate(zip(e1, e2)):
                m *= gaussian_moment(a + b, ws[k])
                if not m:
                    break
            if m:
                total += complex(v1) * complex(conj(v2)) * m
    return total
