"""Exact arithmetic in Q(sqrt2, i).

Every structure constant, frame coefficient and symbol coefficient that
shows up for u(p,q) lives in this field once the linear form has weights
in Q(sqrt2), so brackets, symbols and kernel residuals can be compared
exactly.  Elements are stored as four rationals: (a + b*sqrt2) + i(c + d*sqrt2).

Plain Python ``complex`` is the float fallback; the helpers at the bottom
of this module accept either kind of scalar.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Q2i",
    "ZERO",
    "ONE",
    "I",
    "SQRT2",
    "INV_SQRT2",
    "as_scalar",
    "is_zero",
    "conj",
    "to_complex",
    "is_exact",
    "parse_scalar",
]


def _q2_mul(a, b, c, d):
    # (a + b r)(c + d r) with r^2 = 2
    return a * c + 2 * b * d, a * d + b * c


class Q2i:
    """An element (a + b*sqrt2) + i*(c + d*sqrt2) with rational a, b, c, d.

    Stored as four integer numerators over one positive denominator, kept
    in lowest terms, which is much cheaper than four Fractions.
    """

    __slots__ = ("_A", "_B", "_C", "_D", "_q", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        if type(a) is int and type(b) is int and type(c) is int and type(d) is int:
            self._A, self._B, self._C, self._D, self._q = a, b, c, d, 1
        else:
            fa, fb, fc, fd = (Fraction(x) for x in (a, b, c, d))
            q = math.lcm(fa.denominator, fb.denominator, fc.denominator, fd.denominator)
            self._A = fa.numerator * (q // fa.denominator)
            self._B = fb.numerator * (q // fb.denominator)
            self._C = fc.numerator * (q // fc.denominator)
            self._D = fd.numerator * (q // fd.denominator)
            self._q = q
        self._hash = None

    @classmethod
    def _raw(cls, A: int, B: int, C: int, D: int, q: int) -> "Q2i":
        if q != 1:
            g = math.gcd(A, B, C, D, q)
            if g != 1:
                A, B, C, D, q = A // g, B // g, C // g, D // g, q // g
        out = object.__new__(cls)
        out._A, out._B, out._C, out._D, out._q = A, B, C, D, q
        out._hash = None
        return out

    @property
    def a(self) -> Fraction:
        return Fraction(self._A, self._q)

    @property
    def b(self) -> Fraction:
        return Fraction(self._B, self._q)

    @property
    def c(self) -> Fraction:
        return Fraction(self._C, self._q)

    @property
    def d(self) -> Fraction:
        return Fraction(self._D, self._q)

    @classmethod
    def coerce(cls, x) -> "Q2i":
        if isinstance(x, Q2i):
            return x
        if isinstance(x, (int, Rational)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Q2i")

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Q2i):
            p, q = self._q, other._q
            if p == q:
                return Q2i._raw(self._A + other._A, self._B + other._B,
                                self._C + other._C, self._D + other._D, p)
            return Q2i._raw(self._A * q + other._A * p, self._B * q + other._B * p,
                            self._C * q + other._C * p, self._D * q + other._D * p,
                            p * q)
        if isinstance(other, (int, Rational)):
            return self + Q2i(other)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Q2i._raw(-self._A, -self._B, -self._C, -self._D, self._q)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, Q2i):
            return self + (-other)
        if isinstance(other, (int, Rational)):
            return self + Q2i(-other)
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Q2i):
            # (u1 + i v1)(u2 + i v2), u, v in Q(sqrt2)
            a1, b1, c1, d1 = self._A, self._B, self._C, self._D
            a2, b2, c2, d2 = other._A, other._B, other._C, other._D
            ra, rb = _q2_mul(a1, b1, a2, b2)
            sa, sb = _q2_mul(c1, d1, c2, d2)
            ta, tb = _q2_mul(a1, b1, c2, d2)
            ua, ub = _q2_mul(c1, d1, a2, b2)
            return Q2i._raw(ra - sa, rb - sb, ta + ua, tb + ub, self._q * other._q)
        if isinstance(other, int):
            return Q2i._raw(self._A * other, self._B * other,
                            self._C * other, self._D * other, self._q)
        if isinstance(other, Rational):
            return self * Q2i(other)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "Q2i":
        if not self:
            raise ZeroDivisionError("Q2i division by zero")
        # 1/z = conj(z) / |z|^2 with |z|^2 = u^2 + v^2 in Q(sqrt2)
        na, nb = _q2_mul(self.a, self.b, self.a, self.b)
        ma, mb = _q2_mul(self.c, self.d, self.c, self.d)
        na, nb = na + ma, nb + mb
        # 1/(na + nb sqrt2) = (na - nb sqrt2)/(na^2 - 2 nb^2)
        den = na * na - 2 * nb * nb
        inv = Q2i(na / den, -nb / den)
        return self.conjugate() * inv

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            f = Fraction(other)
            if not f:
                raise ZeroDivisionError("Q2i division by zero")
            return self * Q2i(1 / f)
        if isinstance(other, Q2i):
            return self * other.inverse()
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return Q2i(other) * self.inverse()
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Q2i":
        return Q2i._raw(self._A, self._B, -self._C, -self._D, self._q)

    @property
    def real(self) -> "Q2i":
        return Q2i._raw(self._A, self._B, 0, 0, self._q)

    @property
    def imag(self) -> "Q2i":
        return Q2i._raw(self._C, self._D, 0, 0, self._q)

    def is_real(self) -> bool:
        return not self._C and not self._D

    def abs2(self) -> "Q2i":
        return (self * self.conjugate()).real

    # -- order on the real subfield ------------------------------------
    def sign(self) -> int:
        """Sign of a real element a + b*sqrt2, decided exactly."""
        if not self.is_real():
            raise ValueError("sign() of a non-real element")
        a, b = self._A, self._B
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with 2 b^2
        lhs, rhs = a * a, 2 * b * b
        if lhs == rhs:
            return 0
        dominant = a if lhs > rhs else b
        return 1 if dominant > 0 else -1

    def sqrt(self) -> "Q2i | None":
        """Nonnegative square root inside Q(sqrt2), or None if there is none."""
        if self.sign() < 0:
            return None
        if not self:
            return ZERO
        a, b = self.a, self.b
        # (x + y sqrt2)^2 = x^2 + 2y^2 + 2xy sqrt2
        cands = []
        disc = _rational_sqrt(a * a - 2 * b * b)
        if disc is not None:
            for x2 in ((a + disc) / 2, (a - disc) / 2):
                x = _rational_sqrt(x2)
                if x is None:
                    continue
                if x == 0:
                    y = _rational_sqrt(a / 2) if b == 0 else None
                    if y is not None:
                        cands.append(Q2i(0, y))
                    continue
                y = b / (2 * x)
                cands.append(Q2i(x, y))
                cands.append(Q2i(-x, -y))
        for cand in cands:
            if cand * cand == self and cand.sign() >= 0:
                return cand
        return None

    # -- comparisons / conversion --------------------------------------
    def __bool__(self):
        return bool(self._A or self._B or self._C or self._D)

    def __eq__(self, other):
        if isinstance(other, Q2i):
            return (self._q == other._q and self._A == other._A and self._B == other._B
                    and self._C == other._C and self._D == other._D)
        if isinstance(other, (int, Rational)):
            return self == Q2i(other)
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not self._B and not self._C and not self._D:
                self._hash = hash(self.a)
            else:
                self._hash = hash((self._A, self._B, self._C, self._D, self._q))
        return self._hash

    def __complex__(self):
        r2 = math.sqrt(2.0)
        q = self._q
        return complex((self._A + self._B * r2) / q, (self._C + self._D * r2) / q)

    def __float__(self):
        if not self.is_real():
            raise TypeError("float() of a non-real Q2i")
        return (self._A + self._B * math.sqrt(2.0)) / self._q

    def __repr__(self):
        return f"Q2i({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        def part(x, y):
            terms = []
            if x:
                terms.append(str(x))
            if y:
                coeff = "" if y == 1 else "-" if y == -1 else f"{y}*"
                terms.append(f"{coeff}sqrt2")
            return " + ".join(terms).replace("+ -", "- ") or "0"

        re, im = part(self.a, self.b), part(self.c, self.d)
        if im == "0":
            return re
        if re == "0":
            return f"i*({im})"
        return f"{re} + i*({im})"


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


ZERO = Q2i()
ONE = Q2i(1)
I = Q2i(0, 0, 1)
SQRT2 = Q2i(0, 1)
INV_SQRT2 = Q2i(0, Fraction(1, 2))


def as_scalar(x):
    """Normalize ints/Fractions to Q2i; leave floats/complex untouched."""
    if isinstance(x, Q2i):
        return x
    if isinstance(x, (int, Rational)):
        return Q2i(x)
    if isinstance(x, (float, complex)):
        return complex(x)
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def is_exact(x) -> bool:
    return isinstance(x, (Q2i, int, Rational))


def is_zero(x, tol: float = 0.0) -> bool:
    if isinstance(x, (Q2i, int, Rational)):
        return not x
    return abs(x) <= tol


def conj(x):
    if isinstance(x, Q2i):
        return x.conjugate()
    if isinstance(x, (int, Rational)):
        return x
    return complex(x).conjugate()


def to_complex(x) -> complex:
    return complex(x)


def parse_scalar(token: str):
    """Parse '3/2', '0.5', 'sqrt2', '√2', '3/2*sqrt2', '-1' as exact Q2i values."""
    t = token.strip().replace("√2", "sqrt2").replace(" ", "")
    if not t:
        raise ValueError("empty scalar")
    if t.endswith("sqrt2"):
        head = t[: -len("sqrt2")].rstrip("*")
        t = {"": "1", "+": "1", "-": "-1"}.get(head, head)
        try:
            return Q2i(0, Fraction(t))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse scalar {token!r}") from exc
    try:
        return Q2i(Fraction(t))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse scalar {token!r}") from exc
