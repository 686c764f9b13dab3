"""The quartic curve w^2 = z^4 + c2 z^2 + c1 z + 1 and its function field.

Elements of the function field are stored as ``A(z) + B(z) w`` with ``A`` and
``B`` rational functions of ``z``.  Their coefficients live in a *coefficient
ring* ``R`` which is either the constant field K (Q or Q(c1, c2)) or the
field K(n) of rational functions of the lattice variable.  The preferred point
is Q = (0, 1): expansions at Q use the branch of ``w`` with ``w(0) = +1``.
"""
from __future__ import annotations

from functools import lru_cache

from .arith import (
    QQ,
    SYMBOLIC,
    LaurentSeries,
    Poly,
    RatFunc,
    RatFuncField,
    series_sqrt,
    to_rational,
)
from .errors import DomainError

__all__ = ["CurveParams", "FieldElement", "branch_w_series", "lambda_m", "expand_at_Q", "ff_arith"]


class CurveParams:
    """Coefficients c1, c2 of F(z) = z^4 + c2 z^2 + c1 z + 1.

    Pass rationals (ints, Fractions, ``"3/4"``) for a specialized curve, or
    use :meth:`symbolic` for generic c1, c2.  A specialized curve must be
    smooth: F and F' may not share a root.
    """

    __slots__ = ("field", "c1", "c2", "_F")

    def __init__(self, c1, c2, field=None):
        if field is None:
            field = QQ
        self.field = field
        self.c1 = field(c1)
        self.c2 = field(c2)
        self._F = Poly(field, [1, self.c1, self.c2, 0, 1])
        if not field.symbolic:
            if self._F.gcd(self._F.derivative()).degree() > 0:
                raise DomainError(f"F(z) = {self._F.fmt('z')} has a repeated root; the curve is singular")

    @classmethod
    def symbolic(cls) -> "CurveParams":
        return cls(SYMBOLIC.c1, SYMBOLIC.c2, SYMBOLIC)

    @classmethod
    def specialized(cls, c1, c2) -> "CurveParams":
        return cls(to_rational(c1), to_rational(c2), QQ)

    @property
    def is_symbolic(self) -> bool:
        return self.field.symbolic

    def F(self, ring=None) -> Poly:
        """F(z) as a polynomial over ``ring`` (default: the constant field)."""
        if ring is None or ring == self.field:
            return self._F
        return self._F.map_coeffs(ring, ring)

    def n_field(self) -> RatFuncField:
        """The field K(n) of rational functions in the lattice variable."""
        return RatFuncField(self.field, "n")

    def __eq__(self, other):
        return isinstance(other, CurveParams) and (self.field, self.c1, self.c2) == (other.field, other.c1, other.c2)

    def __hash__(self):
        return hash((self.field, self.c1, self.c2))

    def __repr__(self):
        if self.is_symbolic:
            return "CurveParams(symbolic)"
        return f"CurveParams(c1={self.field.fmt(self.c1)}, c2={self.field.fmt(self.c2)})"


@lru_cache(maxsize=64)
def _w_coeffs(curve: CurveParams, order: int) -> tuple:
    s = LaurentSeries.from_poly(curve.F(), order)
    return series_sqrt(s, order).coeffs + (curve.field.zero,) * (order + 1)


def branch_w_series(curve: CurveParams, order: int, ring=None) -> LaurentSeries:
    """Expansion of w at Q on the branch w(0) = +1, known through z^order."""
    if order < 0:
        raise ValueError("order must be non-negative")
    ring = ring or curve.field
    cs = _w_coeffs(curve, order)[: order + 1]
    return LaurentSeries(ring, 0, [ring(c) for c in cs], order)


class FieldElement:
    """A(z) + B(z) w with w^2 = F(z)."""

    __slots__ = ("curve", "A", "B")

    def __init__(self, curve: CurveParams, A, B=None):
        self.curve = curve
        A = _as_ratfunc(A, None)
        self.A = A
        self.B = _as_ratfunc(B if B is not None else 0, A.field)

    @property
    def ring(self):
        return self.A.field

    @classmethod
    def const(cls, curve: CurveParams, c, ring=None) -> "FieldElement":
        ring = ring or curve.field
        return cls(curve, RatFunc.const(ring, c))

    @classmethod
    def z(cls, curve: CurveParams, ring=None) -> "FieldElement":
        ring = ring or curve.field
        return cls(curve, RatFunc(Poly.gen(ring)))

    @classmethod
    def w(cls, curve: CurveParams, ring=None) -> "FieldElement":
        ring = ring or curve.field
        return cls(curve, RatFunc.const(ring, ring.zero), RatFunc.const(ring, ring.one))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        return FieldElement(self.curve, RatFunc.const(self.ring, other))

    def __eq__(self, other):
        other = self._coerce(other)
        return self.A == other.A and self.B == other.B

    def __hash__(self):
        return hash((self.A, self.B))

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.curve, self.A + other.A, self.B + other.B)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.curve, -self.A, -self.B)

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.curve, self.A - other.A, self.B - other.B)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.B.is_zero() and other.B.is_zero():
            return FieldElement(self.curve, self.A * other.A, self.B)
        if self.B.is_zero():
            return FieldElement(self.curve, self.A * other.A, self.A * other.B)
        if other.B.is_zero():
            return FieldElement(self.curve, self.A * other.A, self.B * other.A)
        F = RatFunc(self.curve.F(self.ring))
        return FieldElement(
            self.curve,
            self.A * other.A + self.B * other.B * F,
            self.A * other.B + self.B * other.A,
        )

    __rmul__ = __mul__

    def norm(self) -> RatFunc:
        """(A + Bw)(A - Bw) = A^2 - B^2 F, a rational function of z."""
        if self.B.is_zero():
            return self.A * self.A
        return self.A * self.A - self.B * self.B * RatFunc(self.curve.F(self.ring))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero element of the function field")
        if self.B.is_zero():
            return FieldElement(self.curve, self.A.inverse(), self.B)
        nm = self.norm()
        return FieldElement(self.curve, self.A / nm, -self.B / nm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def sigma(self) -> "FieldElement":
        """Image under the involution (z, w) -> (z, -w)."""
        return FieldElement(self.curve, self.A, -self.B)

    def map_coeffs(self, fn, ring) -> "FieldElement":
        return FieldElement(self.curve, self.A.map_coeffs(fn, ring), self.B.map_coeffs(fn, ring))

    def shift_n(self, k: int) -> "FieldElement":
        """Substitute n -> n + k in every coefficient (coefficient ring K(n))."""
        return self.map_coeffs(lambda c: c.shift(k), self.ring)

    def at_n(self, n0) -> "FieldElement":
        """Specialize the lattice variable to ``n0`` (coefficient ring K(n) -> K)."""
        K = self.ring.base
        n0 = K(n0)
        return self.map_coeffs(lambda c: c(n0), K)

    def evaluate(self, z0, w0):
        """Value at the point (z0, w0); w0 may lie in a quadratic extension."""
        target = w0.K if hasattr(w0, "K") else self.ring
        a = self.A.eval_in(z0, target)
        if self.B.is_zero():
            return a
        return a + self.B.eval_in(z0, target) * w0

    def expand_at_Q(self, order: int) -> LaurentSeries:
        return expand_at_Q(self, self.curve, order)

    def fmt(self, var: str = "z") -> str:
        a = self.A.fmt(var)
        if self.B.is_zero():
            return a
        b = self.B.fmt(var)
        return f"{a} + ({b})*w"

    def __repr__(self):
        return f"FieldElement({self.fmt()})"


def _as_ratfunc(x, ring):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    if ring is None:
        raise TypeError("the A part must be a RatFunc or Poly in z")
    return RatFunc.const(ring, x)


def expand_at_Q(elem: FieldElement, curve: CurveParams, order: int) -> LaurentSeries:
    """Laurent expansion at Q = (0, 1) known through z^order."""
    a = LaurentSeries.from_ratfunc(elem.A, order)
    if elem.B.is_zero():
        return a
    b = LaurentSeries.from_ratfunc(elem.B, order)
    vb = b.val if not b.is_zero() else 0
    w = branch_w_series(curve, max(order - min(vb, 0), 0), elem.ring)
    return (a + (b * w).truncate(order)).truncate(order)


def lambda_m(curve: CurveParams, m: int, ring=None) -> FieldElement:
    """Function with a single pole, of order m, at Q and regular elsewhere.

    Built as (G(z) + w) / (2 z^m) where G is the degree m-1 Taylor polynomial
    of the w-branch at Q, so the principal part at sigma(Q) cancels.
    """
    if m < 2:
        raise ValueError("lambda_m needs m >= 2")
    ring = ring or curve.field
    w = branch_w_series(curve, m - 1, ring)
    G = Poly(ring, [w.coeff(i) for i in range(m)])
    zm2 = Poly(ring, [0] * m + [2])
    return FieldElement(curve, RatFunc(G, zm2), RatFunc(Poly.const(ring, 1), zm2))


def ff_arith(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    """Exact add/mul/div in the function field."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")
