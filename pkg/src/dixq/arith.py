"""Exact arithmetic: coefficient fields, dense univariate polynomials,
rational functions, truncated Laurent series and exact linear algebra.

Every structure here is generic over a *field descriptor*, an object that
knows its zero and one, converts foreign values into its elements and can
render them as text.  Elements themselves are plain Python objects that
support ``+ - * /`` and ``==``.  This lets the same :class:`Poly` code work
over Q, over Q(c1, c2), over Q(c1, c2)(n) and over quadratic extensions.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import zip_longest
from typing import Iterable, Sequence

import flint
import gmpy2
from gmpy2 import mpq

from .errors import InterpolationError, LinearSystemError, SeriesPrecisionError

__all__ = [
    "QQ", "SYMBOLIC", "RationalField", "SymbolicField", "CFrac", "RatFuncField", "QuadExtField",
    "Poly", "RatFunc", "QuadExt", "LaurentSeries",
    "ratfunc_normalize", "poly_interpolate", "ratfunc_reconstruct", "series_sqrt",
    "solve_linear", "nullspace", "to_rational", "is_square_rational", "rational_sqrt",
]

MPQ = type(mpq(0))


def to_rational(x) -> MPQ:
    """Convert an int, Fraction, mpq or literal string like ``"-3/4"`` to mpq."""
    if isinstance(x, MPQ):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rational scalars")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if type(x).__name__ == "mpz":
        return mpq(x)
    if isinstance(x, flint.fmpq):
        return mpq(int(x.p), int(x.q))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _fmt_rational(q: MPQ) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# field descriptors


class RationalField:
    """The rationals, with gmpy2 ``mpq`` elements."""

    symbolic = False
    zero = mpq(0)
    one = mpq(1)

    def __call__(self, x):
        return to_rational(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def fmt(self, x) -> str:
        return _fmt_rational(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class CFrac:
    """Element of Q(c1, c2): coprime fmpq_mpoly pair, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num, den) -> "CFrac":
        if den.is_zero():
            raise ZeroDivisionError("division by zero in Q(c1, c2)")
        if num.is_zero():
            return cls(num, den.context().from_dict({(0, 0): 1}))
        if den.is_constant():
            lc = den.leading_coefficient()
            return cls(num / lc if lc != 1 else num, den / lc if lc != 1 else den)
        g = num.gcd(den)
        if not g.is_constant():
            num = num / g
            den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return cls(num, den)

    def _lift(self, other):
        if isinstance(other, CFrac):
            return other
        if isinstance(other, (int, MPQ)):
            ctx = self.num.context()
            return CFrac(ctx.from_dict({(0, 0): _fmpq(other)}), ctx.from_dict({(0, 0): 1}))
        return NotImplemented

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __bool__(self):
        return not self.num.is_zero()

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den.is_one() and other.den.is_one():
            return CFrac(self.num + other.num, self.den)
        if self.den == other.den:
            return CFrac.make(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        if g.is_constant():
            return CFrac.make(self.num * other.den + other.num * self.den, self.den * other.den)
        d1, d2 = self.den / g, other.den / g
        return CFrac.make(self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CFrac(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return CFrac(self.num * 0, self.den * 0 + 1)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_constant():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_constant():
                n2, d1 = n2 / g, d1 / g
        return CFrac.make(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "CFrac":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero in Q(c1, c2)")
        return CFrac.make(self.den, self.num)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return CFrac(self.num ** e, self.den ** e)

    def __repr__(self):
        return f"CFrac({SYMBOLIC.fmt(self)})"


def _fmpq(q):
    q = to_rational(q)
    return flint.fmpq(int(q.numerator), int(q.denominator))


class SymbolicField:
    """Q(c1, c2): rational functions in the two curve parameters.

    Elements are :class:`CFrac` values over python-flint multivariate
    polynomials, kept in lowest terms, so ``==`` is structural equality.
    """

    symbolic = True

    def __init__(self):
        self.ctx = flint.fmpq_mpoly_ctx.get(("c1", "c2"), "lex")
        one = self.ctx.from_dict({(0, 0): 1})
        self.zero = CFrac(self.ctx.from_dict({}), one)
        self.one = CFrac(one, one)
        g1, g2 = self.ctx.gens()
        self.c1 = CFrac(g1, one)
        self.c2 = CFrac(g2, one)

    def __call__(self, x):
        if isinstance(x, CFrac):
            return x
        return CFrac(self.ctx.from_dict({(0, 0): _fmpq(x)}), self.one.den)

    def is_zero(self, x) -> bool:
        return x.num.is_zero()

    def is_constant(self, x) -> bool:
        return x.num.is_constant() and x.den.is_constant()

    def to_rational(self, x) -> MPQ:
        if not self.is_constant(x):
            raise ValueError(f"{self.fmt(x)} depends on c1, c2")
        return _to_mpq(x.num.leading_coefficient()) if not x.num.is_zero() else mpq(0)

    def specialize(self, x, c1, c2) -> MPQ:
        v1, v2 = _fmpq(c1), _fmpq(c2)
        den = x.den(v1, v2)
        if den == 0:
            raise ZeroDivisionError("specialization hits a pole in c1, c2")
        return _to_mpq(x.num(v1, v2)) / _to_mpq(den)

    def from_terms(self, terms: dict) -> CFrac:
        return self(0) + CFrac(self.ctx.from_dict({k: _fmpq(v) for k, v in terms.items()}), self.one.den)

    def fmt(self, x) -> str:
        num_s = _fmt_cpoly(x.num)
        if x.den.is_constant():
            return num_s
        return f"({num_s})/({_fmt_cpoly(x.den)})"

    def __repr__(self):
        return "QQ(c1,c2)"

    def __eq__(self, other):
        return isinstance(other, SymbolicField)

    def __hash__(self):
        return hash("QQ(c1,c2)")


def _to_mpq(q) -> MPQ:
    return mpq(int(q.p), int(q.q))


def _fmt_cpoly(p) -> str:
    terms = sorted(zip(p.monoms(), p.coeffs()), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
    parts = []
    for (e1, e2), coeff in terms:
        mono = "*".join(
            f"{name}^{e}" if e > 1 else name for name, e in (("c1", e1), ("c2", e2)) if e
        )
        parts.append(_join_coeff(_to_mpq(coeff), mono))
    return _join_terms(parts) if parts else "0"


def _join_coeff(q: MPQ, mono: str) -> str:
    if not mono:
        return _fmt_rational(q)
    if q == 1:
        return mono
    if q == -1:
        return "-" + mono
    return f"{_fmt_rational(q)}*{mono}"


def _join_terms(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


QQ = RationalField()
SYMBOLIC = SymbolicField()


class RatFuncField:
    """The field base(var) of rational functions in one variable."""

    symbolic = False

    def __init__(self, base, var: str):
        self.base = base
        self.var = var
        self.zero = RatFunc.const(base, base.zero)
        self.one = RatFunc.const(base, base.one)

    def __call__(self, x):
        if isinstance(x, RatFunc):
            if x.field == self.base:
                return x
            raise TypeError(f"rational function over {x.field!r}, expected {self.base!r}")
        if isinstance(x, Poly):
            return RatFunc(x)
        return RatFunc.const(self.base, self.base(x))

    def gen(self) -> "RatFunc":
        return RatFunc(Poly(self.base, [self.base.zero, self.base.one]))

    def is_zero(self, x) -> bool:
        return x.num.is_zero()

    def fmt(self, x) -> str:
        return x.fmt(self.var)

    def __repr__(self):
        return f"{self.base!r}({self.var})"

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and other.base == self.base and other.var == self.var

    def __hash__(self):
        return hash((self.base, self.var))


# ---------------------------------------------------------------------------
# dense univariate polynomials


class Poly:
    """Dense univariate polynomial, coefficients stored low degree first.

    The zero polynomial has degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Iterable = ()):
        cs = [field(c) for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, cs: list) -> "Poly":
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        p = object.__new__(cls)
        p.field = field
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def const(cls, field, c) -> "Poly":
        return cls(field, [c])

    @classmethod
    def gen(cls, field) -> "Poly":
        return cls._raw(field, [field.zero, field.one])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return self == Poly(self.field, [other])

    def __hash__(self):
        return hash(self.coeffs)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly) and (other.field is self.field or other.field == self.field):
            return other
        return Poly._raw(self.field, [self.field(other)])

    def __add__(self, other):
        other = self._coerce(other)
        zero = self.field.zero
        return Poly._raw(self.field, [a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=zero)])

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        zero = self.field.zero
        return Poly._raw(self.field, [a - b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=zero)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(self.field, [])
        if len(b) == 1:
            s = b[0]
            return Poly._raw(self.field, [x * s for x in a])
        if len(a) == 1:
            s = a[0]
            return Poly._raw(self.field, [s * x for x in b])
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if self.field.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly._raw(self.field, [self.field.one])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, s) -> "Poly":
        return Poly._raw(self.field, [c * s for c in self.coeffs])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        db = other.degree()
        inv_lc = self.field.one / other.lc()
        bc = other.coeffs
        if len(r) - 1 < db:
            return Poly._raw(self.field, []), self
        q = [self.field.zero] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            t = r[k + db]
            if self.field.is_zero(t):
                continue
            t = t * inv_lc
            q[k] = t
            for j in range(db + 1):
                r[k + j] = r[k + j] - t * bc[j]
        return Poly._raw(self.field, q), Poly._raw(self.field, r[:db])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.lc()
        if lc == self.field.one:
            return self
        inv = self.field.one / lc
        return Poly._raw(self.field, [c * inv for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        if _flat_vars(self.field) is not None:
            return _flat_gcd(self, other)
        a, b = self, other
        if a.degree() < b.degree():
            a, b = b, a
        while not b.is_zero():
            if b.degree() == 0:
                return Poly._raw(self.field, [self.field.one])
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_in(self, x, target):
        """Horner evaluation with coefficients mapped into ``target``."""
        acc = target.zero
        for c in reversed(self.coeffs):
            acc = acc * x + target(c)
        return acc

    def shift(self, k) -> "Poly":
        """Return p(x + k)."""
        if self.degree() < 1 or k == 0:
            return self
        k = self.field(k)
        cs = list(self.coeffs)
        d = len(cs)
        for i in range(d - 1):
            for j in range(d - 2, i - 1, -1):
                cs[j] = cs[j] + k * cs[j + 1]
        return Poly._raw(self.field, cs)

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly._raw(inner.field, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly._raw(inner.field, [inner.field(c)])
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def map_coeffs(self, fn, field) -> "Poly":
        return Poly(field, [fn(c) for c in self.coeffs])

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                return i
        raise ValueError("valuation of the zero polynomial")

    def fmt(self, var: str = "n") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree(), -1, -1):
            c = self.coeffs[i]
            if self.field.is_zero(c):
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            parts.append(_fmt_term(self.field, c, mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"Poly({self.fmt('x')})"


def _fmt_term(field, c, mono: str) -> str:
    if isinstance(c, MPQ):
        return _join_coeff(c, mono)
    s = field.fmt(c)
    if not mono:
        return s if _is_atomic(s) else f"({s})"
    if s == "1":
        return mono
    if s == "-1":
        return "-" + mono
    if _is_atomic(s):
        return f"{s}*{mono}"
    return f"({s})*{mono}"


def _is_atomic(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return all(ch not in body for ch in "+- ")


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Quotient num/den of polynomials, coprime with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            self.num = num
            self.den = Poly._raw(num.field, [num.field.one])
            return
        num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    @classmethod
    def const(cls, field, c) -> "RatFunc":
        return cls._raw(Poly._raw(field, [field(c)]), Poly._raw(field, [field.one]))

    @property
    def field(self):
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree() == 0

    def is_const(self) -> bool:
        return self.den.degree() == 0 and self.num.degree() <= 0

    def const_value(self):
        if not self.is_const():
            raise ValueError("not a constant")
        return self.num[0]

    def __eq__(self, other):
        if isinstance(other, RatFunc) and other.field == self.field:
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly) and other.field == self.field:
            return self.is_poly() and self.num == other
        try:
            c = self.field(other)
        except TypeError:
            return NotImplemented
        return self.is_const() and self.num == Poly._raw(self.field, [c] if not self.field.is_zero(c) else [])

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other) -> "RatFunc":
        field = self.num.field
        if isinstance(other, RatFunc) and (other.num.field is field or other.num.field == field):
            return other
        if isinstance(other, Poly) and (other.field is field or other.field == field):
            return RatFunc(other)
        return RatFunc.const(self.field, other)

    def __add__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den.degree() == 0 and other.den.degree() == 0:
            return RatFunc._raw(self.num + other.num, self.den)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        if g.degree() == 0:
            return RatFunc._raw(self.num * other.den + other.num * self.den, self.den * other.den)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        num = self.num * d2 + other.num * d1
        # only factors of g can survive in both num and den; g may repeat them
        while g.degree() > 0 and not num.is_zero():
            h = num.gcd(g)
            if h.degree() == 0:
                break
            num = num.exact_div(h)
            g = g.exact_div(h)
        if num.is_zero():
            return RatFunc._raw(num, Poly._raw(num.field, [num.field.one]))
        return RatFunc._raw(num, d1 * d2 * g)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc._raw(Poly._raw(self.field, []), Poly._raw(self.field, [self.field.one]))
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d2.degree() > 0:
            g = n1.gcd(d2)
            if g.degree() > 0:
                n1, d2 = n1.exact_div(g), d2.exact_div(g)
        if d1.degree() > 0:
            g = n2.gcd(d1)
            if g.degree() > 0:
                n2, d1 = n2.exact_div(g), d1.exact_div(g)
        return RatFunc._raw(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lc = self.num.lc()
        inv = self.field.one / lc
        return RatFunc._raw(self.den.scale(inv), self.num.scale(inv))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc._raw(self.num ** e, self.den ** e)

    def __call__(self, x):
        d = self.den(x)
        if self.field.is_zero(d):
            from .errors import DomainError

            raise DomainError(f"pole at {x}")
        return self.num(x) / d

    def eval_in(self, x, target):
        d = self.den.eval_in(x, target)
        if target.is_zero(d):
            from .errors import DomainError

            raise DomainError(f"pole at {x}")
        return self.num.eval_in(x, target) / d

    def shift(self, k) -> "RatFunc":
        return RatFunc._raw(self.num.shift(k), self.den.shift(k))

    def map_coeffs(self, fn, field) -> "RatFunc":
        return RatFunc(self.num.map_coeffs(fn, field), self.den.map_coeffs(fn, field))

    def fmt(self, var: str = "n") -> str:
        if self.is_poly():
            return self.num.fmt(var)
        return f"({self.num.fmt(var)})/({self.den.fmt(var)})"

    def __repr__(self):
        return f"RatFunc({self.fmt('x')})"


# ---------------------------------------------------------------------------
# gcd by flattening nested coefficient fields into one multivariate ring
#
# Euclid over Q(c1, c2)[n] or Q(n)[z] suffers badly from coefficient swell.
# Fields built from Q by adjoining c1, c2 and rational-function variables are
# fraction fields of a multivariate polynomial ring, so the gcd is computed
# there with flint and mapped back.


def _flat_vars(field):
    if isinstance(field, RationalField):
        return 0
    if isinstance(field, SymbolicField):
        return 2
    if isinstance(field, RatFuncField):
        inner = _flat_vars(field.base)
        return None if inner is None else inner + 1
    return None


@lru_cache(maxsize=None)
def _flat_ctx(nvars: int):
    return flint.fmpq_mpoly_ctx.get(tuple(f"x{i}" for i in range(nvars)), "lex")


def _embed(p, ctx, d):
    """Shift a fmpq_mpoly in k variables to positions d..d+k-1 of ctx."""
    pad = ctx.nvars() - d - p.context().nvars()
    return ctx.from_dict({(0,) * d + tuple(e) + (0,) * pad: c for e, c in zip(p.monoms(), p.coeffs())})


def _flat_elem(x, field, ctx, d):
    """(num, den) in ctx for a field element whose variables start at index d."""
    if isinstance(field, RationalField):
        q = to_rational(x)
        return ctx.from_dict({(0,) * ctx.nvars(): _fmpq(q)}), ctx.from_dict({(0,) * ctx.nvars(): 1})
    if isinstance(field, SymbolicField):
        return _embed(x.num, ctx, d), _embed(x.den, ctx, d)
    nn, nd = _flat_poly(x.num, ctx, d)
    dn, dd = _flat_poly(x.den, ctx, d)
    return nn * dd, nd * dn


def _flat_poly(p: Poly, ctx, d):
    """(num, den) in ctx for a polynomial in variable d over a flattenable field."""
    terms = [(i, _flat_elem(c, p.field, ctx, d + 1)) for i, c in enumerate(p.coeffs) if not p.field.is_zero(c)]
    one = ctx.from_dict({(0,) * ctx.nvars(): 1})
    lcm = one
    for _, (_, den) in terms:
        if not den.is_constant():
            lcm = lcm * (den / lcm.gcd(den))
    num = ctx.from_dict({})
    for i, (n_i, d_i) in terms:
        e = [0] * ctx.nvars()
        e[d] = i
        num += ctx.from_dict({tuple(e): 1}) * n_i * (lcm / d_i)
    return num, lcm


def _group(terms: dict, d: int) -> dict:
    out: dict = {}
    for e, c in terms.items():
        out.setdefault(e[d], {})[e] = c
    return out


def _unflat_elem(terms: dict, field, d):
    if isinstance(field, RationalField):
        return _to_mpq(next(iter(terms.values()))) if terms else mpq(0)
    if isinstance(field, SymbolicField):
        return CFrac(field.ctx.from_dict({e[d : d + 2]: c for e, c in terms.items()}), field.one.den)
    return RatFunc(_unflat_poly(terms, field.base, d))


def _unflat_poly(terms: dict, field, d) -> Poly:
    groups = _group(terms, d)
    top = max(groups, default=-1)
    cs = [field.zero] * (top + 1)
    for i, sub in groups.items():
        cs[i] = _unflat_elem(sub, field, d + 1)
    return Poly._raw(field, cs)


def _flat_gcd(a: Poly, b: Poly) -> Poly:
    field = a.field
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree() == 0 or b.degree() == 0:
        return Poly._raw(field, [field.one])
    ctx = _flat_ctx(1 + _flat_vars(field))
    g = _flat_poly(a, ctx, 0)[0].gcd(_flat_poly(b, ctx, 0)[0])
    terms = dict(zip(map(tuple, g.monoms()), g.coeffs()))
    return _unflat_poly(terms, field, 0).monic()


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    field = num.field
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    one = Poly._raw(field, [field.one])
    if num.is_zero():
        return num, one
    if den.degree() == 0:
        inv = field.one / den.lc()
        return num.scale(inv), one
    g = num.gcd(den)
    if g.degree() > 0:
        num = num.exact_div(g)
        den = den.exact_div(g)
    lc = den.lc()
    if lc != field.one:
        inv = field.one / lc
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def ratfunc_normalize(num: Poly, den: Poly) -> RatFunc:
    """Reduce num/den to lowest terms with a monic denominator."""
    return RatFunc(num, den)


# ---------------------------------------------------------------------------
# quadratic extensions


class QuadExtField:
    """base[w]/(w^2 - d); a field when d is not a square in base."""

    symbolic = False

    def __init__(self, base, d, name: str = "w"):
        self.base = base
        self.d = base(d)
        self.name = name
        self.zero = QuadExt(self, base.zero, base.zero)
        self.one = QuadExt(self, base.one, base.zero)

    def __call__(self, x):
        if isinstance(x, QuadExt):
            if x.K is self or x.K == self:
                return x
            raise TypeError("element of a different quadratic extension")
        return QuadExt(self, self.base(x), self.base.zero)

    def gen(self) -> "QuadExt":
        return QuadExt(self, self.base.zero, self.base.one)

    def is_zero(self, x) -> bool:
        return self.base.is_zero(x.a) and self.base.is_zero(x.b)

    def fmt(self, x) -> str:
        b = self.base
        if b.is_zero(x.b):
            return b.fmt(x.a)
        parts = []
        if not b.is_zero(x.a):
            parts.append(_fmt_term(b, x.a, ""))
        parts.append(_fmt_term(b, x.b, self.name))
        return _join_terms(parts)

    def __repr__(self):
        return f"{self.base!r}[{self.name}]/({self.name}^2 - ({self.base.fmt(self.d)}))"

    def __eq__(self, other):
        return isinstance(other, QuadExtField) and other.base == self.base and other.d == self.d

    def __hash__(self):
        return hash(("quad", self.base, self.name))


class QuadExt:
    """Element a + b*w of a quadratic extension."""

    __slots__ = ("K", "a", "b")

    def __init__(self, K: QuadExtField, a, b):
        self.K = K
        self.a = a
        self.b = b

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            return other
        return QuadExt(self.K, self.K.base(other), self.K.base.zero)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __add__(self, other):
        other = self._coerce(other)
        return QuadExt(self.K, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(self.K, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        return QuadExt(self.K, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return QuadExt(
            self.K,
            self.a * other.a + self.b * other.b * self.K.d,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.K, self.a, -self.b)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.K.d

    def inverse(self) -> "QuadExt":
        nm = self.norm()
        if self.K.base.is_zero(nm):
            raise ZeroDivisionError("division by a zero divisor of the quadratic extension")
        return QuadExt(self.K, self.a / nm, -self.b / nm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def is_zero(self) -> bool:
        return self.K.is_zero(self)

    def __repr__(self):
        return f"QuadExt({self.K.fmt(self)})"


# ---------------------------------------------------------------------------
# interpolation and reconstruction


def poly_interpolate(points: Sequence[tuple], degree_bound: int, field=QQ) -> Poly:
    """Unique polynomial of degree <= degree_bound through ``points``.

    The first ``degree_bound + 1`` points determine the candidate; any further
    points must lie on it, otherwise :class:`InterpolationError` is raised.
    """
    xs = [field(x) for x, _ in points]
    ys = [field(y) for _, y in points]
    if len(set(map(_hashable, xs))) != len(xs):
        raise InterpolationError("duplicate interpolation nodes")
    need = degree_bound + 1
    if len(xs) < need:
        raise InterpolationError(f"need {need} points for degree bound {degree_bound}, got {len(xs)}")
    p = _newton_interpolate(field, xs[:need], ys[:need])
    for x, y in zip(xs[need:], ys[need:]):
        if p(x) != y:
            raise InterpolationError(
                f"samples inconsistent with degree bound {degree_bound} (mismatch at {field.fmt(x)})"
            )
    return p


def _hashable(x):
    return x if isinstance(x, (int, MPQ)) else repr(x)


def _newton_interpolate(field, xs, ys) -> Poly:
    k = len(xs)
    dd = list(ys)
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    p = Poly(field, [dd[-1]])
    for i in range(k - 2, -1, -1):
        p = p * Poly(field, [-xs[i], field.one]) + Poly(field, [dd[i]])
    return p


def ratfunc_reconstruct(points: Sequence[tuple], max_total_degree: int, field=QQ, holdout: int = 3) -> RatFunc:
    """Recover p/q with deg p + deg q <= max_total_degree from samples.

    Uses the extended Euclidean (Cauchy interpolation) sequence on the
    interpolating polynomial; the last ``holdout`` points are kept back and
    every candidate must reproduce them.  The candidate of smallest total
    degree that does is returned.
    """
    xs = [field(x) for x, _ in points]
    ys = [field(y) for _, y in points]
    if len(xs) <= holdout:
        raise InterpolationError("not enough points for rational reconstruction")
    fx, fy = xs[:-holdout], ys[:-holdout]
    hx, hy = xs[-holdout:], ys[-holdout:]
    if len(fx) < max_total_degree + 1:
        raise InterpolationError(
            f"need {max_total_degree + 1 + holdout} points for total degree {max_total_degree}, got {len(xs)}"
        )
    fx, fy = fx[: max_total_degree + 1], fy[: max_total_degree + 1]
    if isinstance(field, RationalField):
        return _reconstruct_qq(fx, fy, hx, hy, max_total_degree)
    modulus = Poly(field, [field.one])
    for x in fx:
        modulus = modulus * Poly(field, [-x, field.one])
    interp = _newton_interpolate(field, fx, fy)
    r0, r1 = modulus, interp
    t0, t1 = Poly(field, []), Poly(field, [field.one])
    best = None
    while True:
        if not t1.is_zero() and r1.degree() + t1.degree() <= max_total_degree:
            cand = _try_candidate(field, r1, t1, hx, hy, fx)
            if cand is not None and (best is None or _total_degree(cand) < _total_degree(best)):
                best = cand
        if r1.is_zero():
            break
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    if best is None:
        raise InterpolationError(f"no rational function of total degree <= {max_total_degree} fits the samples")
    return best


def _reconstruct_qq(fx, fy, hx, hy, max_total_degree, max_primes: int = 200) -> RatFunc:
    # Cauchy interpolation over Q suffers from coefficient swell, so it is run
    # modulo word-size primes; the monic-denominator images are combined by
    # CRT and lifted by rational number reconstruction, then checked exactly
    # against the held-out samples.
    degrees = None
    residues: list = []
    modulus = 1
    for p in _primes(max_primes):
        image = _cauchy_mod_p(fx, fy, hx, hy, max_total_degree, p)
        if image is None:
            if degrees is None and _clean_prime(fx + hx, fy + hy, p):
                raise InterpolationError(f"no rational function of total degree <= {max_total_degree} fits the samples")
            continue
        degs, coeffs = image
        if degrees is not None and degs != degrees:
            if sum(degs) <= sum(degrees):
                continue  # unlucky prime
            residues, modulus = [], 1
        degrees = degs
        residues = coeffs if modulus == 1 else [_crt(r, modulus, c, p) for r, c in zip(residues, coeffs)]
        modulus *= p
        lifted = [_rational_lift(r, modulus) for r in residues]
        if any(q is None for q in lifted):
            continue
        dn = degrees[0] + 1
        num = Poly._raw(QQ, lifted[:dn])
        den = Poly._raw(QQ, lifted[dn:])
        if any(den(x) == 0 for x in hx) or any(num(x) != y * den(x) for x, y in zip(hx, hy)):
            continue
        if any(num(x) != y * den(x) for x, y in zip(fx, fy)):
            continue
        return RatFunc(num, den)
    raise InterpolationError(f"rational reconstruction did not stabilize within {max_primes} primes")


@lru_cache(maxsize=1)
def _prime_list(count: int) -> tuple:
    out, p = [], 1 << 62
    for _ in range(count):
        p = int(gmpy2.next_prime(p))
        out.append(p)
    return tuple(out)


def _primes(count: int):
    return _prime_list(count)


def _mod(q, p: int):
    d = int(q.denominator) % p
    if d == 0:
        return None
    return int(q.numerator) * pow(d, -1, p) % p


def _clean_prime(xs, ys, p) -> bool:
    """True if no sample coordinate has a denominator divisible by p."""
    return all(_mod(x, p) is not None and _mod(y, p) is not None for x, y in zip(xs, ys))


def _cauchy_mod_p(fx, fy, hx, hy, max_total_degree, p):
    """Degrees and coefficients (num then monic den) of the reconstruction mod p."""
    xs = [_mod(x, p) for x in fx]
    ys = [_mod(y, p) for y in fy]
    hxs = [_mod(x, p) for x in hx]
    hys = [_mod(y, p) for y in hy]
    if None in xs or None in ys or None in hxs or None in hys or len(set(xs)) != len(xs):
        return None
    dd = list(ys)
    k = len(xs)
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    interp = flint.nmod_poly([dd[-1]], p)
    modulus = flint.nmod_poly([1], p)
    for i in range(k - 2, -1, -1):
        interp = interp * flint.nmod_poly([-xs[i] % p, 1], p) + dd[i]
    for x in xs:
        modulus *= flint.nmod_poly([-x % p, 1], p)
    r0, r1 = modulus, interp
    t0, t1 = flint.nmod_poly([], p), flint.nmod_poly([1], p)
    best = None
    while True:
        if not t1.is_zero():
            total = max(r1.degree(), 0) + t1.degree()
            if total <= max_total_degree and (best is None or total < best[0]):
                if all(t1(x) != 0 for x in xs + hxs) and all(r1(x) == y * t1(x) for x, y in zip(hxs, hys)):
                    best = (total, r1, t1)
        if r1.is_zero():
            break
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    if best is None:
        return None
    _, num, den = best
    inv = pow(int(den.coeffs()[-1]), -1, p)
    num_c = [int(c) * inv % p for c in num.coeffs()] or [0]
    den_c = [int(c) * inv % p for c in den.coeffs()]
    return (len(num_c) - 1, len(den_c) - 1), num_c + den_c


def _crt(r: int, m: int, c: int, p: int) -> int:
    return r + m * ((c - r) * pow(m, -1, p) % p)


def _rational_lift(a: int, m: int):
    """r/s with r = a s (mod m) and |r|, |s| <= sqrt(m/2), or None."""
    bound = gmpy2.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gmpy2.gcd(r1, s1) != 1:
        return None
    return mpq(r1, s1)


def _total_degree(r: RatFunc) -> int:
    return max(r.num.degree(), 0) + r.den.degree()


def _try_candidate(field, num, den, hx, hy, fx):
    for x in list(fx) + list(hx):
        if field.is_zero(den(x)):
            return None
    cand = RatFunc(num, den)
    for x, y in zip(hx, hy):
        if cand(x) != y:
            return None
    return cand


# ---------------------------------------------------------------------------
# truncated Laurent series


class LaurentSeries:
    """Truncated Laurent series sum_{d=val}^{prec} coeffs[d-val] z^d.

    ``prec`` is the highest exponent whose coefficient is known.  Leading
    zeros are stripped; a series with no nonzero known coefficient is zero to
    order ``prec`` and has ``val == prec + 1``.
    """

    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field, val: int, coeffs: Sequence, prec: int):
        cs = [field(c) for c in coeffs[: max(prec - val + 1, 0)]]
        cs += [field.zero] * (prec - val + 1 - len(cs))
        start = 0
        while start < len(cs) and field.is_zero(cs[start]):
            start += 1
        self.field = field
        self.val = val + start if start < len(cs) else prec + 1
        self.coeffs = tuple(cs[start:])
        self.prec = prec

    @classmethod
    def from_poly(cls, p: Poly, prec: int, shift: int = 0) -> "LaurentSeries":
        """Series of z^shift * p(z) known through ``prec``."""
        return cls(p.field, shift, [p[i] for i in range(max(prec - shift + 1, 0))], prec)

    @classmethod
    def from_ratfunc(cls, r: RatFunc, prec: int) -> "LaurentSeries":
        if r.is_zero():
            return cls(r.field, prec + 1, [], prec)
        k = r.den.valuation()
        den = Poly(r.field, r.den.coeffs[k:])
        # series of num/den to exponent prec + k, then divide by z^k
        n_terms = prec + k + 1
        if n_terms <= 0:
            return cls(r.field, prec + 1, [], prec)
        out = _series_divide(r.field, [r.num[i] for i in range(n_terms)], den, n_terms)
        return cls(r.field, -k, out, prec)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        if not self.coeffs:
            raise SeriesPrecisionError(f"series vanishes through order {self.prec}; lowest degree undetermined")
        return self.val

    def coeff(self, d: int):
        if d > self.prec:
            raise SeriesPrecisionError(f"coefficient of z^{d} requested, series known through z^{self.prec}")
        if d < self.val:
            return self.field.zero
        return self.coeffs[d - self.val]

    def truncate(self, prec: int) -> "LaurentSeries":
        prec = min(prec, self.prec)
        return LaurentSeries(self.field, self.val, self.coeffs, prec)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.prec == other.prec and self.val == other.val and self.coeffs == other.coeffs

    def __add__(self, other):
        prec = min(self.prec, other.prec)
        val = min(self.val, other.val)
        return LaurentSeries(self.field, val, [self.coeff(d) + other.coeff(d) for d in range(val, prec + 1)], prec)

    def __neg__(self):
        return LaurentSeries(self.field, self.val, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            s = self.field(other)
            return LaurentSeries(self.field, self.val, [c * s for c in self.coeffs], self.prec)
        prec = min(self.prec + other.val, other.prec + self.val)
        val = self.val + other.val
        n = prec - val + 1
        out = [self.field.zero] * max(n, 0)
        for i, a in enumerate(self.coeffs[:n]):
            if self.field.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs[: n - i]):
                out[i + j] = out[i + j] + a * b
        return LaurentSeries(self.field, val, out, prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        v = self.valuation()
        rel = self.prec - v
        a = self.coeffs
        inv0 = self.field.one / a[0]
        out = [inv0]
        for k in range(1, rel + 1):
            acc = self.field.zero
            for j in range(1, k + 1):
                if j < len(a):
                    acc = acc + a[j] * out[k - j]
            out.append(-acc * inv0)
        return LaurentSeries(self.field, -v, out, -v + rel)

    def __truediv__(self, other):
        return self * other.inverse()

    def __repr__(self):
        terms = " + ".join(f"({self.field.fmt(c)})*z^{self.val + i}" for i, c in enumerate(self.coeffs))
        return f"LaurentSeries({terms or '0'} + O(z^{self.prec + 1}))"


def _series_divide(field, num: list, den: Poly, n: int) -> list:
    inv0 = field.one / den[0]
    out = []
    for k in range(n):
        acc = num[k] if k < len(num) else field.zero
        for j in range(1, min(k, den.degree()) + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc * inv0)
    return out


def series_sqrt(s: LaurentSeries, order: int) -> LaurentSeries:
    """Square root with constant term +1 of a series 1 + O(z)."""
    field = s.field
    if s.val != 0 or s.coeffs[0] != field.one:
        raise ValueError("unsupported branch: series_sqrt needs lowest degree 0 and constant term 1")
    order = min(order, s.prec)
    t = [field.one]
    half = field.one / field(2)
    for k in range(1, order + 1):
        acc = s.coeff(k)
        for i in range(1, k):
            acc = acc - t[i] * t[k - i]
        t.append(acc * half)
    return LaurentSeries(field, 0, t, order)


# ---------------------------------------------------------------------------
# linear algebra


def _rref(field, rows: list[list]) -> tuple[list[list], list[int]]:
    rows = [list(r) for r in rows]
    pivots = []
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not field.is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_linear(field, matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Unique solution of an (over)determined, consistent linear system."""
    ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = _rref(field, aug)
    if ncols in pivots:
        raise LinearSystemError("inconsistent linear system")
    if len(pivots) < ncols:
        raise LinearSystemError(f"singular linear system (rank {len(pivots)} < {ncols})")
    return [rows[i][-1] for i in range(ncols)]


def nullspace(field, matrix: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of the right kernel, one vector per free column."""
    if ncols is None:
        ncols = len(matrix[0])
    if not matrix:
        rows, pivots = [], []
    else:
        rows, pivots = _rref(field, matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(v)
    return basis


def is_square_rational(q: MPQ) -> bool:
    if q < 0:
        return False
    return gmpy2.is_square(q.numerator) and gmpy2.is_square(q.denominator)


def rational_sqrt(q) -> MPQ | None:
    """The non-negative rational square root of ``q``, or None."""
    q = to_rational(q)
    if not is_square_rational(q):
        return None
    return mpq(gmpy2.isqrt(q.numerator), gmpy2.isqrt(q.denominator))
