"""Difference operators sum_i u_i(n) T^i with T f(n) = f(n+1).

Coefficients are rational functions of n over the constant field K.
Composition follows (u T^i)(v T^j) = u(n) v(n+i) T^(i+j).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Mapping

from .arith import QQ, SYMBOLIC, RatFunc, RatFuncField, nullspace, to_rational
from .errors import DomainError, LinearSystemError, VerificationError
from .expr import parse_ratfunc

__all__ = [
    "DifferenceOperator",
    "compose",
    "commutator",
    "apply_window",
    "BCRelation",
    "bc_relation",
]


class DifferenceOperator:
    """Finitely supported sum of u_i(n) T^i; zero coefficients are dropped."""

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs: Mapping[int, object], field=None):
        if field is None:
            first = next((c for c in coeffs.values() if isinstance(c, RatFunc)), None)
            field = first.field if first is not None else QQ
        ring = RatFuncField(field, "n")
        cs = {}
        for i, c in coeffs.items():
            c = ring(c)
            if not c.is_zero():
                cs[int(i)] = c
        self.field = field
        self.coeffs = dict(sorted(cs.items()))

    @classmethod
    def identity(cls, field=QQ) -> "DifferenceOperator":
        return cls({0: 1}, field)

    @classmethod
    def shift(cls, k: int = 1, field=QQ) -> "DifferenceOperator":
        return cls({k: 1}, field)

    @property
    def ring(self) -> RatFuncField:
        return RatFuncField(self.field, "n")

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.coeffs:
            return None
        ks = list(self.coeffs)
        return ks[0], ks[-1]

    @property
    def order(self) -> int:
        return self.support[1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> RatFunc:
        return self.coeffs.get(i, self.ring.zero)

    def __eq__(self, other):
        if not isinstance(other, DifferenceOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def _coerce(self, other) -> "DifferenceOperator":
        if isinstance(other, DifferenceOperator):
            return other
        return DifferenceOperator({0: other}, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out[i] + c if i in out else c
        return DifferenceOperator(out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return DifferenceOperator({i: -c for i, c in self.coeffs.items()}, self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return compose(self, self._coerce(other))

    def __rmul__(self, other):
        return compose(self._coerce(other), self)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers of difference operators are not finite")
        result = DifferenceOperator.identity(self.field)
        for _ in range(e):
            result = compose(result, self)
        return result

    def map_coeffs(self, fn, field) -> "DifferenceOperator":
        return DifferenceOperator({i: c.map_coeffs(fn, field) for i, c in self.coeffs.items()}, field)

    def specialize(self, c1, c2) -> "DifferenceOperator":
        """Substitute rational values for symbolic c1, c2."""
        if not self.field.symbolic:
            return self
        return self.map_coeffs(lambda x: self.field.specialize(x, c1, c2), QQ)

    def is_polynomial(self) -> bool:
        return all(c.is_poly() for c in self.coeffs.values())

    def max_degree(self) -> int:
        return max((max(c.num.degree(), c.den.degree()) for c in self.coeffs.values()), default=-1)

    def serialize(self) -> list[tuple[int, str]]:
        """Canonical form: (shift degree, coefficient string), highest first."""
        return [(i, self.coeffs[i].fmt("n")) for i in sorted(self.coeffs, reverse=True)]

    def to_json(self, curve=None, params=None) -> dict:
        doc = {
            "support": list(self.support) if self.coeffs else [],
            "coeffs": {str(i): s for i, s in self.serialize()},
        }
        if curve is not None:
            doc["curve"] = curve_json(curve)
        if params is not None:
            doc["params"] = {"a": params.a.fmt("n"), "gamma": params.gamma.fmt("n")}
        return doc

    @classmethod
    def from_json(cls, doc, field=None) -> "DifferenceOperator":
        if isinstance(doc, str):
            doc = json.loads(doc)
        c1 = c2 = None
        if field is None:
            curve = doc.get("curve")
            if curve is None or curve.get("c1") == "sym" or curve.get("c2") == "sym":
                field = SYMBOLIC
            else:
                field = QQ
                c1, c2 = to_rational(curve["c1"]), to_rational(curve["c2"])
        coeffs = {int(i): parse_ratfunc(s, field, c1, c2) for i, s in doc["coeffs"].items()}
        op = cls(coeffs, field)
        if doc.get("support") and list(op.support) != list(doc["support"]):
            raise ValueError(f"support {doc['support']} does not match coefficients {op.support}")
        return op

    def fmt(self, style: str = "text") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in sorted(self.coeffs, reverse=True):
            c = self.coeffs[i]
            s = _latex_coeff(c) if style == "latex" else c.fmt("n")
            if style == "latex":
                t = "" if i == 0 else ("T" if i == 1 else f"T^{{{i}}}")
            else:
                t = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not t:
                parts.append(s if _atomic(s) else f"({s})")
            elif s == "1":
                parts.append(t)
            elif s == "-1":
                parts.append("-" + t)
            else:
                parts.append((s if _atomic(s) else f"({s})") + (" " if style == "latex" else "*") + t)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"DifferenceOperator({self.fmt()})"


def curve_json(curve) -> dict:
    if curve.is_symbolic:
        return {"c1": "sym", "c2": "sym"}
    return {"c1": curve.field.fmt(curve.c1), "c2": curve.field.fmt(curve.c2)}


def _atomic(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return not any(ch in body for ch in "+- ")


def _latex_coeff(c: RatFunc) -> str:
    def tex(s):
        s = re.sub(r"\^(\d+)", r"^{\1}", s)
        s = re.sub(r"(\d+)/(\d+)\*", r"\\frac{\1}{\2}", s)
        s = re.sub(r"(\d+)/(\d+)", r"\\frac{\1}{\2}", s)
        s = re.sub(r"c(\d)", r"c_{\1}", s)
        return s.replace("*", " ")

    if c.is_poly():
        return tex(c.num.fmt("n"))
    return f"\\frac{{{tex(c.num.fmt('n'))}}}{{{tex(c.den.fmt('n'))}}}"


def compose(L: DifferenceOperator, M: DifferenceOperator) -> DifferenceOperator:
    """The product L M, using u(n)T^i v(n) = u(n) v(n+i) T^i."""
    out: dict[int, RatFunc] = {}
    for i, u in L.coeffs.items():
        for j, v in M.coeffs.items():
            term = u * v.shift(i)
            k = i + j
            out[k] = out[k] + term if k in out else term
    return DifferenceOperator(out, L.field)


def commutator(L: DifferenceOperator, M: DifferenceOperator) -> DifferenceOperator:
    return compose(L, M) - compose(M, L)


def apply_window(L: DifferenceOperator, values: Mapping[int, object], n0: int, n1: int) -> dict[int, object]:
    """(L psi)(n) = sum_i u_i(n) psi(n+i) for n0 <= n <= n1.

    ``values`` maps integers to scalars (possibly in a quadratic extension)
    and must cover [n0 + i_min, n1 + i_max].
    """
    if L.is_zero():
        return {n: values[n] * 0 for n in range(n0, n1 + 1)}
    lo, hi = L.support
    missing = [n for n in (n0 + lo, n1 + hi) if n not in values]
    if missing:
        raise DomainError(f"window too narrow: need psi on [{n0 + lo}, {n1 + hi}]")
    out = {}
    for n in range(n0, n1 + 1):
        acc = None
        for i, u in L.coeffs.items():
            try:
                un = u(L.field(n))
            except DomainError as exc:
                raise DomainError(f"coefficient of T^{i} has a pole at n = {n}") from exc
            term = values[n + i] * un
            acc = term if acc is None else acc + term
        out[n] = acc
    return out


# ---------------------------------------------------------------------------
# Burchnall-Chaundy relations


@dataclass(frozen=True)
class BCRelation:
    """Polynomial Q(lambda, mu) = sum q_ij lambda^i mu^j over Q."""

    coeffs: dict

    def monomials(self):
        return sorted(self.coeffs, key=_mono_key, reverse=True)

    def weighted_degree(self, weights=(2, 3)) -> int:
        return max(weights[0] * i + weights[1] * j for i, j in self.coeffs)

    def fmt(self) -> str:
        parts = []
        for i, j in self.monomials():
            q = self.coeffs[(i, j)]
            mono = "*".join(
                s for s in (
                    ("mu" if j == 1 else f"mu^{j}") if j else "",
                    ("lambda" if i == 1 else f"lambda^{i}") if i else "",
                ) if s
            )
            parts.append(_term(q, mono))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def evaluate(self, L2: DifferenceOperator, L3: DifferenceOperator) -> DifferenceOperator:
        total = DifferenceOperator({}, L2.field)
        for (i, j), q in self.coeffs.items():
            total = total + (L2 ** i) * (L3 ** j) * q
        return total


def _term(q, mono):
    s = QQ.fmt(q)
    if not mono:
        return s
    if q == 1:
        return mono
    if q == -1:
        return "-" + mono
    return f"{s}*{mono}"


def _mono_key(m):
    i, j = m
    return (j, i)


def bc_relation(
    L2: DifferenceOperator,
    L3: DifferenceOperator,
    weighted_degree: int,
    base: int = 25,
    weights: tuple[int, int] = (2, 3),
    max_attempts: int = 4,
) -> BCRelation:
    """Nonzero Q with sum of weights <= weighted_degree and Q(L2, L3) = 0.

    The candidate comes from the kernel of sampled operator coefficients at
    consecutive integers from ``base``; it is accepted only after the exact
    operator Q(L2, L3) is composed and found to be zero.  When the kernel has
    dimension above one, the element whose leading monomial (lexicographic in
    (mu, lambda)) is largest is returned, normalized to leading coefficient 1.
    """
    if L2.field.symbolic or L3.field.symbolic:
        raise ValueError("bc_relation needs specialized c1, c2")
    monos = sorted(
        ((i, j) for i in range(weighted_degree // weights[0] + 1) for j in range(weighted_degree // weights[1] + 1)
         if weights[0] * i + weights[1] * j <= weighted_degree),
        key=_mono_key,
        reverse=True,
    )
    p2 = [DifferenceOperator.identity(L2.field)]
    p3 = [DifferenceOperator.identity(L2.field)]
    for _ in range(max(i for i, _ in monos)):
        p2.append(compose(p2[-1], L2))
    for _ in range(max(j for _, j in monos)):
        p3.append(compose(p3[-1], L3))
    ops = [compose(p2[i], p3[j]) for i, j in monos]
    shifts = sorted({s for op in ops for s in op.coeffs})
    n_samples = len(monos) + (shifts[-1] - shifts[0] + 1)
    for attempt in range(max_attempts):
        start = base + attempt * 7 * n_samples
        rows = []
        for s in shifts:
            for n in range(start, start + n_samples + attempt * 4):
                rows.append([_sample(op, s, n) for op in ops])
        kernel = nullspace(QQ, rows, len(ops))
        if not kernel:
            raise LinearSystemError(f"no relation with weighted degree <= {weighted_degree}; raise the bound")
        q = _canonical(kernel)
        rel = BCRelation({m: c for m, c in zip(monos, q) if c != 0})
        total = DifferenceOperator({}, L2.field)
        for m, c in zip(monos, q):
            if c != 0:
                total = total + ops[monos.index(m)] * c
        if total.is_zero():
            return rel
    raise VerificationError("sampled kernel failed exact verification after resampling")


def _sample(op: DifferenceOperator, s: int, n: int):
    c = op.coeffs.get(s)
    if c is None:
        return QQ.zero
    return c(QQ(n))


def _canonical(kernel: list[list]) -> list:
    # kernel vectors are indexed by monomials in descending order; row-reduce
    # so the first row carries the largest leading monomial with coefficient 1
    from .arith import _rref

    rows, _ = _rref(QQ, kernel)
    return rows[0]
