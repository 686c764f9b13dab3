"""Spectral data chi1, chi2 built from two free sequences a(n), gamma(n).

chi1 is invariant under the involution and vanishes over gamma(n+1); chi2
has a simple pole with residue 1 at Q.  Together they drive the recurrence
psi(n+1) = chi1(n) psi(n-1) + chi2(n) psi(n) satisfied by every common
eigenfunction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .arith import Poly, QuadExtField, RatFunc, RatFuncField
from .curve import CurveParams, FieldElement
from .errors import DomainError

__all__ = [
    "ParameterSequences",
    "ChiPair",
    "cd_coeffs",
    "chi_pair",
    "chi_pair_from_cd",
    "chi_pair_at",
    "series_coeffs_closed",
    "residue_at",
    "check_kn_constraints",
    "check_kn_identities",
    "KNReport",
    "KNFailure",
]


@dataclass(frozen=True)
class ParameterSequences:
    """The free functional parameters a(n) and gamma(n), as elements of K(n)."""

    a: RatFunc
    gamma: RatFunc

    @property
    def ring(self) -> RatFuncField:
        return RatFuncField(self.a.field, "n")

    def check_at(self, n0) -> None:
        """Raise DomainError if gamma degenerates at n0."""
        g = [_value(self.gamma, n0 + k) for k in (-1, 0, 1)]
        if g[1] == 0:
            raise DomainError(f"gamma({n0}) = 0")
        if g[1] == g[2]:
            raise DomainError(f"gamma({n0}) = gamma({n0 + 1})")
        if g[1] == g[0]:
            raise DomainError(f"gamma({n0}) = gamma({n0 - 1})")


def _value(r: RatFunc, n0):
    try:
        return r(r.field(n0))
    except DomainError as exc:
        raise DomainError(f"parameter pole at n = {n0}") from exc


@dataclass(frozen=True)
class ChiPair:
    """chi1, chi2 as function-field elements with n-dependent coefficients."""

    chi1: FieldElement
    chi2: FieldElement

    def shift(self, k: int) -> "ChiPair":
        return ChiPair(self.chi1.shift_n(k), self.chi2.shift_n(k))

    def at_n(self, n0) -> "ChiPair":
        return ChiPair(self.chi1.at_n(n0), self.chi2.at_n(n0))


def _nonzero(x, what: str):
    if x == 0:
        raise DomainError(f"degenerate parameters: {what} vanishes identically")
    return x


def _F_of(curve: CurveParams, x, ring):
    return curve.F().eval_in(x, ring)


def _cd_values(curve, ring, a0, a1, g_prev, g0, g1):
    F0 = _F_of(curve, g0, ring)
    c = g_prev * (a0 * a0 - F0) / _nonzero(4 * g0 * (g0 - g_prev), "gamma(n)(gamma(n) - gamma(n-1))")
    d = ((a1 - 1) * g0 + (a0 + 1) * g1) / _nonzero(2 * (g0 - g1) * g1, "(gamma(n) - gamma(n+1)) gamma(n+1)")
    return c, d


def cd_coeffs(params: ParameterSequences, curve: CurveParams) -> tuple[RatFunc, RatFunc]:
    """The auxiliary functions c(n), d(n) of chi1, chi2."""
    a, g = params.a, params.gamma
    ring = params.ring
    return _cd_values(curve, ring, a, a.shift(1), g.shift(-1), g, g.shift(1))


def _chi_from(curve, ring, a0, g0, g1, c, d) -> ChiPair:
    z = Poly.gen(ring)
    one = Poly.const(ring, ring.one)
    z_minus_g = z - Poly.const(ring, g0)
    chi1 = FieldElement(curve, RatFunc(Poly.const(ring, c), z_minus_g) + c / _nonzero(g0 - g1, "gamma(n) - gamma(n+1)"))
    half = ring.one / 2
    A = (
        RatFunc(Poly.const(ring, half), z)
        + RatFunc(Poly.const(ring, a0 * half), z_minus_g)
        + RatFunc(Poly.const(ring, d))
    )
    # w gamma / (2 z (gamma - z))
    B = RatFunc(Poly.const(ring, g0 * half), z * (Poly.const(ring, g0) - z * one))
    return ChiPair(chi1, FieldElement(curve, A, B))


def chi_pair_from_cd(params: ParameterSequences, curve: CurveParams, c: RatFunc, d: RatFunc) -> ChiPair:
    """chi1, chi2 for given c(n), d(n); lets callers inject perturbed data."""
    a, g = params.a, params.gamma
    return _chi_from(curve, params.ring, a, g, g.shift(1), c, d)


def chi_pair(params: ParameterSequences, curve: CurveParams) -> ChiPair:
    c, d = cd_coeffs(params, curve)
    return chi_pair_from_cd(params, curve, c, d)


def chi_pair_at(params: ParameterSequences, curve: CurveParams, n0) -> ChiPair:
    """chi1(n0), chi2(n0) with coefficients in the constant field."""
    params.check_at(n0)
    K = curve.field
    a0, a1 = _value(params.a, n0), _value(params.a, n0 + 1)
    gp, g0, g1 = (_value(params.gamma, n0 + k) for k in (-1, 0, 1))
    c, d = _cd_values(curve, K, a0, a1, gp, g0, g1)
    return _chi_from(curve, K, a0, g0, g1, c, d)


def series_coeffs_closed(params: ParameterSequences, curve: CurveParams) -> tuple[RatFunc, RatFunc, RatFunc, RatFunc]:
    """Closed forms of b0, b1 (chi1 = b0 + b1 z + ...) and e0, e1
    (chi2 = 1/z + e0 + e1 z + ...) at Q."""
    a, g = params.a, params.gamma
    gp, gn = g.shift(-1), g.shift(1)
    a1 = a.shift(1)
    Fg = _F_of(curve, g, params.ring)
    c1, c2 = curve.c1, curve.c2
    b0 = gp * gn * (Fg - a * a) / _nonzero(4 * (gp - g) * (g - gn) * g * g, "b0 denominator")
    b1 = gp * (a * a - Fg) / _nonzero(4 * (gp - g) * g * g * g, "b1 denominator")
    e0 = (c1 / 2 + 1 / g - a / g + ((a1 - 1) * g + (a + 1) * gn) / _nonzero((g - gn) * gn, "e0 denominator")) / 2
    e1 = (8 - 8 * a + 4 * c1 * g - (c1 * c1 - 4 * c2) * g * g) / (16 * g * g)
    return b0, b1, e0, e1


# ---------------------------------------------------------------------------
# Krichever-Novikov constraints


def _simple_residue(r: RatFunc, zeta, target):
    if r.den(zeta) != 0:
        return target.zero
    dd = r.den.derivative()(zeta)
    if dd == 0:
        raise DomainError("pole of order > 1; residue_at handles simple poles only")
    return target(r.num(zeta) / dd)


def residue_at(elem: FieldElement, zeta, w_val):
    """Residue in the local coordinate z of A + B w at the point (zeta, w_val).

    ``w_val`` lives in a quadratic extension of the coefficient ring; only
    simple poles are supported (all chi poles are simple).
    """
    target = w_val.K
    res = _simple_residue(elem.A, zeta, target)
    if not elem.B.is_zero():
        res = res + _simple_residue(elem.B, zeta, target) * w_val
    return res


@dataclass(frozen=True)
class KNFailure:
    n: object
    constraint: str
    detail: str


@dataclass
class KNReport:
    checked: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.ok:
            return f"all {len(self.checked)} constraint checks pass"
        f = self.failures[0]
        return f"{len(self.failures)} of {len(self.checked)} checks fail; first: n={f.n} {f.constraint}: {f.detail}"


def _alpha(ring, E, sign, a_prev, g_prev, g0, d_prev):
    """First component a_j(n) of the kernel vector alpha_j(n) = (a_j(n), 1)."""
    s = E.gen() * sign
    # a_j(n) = -chi2(n-1, P_j(n)), written out in the parameters
    return -(
        E(ring.one / (2 * g0) + a_prev / (2 * (g0 - g_prev)) + d_prev)
        + s * (g_prev / (2 * g0 * (g_prev - g0)))
    )


def _kn_checks(curve, ring, label, chi: ChiPair, a: Callable, g: Callable, d: Callable, report: KNReport):
    F = curve.F()
    E0 = QuadExtField(ring, F.eval_in(g(0), ring))
    E1 = QuadExtField(ring, F.eval_in(g(1), ring))
    for j, sign in ((1, 1), (2, -1)):
        pt = "P(n)" if sign == 1 else "sigma P(n)"
        # (3): Res chi1 = a_j(n) Res chi2 at the poles over gamma(n)
        w = E0.gen() * sign
        r1 = residue_at(chi.chi1, g(0), w)
        r2 = residue_at(chi.chi2, g(0), w)
        aj = _alpha(ring, E0, sign, a(-1), g(-1), g(0), d(-1))
        name = f"residue relation at {pt}"
        report.checked.append((label, name))
        if r1 != aj * r2:
            report.failures.append(KNFailure(label, name, f"Res chi1 = {E0.fmt(r1)}, a_{j} Res chi2 = {E0.fmt(aj * r2)}"))
        # (4): chi1(n) vanishes over gamma(n+1)
        w1 = E1.gen() * sign
        v = chi.chi1.evaluate(g(1), w1)
        name = f"chi1 zero at {pt.replace('(n)', '(n+1)')}"
        report.checked.append((label, name))
        if v != 0:
            report.failures.append(KNFailure(label, name, f"chi1 = {E1.fmt(v)}"))
        # (5): alpha_j(n+1) chi(n, P_j(n+1)) = 0, second component
        aj1 = _alpha(ring, E1, sign, a(0), g(0), g(1), d(0))
        v2 = aj1 + chi.chi2.evaluate(g(1), w1)
        name = f"alpha_{j}(n+1) in kernel of chi(n)"
        report.checked.append((label, name))
        if v2 != 0:
            report.failures.append(KNFailure(label, name, f"second component = {E1.fmt(v2)}"))


def check_kn_constraints(params: ParameterSequences, curve: CurveParams, n_window, chis: ChiPair | None = None) -> KNReport:
    """Check the residue, determinant-zero and kernel-vector constraints at
    each integer n of ``n_window``, exactly in Q(gamma(n))[sqrt F(gamma(n))].

    ``chis`` defaults to :func:`chi_pair`; passing perturbed data is how the
    checker is exercised against failures.  Degenerate windows raise
    :class:`DomainError` instead of reporting a failure.
    """
    if chis is None:
        chis = chi_pair(params, curve)
    _, d = cd_coeffs(params, curve)
    K = curve.field
    report = KNReport()
    for n0 in n_window:
        params.check_at(n0)
        params.check_at(n0 + 1)
        params.check_at(n0 - 1)
        chi = chis.at_n(n0)
        _kn_checks(
            curve,
            K,
            n0,
            chi,
            lambda k: _value(params.a, n0 + k),
            lambda k: _value(params.gamma, n0 + k),
            lambda k: _value(d, n0 + k),
            report,
        )
    return report


def check_kn_identities(params: ParameterSequences, curve: CurveParams, chis: ChiPair | None = None) -> KNReport:
    """The same constraints as identities in n, over K(n)[sqrt F(gamma(n))]."""
    if chis is None:
        chis = chi_pair(params, curve)
    _, d = cd_coeffs(params, curve)
    ring = params.ring
    report = KNReport()
    _kn_checks(
        curve,
        ring,
        "n",
        chis,
        lambda k: params.a.shift(k),
        lambda k: params.gamma.shift(k),
        lambda k: d.shift(k),
        report,
    )
    return report
