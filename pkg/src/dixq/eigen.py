"""Common eigenfunctions at a point of the curve and exact residual checks.

A point (z0, w0) need not be rational: w0 is taken in the quadratic extension
Q[w]/(w^2 - F(z0)) unless F(z0) happens to be a square.  The window psi(n) is
generated from two seed values by psi(n+1) = chi1(n) psi(n-1) + chi2(n) psi(n).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .arith import QQ, QuadExtField, rational_sqrt, to_rational
from .curve import CurveParams, FieldElement
from .errors import DomainError
from .operators import DifferenceOperator
from .spectral import ParameterSequences, chi_pair_at

__all__ = ["CurvePoint", "PsiWindow", "EigenReport", "psi_window", "residual_check", "height"]


@dataclass(frozen=True)
class CurvePoint:
    """A point (z0, w0) with w0^2 = F(z0) and w0 in the field ``K``.

    Use :meth:`at` to pick the point over z0; ``sign`` selects the sheet.
    """

    curve: CurveParams
    z0: object
    w0: object
    K: object

    @classmethod
    def at(cls, curve: CurveParams, z0, sign: int = 1, extension: bool | None = None) -> "CurvePoint":
        """The point over ``z0`` with w0 = sign * sqrt(F(z0)).

        A rational square root is used when one exists, unless ``extension``
        is True.  ``extension=False`` insists on a rational point.
        """
        if curve.is_symbolic:
            raise DomainError("curve points need numeric c1, c2")
        z0 = to_rational(z0)
        if z0 == 0:
            raise DomainError("z0 = 0 lies over the pole Q of the eigenvalues")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        Fz = curve.F()(z0)
        root = rational_sqrt(Fz)
        if root is not None and not extension:
            return cls(curve, z0, QQ(sign * root), QQ)
        if extension is False:
            raise DomainError(f"F({z0}) = {Fz} is not a rational square")
        K = QuadExtField(QQ, Fz)
        return cls(curve, z0, K.gen() * sign, K)

    def conjugate(self) -> "CurvePoint":
        """The image (z0, -w0) under the involution."""
        return CurvePoint(self.curve, self.z0, -self.w0, self.K)

    def value(self, f: FieldElement):
        return f.evaluate(self.z0, self.w0)

    def fmt(self) -> str:
        return f"(z0, w0) = ({self.z0}, {self.K.fmt(self.w0)}), w0^2 = {self.curve.F()(self.z0)}"


@dataclass(frozen=True)
class PsiWindow:
    """psi(n) for n = start .. start + len(values) - 1."""

    start: int
    values: tuple
    point: CurvePoint

    @property
    def stop(self) -> int:
        return self.start + len(self.values) - 1

    def __getitem__(self, n: int):
        if not self.start <= n <= self.stop:
            raise IndexError(f"n = {n} outside the window [{self.start}, {self.stop}]")
        return self.values[n - self.start]

    def __contains__(self, n) -> bool:
        return self.start <= n <= self.stop


def psi_window(
    params: ParameterSequences,
    curve: CurveParams,
    point: CurvePoint,
    n0: int,
    length: int = 20,
    seed=(0, 1),
) -> PsiWindow:
    """Run the recurrence from psi(n0 - 1), psi(n0) = seed for ``length`` steps."""
    K = point.K
    s0, s1 = K(seed[0]), K(seed[1])
    if K.is_zero(s0) and K.is_zero(s1):
        raise ValueError("seed (0, 0) gives the zero solution")
    vals = [s0, s1]
    for n in range(n0, n0 + length):
        try:
            chi = chi_pair_at(params, curve, n)
            c1, c2 = point.value(chi.chi1), point.value(chi.chi2)
        except (DomainError, ZeroDivisionError) as exc:
            raise DomainError(f"chi has a pole at n = {n} for z0 = {point.z0}: {exc}") from exc
        vals.append(c1 * vals[-2] + c2 * vals[-1])
    return PsiWindow(n0 - 1, tuple(vals), point)


def height(x) -> object:
    """Largest absolute value among the rational coordinates of ``x``."""
    if hasattr(x, "a"):
        return max(abs(to_rational(x.a)), abs(to_rational(x.b)))
    return abs(to_rational(x))


@dataclass
class EigenReport:
    eigenvalue: object
    residuals: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [(n, r) for n, r in self.residuals.items() if r != 0]

    @property
    def ok(self) -> bool:
        return bool(self.residuals) and not self.failures

    @property
    def max_residual(self):
        return max((height(r) for r in self.residuals.values()), default=0)


def residual_check(L: DifferenceOperator, lam: FieldElement, psi: PsiWindow, point: CurvePoint | None = None) -> EigenReport:
    """(L psi)(n) - lam(z0, w0) psi(n) at every n the window supports.

    Points n where a coefficient of L has a pole are skipped and listed.
    Raises :class:`DomainError` when the window is too short for L.
    """
    point = point or psi.point
    if L.field.symbolic:
        raise DomainError("specialize L to numeric c1, c2 before checking residuals")
    K = point.K
    ev = K(point.value(lam))
    report = EigenReport(ev)
    lo, hi = L.support or (0, 0)
    first, last = psi.start - lo, psi.stop - hi
    if first > last:
        raise DomainError(f"window [{psi.start}, {psi.stop}] is too short for an operator with support [{lo}, {hi}]")
    for n in range(first, last + 1):
        try:
            acc = K.zero
            for i, u in L.coeffs.items():
                acc = acc + psi[n + i] * u(QQ(n))
        except (DomainError, ZeroDivisionError):
            report.skipped.append(n)
            continue
        report.residuals[n] = acc - ev * psi[n]
    return report
