"""Construction of the commuting operators from chi1, chi2.

Every common eigenfunction satisfies psi(n+1) = chi1(n) psi(n-1) + chi2(n) psi(n),
so each shift psi(n+k) reduces to r1_k(n) psi(n-1) + r2_k(n) psi(n).  An
operator L = T^m + sum_{i<m} u_i T^i with L psi = lambda psi must therefore
satisfy two identities in the function field,

    P1 = sum_i u_i r2_i = lambda,      P2 = sum_i u_i r1_i = 0,

which determine the u_i.  :func:`build_L_generic` solves them at sampled
integers n, reconstructs the u_i as functions of n and then re-checks both
identities symbolically.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from .arith import (
    RatFunc,
    poly_interpolate,
    ratfunc_reconstruct,
    solve_linear,
)
from .curve import CurveParams, FieldElement, expand_at_Q, lambda_m
from .errors import DomainError, InterpolationError, LinearSystemError, VerificationError
from .operators import DifferenceOperator, commutator
from .spectral import ChiPair, ParameterSequences, chi_pair, chi_pair_at, series_coeffs_closed

__all__ = [
    "BasisReduction",
    "BuildDiagnostics",
    "build_L2_closed",
    "reduce_basis",
    "build_L_generic",
    "verify_identities",
    "PolynomialFamily",
    "normalize_L2",
    "polynomial_family",
    "polynomial_family_params",
    "polynomial_family_operators",
    "AffineMatch",
    "match_affine",
]

log = logging.getLogger(__name__)


def lambda1_coeffs(curve: CurveParams):
    """p1, p0 in lambda1 = z^-2 + p1 z^-1 + p0 + O(z)."""
    s = expand_at_Q(lambda_m(curve, 2), curve, 0)
    return s.coeff(-1), s.coeff(0)


def build_L2_closed(params: ParameterSequences, curve: CurveParams) -> DifferenceOperator:
    """The second-order operator of lambda1 in closed form from b0, b1, e0, e1."""
    b0, b1, e0, e1 = series_coeffs_closed(params, curve)
    if b0.is_zero():
        raise DomainError("b0 vanishes identically; the T^-1 coefficient is undefined")
    p1, p0 = lambda1_coeffs(curve)
    b0m, b1m, e0m = b0.shift(-1), b1.shift(-1), e0.shift(-1)
    e0p = e0.shift(1)
    u1 = p1 - e0 - e0p
    u0 = p0 - b0 - b0.shift(1) - e0 * p1 + e0 * e0 - e1 - e1.shift(1)
    um1 = -b1 + b0 * (-p1 - b1m / b0m + e0m + e0)
    um2 = b0 * b0m
    return DifferenceOperator({2: 1, 1: u1, 0: u0, -1: um1, -2: um2}, curve.field)


# ---------------------------------------------------------------------------
# basis reduction


@dataclass(frozen=True)
class BasisReduction:
    """pairs[k] = (r1, r2) with psi(n+k) = r1 psi(n-1) + r2 psi(n)."""

    pairs: dict

    def __getitem__(self, k):
        return self.pairs[k]


def _reduce(chi: Callable[[int], ChiPair], m: int, one: FieldElement) -> BasisReduction:
    zero = one * 0
    pairs = {-1: (one, zero), 0: (zero, one)}
    for k in range(0, m):
        c = chi(k)
        r_prev, r_cur = pairs[k - 1], pairs[k]
        pairs[k + 1] = (
            c.chi1 * r_prev[0] + c.chi2 * r_cur[0],
            c.chi1 * r_prev[1] + c.chi2 * r_cur[1],
        )
    for k in range(-1, -m, -1):
        c = chi(k)
        if c.chi1.is_zero():
            raise DomainError(f"chi1 vanishes identically at shift {k}")
        inv = c.chi1.inverse()
        r_next, r_cur = pairs[k + 1], pairs[k]
        pairs[k - 1] = (
            (r_next[0] - c.chi2 * r_cur[0]) * inv,
            (r_next[1] - c.chi2 * r_cur[1]) * inv,
        )
    return BasisReduction(pairs)


def reduce_basis(chis: ChiPair, m: int) -> BasisReduction:
    """Reductions of psi(n+k), |k| <= m, with coefficients in K(n)."""
    one = FieldElement.const(chis.chi1.curve, 1, chis.chi1.ring)
    cache = {}

    def chi(k):
        if k not in cache:
            cache[k] = chis.shift(k) if k else chis
        return cache[k]

    return _reduce(chi, m, one)


def _reduction_at(params, curve, n0, m) -> BasisReduction:
    one = FieldElement.const(curve, 1)
    return _reduce(lambda k: chi_pair_at(params, curve, n0 + k), m, one)


# ---------------------------------------------------------------------------
# sampled construction


def _solve_at(params, curve, lam, m, n0, order):
    red = _reduction_at(params, curve, n0, m)
    K = curve.field
    s1 = {k: expand_at_Q(red[k][0], curve, order) for k in range(-m, m + 1)}
    s2 = {k: expand_at_Q(red[k][1], curve, order) for k in range(-m, m + 1)}
    sl = expand_at_Q(lam, curve, order)
    lo = min(s.val for s in list(s1.values()) + list(s2.values()) + [sl])
    unknowns = list(range(m - 1, -m - 1, -1))
    rows, rhs = [], []
    for d in range(lo, order + 1):
        rows.append([s2[i].coeff(d) for i in unknowns])
        rhs.append(sl.coeff(d) - s2[m].coeff(d))
        rows.append([s1[i].coeff(d) for i in unknowns])
        rhs.append(-s1[m].coeff(d))
    sol = solve_linear(K, rows, rhs)
    u = dict(zip(unknowns, sol))
    u[m] = K.one
    # exact check of both identities at this n
    P1 = sum((red[i][1] * u[i] for i in u), FieldElement.const(curve, 0))
    P2 = sum((red[i][0] * u[i] for i in u), FieldElement.const(curve, 0))
    if not (P1 - lam).is_zero() or not P2.is_zero():
        raise VerificationError(f"sampled solution fails the function-field identities at n = {n0}", {"n": n0})
    return u


@dataclass
class BuildDiagnostics:
    samples: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    degree_bounds: dict = field(default_factory=dict)
    reconstruction: dict = field(default_factory=dict)


def build_L_generic(
    params: ParameterSequences,
    curve: CurveParams,
    m: int,
    lam: FieldElement | None = None,
    base: int = 20,
    degree_bound: int | None = None,
    max_total_degree: int | None = None,
    verify: bool = True,
    diagnostics: BuildDiagnostics | None = None,
) -> DifferenceOperator:
    """Operator T^m + sum_{i<m} u_i T^i whose eigenvalue on psi is ``lam``.

    ``lam`` defaults to :func:`lambda_m`.  Samples start at n = ``base``;
    each coefficient is interpolated as a polynomial in n with degree bound
    ``degree_bound`` (default 4m + 2, raised while samples remain), and
    otherwise reconstructed as a rational function of total degree at most
    ``max_total_degree`` (default 40m).
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    if lam is None:
        lam = lambda_m(curve, m)
    diag = diagnostics if diagnostics is not None else BuildDiagnostics()
    order = 2 * m + 6
    bound = degree_bound if degree_bound is not None else 4 * m + 2
    cap = max_total_degree if max_total_degree is not None else 40 * m
    holdout = 3
    samples: dict = {}
    next_n = [base]

    def sample(count):
        while len(samples) < count:
            n0 = next_n[0]
            next_n[0] += 1
            if next_n[0] - base > 20 * count + 100:
                last = diag.skipped[-1][1] if diag.skipped else "none recorded"
                raise DomainError(f"too many degenerate sample points; last reason: {last}")
            try:
                samples[n0] = _solve_at(params, curve, lam, m, n0, order)
            except (DomainError, ZeroDivisionError, LinearSystemError) as exc:
                diag.skipped.append((n0, str(exc)))
                continue
            diag.samples.append(n0)

    K = curve.field
    coeffs = {m: RatFunc.const(K, 1)}
    for i in range(m - 1, -m - 1, -1):
        coeffs[i] = _reconstruct(i, samples, sample, bound, cap, holdout, K, diag)
    L = DifferenceOperator(coeffs, K)
    if verify:
        verify_identities(L, params, curve, lam)
    return L


def _reconstruct(i, samples, sample, bound, cap, holdout, K, diag):
    sample(bound + 1 + holdout)
    pts = [(n0, u[i]) for n0, u in sorted(samples.items())]
    try:
        p = poly_interpolate(pts, bound, K)
        diag.degree_bounds[i] = bound
        diag.reconstruction[i] = "polynomial"
        return RatFunc(p)
    except InterpolationError:
        pass
    # Cauchy interpolation covers polynomials of higher degree as well;
    # the number of samples doubles until the cap is reached
    total = bound
    while True:
        total = min(cap, 2 * total)
        sample(total + 1 + holdout)
        pts = [(n0, u[i]) for n0, u in sorted(samples.items())]
        try:
            r = ratfunc_reconstruct(pts, total, K, holdout=holdout)
        except InterpolationError as exc:
            if total < cap:
                continue
            raise InterpolationError(
                f"coefficient of T^{i}: no rational function of total degree <= {cap} fits "
                f"{len(pts)} samples at n = {pts[0][0]}..{pts[-1][0]}"
            ) from exc
        log.debug("T^%d reconstructed at total degree %d from %d samples", i, total, len(pts))
        diag.degree_bounds[i] = total
        diag.reconstruction[i] = "polynomial" if r.is_poly() else "rational"
        return r


def verify_identities(L: DifferenceOperator, params: ParameterSequences, curve: CurveParams, lam: FieldElement) -> None:
    """Check P1 = lam and P2 = 0 as identities in K(n)(z, w).

    Raises :class:`VerificationError` naming the failing identity.  The
    expansion at Q is compared first so a failure is localized to a degree.
    """
    m = L.order
    lo = L.support[0]
    red = reduce_basis(chi_pair(params, curve), max(m, -lo))
    ring = params.ring
    lam_n = lam if lam.ring == ring else lam.map_coeffs(ring, ring)
    zero = FieldElement.const(curve, 0, ring)
    P1 = zero
    P2 = zero
    for i, u in L.coeffs.items():
        P1 = P1 + red[i][1] * u
        P2 = P2 + red[i][0] * u
    order = 2 * m + 6
    for name, expr in (("P1 - lambda", P1 - lam_n), ("P2", P2)):
        s = expand_at_Q(expr, curve, order)
        if not s.is_zero():
            raise VerificationError(f"{name} has a nonzero z^{s.val} term at Q", {"identity": name, "degree": s.val})
        if not expr.is_zero():
            raise VerificationError(f"{name} vanishes at Q to order {order} but is not identically zero", {"identity": name})


# ---------------------------------------------------------------------------
# the polynomial family


def polynomial_family_params(curve: CurveParams) -> ParameterSequences:
    """a(n) = n + 1, gamma(n) = n."""
    n = curve.n_field().gen()
    return ParameterSequences(n + 1, n)


def normalize_L2(L2: DifferenceOperator, lam: FieldElement):
    """Shift L2 and lam by the constant that makes u_0(0) = 0.

    Returns (L2', lam', shift).  When u_0 has a pole at n = 0 nothing is
    changed and shift is 0.
    """
    K = L2.field
    try:
        shift = L2.coeff(0)(K.zero)
    except DomainError:
        shift = K.zero
    return L2 - shift, lam - shift, shift


@dataclass(frozen=True)
class PolynomialFamily:
    """L2, L3 for a = n + 1, gamma = n with their eigenvalues.

    lambda1 is only fixed up to an additive constant.  L2 is normalized so
    that its T^0 coefficient vanishes at n = 0; ``shift`` is the constant
    removed, so ``lam2 = lambda1 - shift``.
    """

    curve: CurveParams
    L2: DifferenceOperator
    L3: DifferenceOperator
    lam2: FieldElement
    lam3: FieldElement
    shift: object


def polynomial_family(curve: CurveParams, verify: bool = True) -> PolynomialFamily:
    """Build and check the pair with polynomial coefficients.

    Every coefficient must come out polynomial in n; anything else raises
    :class:`VerificationError`.  With ``verify`` the eigenvalue identities of
    both operators and [L2, L3] = 0 are checked exactly.
    """
    params = polynomial_family_params(curve)
    L2, lam2, shift = normalize_L2(build_L2_closed(params, curve), lambda_m(curve, 2))
    lam3 = lambda_m(curve, 3)
    L3 = build_L_generic(params, curve, 3, lam=lam3, verify=verify)
    for name, L in (("L2", L2), ("L3", L3)):
        bad = [i for i, c in L.coeffs.items() if not c.is_poly()]
        if bad:
            raise VerificationError(f"{name} has non-polynomial coefficients at T^{bad}", {"operator": name})
    if verify:
        verify_identities(L2, params, curve, lam2)
        if not commutator(L2, L3).is_zero():
            raise VerificationError("[L2, L3] is not zero", {"operator": "[L2, L3]"})
    return PolynomialFamily(curve, L2, L3, lam2, lam3, shift)


def polynomial_family_operators(curve: CurveParams, verify: bool = True) -> tuple[DifferenceOperator, DifferenceOperator]:
    fam = polynomial_family(curve, verify)
    return fam.L2, fam.L3


@dataclass(frozen=True)
class AffineMatch:
    """reference = L + alpha * base + beta + residual."""

    alpha: object
    beta: object
    residual: DifferenceOperator

    @property
    def exact(self) -> bool:
        return self.residual.is_zero()


def match_affine(L: DifferenceOperator, base: DifferenceOperator, reference: DifferenceOperator) -> AffineMatch:
    """Find constants alpha, beta with reference = L + alpha*base + beta.

    Operators built for lambda and for lambda + alpha*lambda1 + beta differ
    exactly by alpha*L2 + beta, so this measures the normalization of a
    reference operator relative to ours.  If no constant pair works the
    residual left after the best attempt is returned instead.
    """
    K = L.field
    diff = reference - L
    top = base.order
    lead = base.coeff(top)
    a = diff.coeff(top) / lead
    alpha = a.const_value() if a.is_const() else K.zero
    rest = diff - base * alpha
    b = rest.coeff(0)
    beta = b.const_value() if b.is_const() else K.zero
    residual = rest - beta
    return AffineMatch(alpha, beta, residual)
