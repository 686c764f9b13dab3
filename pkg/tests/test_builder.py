import pytest

from dixq.arith import QQ, SYMBOLIC, mpq
from dixq.builder import (
    BuildDiagnostics,
    build_L2_closed,
    build_L_generic,
    match_affine,
    normalize_L2,
    polynomial_family,
    polynomial_family_params,
    reduce_basis,
    verify_identities,
)
from dixq.curve import CurveParams, FieldElement, lambda_m
from dixq.eigen import CurvePoint, psi_window
from dixq.errors import DomainError, VerificationError
from dixq.operators import DifferenceOperator, commutator
from dixq.spectral import chi_pair

from draws import draws

EX = CurveParams.specialized(0, 1)
SYM = CurveParams.symbolic()
P = polynomial_family_params(EX)


def test_reduce_basis_two_step():
    chi = chi_pair(P, EX)
    red = reduce_basis(chi, 2)
    one, nxt = chi, chi.shift(1)
    assert red[1] == (chi.chi1, chi.chi2)
    assert red[2] == (one.chi1 * nxt.chi2, nxt.chi1 + one.chi2 * nxt.chi2)


@pytest.mark.parametrize("k", [2, 3, -1, -2, -3])
def test_reduce_basis_against_recurrence(k):
    # psi(n0 + k) from a window started early enough, versus the reduction at n0
    n0 = 9
    red = reduce_basis(chi_pair(P, EX), 3)
    point = CurvePoint.at(EX, mpq(1, 2))
    start = n0 - 4
    win = psi_window(P, EX, point, start + 1, length=10, seed=(2, -3))
    r1, r2 = (point.value(x.at_n(QQ(n0))) for x in red[k])
    assert win[n0 + k] == r1 * win[n0 - 1] + r2 * win[n0]


def test_closed_equals_generic_for_the_family():
    L = build_L_generic(P, EX, 2)
    assert L == build_L2_closed(P, EX)


@pytest.mark.parametrize("curve,params", draws(11, 3))
def test_closed_equals_generic_random(curve, params):
    diag = BuildDiagnostics()
    L = build_L_generic(params, curve, 2, diagnostics=diag)
    assert L == build_L2_closed(params, curve)
    assert set(diag.reconstruction) == {1, 0, -1, -2}
    assert diag.samples


def test_polynomial_family_symbolic():
    fam = polynomial_family(SYM)
    assert fam.L2.support == (-2, 2) and fam.L3.support == (-3, 3)
    assert fam.L2.coeff(1) == fam.L2.ring.gen() * 2 + 4
    assert fam.L2.coeff(0)(SYMBOLIC.zero) == 0
    assert fam.shift == mpq(5, 2) - SYMBOLIC.c1 / 4
    assert commutator(fam.L2, fam.L3).is_zero()


def test_polynomial_family_specializes():
    sym = polynomial_family(SYM, verify=False)
    ex = polynomial_family(EX, verify=False)
    assert sym.L2.specialize(0, 1) == ex.L2
    assert sym.L3.specialize(0, 1) == ex.L3
    assert ex.shift == mpq(5, 2)


def test_normalize_L2():
    L = DifferenceOperator({1: 1, 0: QQ(3)}, QQ)
    lam = lambda_m(EX, 2)
    L2, lam2, shift = normalize_L2(L, lam)
    assert shift == 3 and L2 == DifferenceOperator.shift(1) and lam2 == lam - 3
    pole = DifferenceOperator({0: QQ.one / DifferenceOperator.identity().ring.gen()}, QQ)
    assert normalize_L2(pole, lam)[2] == 0


def test_verify_identities_catches_mutations():
    L2 = build_L2_closed(P, EX)
    lam = lambda_m(EX, 2)
    verify_identities(L2, P, EX, lam)
    with pytest.raises(VerificationError):
        verify_identities(L2 + DifferenceOperator.shift(1), P, EX, lam)
    with pytest.raises(VerificationError, match="P1 - lambda"):
        verify_identities(L2, P, EX, lam + 1)


def test_wrong_eigenvalue_has_no_operator():
    with pytest.raises(DomainError, match="inconsistent"):
        build_L_generic(P, EX, 2, lam=lambda_m(EX, 2) + FieldElement.z(EX))


def test_order_below_two_rejected():
    with pytest.raises(ValueError):
        build_L_generic(P, EX, 1)


def test_shifted_eigenvalue_shifts_operator():
    L3 = build_L_generic(P, EX, 3)
    L2 = build_L2_closed(P, EX)
    lam = lambda_m(EX, 3) + lambda_m(EX, 2) * 2 - 7
    M = build_L_generic(P, EX, 3, lam=lam)
    m = match_affine(L3, L2, M)
    assert m.exact and (m.alpha, m.beta) == (2, -7)


def test_match_affine_reports_residual():
    L2 = build_L2_closed(P, EX)
    L3 = build_L_generic(P, EX, 3, verify=False)
    ref = L3 + DifferenceOperator({-1: DifferenceOperator.identity().ring.gen()}, QQ)
    m = match_affine(L3, L2, ref)
    assert not m.exact and m.residual.support == (-1, -1)


def test_family_coefficients_are_polynomials_of_bounded_degree():
    fam = polynomial_family(SYM, verify=False)
    for m, L in ((2, fam.L2), (3, fam.L3)):
        assert L.coeff(m) == 1
        assert all(c.is_poly() for c in L.coeffs.values())
        assert L.max_degree() <= 4 * m
