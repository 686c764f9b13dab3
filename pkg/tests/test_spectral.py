import pytest

from dixq.arith import QQ, SYMBOLIC, mpq
from dixq.curve import CurveParams, expand_at_Q
from dixq.errors import DomainError
from dixq.expr import parse_ratfunc
from dixq.spectral import (
    ParameterSequences,
    cd_coeffs,
    chi_pair,
    chi_pair_at,
    chi_pair_from_cd,
    check_kn_constraints,
    check_kn_identities,
    series_coeffs_closed,
)

from draws import draws

EX = CurveParams.specialized(0, 1)
SYM = CurveParams.symbolic()


def params(a, g, field=QQ):
    return ParameterSequences(parse_ratfunc(a, field), parse_ratfunc(g, field))


P = params("n+1", "n")


def r(src, field=QQ):
    return parse_ratfunc(src, field)


def test_spot_values():
    c, d = cd_coeffs(P, EX)
    assert c(QQ(2)) == mpq(-3, 2)
    assert d == r("-(n+1)")
    b0, b1, e0, e1 = series_coeffs_closed(P, EX)
    assert b0 == r("(n^5 - n^3 - 2*n^2 + 2)/(4*n)")
    assert b0(QQ(2)) == mpq(9, 4)
    assert b1(QQ(2)) == mpq(3, 8)
    assert e0 == r("-n - 3/2")
    assert e1(QQ(2)) == 0


def test_symbolic_e0():
    _, _, e0, _ = series_coeffs_closed(params("n+1", "n", SYMBOLIC), SYM)
    assert e0 == r("-n + c1/4 - 3/2", SYMBOLIC)


def test_chi_pair_shape():
    chi = chi_pair(P, EX)
    assert chi.chi1.sigma() == chi.chi1
    s = expand_at_Q(chi.chi2, EX, 0)
    assert s.val == -1 and s.coeff(-1) == 1
    odd = (chi.chi2 - chi.chi2.sigma()) / 2
    assert odd.A.is_zero() and odd.B == chi.chi2.B


@pytest.mark.parametrize("curve,p", [(EX, P), (SYM, params("n+1", "n", SYMBOLIC))] + [
    (c, q) for c, q in draws(7, 3, 2)
])
def test_series_closed_forms_match_expansion(curve, p):
    chi = chi_pair(p, curve)
    s1 = expand_at_Q(chi.chi1, curve, 1)
    s2 = expand_at_Q(chi.chi2, curve, 1)
    b0, b1, e0, e1 = series_coeffs_closed(p, curve)
    assert (s1.coeff(0), s1.coeff(1)) == (b0, b1)
    assert s2.coeff(-1) == 1
    assert (s2.coeff(0), s2.coeff(1)) == (e0, e1)


def test_chi1_vanishes_over_next_gamma():
    chi = chi_pair_at(P, EX, 4)
    z0 = QQ(5)
    from dixq.arith import QuadExtField

    K = QuadExtField(QQ, EX.F()(z0))
    for s in (1, -1):
        assert chi.chi1.evaluate(z0, K.gen() * s) == 0


def test_chi_pair_at_matches_generic():
    chi = chi_pair(P, EX)
    for n0 in (3, 7):
        assert chi_pair_at(P, EX, n0) == chi.at_n(QQ(n0))


def test_kn_window_and_identities():
    assert check_kn_identities(P, EX).ok
    report = check_kn_constraints(P, EX, range(5, 16))
    assert report.ok and len(report.checked) == 11 * 6
    assert "all 66" in report.summary()


def test_kn_symbolic_identities():
    assert check_kn_identities(params("n+1", "n", SYMBOLIC), SYM).ok


def test_kn_detects_perturbed_c():
    c, d = cd_coeffs(P, EX)
    bad = chi_pair_from_cd(P, EX, c + 1, d)
    report = check_kn_constraints(P, EX, range(5, 8), chis=bad)
    assert not report.ok
    assert any("residue" in f.constraint for f in report.failures)
    assert not check_kn_identities(P, EX, chis=bad).ok
    bad_d = chi_pair_from_cd(P, EX, c, d + 1)
    assert not check_kn_constraints(P, EX, range(5, 8), chis=bad_d).ok


@pytest.mark.parametrize("g,window", [("n", [0]), ("n^2", [1]), ("(n-3)*(n-4)+1", [4])])
def test_degenerate_window_raises(g, window):
    # gamma vanishes at 0; n^2 repeats across 0; the quadratic repeats at 3, 4
    with pytest.raises(DomainError):
        check_kn_constraints(params("n+1", g), EX, window)


def test_constant_gamma_is_degenerate():
    with pytest.raises(DomainError, match="vanishes identically"):
        cd_coeffs(params("n", "3"), EX)
