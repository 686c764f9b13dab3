import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dixq.arith import QQ, mpq
from dixq.builder import build_L2_closed, build_L_generic, polynomial_family, polynomial_family_params
from dixq.curve import CurveParams, lambda_m
from dixq.eigen import CurvePoint, height, psi_window, residual_check
from dixq.errors import DomainError
from dixq.operators import DifferenceOperator
from dixq.spectral import chi_pair_at

from draws import draws

EX = CurveParams.specialized(0, 1)
P = polynomial_family_params(EX)
FAM = polynomial_family(EX)

# psi(k) = a + b w at z0 = 1/2, w^2 = 21/16, seed psi(4) = 0, psi(5) = 1;
# computed once with sympy from the chi formulas
PSI_ORACLE = {
    6: (mpq(-17, 3), mpq(10, 9)),
    7: (mpq(1066, 3), mpq(-122, 9)),
    8: (mpq(-72835, 12), mpq(3425, 3)),
    9: (mpq(4958597, 12), mpq(-30004)),
    10: (mpq(-166405715, 12), mpq(15482905, 6)),
    11: (mpq(4703254773, 4), mpq(-698170673, 6)),
    12: (mpq(-1027638146787, 16), mpq(143621692751, 12)),
}


def test_point_selection():
    p = CurvePoint.at(EX, mpq(1, 2))
    assert p.K is not QQ and p.K.is_zero(p.w0 * p.w0 - QQ(mpq(21, 16)))
    assert p.conjugate().w0 == -p.w0
    rat = CurveParams.specialized(-1, 0)  # F(1/2) = 9/16
    q = CurvePoint.at(rat, mpq(1, 2))
    assert q.K is QQ and q.w0 == mpq(3, 4)
    assert CurvePoint.at(rat, mpq(1, 2), sign=-1).w0 == mpq(-3, 4)
    assert CurvePoint.at(rat, mpq(1, 2), extension=True).K is not QQ
    with pytest.raises(DomainError):
        CurvePoint.at(EX, 0)
    with pytest.raises(DomainError):
        CurvePoint.at(EX, mpq(1, 2), extension=False)
    with pytest.raises(DomainError):
        CurvePoint.at(CurveParams.symbolic(), 1)


def test_psi_matches_oracle():
    p = CurvePoint.at(EX, mpq(1, 2))
    win = psi_window(P, EX, p, 5, length=7)
    assert (win.start, win.stop) == (4, 12)
    assert win[4] == 0 and win[5] == 1
    for k, (a, b) in PSI_ORACLE.items():
        assert win[k] == p.K(a) + p.K(b) * p.w0
    with pytest.raises(IndexError):
        win[13]
    assert 12 in win and 3 not in win


def test_one_step():
    p = CurvePoint.at(EX, mpq(1, 2))
    chi = chi_pair_at(P, EX, 5)
    win = psi_window(P, EX, p, 5, length=1, seed=(1, 0))
    assert win[6] == p.value(chi.chi1)
    win = psi_window(P, EX, p, 5, length=1, seed=(0, 1))
    assert win[6] == p.value(chi.chi2)


small = st.integers(-5, 5)


@settings(max_examples=15)
@given(small, small, small, small)
def test_window_is_linear_in_seed(a, b, c, d):
    assume((a, b) != (0, 0) and (c, d) != (0, 0) and (a + c, b + d) != (0, 0))
    p = CurvePoint.at(EX, mpq(1, 3))
    u = psi_window(P, EX, p, 5, 6, (a, b))
    v = psi_window(P, EX, p, 5, 6, (c, d))
    s = psi_window(P, EX, p, 5, 6, (a + c, b + d))
    assert all(s[n] == u[n] + v[n] for n in range(4, 11))


def test_conjugate_point_conjugates_window():
    p = CurvePoint.at(EX, mpq(1, 2))
    u = psi_window(P, EX, p, 5, 8)
    v = psi_window(P, EX, p.conjugate(), 5, 8)
    assert all(v[n] == u[n].conjugate() for n in range(4, 13))


def test_degenerate_inputs():
    p = CurvePoint.at(EX, mpq(1, 2))
    with pytest.raises(ValueError):
        psi_window(P, EX, p, 5, seed=(0, 0))
    with pytest.raises(DomainError, match="pole"):
        psi_window(P, EX, CurvePoint.at(EX, 6), 5)  # z0 = gamma(6)


@pytest.mark.parametrize("seed", [(0, 1), (1, 0)])
@pytest.mark.parametrize("z0", [mpq(1, 2), mpq(-2, 3), 3])
def test_family_operators_have_eigenfunctions(z0, seed):
    p = CurvePoint.at(EX, z0)
    win = psi_window(P, EX, p, 5, 20, seed)
    for L, lam in ((FAM.L2, FAM.lam2), (FAM.L3, FAM.lam3)):
        rep = residual_check(L, lam, win)
        assert rep.ok and rep.max_residual == 0
        assert len(rep.residuals) == 22 - (L.order * 2)


def test_mutated_operator_fails():
    p = CurvePoint.at(EX, mpq(1, 2))
    win = psi_window(P, EX, p, 5, 20)
    rep = residual_check(FAM.L2 + DifferenceOperator.shift(1), FAM.lam2, win)
    assert not rep.ok and len(rep.failures) == len(rep.residuals)
    rep = residual_check(FAM.L3, FAM.lam3 + 1, win)
    assert not rep.ok
    assert height(rep.failures[0][1]) > 0


def test_identity_operator_and_constant():
    p = CurvePoint.at(EX, mpq(1, 2))
    win = psi_window(P, EX, p, 5, 4)
    one = lambda_m(EX, 2) * 0 + 1
    assert residual_check(DifferenceOperator.identity(), one, win).ok


def test_short_window_and_symbolic_rejected():
    p = CurvePoint.at(EX, mpq(1, 2))
    win = psi_window(P, EX, p, 5, 3)
    with pytest.raises(DomainError, match="too short"):
        residual_check(FAM.L3, FAM.lam3, win)
    sym = polynomial_family(CurveParams.symbolic(), verify=False)
    with pytest.raises(DomainError, match="specialize"):
        residual_check(sym.L2, sym.lam2, win)


@pytest.mark.parametrize("curve,params", draws(5, 2))
def test_random_draws_have_eigenfunctions(curve, params):
    L2 = build_L2_closed(params, curve)
    L3 = build_L_generic(params, curve, 3)
    z0 = next(QQ(mpq(k, 7)) for k in range(1, 50) if _fine(curve, params, mpq(k, 7)))
    p = CurvePoint.at(curve, z0)
    win = psi_window(params, curve, p, 40, 20)
    assert residual_check(L2, lambda_m(curve, 2), win).ok
    assert residual_check(L3, lambda_m(curve, 3), win).ok


def _fine(curve, params, z0):
    try:
        psi_window(params, curve, CurvePoint.at(curve, z0), 40, 20)
        return curve.F()(z0) != 0
    except DomainError:
        return False
