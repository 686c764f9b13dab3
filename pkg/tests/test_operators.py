import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dixq.arith import QQ, SYMBOLIC, mpq
from dixq.curve import CurveParams
from dixq.errors import DomainError, LinearSystemError
from dixq.expr import parse_ratfunc
from dixq.operators import BCRelation, DifferenceOperator, apply_window, bc_relation, commutator, compose

T = DifferenceOperator.shift(1)
ONE = DifferenceOperator.identity()


def r(src, field=QQ):
    return parse_ratfunc(src, field)


def op(coeffs, field=QQ):
    return DifferenceOperator({i: r(s, field) for i, s in coeffs.items()}, field)


N = op({0: "n"})


def test_shift_rule():
    assert compose(T, N) == op({1: "n+1"})
    assert commutator(T, N) == T
    assert compose(DifferenceOperator.shift(-2), N) == op({-2: "n-2"})
    assert T ** 3 == DifferenceOperator.shift(3)
    assert compose(T, DifferenceOperator.shift(-1)) == ONE


def test_zero_coefficients_dropped():
    L = op({2: "n-n", 0: "1"})
    assert L.support == (0, 0) and L.order == 0
    assert DifferenceOperator({}).support is None


coef = st.sampled_from(["1", "n", "n^2-1", "1/(n+3)", "-2*n/(n^2+1)", "7"])
ops = st.dictionaries(st.integers(-2, 2), coef, max_size=3).map(op)


@given(ops, ops, ops)
def test_composition_is_associative_and_distributive(A, B, C):
    assert compose(compose(A, B), C) == compose(A, compose(B, C))
    assert compose(A, B + C) == compose(A, B) + compose(A, C)
    assert compose(A + B, C) == compose(A, C) + compose(B, C)


@given(ops, ops)
def test_commutator_antisymmetric_and_support(A, B):
    assert commutator(A, B) == -commutator(B, A)
    P = compose(A, B)
    if not P.is_zero():
        lo = A.support[0] + B.support[0]
        hi = A.support[1] + B.support[1]
        assert lo <= P.support[0] and P.support[1] <= hi


@given(ops)
def test_json_round_trip(A):
    doc = json.loads(json.dumps(A.to_json()))
    assert DifferenceOperator.from_json(doc, QQ) == A


def test_json_with_curve():
    L = op({1: "c1*n", -1: "c2"}, SYMBOLIC)
    doc = L.to_json(CurveParams.symbolic())
    assert doc["curve"] == {"c1": "sym", "c2": "sym"}
    assert DifferenceOperator.from_json(json.dumps(doc)) == L
    M = op({1: "n/2"})
    doc = M.to_json(CurveParams.specialized(mpq(1, 3), 2))
    assert DifferenceOperator.from_json(doc) == M


def test_json_support_mismatch():
    doc = {"support": [0, 3], "coeffs": {"1": "n"}}
    with pytest.raises(ValueError, match="support"):
        DifferenceOperator.from_json(doc, QQ)


def test_text_and_latex():
    L = op({2: "1", 0: "-n", -1: "(n^2-1)/(4*n)"})
    assert L.fmt() == "T^2 - n + ((1/4*n^2 - 1/4)/(n))*T^-1"
    tex = L.fmt("latex")
    assert tex.startswith("T^{2}") and "T^{-1}" in tex and "\\frac" in tex
    assert DifferenceOperator({}).fmt() == "0"


def test_apply_window():
    L = op({1: "1", 0: "-n", -1: "2"})
    psi = {k: QQ(k * k) for k in range(0, 10)}
    out = apply_window(L, psi, 1, 8)
    assert out == {n: (n + 1) ** 2 - n * n * n + 2 * (n - 1) ** 2 for n in range(1, 9)}
    with pytest.raises(DomainError, match="window too narrow"):
        apply_window(L, psi, 0, 8)
    with pytest.raises(DomainError, match="pole"):
        apply_window(op({0: "1/(n-4)"}), psi, 1, 8)


def test_specialize():
    L = op({1: "c1*n", 0: "c2"}, SYMBOLIC)
    assert L.specialize(2, 3) == op({1: "2*n", 0: "3"})


def test_bc_relation_constant_operators():
    L2, L3 = 2 * ONE, 3 * ONE
    rel = bc_relation(L2, L3, 2)
    assert rel.coeffs == {(1, 0): 1, (0, 0): -2}
    assert rel.fmt() == "lambda - 2"
    # two independent relations at degree 3; the one led by mu wins
    rel3 = bc_relation(L2, L3, 3)
    assert rel3.fmt() == "mu - 3"
    assert rel3.evaluate(L2, L3).is_zero()


def test_bc_relation_shift_powers():
    L2, L3 = T ** 2, T ** 3
    rel = bc_relation(L2, L3, 6)
    assert rel.fmt() == "mu^2 - lambda^3"
    assert rel.weighted_degree() == 6
    with pytest.raises(LinearSystemError):
        bc_relation(L2, L3, 5)


def test_bc_relation_symbolic_rejected():
    with pytest.raises(ValueError):
        bc_relation(op({1: "c1"}, SYMBOLIC), op({1: "c2"}, SYMBOLIC), 6)


def test_bc_fmt_coefficients():
    rel = BCRelation({(0, 2): 1, (3, 0): -1, (1, 0): mpq(-79, 4), (0, 0): mpq(-33, 2)})
    assert rel.fmt() == "mu^2 - lambda^3 - 79/4*lambda - 33/2"
