"""Reference coefficient tables for the a(n) = n + 1, gamma(n) = n family.

Transcribed verbatim (as expressions in the parameter grammar) so a build
can be diffed against the tables.  Bump GOLDEN_VERSION whenever a table changes.
"""
from __future__ import annotations

from .arith import QQ, SYMBOLIC
from .expr import parse_ratfunc
from .operators import DifferenceOperator

GOLDEN_VERSION = 1

# Second-order operator on the general curve w^2 = z^4 + c2 z^2 + c1 z + 1.
GENERAL_L2 = {
    2: "1",
    1: "2*(n+2)",
    0: "-(n^4/2 + n^3 - (1/2)*(1-c2)*n^2 - (1/2)*(8-c1-c2)*n)",
    -1: "-(1/2)*(n^3+(c2-1)*n+c1-2)*(n^2+n-1)",
    -2: "(1/16)*(n^3+(c2-1)*n+c1-2)*(n^3-3*n^2+(2+c2)*n+c1-c2-2)*(n+1)*(n-2)",
}

# Example on w^2 = z^4 + z^2 + 1 (c1 = 0, c2 = 1).
EXAMPLE_C1, EXAMPLE_C2 = 0, 1

EXAMPLE_L2 = {
    2: "1",
    1: "2*(n+2)",
    0: "-(1/2)*(n^4+2*n^3-7*n-5)",
    -1: "-(1/2)*(n^3-2)*(n^2+n-1)",
    -2: "(1/16)*(n^3-3*n^2+3*n-3)*(n+1)*(n-2)",
}

# The tabulated T^-2 coefficient above lacks the factor (n^3 - 2) carried by
# the general table at c1 = 0, c2 = 1; both readings are kept for comparison.
EXAMPLE_L2_TM2_VARIANTS = {
    "as tabulated": "(1/16)*(n^3-3*n^2+3*n-3)*(n+1)*(n-2)",
    "with factor (n^3-2)": "(1/16)*(n^3-2)*(n^3-3*n^2+3*n-3)*(n+1)*(n-2)",
}

EXAMPLE_L3 = {
    3: "1",
    2: "3*n+15/2",
    1: "-(3/4)*(n^4+4*n^3+5*n^2-8*n-14)",
    0: "-(3/4)*(2*n^5+7*n^4+10*n^3+n^2-12*n-5)",
    -1: "(3/16)*(n^8-2*n^6-12*n^5-3*n^4+10*n^3+20*n^2+6*n-12)",
    -2: "(3/32)*n*(2*n^2-n-5)*(n^6-3*n^5+3*n^4-5*n^3+6*n^2-6*n+6)",
    -3: "-(1/64)*(n-3)*(n^2-1)*(n^3-2)*(n^3-6*n^2+12*n-10)*(n^3-3*n^2+3*n-3)",
}


def _op(table, field, c1=None, c2=None) -> DifferenceOperator:
    return DifferenceOperator({i: parse_ratfunc(s, field, c1, c2) for i, s in table.items()}, field)


def general_L2() -> DifferenceOperator:
    return _op(GENERAL_L2, SYMBOLIC)


def example_L2(tm2: str = "as tabulated") -> DifferenceOperator:
    table = dict(EXAMPLE_L2)
    table[-2] = EXAMPLE_L2_TM2_VARIANTS[tm2]
    return _op(table, QQ, EXAMPLE_C1, EXAMPLE_C2)


def example_L3() -> DifferenceOperator:
    return _op(EXAMPLE_L3, QQ, EXAMPLE_C1, EXAMPLE_C2)
