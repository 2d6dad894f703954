# tests/test_polyring.py

from fractions import Fraction

import pytest

from trace_map_toolkit.core.errors import NotMonicInZ, PolynomialSyntaxError
from trace_map_toolkit.core.polyring import (
    X,
    Y,
    Z,
    IntPoly3,
    chebyshev_u,
    divide_by_monic_in_z,
    parse_poly,
    substitute,
)
from trace_map_toolkit.core.tracemap import fricke


# 🔹 Test 1: ring arithmetic
def test_basic_arithmetic():
    p = (X + Y) ** 2
    assert p == X * X + 2 * X * Y + Y * Y, "binomial expansion failed"
    assert p - p == 0, "p - p must be the zero polynomial"
    assert not IntPoly3(), "zero polynomial must be falsy"
    assert (3 - X) + X == 3


def test_degree_and_constant_term():
    p = parse_poly("z^3*x + 2*y^2 - 5")
    assert p.degree() == 4 and p.degree("z") == 3 and p.degree("y") == 2
    assert p.constant_term == -5
    assert IntPoly3().degree() == -1


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        X ** -1


def test_big_coefficients_do_not_overflow():
    p = (2 * X + 3) ** 80
    assert p.constant_term == 3**80
    assert p.terms[(80, 0, 0)] == 2**80


# 🔹 Test 2: evaluation and substitution
def test_eval_exact_and_float():
    f = fricke()
    assert f.eval((1, 1, 1)) == 0, "(1,1,1) lies on the Fricke surface"
    assert f.eval((Fraction(1, 2), 0, 0)) == Fraction(-3, 4)
    assert f((0.5, 0.5, 0.5)) == pytest.approx(-0.5)


def test_substitute_composes():
    p = X * Y - Z
    q = substitute(p, Y, X, X + Z)
    assert q == X * Y - X - Z
    assert substitute(IntPoly3.constant(7), X, Y, Z) == 7


# 🔹 Test 3: Chebyshev polynomials
def test_chebyshev_small_orders():
    assert chebyshev_u(-1) == 0
    assert chebyshev_u(0) == 1
    assert chebyshev_u(1) == 2 * X
    assert chebyshev_u(2) == 4 * X**2 - 1
    assert chebyshev_u(3, "z") == 8 * Z**3 - 4 * Z


@pytest.mark.parametrize("n", range(-6, 8))
def test_chebyshev_recursion_holds_for_all_orders(n):
    lhs = chebyshev_u(n + 1)
    rhs = 2 * X * chebyshev_u(n) - chebyshev_u(n - 1)
    assert lhs == rhs, f"U recursion broken at n={n}"


def test_chebyshev_reflection():
    for n in range(6):
        assert chebyshev_u(-n - 2) == -chebyshev_u(n)


def test_chebyshev_at_one():
    # U_n(1) = n + 1
    for n in range(10):
        assert chebyshev_u(n).eval((1, 0, 0)) == n + 1


# 🔹 Test 4: division by a polynomial monic in z
def test_divide_exact():
    den = fricke()
    q_true = X * Z - 3 * Y + 1
    q, r = divide_by_monic_in_z(q_true * den, den)
    assert r == 0 and q == q_true


def test_divide_with_remainder_reconstructs():
    num = parse_poly("z^4 + x*z^3 - y*z + 7")
    den = parse_poly("z^2 - x*y")
    q, r = divide_by_monic_in_z(num, den)
    assert q * den + r == num, "q·den + r must reproduce the numerator"
    assert r.degree("z") < den.degree("z")


def test_divide_requires_monic_denominator():
    with pytest.raises(NotMonicInZ):
        divide_by_monic_in_z(Z**3, 2 * Z**2 + 1)
    with pytest.raises(NotMonicInZ):
        divide_by_monic_in_z(Z**3, X * Z**2 + 1)


# 🔹 Test 5: text form
def test_canonical_print_order():
    assert str(fricke()) == "z^2 - 2*x*y*z + x^2 + y^2 - 1"
    assert str(-X) == "-x"
    assert str(IntPoly3()) == "0"


@pytest.mark.parametrize(
    "text",
    [
        "2*x*y*z - x^2 - y^2 - z^2 + 1",
        "(x + y)^3 - 4*z",
        "-x*(y - 2) + 3",
        "x**2*y**2 - 1",
        "2xy - z",
    ],
)
def test_parse_print_roundtrip(text):
    p = parse_poly(text)
    assert parse_poly(str(p)) == p, f"round trip failed for {text!r}"


def test_parse_implicit_multiplication():
    assert parse_poly("2xy") == 2 * X * Y
    assert parse_poly("x(y+1)") == X * Y + X


@pytest.mark.parametrize("bad", ["", "x +", "x^y", "x $ y", "(x + 1", "x^-1"])
def test_parse_errors(bad):
    with pytest.raises(PolynomialSyntaxError):
        parse_poly(bad)
