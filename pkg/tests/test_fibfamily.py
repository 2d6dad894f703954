# tests/test_fibfamily.py

from fractions import Fraction

import pytest

from trace_map_toolkit.core.fibfamily import (
    FibParams,
    closed_form_map,
    closed_form_transformation,
    family_params,
    integer_eigenvalue_condition,
    invariant_H,
    invariant_H_pm,
    invariant_H_tilde,
    kernel_witness,
    known_invariants,
)
from trace_map_toolkit.core.kicked import orbit
from trace_map_toolkit.core.polyring import X, Y, Z
from trace_map_toolkit.core.tracemap import (
    TraceMap,
    check_invariant,
    derive,
    fricke_sheet_point,
    transformation_polynomial,
)
from trace_map_toolkit.core.wordcore import apply, gen_fibonacci, parse_substitution

PARAM_GRID = [(k, ell) for k in range(-3, 4) for ell in range(-3, 4)]


# 🔹 Test 1: closed form against the general derivation
@pytest.mark.parametrize("k, ell", PARAM_GRID)
def test_closed_form_matches_derive(k, ell):
    params = FibParams(k, ell)
    assert closed_form_map(params) == derive(params.substitution()), f"(k,l)=({k},{ell})"


@pytest.mark.parametrize("k, ell", PARAM_GRID)
def test_closed_form_transformation(k, ell):
    params = FibParams(k, ell)
    assert closed_form_transformation(params) == transformation_polynomial(params.substitution())


def test_fibonacci_closed_form():
    assert closed_form_map(FibParams(1, 1)) == TraceMap(Y, Z, 2 * Y * Z - X)
    assert closed_form_transformation(FibParams(1, 1)) == 1
    assert closed_form_transformation(FibParams(2, 3)) == 4 * X**2


# 🔹 Test 2: family invariants
@pytest.mark.parametrize("ell", range(-2, 5))
def test_H_invariant_when_k_is_l_plus_one(ell):
    params = FibParams(ell + 1, ell)
    assert check_invariant(closed_form_map(params), invariant_H(ell))
    assert "H" in known_invariants(params)


@pytest.mark.parametrize("ell", range(-2, 5))
def test_H_tilde_invariant_when_k_is_one_minus_l(ell):
    params = FibParams(1 - ell, ell)
    assert check_invariant(closed_form_map(params), invariant_H_tilde(ell))
    assert "H_tilde" in known_invariants(params)


def test_H_not_invariant_off_its_line():
    assert not check_invariant(closed_form_map(FibParams(3, 1)), invariant_H(1))
    assert known_invariants(FibParams(3, 1)) == {}


@pytest.mark.parametrize("ell", range(0, 5))
def test_combined_invariant_form(ell):
    assert invariant_H_pm(ell, 1) == invariant_H(ell)
    assert invariant_H_pm(ell, -1) == invariant_H_tilde(ell)


def test_combined_invariant_rejects_bad_sign():
    with pytest.raises(ValueError):
        invariant_H_pm(2, 0)


def test_H_for_fibonacci_at_l_zero():
    # k=1, l=0 is the swap a↔b: H = U_1(x)·y - U_0(x)·z
    assert invariant_H(0) == 2 * X * Y - Z


# 🔹 Test 3: integer eigenvalues and degenerate members
@pytest.mark.parametrize(
    "k, ell, m",
    [(2, 1, 1), (1, 1, None), (6, 1, 2), (3, 2, 1), (0, 3, 0), (-1, 1, None)],
)
def test_integer_eigenvalue_condition(k, ell, m):
    assert integer_eigenvalue_condition(FibParams(k, ell)) == m


def test_integer_eigenvalue_solves_quadratic():
    for k, ell in [(2, 1), (6, 1), (12, 1), (3, 2), (10, 3)]:
        m = integer_eigenvalue_condition(FibParams(k, ell))
        assert m is not None and k == m * ell + m * m, f"(k,l)=({k},{ell})"


def test_singular_member_has_kernel():
    params = FibParams(0, 3)
    assert not params.non_singular
    assert apply(params.substitution(), kernel_witness(3)).is_identity()
    assert closed_form_transformation(params) == 0


def test_discriminant():
    assert FibParams(1, 1).discriminant == 5
    assert FibParams(2, 1).discriminant == 9


def test_substitution_is_family_member():
    assert FibParams(2, 3).substitution() == gen_fibonacci(2, 3)
    assert str(FibParams(2, 3).substitution().image_b) == "bbbaa"
    assert closed_form_map(FibParams(1, 0)) == TraceMap(Y, X, Z)


# 🔹 Test 4: recognising family members
@pytest.mark.parametrize(
    "rule, expected",
    [
        ("a->b;b->ba", FibParams(1, 1)),
        ("a->b;b->baa", FibParams(2, 1)),
        ("a->b;b->bbba", FibParams(1, 3)),
        ("a->b;b->bA", FibParams(-1, 1)),
        ("a->b;b->b", FibParams(0, 1)),
        ("a->b;b->ab", None),
        ("a->b;b->aab", None),
        ("a->a;b->ba", None),
        ("a->ab;b->ba", None),
    ],
)
def test_family_params(rule, expected):
    assert family_params(parse_substitution(rule)) == expected


@pytest.mark.parametrize("k, ell", PARAM_GRID)
def test_family_params_inverts_substitution(k, ell):
    assert family_params(gen_fibonacci(k, ell)) == FibParams(k, ell)


# 🔹 Test 5: orbits on the sheet I = 0
def test_exact_sheet_orbit_keeps_H():
    # half-traces of diag(2, 1/2), diag(3, 1/3) and their product
    start = (Fraction(5, 4), Fraction(5, 3), Fraction(37, 12))
    params = FibParams(2, 1)
    h = known_invariants(params)["H"]
    result = orbit(closed_form_map(params), start, 6)
    assert result.invariant == 0
    rows = result.rows({"H": h})
    assert all(row["I"] == 0 for row in rows), "the orbit left I = 0"
    assert len({row["H"] for row in rows}) == 1, "H changed along the orbit"
    assert rows[0]["H"] == h.eval(start)


def test_float_sheet_orbit_keeps_H():
    params = FibParams(2, 1)
    h = invariant_H(1)
    result = orbit(closed_form_map(params), fricke_sheet_point(0.3, 0.6), 12)
    rows = result.rows({"H": h})
    for row in rows:
        assert row["I"] == pytest.approx(0, abs=1e-9), f"n={row['n']}"
        assert row["H"] == pytest.approx(rows[0]["H"], abs=1e-9), f"n={row['n']}"
