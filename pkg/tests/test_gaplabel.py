# tests/test_gaplabel.py

from fractions import Fraction

import pytest

from trace_map_toolkit.core.errors import (
    ComplexEigenvalues,
    DegenerateD,
    FieldMismatch,
    InverseLettersUnsupported,
)
from trace_map_toolkit.core.gaplabel import (
    PAIRS,
    QuadExact,
    characteristic_polynomial,
    frequency_module,
    idos_to_label,
    induced_two_letter,
    label_to_idos,
    m1,
    m2,
    module_contains,
    module_representation,
    module_shift,
    perron_data,
    satisfies_congruences,
)
from trace_map_toolkit.core.wordcore import gen_fibonacci

FIELDS = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)]


# 🔹 Test 1: exact arithmetic in ℚ(λ)
def test_golden_ratio_arithmetic():
    lam = QuadExact.lam(1, 1)
    assert lam * lam == 1 + lam, "λ² = 1 + λ"
    assert lam.inverse() == lam - 1, "1/λ = λ - 1"
    assert float(lam) == pytest.approx((1 + 5**0.5) / 2)
    assert (lam / 2) * 2 == lam


def test_ordering_and_sign():
    lam = QuadExact.lam(1, 1)
    assert (lam - 2).sign() == -1 and (lam - 1).sign() == 1
    assert 2 - lam < lam - 1 < 1
    assert QuadExact(0, 0, 1, 1).sign() == 0
    # 3 - 2λ₊ (silver) is about -1.83
    assert QuadExact(3, -2, 1, 2).sign() == -1


def test_powers_and_conjugate():
    lam = QuadExact.lam(1, 2)
    assert lam**3 == lam * lam * lam
    assert lam**-2 == (lam * lam).inverse()
    assert (lam * lam.conjugate()) == -1, "λ₊λ₋ = -k"
    assert lam + lam.conjugate() == 2, "λ₊ + λ₋ = ℓ"


def test_perfect_square_folds_to_rational():
    lam = QuadExact.lam(2, 1)
    assert lam.is_rational() and lam == 2
    assert QuadExact(1, 3, 6, 1) == 10


def test_field_errors():
    with pytest.raises(ComplexEigenvalues):
        QuadExact.lam(-3, 1)
    with pytest.raises(FieldMismatch):
        QuadExact.lam(1, 1) + QuadExact.lam(1, 2)


def test_radical_form_and_json():
    lam = QuadExact.lam(1, 1)
    assert lam.radical_form() == (Fraction(1, 2), Fraction(1, 2))
    payload = lam.to_json()
    assert payload["p"] == "0" and payload["q"] == "1"
    assert payload["sqrt_form"] == ["1/2", "1/2", 5]
    assert str(lam - 3) == "-3 + 1*lambda"


# 🔹 Test 2: induced two-letter substitution and counting matrices
def test_induced_two_letter_fibonacci():
    induced = induced_two_letter(gen_fibonacci(1, 1))
    assert induced.images == {
        "aa": ("bb",),
        "ab": ("bb",),
        "ba": ("ba", "ab"),
        "bb": ("ba", "ab"),
    }
    assert induced(("ba", "bb")) == ("ba", "ab", "ba", "ab")


def test_counting_matrices_fibonacci():
    rho = gen_fibonacci(1, 1)
    assert m1(rho).rows() == [[0, 1], [1, 1]]
    assert m2(rho) == [[0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 0]]


def test_characteristic_polynomials():
    rho = gen_fibonacci(1, 1)
    assert characteristic_polynomial(m1(rho).rows()) == [1, -1, -1]
    assert characteristic_polynomial(m2(rho)) == [1, -1, -1, 0, 0]


def test_counting_matrices_silver_mean():
    rho = gen_fibonacci(1, 2)
    assert m1(rho).rows() == [[0, 1], [1, 2]]
    assert m2(rho) == [[0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 1, 1]]
    assert characteristic_polynomial(m1(rho).rows()) == [1, -2, -1]
    # t²(t² - 2t - 1): eigenvalues 0, 0, λ₊, λ₋
    assert characteristic_polynomial(m2(rho)) == [1, -2, -1, 0, 0]
    for root in (QuadExact.lam(1, 2), QuadExact.lam(1, 2).conjugate()):
        assert root * root - 2 * root - 1 == 0


@pytest.mark.parametrize("k, ell", [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2)])
def test_counting_matrices_family_shape(k, ell):
    rho = gen_fibonacci(k, ell)
    assert m1(rho).rows() == [[0, k], [1, ell]]
    assert m2(rho) == [
        [0, 0, k - 1, k - 1],
        [0, 0, 1, 1],
        [0, 0, 1, 1],
        [1, 1, ell - 1, ell - 1],
    ]


def test_two_letter_needs_positive_rule():
    with pytest.raises(InverseLettersUnsupported):
        induced_two_letter(gen_fibonacci(-1, 2))


# 🔹 Test 3: Perron frequencies
def test_fibonacci_letter_frequencies():
    data = perron_data(1, 1)
    lam = data.lam
    assert data.v1 == (2 - lam, lam - 1), "a and b frequencies are 1/λ² and 1/λ"


@pytest.mark.parametrize("k, ell", FIELDS)
def test_frequencies_are_normalised_eigenvectors(k, ell):
    data = perron_data(k, ell)
    lam = data.lam
    assert sum(data.v1, QuadExact(0, 0, k, ell)) == 1
    assert sum(data.v2, QuadExact(0, 0, k, ell)) == 1

    rho = gen_fibonacci(k, ell)
    matrix_1 = m1(rho).rows()
    for i in range(2):
        row = sum((matrix_1[i][j] * data.v1[j] for j in range(2)), QuadExact(0, 0, k, ell))
        assert row == lam * data.v1[i], f"M1 v1 != λ v1 at row {i}"
    matrix_2 = m2(rho)
    for i in range(4):
        row = sum((matrix_2[i][j] * data.v2[j] for j in range(4)), QuadExact(0, 0, k, ell))
        assert row == lam * data.v2[i], f"M2 v2 != λ v2 at {PAIRS[i]}"


@pytest.mark.parametrize("k, ell", FIELDS)
def test_pair_frequencies_marginalise(k, ell):
    aa, ab, ba, bb = perron_data(k, ell).v2
    f_a, f_b = perron_data(k, ell).v1
    assert aa + ab == f_a and ba + bb == f_b
    assert aa + ba == f_a, "left and right marginals agree"


# 🔹 Test 4: the frequency module
def test_module_degenerate_cases():
    with pytest.raises(DegenerateD):
        frequency_module(0, 3)
    with pytest.raises(DegenerateD):
        frequency_module(1, 0)


def test_module_congruences():
    mod = frequency_module(2, 2)
    assert mod.d == 6
    assert mod.congruences == ((1, 1), (1, 4))
    assert satisfies_congruences(mod, 8, -2)
    assert not satisfies_congruences(mod, 4, -1)


@pytest.mark.parametrize("k, ell", [(1, 1), (1, 2), (2, 2), (3, 1)])
def test_frequencies_belong_to_module(k, ell):
    mod = frequency_module(k, ell)
    data = perron_data(k, ell)
    for value in (*data.v1, *data.v2):
        assert mod.contains(value), f"{value} missing from the module of ({k},{ell})"


def test_module_representation_exponent():
    mod = frequency_module(2, 2)
    lam = QuadExact.lam(2, 2)
    assert module_representation(mod, (4 - lam) / 6) == (8, -2, 1)
    assert module_representation(mod, (8 - 2 * lam) / 6) == (8, -2, 0)


def test_module_rejects_foreign_values():
    mod = frequency_module(1, 1)
    assert module_contains(mod, 1)
    assert not module_contains(mod, Fraction(1, 3))
    with pytest.raises(FieldMismatch):
        module_contains(mod, QuadExact.lam(1, 2))


def test_integer_root_module():
    mod = frequency_module(2, 1)
    assert module_representation(mod, Fraction(1, 2)) == (-2, 2, 0)


def test_module_shift_divides_by_lambda():
    k, ell = 2, 2
    lam = QuadExact.lam(k, ell)
    mu, nu = 8, -2
    shifted = module_shift((mu, nu), k, ell)
    assert (shifted[0] + shifted[1] * lam) / k == (mu + nu * lam) / lam



@pytest.mark.parametrize("k, ell", FIELDS)
def test_module_shift_keeps_congruences(rng, k, ell):
    mod = frequency_module(k, ell)
    members = [
        (mu, nu)
        for mu, nu in ((rng.randint(-50, 50), rng.randint(-50, 50)) for _ in range(400))
        if satisfies_congruences(mod, mu, nu)
    ]
    assert members, "no random pair met the congruences"
    for pair in members:
        shifted = module_shift(pair, k, ell)
        assert satisfies_congruences(mod, *shifted), f"{pair} -> {shifted}"


def test_silver_mean_module_members():
    mod = frequency_module(1, 2)
    lam = QuadExact.lam(1, 2)
    assert mod.d == 2
    assert module_contains(mod, (lam - 1) / 2)
    assert module_representation(mod, (lam - 1) / 2, p=0) == (-1, 1, 0)
    assert not module_contains(mod, Fraction(1, 2))

# 🔹 Test 5: metallic-mean labels
def test_label_to_idos_golden():
    lam = QuadExact.lam(1, 1)
    assert label_to_idos(0, 1, 1) == 2 - lam
    assert label_to_idos(1, 0, 1) == lam - 1
    assert label_to_idos(0, 0, 1) == 0


@pytest.mark.parametrize("ell", [1, 2, 3])
@pytest.mark.parametrize("mu, nu", [(0, 1), (1, -1), (-2, 3), (5, -3)])
def test_idos_to_label_inverts(ell, mu, nu):
    assert idos_to_label(label_to_idos(mu, nu, ell), ell) == (mu, nu)


def test_idos_to_label_rejects_non_labels():
    lam = QuadExact.lam(1, 2)
    assert idos_to_label(lam / 3, 2) is None
    with pytest.raises(FieldMismatch):
        idos_to_label(QuadExact.lam(1, 1), 2)


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_random_labels_lie_in_module(rng, ell):
    mod = frequency_module(1, ell)
    for _ in range(100):
        mu, nu = rng.randint(-40, 40), rng.randint(-40, 40)
        value = label_to_idos(mu, nu, ell)
        assert module_contains(mod, value), f"label ({mu}, {nu}) gave {value} outside the module"
