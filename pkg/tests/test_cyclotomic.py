"""Cyclotomic field layer: polynomials, embeddings, exact fractional valuations."""

import random
from fractions import Fraction

import pytest

from iwalog.cyclotomic import (
    CycloElement,
    EmbeddingError,
    cyclotomic_polynomial,
    phi,
    phi_value_at_root,
    shifted_cyclo_mod,
)
from iwalog.padic import PAdicScalar


def test_phi_degrees():
    assert phi(3, 0) == 1
    assert phi(3, 1) == 2
    assert phi(3, 2) == 6
    assert phi(5, 3) == 100


def test_cyclotomic_polynomial_x_form():
    f = cyclotomic_polynomial(3, 1)
    assert list(f.coeffs) == [1, 1, 1]
    g = cyclotomic_polynomial(3, 2)
    assert list(g.coeffs) == [1, 0, 0, 1, 0, 0, 1]


def naive_shifted(p, n):
    # expand sum (1+X)^(i*p^(n-1)) with exact integer convolutions
    from math import comb

    q = p ** (n - 1)
    deg = (p - 1) * q
    out = [0] * (deg + 1)
    for i in range(p):
        for j in range(i * q + 1):
            out[j] += comb(i * q, j)
    return out


def test_shifted_form_small_cases():
    f = cyclotomic_polynomial(3, 1)
    assert list(f.shifted) == [3, 3, 1]
    g = cyclotomic_polynomial(3, 2)
    assert list(g.shifted) == [3, 9, 18, 21, 15, 6, 1]
    assert g.value_at_one() == 3
    assert list(g.shifted) == naive_shifted(3, 2)
    h = cyclotomic_polynomial(5, 2)
    assert list(h.shifted) == naive_shifted(5, 2)


def test_shifted_mod_matches_exact():
    m = 3**64
    exact = [c % m for c in cyclotomic_polynomial(3, 3).shifted]
    assert list(shifted_cyclo_mod(3, 3, m)) == exact
    assert shifted_cyclo_mod(3, 3, m)[0] == 3  # constant term Phi(1) = p


def test_root_of_unity_multiplication_reduces():
    # zeta_3 * zeta_3 = zeta_3^2 = -1 - zeta_3 in the power basis
    z = CycloElement.root_of_unity(3, 1)
    prod = z * z
    m = 3**64
    assert list(prod.coeffs) == [m - 1, m - 1]


def test_epsilon_plus_one_is_root():
    eps = CycloElement.epsilon(3, 1)
    assert eps + 1 == CycloElement.root_of_unity(3, 1)


def test_embedding_compatible_system():
    z3 = CycloElement.root_of_unity(3, 1)
    z9_cubed = CycloElement.root_of_unity(3, 2) ** 3
    assert z3.embed(2) == z9_cubed
    five = CycloElement.from_int(5, 3)
    assert list(five.embed(2).coeffs) == [5, 0, 0, 0, 0, 0]
    with pytest.raises(EmbeddingError):
        z9_cubed.embed(1)


def test_embedding_preserves_valuation():
    eps = CycloElement.epsilon(3, 1)
    assert eps.valuation().as_fraction() == Fraction(1, 2)
    assert eps.embed(3).valuation().as_fraction() == Fraction(1, 2)


def test_uniformizer_valuations():
    for p in (3, 5):
        for n in (1, 2, 3):
            eps = CycloElement.epsilon(p, n)
            assert eps.valuation().as_fraction() == Fraction(1, phi(p, n))


def test_norm_oracle_for_uniformizer():
    # The product of all conjugates of eps_n is Phi_{p^n}(1) = p, which pins
    # the valuation down independently of the eps-basis rewrite.
    for p, n in [(3, 1), (3, 2), (5, 1), (5, 2)]:
        nrm = CycloElement.epsilon(p, n).norm()
        assert nrm.valuation().as_fraction() == 1
        assert (nrm - p).is_zero_at_precision or (nrm + p).is_zero_at_precision


def test_scalar_times_root_valuation():
    x = CycloElement.root_of_unity(3, 2).scale(3)
    assert x.valuation().as_fraction() == 1


def test_division_ratio_of_uniformizers():
    # eps_1 / eps_2 at level 2: valuation 1/2 - 1/6 = 1/3
    e1 = CycloElement.epsilon(3, 1).embed(2)
    e2 = CycloElement.epsilon(3, 2)
    ratio = e1 / e2
    assert ratio.valuation().as_fraction() == Fraction(1, 3)
    assert ratio * e2 == e1


def test_phi_at_roots_trichotomy():
    # below the index the value collapses to p; at the index it is zero;
    # above it is the uniformizer ratio with small fractional valuation
    below = phi_value_at_root(3, 2, 1)  # Phi_9(zeta_3)
    assert below == 3
    at = phi_value_at_root(3, 2, 2)  # Phi_9(zeta_9)
    assert at.is_zero()
    above = phi_value_at_root(3, 1, 2)  # Phi_3(zeta_9)
    assert above.valuation().as_fraction() == Fraction(1, 3)


def test_phi_at_deeper_root_matches_ratio():
    # Phi_3(zeta_9) = (zeta_9^3 - 1) / (zeta_9 - 1), cross-checked by division
    val = phi_value_at_root(3, 1, 2)
    e1 = CycloElement.epsilon(3, 1).embed(2)
    e2 = CycloElement.epsilon(3, 2)
    assert val == e1 / e2


def test_valuation_multiplicativity_seeded():
    rng = random.Random(21)
    n = 24
    for _ in range(25):
        a = CycloElement(3, 2, [rng.randrange(3**n) for _ in range(6)], n)
        b = CycloElement(3, 2, [rng.randrange(3**n) for _ in range(6)], n)
        if a.is_zero() or b.is_zero():
            continue
        va, vb, vab = a.valuation(), b.valuation(), (a * b).valuation()
        assert vab.bound == va.bound + vb.bound


def test_valuation_ultrametric_seeded():
    rng = random.Random(22)
    n = 24
    for _ in range(25):
        a = CycloElement(5, 1, [rng.randrange(5**n) for _ in range(4)], n)
        b = CycloElement(5, 1, [rng.randrange(5**n) for _ in range(4)], n)
        s = (a + b).valuation()
        assert s.bound >= min(a.valuation().bound, b.valuation().bound)


def test_epsilon_basis_round_trip():
    rng = random.Random(23)
    n = 30
    a = CycloElement(3, 2, [rng.randrange(3**n) for _ in range(6)], n)
    back = CycloElement.from_epsilon_basis(3, 2, list(a.epsilon_basis()), n)
    assert back == a


def test_inverse_two_sided_seeded():
    rng = random.Random(24)
    n = 40
    for _ in range(10):
        a = CycloElement(3, 2, [rng.randrange(3**n) for _ in range(6)], n)
        if a.is_zero():
            continue
        inv = a.invert()
        assert a * inv == CycloElement.one(3, 2, n)


def test_mul_root_power_fast_path():
    rng = random.Random(25)
    n = 20
    a = CycloElement(3, 3, [rng.randrange(3**n) for _ in range(18)], n)
    for e in (0, 1, 5, 17, 26):
        direct = a * CycloElement.root_of_unity(3, 3, e, n)
        assert a.mul_root_power(e) == direct
        minus = a * (CycloElement.root_of_unity(3, 3, e, n) - 1)
        assert a.mul_zeta_power_minus_one(e) == minus


def test_galois_fixes_norm_and_is_multiplicative():
    rng = random.Random(26)
    n = 20
    a = CycloElement(3, 2, [rng.randrange(3**n) for _ in range(6)], n)
    b = CycloElement(3, 2, [rng.randrange(3**n) for _ in range(6)], n)
    assert (a * b).galois(5) == a.galois(5) * b.galois(5)
    assert a.galois(5).galois(2) == a.galois(10)
