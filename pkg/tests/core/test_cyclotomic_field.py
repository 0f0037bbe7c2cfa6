"""Tests for cyclotomic field arithmetic, Galois action and square roots."""

from math import gcd

import pytest
from hypothesis import given, strategies as st
from sympy import factorint, primefactors

from src.core.cyclotomic_field import (
    CyclotomicElement,
    GaloisMap,
    arith,
    common,
    cyclotomic_poly,
    embed,
    galois_apply,
    inv,
    is_qth_power_in_cyclotomic,
    quadratic_character,
    quadratic_conductor,
    sqrt_in_cyclotomic,
)
from src.core.rational_multiplicative import factor
from src.service.exceptions import (
    BoundExceededError,
    ConductorMismatchError,
    DivisionByZeroError,
    MalformedInputError,
    NotAMultipleError,
    NotPrimeError,
    NotSquarefreeError,
)

SQUAREFREE = [a for a in range(-50, 51) if a and all(e == 1 for e in factorint(abs(a)).values())]

elements_12 = st.lists(st.integers(-3, 3), min_size=4, max_size=4).map(
    lambda c: CyclotomicElement.create(12, c)
)


def one(n=1):
    return CyclotomicElement.from_rational(1, n)


class TestCyclotomicPoly:
    """Tests for the cyclotomic polynomial cache."""

    def test_first(self):
        """Test Φ_1 = x - 1."""
        assert cyclotomic_poly(1) == (-1, 1)

    def test_eight(self):
        """Test Φ_8 = x⁴ + 1."""
        assert cyclotomic_poly(8) == (1, 0, 0, 0, 1)

    def test_twelve(self):
        """Test Φ_12 = x⁴ - x² + 1."""
        assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)

    def test_cached_value_is_stable(self):
        """Test that a second lookup returns the same coefficients."""
        assert cyclotomic_poly(30) == cyclotomic_poly(30)
        assert len(cyclotomic_poly(30)) == 9

    def test_bound_exceeded(self):
        """Test that conductors above the bound are refused."""
        with pytest.raises(BoundExceededError, match="conductor 101 exceeds the configured bound 100"):
            cyclotomic_poly(101, bound=100)

    def test_bound_from_settings(self, monkeypatch):
        """Test that the configured conductor budget applies by default."""
        from src.service.config import get_settings

        monkeypatch.setenv("COVER_ARITH_BUDGET_CONDUCTOR", "16")
        get_settings.cache_clear()
        with pytest.raises(BoundExceededError, match="exceeds the configured bound 16"):
            cyclotomic_poly(17)


class TestArith:
    """Tests for field arithmetic modulo Φ_n."""

    def test_i_squared(self):
        """Test ζ_4² = -1."""
        result = arith("mul", CyclotomicElement.zeta(4), CyclotomicElement.zeta(4))
        assert result.rational_value() == -1

    def test_inverse_of_zeta_8(self):
        """Test ζ_8⁻¹ = -ζ_8³."""
        assert arith("inv", CyclotomicElement.zeta(8)) == -CyclotomicElement.zeta(8, 3)

    def test_sqrt_two_squares_to_two(self):
        """Test (ζ_8 + ζ_8⁻¹)² = 2."""
        s = arith("add", CyclotomicElement.zeta(8), CyclotomicElement.zeta(8, -1))
        assert (s * s).rational_value() == 2

    def test_conductor_mismatch(self):
        """Test that elements of different conductors are not combined."""
        with pytest.raises(ConductorMismatchError, match="conductors 4 and 8 differ"):
            arith("add", CyclotomicElement.zeta(4), CyclotomicElement.zeta(8))

    def test_inverse_of_zero(self):
        """Test that zero has no inverse."""
        with pytest.raises(DivisionByZeroError, match="zero has no inverse"):
            inv(CyclotomicElement.from_rational(0, 5))

    def test_negative_power(self):
        """Test that ζ_5^-1 · ζ_5 = 1."""
        z = CyclotomicElement.zeta(5)
        assert z**-1 * z == one(5)

    def test_subtraction(self):
        """Test that a - a is zero."""
        z = CyclotomicElement.zeta(7, 3)
        assert (z - z).is_zero()

    @given(elements_12, elements_12, elements_12)
    def test_field_axioms(self, a, b, c):
        """Test associativity, distributivity and inverses on random elements."""
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * inv(a) == one(12)


class TestEmbed:
    """Tests for embedding into a larger cyclotomic field."""

    def test_rational(self):
        """Test that rationals embed as constants."""
        assert embed(CyclotomicElement.from_rational(3), 8).rational_value() == 3

    def test_zeta_4_into_8(self):
        """Test ζ_4 ↦ ζ_8²."""
        assert embed(CyclotomicElement.zeta(4), 8) == CyclotomicElement.zeta(8, 2)

    def test_zeta_3_into_12(self):
        """Test ζ_3 ↦ ζ_12⁴."""
        assert embed(CyclotomicElement.zeta(3), 12) == CyclotomicElement.zeta(12, 4)

    def test_not_a_multiple(self):
        """Test that embedding needs a multiple of the conductor."""
        with pytest.raises(NotAMultipleError, match="6 is not a multiple of 4"):
            embed(CyclotomicElement.zeta(4), 6)

    def test_common(self):
        """Test that common lifts to the lcm of the conductors."""
        a, b = common(CyclotomicElement.zeta(4), CyclotomicElement.zeta(3))
        assert a.n == b.n == 12

    @given(elements_12, elements_12)
    def test_embedding_is_a_homomorphism(self, a, b):
        """Test that embedding commutes with multiplication."""
        assert embed(a * b, 24) == embed(a, 24) * embed(b, 24)


class TestGalois:
    """Tests for the Galois action ζ ↦ ζ^k."""

    def test_identity(self):
        """Test that k = 1 fixes every element."""
        a = CyclotomicElement.create(8, [1, 2, 3, 4])
        assert galois_apply(GaloisMap.create(8, 1), a) == a

    def test_conjugates_sqrt_two(self):
        """Test ζ_8 + ζ_8⁷ ↦ ζ_8³ + ζ_8⁵ = -(ζ_8 + ζ_8⁷) under k = 3."""
        s = CyclotomicElement.zeta(8) + CyclotomicElement.zeta(8, 7)
        image = galois_apply(GaloisMap.create(8, 3), s)
        assert image == CyclotomicElement.zeta(8, 3) + CyclotomicElement.zeta(8, 5)
        assert image == -s

    def test_complex_conjugation_is_an_involution(self):
        """Test that k ≡ -1 applied twice is the identity."""
        g = GaloisMap.create(9, -1)
        a = CyclotomicElement.create(9, [1, -2, 0, 5, 1, 1])
        assert galois_apply(g, galois_apply(g, a)) == a

    def test_non_unit_exponent(self):
        """Test that exponents sharing a factor with n are refused."""
        with pytest.raises(MalformedInputError, match="exponent 2 is not a unit modulo 8"):
            GaloisMap.create(8, 2)

    def test_conductor_mismatch(self):
        """Test that maps only apply to their own field."""
        with pytest.raises(ConductorMismatchError, match="map of conductor 8 applied to conductor 4"):
            galois_apply(GaloisMap.create(8, 3), CyclotomicElement.zeta(4))

    def test_compose_multiplies_exponents(self):
        """Test that composition multiplies exponents modulo n."""
        assert GaloisMap.create(8, 3).compose(GaloisMap.create(8, 5)) == GaloisMap(8, 7)

    @given(elements_12, elements_12, st.sampled_from([1, 5, 7, 11]))
    def test_commutes_with_arithmetic(self, a, b, k):
        """Test that each Galois map is a field homomorphism fixing Q."""
        g = GaloisMap.create(12, k)
        assert galois_apply(g, a * b) == galois_apply(g, a) * galois_apply(g, b)
        assert galois_apply(g, a + b) == galois_apply(g, a) + galois_apply(g, b)
        assert galois_apply(g, CyclotomicElement.from_rational(7, 12)).rational_value() == 7


class TestQuadraticCharacter:
    """Tests for the sign of σ_k on √p."""

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
    def test_matches_galois_action(self, p):
        """Test the sign against σ_k applied to the canonical √p."""
        n, root = sqrt_in_cyclotomic(p)
        for k in range(1, n):
            if gcd(k, n) != 1:
                continue
            image = galois_apply(GaloisMap.create(n, k), root)
            assert image == (root if quadratic_character(p, k) == 1 else -root)

    def test_values(self):
        """Test √2 ↦ -√2 under k = 3 and √3 ↦ -√3 under k = 7."""
        assert quadratic_character(2, 3) == -1
        assert quadratic_character(2, 15) == 1
        assert quadratic_character(3, 7) == -1
        assert quadratic_character(3, 11) == 1


class TestSqrtInCyclotomic:
    """Tests for Gauss-sum square roots."""

    def test_two(self):
        """Test √2 = ζ_8 + ζ_8⁻¹ in Q(ζ_8)."""
        n, w = sqrt_in_cyclotomic(2)
        assert n == 8
        assert w == CyclotomicElement.zeta(8) + CyclotomicElement.zeta(8, -1)

    def test_five(self):
        """Test that √5 is the Legendre-symbol Gauss sum over ζ_5."""
        n, w = sqrt_in_cyclotomic(5)
        assert n == 5
        assert w == CyclotomicElement.create(5, [0, 1, -1, -1, 1])

    def test_one(self):
        """Test that √1 = 1 in Q."""
        assert sqrt_in_cyclotomic(1) == (1, one())

    def test_not_squarefree(self):
        """Test that 4 is refused."""
        with pytest.raises(NotSquarefreeError, match="4 is not a nonzero squarefree integer"):
            sqrt_in_cyclotomic(4)

    def test_zero(self):
        """Test that 0 is refused."""
        with pytest.raises(NotSquarefreeError):
            sqrt_in_cyclotomic(0)

    def test_quadratic_conductor(self):
        """Test the fundamental-discriminant rule."""
        assert quadratic_conductor(5) == 5
        assert quadratic_conductor(3) == 12
        assert quadratic_conductor(-3) == 3
        assert quadratic_conductor(-1) == 4

    @pytest.mark.parametrize("a", SQUAREFREE)
    def test_witness_squares_exactly(self, a):
        """Test that the witness squares to a in the field of its conductor."""
        n, w = sqrt_in_cyclotomic(a)
        assert n == quadratic_conductor(a)
        assert (w * w).rational_value() == a

    @pytest.mark.parametrize("a", SQUAREFREE)
    def test_root_is_canonical(self, a):
        """Test that complex conjugation fixes √a for a > 0 and negates it for a < 0."""
        n, w = sqrt_in_cyclotomic(a)
        conjugate = galois_apply(GaloisMap.create(n, -1), w)
        assert conjugate == (w if a > 0 else -w)

    @pytest.mark.parametrize("a", [a for a in SQUAREFREE if a != 1])
    def test_conductor_is_least(self, a):
        """Test that √a is moved by an automorphism fixing each maximal subfield."""
        n, w = sqrt_in_cyclotomic(a)
        for p in primefactors(n):
            d = n // p
            units = [k for k in range(1 + d, n, d) if gcd(k, n) == 1]
            assert any(galois_apply(GaloisMap.create(n, k), w) == -w for k in units), d


class TestQthPower:
    """Tests for q-th powers up to roots of unity in Q(ζ_n)."""

    def test_sqrt_two_in_eight(self):
        """Test that 2 is a square in Q(ζ_8)."""
        assert is_qth_power_in_cyclotomic(factor(2), 2, 8)

    def test_sqrt_two_not_in_five(self):
        """Test that 2 is not a square in Q(ζ_5)."""
        assert not is_qth_power_in_cyclotomic(factor(2), 2, 5)

    def test_cube_of_rational(self):
        """Test that 8 is a cube."""
        assert is_qth_power_in_cyclotomic(factor(8), 3, 9)

    def test_two_in_gaussian_field(self):
        """Test that 2 = -i(1+i)² is a square up to a root of unity in Q(i)."""
        assert is_qth_power_in_cyclotomic(factor(2), 2, 4)

    def test_non_prime_q(self):
        """Test that q must be prime."""
        with pytest.raises(NotPrimeError, match="q must be prime, got 4"):
            is_qth_power_in_cyclotomic(factor(2), 4, 8)

    @given(st.integers(-60, 60).filter(bool), st.sampled_from([2, 3, 5]), st.integers(1, 30), st.integers(1, 4))
    def test_monotone_in_conductor(self, a, q, n, k):
        """Test that a q-th power in Q(ζ_n) stays one in Q(ζ_kn)."""
        if is_qth_power_in_cyclotomic(factor(a), q, n):
            assert is_qth_power_in_cyclotomic(factor(a), q, n * k)
