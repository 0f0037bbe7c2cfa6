"""Tests for cover presentations, ex evaluation and the back-and-forth builder."""

import random
from fractions import Fraction

import pytest

from src.core.cover import (
    CoverGenerator,
    CoverPresentation,
    HElement,
    PartialIso,
    backforth_extend,
    build_isomorphism,
    eval_ex,
    materialize,
    relation_E,
    relation_S,
    verify_partial_iso,
)
from src.core.radicals import Monomial, radical
from src.core.rational_multiplicative import factor
from src.service.exceptions import (
    BudgetExceededError,
    MalformedInputError,
    NoConjugateChoiceError,
    NotACompatibleRootError,
    NotIndependentError,
    SignatureMismatchError,
    TranscendentalAdditionError,
)

SQRT2 = radical(factor(2), 2, 0)
SQRT3 = radical(factor(3), 2, 0)

z = HElement.kernel_multiple
h = HElement.generator


class TestHElement:
    """Tests for elements of H."""

    def test_addition_collects_coordinates(self):
        """Test that coordinates and kernel parts add."""
        total = HElement.create(1, {"h": Fraction(1, 2)}) + h("h", Fraction(1, 2))
        assert total == HElement.create(1, {"h": 1})

    def test_subtraction_drops_zero_coordinates(self):
        """Test that cancelled coordinates disappear."""
        assert (h("h") + z(2)) - h("h") == z(2)
        assert (h("h") - h("h")).names == ()

    def test_scaled(self):
        """Test scaling by a rational."""
        assert HElement.create(2, {"h": 3}).scaled(Fraction(1, 3)) == HElement.create(Fraction(2, 3), {"h": 1})


class TestCoverPresentation:
    """Tests for presentation validation."""

    def test_choices_include_level_one(self, presentation):
        """Test that level 1 is always recorded with twist 0."""
        p = presentation(choices={"h": {4: 5}}, h=2)
        assert p.choices("h") == {1: 0, 4: 1}
        assert p.denominator_bound == 4

    def test_duplicate_names(self):
        """Test that generator names must be distinct."""
        gens = [CoverGenerator("h", base=factor(2)), CoverGenerator("h", base=factor(3))]
        with pytest.raises(MalformedInputError, match="generator names must be distinct"):
            CoverPresentation.create(gens)

    def test_name_clashes_with_kernel(self):
        """Test that no generator may be called like the kernel generator."""
        with pytest.raises(MalformedInputError, match="generator names must be distinct"):
            CoverPresentation.create([CoverGenerator("z", base=factor(2))])

    def test_base_or_symbol(self):
        """Test that a generator needs exactly one of base and symbol."""
        with pytest.raises(MalformedInputError, match="needs exactly one of base or symbol"):
            CoverPresentation.create([CoverGenerator("h")])

    def test_duplicate_symbols(self):
        """Test that formal symbols must be distinct."""
        gens = [CoverGenerator("a", symbol="t"), CoverGenerator("b", symbol="t")]
        with pytest.raises(MalformedInputError, match="transcendental symbols must be distinct"):
            CoverPresentation.create(gens)

    def test_dependent_bases(self, presentation):
        """Test that dependent bases are refused."""
        with pytest.raises(NotIndependentError, match="are multiplicatively dependent"):
            presentation(a=2, b=4)

    def test_torsion_base(self, presentation):
        """Test that -1 cannot be a base."""
        with pytest.raises(NotIndependentError):
            presentation(a=-1)

    def test_incoherent_choices(self, presentation):
        """Test that j_4 must reduce to j_2."""
        with pytest.raises(NotACompatibleRootError, match="are not coherent"):
            presentation(choices={"h": {2: 1, 4: 0}}, h=2)

    def test_unknown_choice(self, presentation):
        """Test that choices must name algebraic generators."""
        with pytest.raises(MalformedInputError, match="unknown algebraic generators \\['t'\\]"):
            presentation(choices={"t": {2: 1}}, t="@s")

    def test_unknown_generator(self, presentation):
        """Test that lookups of unknown names fail."""
        with pytest.raises(MalformedInputError, match="x is not a generator"):
            presentation(h=2).generator("x")


class TestMaterialize:
    """Tests for lazy root choices."""

    def test_recorded_choice(self, presentation):
        """Test that recorded levels are returned unchanged."""
        p = presentation(choices={"h": {2: 1}}, h=2)
        assert materialize(p, "h", 2) == (1, p)

    def test_new_level_is_coherent(self, presentation):
        """Test that level 4 above j_2 = 1 takes twist 1 and is recorded."""
        p = presentation(choices={"h": {2: 1}}, h=2)
        twist, p2 = materialize(p, "h", 4)
        assert twist == 1
        assert p2.choices("h")[4] == 1
        assert p2.denominator_bound == 4
        assert radical(factor(2), 4, 1) ** 2 == radical(factor(2), 2, 1)

    def test_unconstrained_level_is_canonical(self, presentation):
        """Test that a level coprime to every recorded one takes twist 0."""
        p = presentation(choices={"h": {2: 1}}, h=2)
        assert materialize(p, "h", 3)[0] == 0


class TestEvalEx:
    """Tests for ex evaluation."""

    def test_kernel_generator(self, presentation):
        """Test ex(z) = 1 and ex(z/2) = -1."""
        p = presentation(h=2)
        assert eval_ex(p, z(1))[0] == Monomial.one()
        assert eval_ex(p, z(Fraction(1, 2)))[0] == Monomial.from_rational(factor(-1))

    def test_square_root(self, presentation):
        """Test that ex(h/2) squares to the base and is recorded."""
        value, p = eval_ex(presentation(h=2), h("h", Fraction(1, 2)))
        assert value == SQRT2
        assert value**2 == Monomial.from_rational(factor(2))
        assert p.choices("h") == {1: 0, 2: 0}

    def test_recorded_twist(self, presentation):
        """Test that a recorded twist selects -√2."""
        value, _ = eval_ex(presentation(choices={"h": {2: 1}}, h=2), h("h", Fraction(1, 2)))
        assert value == radical(factor(2), 2, 1)

    def test_kernel_period(self, presentation):
        """Test that ex(z) has order equal to the kernel period."""
        p = presentation(period=3, h=2)
        assert eval_ex(p, z(1))[0] == Monomial.root_of_unity(Fraction(1, 3))

    def test_transcendental(self, presentation):
        """Test that symbols take rational exponents."""
        value, _ = eval_ex(presentation(t="@t"), h("t", Fraction(1, 3)))
        assert value == Monomial.symbol("t", Fraction(1, 3))

    def test_budget(self, presentation):
        """Test that large denominators are refused."""
        with pytest.raises(BudgetExceededError, match="denominator 100 exceeds budget 64"):
            eval_ex(presentation(h=2), h("h", Fraction(1, 100)), budget=64)


class TestRelations:
    """Tests for the kernel relation and the additive relation."""

    def test_relation_e(self, presentation):
        """Test that elements differing by a kernel period are related."""
        p = presentation(h=2)
        assert relation_E(p, h("h") + z(1), h("h"))
        assert not relation_E(p, z(Fraction(1, 2)), HElement.create())

    def test_relation_e_with_period(self, presentation):
        """Test that the kernel is generated by period·z."""
        p = presentation(period=2, h=2)
        assert not relation_E(p, z(1), HElement.create())
        assert relation_E(p, z(2), HElement.create())

    def test_relation_s(self, presentation):
        """Test 1 + 1 = 2 and √2 + √2 = 2√2."""
        p = presentation(h=2)
        assert relation_S(p, z(1), z(1), h("h"))
        assert relation_S(p, h("h", Fraction(1, 2)), h("h", Fraction(1, 2)), h("h", Fraction(3, 2)))

    def test_relation_s_fails(self, presentation):
        """Test that √2 + (-√2) is not 2."""
        p = presentation(h=2)
        half = h("h", Fraction(1, 2))
        assert not relation_S(p, half, half + z(Fraction(1, 2)), h("h"))

    def test_relation_s_refuses_symbols(self, presentation):
        """Test that additive relations among symbols are refused."""
        with pytest.raises(TranscendentalAdditionError):
            relation_S(presentation(t="@t"), h("t"), h("t"), h("t"))


class TestBackforthExtend:
    """Tests for single back-and-forth steps."""

    def test_forced_choice_over_rationals(self, presentation):
        """Test that √2 may be sent to -√2 over Q."""
        iso = PartialIso.empty(presentation(h=2), presentation(h=2))
        iso = backforth_extend(iso, "h", image_choice=1)
        assert iso.kernel_shift("h") == 1
        assert iso.field_map == ((SQRT2, radical(factor(2), 2, 1)),)

    def test_forced_choice_over_zeta_8(self, presentation):
        """Test that √2 ∈ Q(ζ_8) cannot be sent to -√2."""
        iso = PartialIso.empty(presentation(h=2), presentation(level=8, h=2))
        with pytest.raises(NoConjugateChoiceError, match="breaks the relation"):
            backforth_extend(iso, "h", image_choice=1)

    def test_forced_choice_over_zeta_3(self, presentation):
        """Test that √3 may still be sent to -√3 over Q(ζ_3)."""
        iso = PartialIso.empty(presentation(h=3), presentation(level=3, h=3))
        iso = backforth_extend(iso, "h", image_choice=1)
        assert iso.kernel_shift("h") == 1
        assert iso.field_map == ((SQRT3, radical(factor(3), 2, 1)),)

    def test_transcendental(self, presentation):
        """Test that symbols pair with symbols."""
        iso = backforth_extend(PartialIso.empty(presentation(t="@t"), presentation(s="@s")), "t")
        assert iso.partner("t") == "s"
        assert iso.field_map == ((Monomial.symbol("t"), Monomial.symbol("s")),)

    def test_already_committed(self, presentation):
        """Test that a generator is extended only once."""
        iso = backforth_extend(PartialIso.empty(presentation(h=2), presentation(g=2)), "h")
        with pytest.raises(MalformedInputError, match="already in the domain"):
            backforth_extend(iso, "h")

    def test_no_partner(self, presentation):
        """Test that a base without a partner is a signature mismatch."""
        iso = PartialIso.empty(presentation(h=2), presentation(g=3))
        with pytest.raises(SignatureMismatchError, match="no codomain generator left to pair with h"):
            backforth_extend(iso, "h")

    def test_image_already_used(self, presentation):
        """Test that an explicit image must still be free."""
        iso = PartialIso.empty(presentation(a=2, b=3), presentation(c=2, d=3))
        iso = backforth_extend(iso, "a")
        with pytest.raises(SignatureMismatchError, match="c is already an image"):
            backforth_extend(iso, "b", image="c")

    def test_image_with_other_value(self, presentation):
        """Test that an explicit image must carry the same ex-value."""
        iso = PartialIso.empty(presentation(a=2), presentation(c=2, s="@s"))
        with pytest.raises(SignatureMismatchError, match="have different ex-values"):
            backforth_extend(iso, "a", image="s")

    def test_period_mismatch(self, presentation):
        """Test that kernels of different periods are refused."""
        with pytest.raises(SignatureMismatchError, match="kernel periods 1 and 2 differ"):
            PartialIso.empty(presentation(h=2), presentation(period=2, h=2))

    def test_image_outside_domain(self, presentation):
        """Test that σ is only defined on committed generators."""
        iso = PartialIso.empty(presentation(h=2), presentation(g=2))
        with pytest.raises(MalformedInputError, match="h is outside the domain"):
            iso.image(h("h"))


class TestBuildIsomorphism:
    """Tests for building and verifying σ."""

    def test_opposite_square_roots(self, presentation):
        """Test that opposite √2 choices are absorbed by a kernel shift."""
        p1 = presentation(choices={"h": {2: 0}}, h=2)
        p2 = presentation(choices={"h": {2: 1}}, h=2)
        iso = build_isomorphism(p1, p2)
        assert dict(iso.linear_map)["h"] == HElement.create(1, {"h": 1})
        assert iso.field_map == ((SQRT2, SQRT2),)
        assert verify_partial_iso(iso).ok

    def test_opposite_square_roots_without_kernel_shift(self, presentation):
        """Test that σ(h) = g sends √2 to -√2 when the kernel shift is off."""
        p1 = presentation(choices={"h": {2: 0}}, h=2)
        p2 = presentation(choices={"h": {2: 1}}, h=2)
        iso = build_isomorphism(p1, p2, shift_kernel=False)
        assert dict(iso.linear_map)["h"] == HElement.create(0, {"h": 1})
        assert iso.field_map == ((SQRT2, radical(factor(2), 2, 1)),)
        assert verify_partial_iso(iso).ok

    def test_mixed_generators(self, presentation):
        """Test algebraic pairing by base and transcendentals in order."""
        iso = build_isomorphism(presentation(h=2, t="@t"), presentation(s="@s", g=2))
        assert iso.partner("h") == "g"
        assert iso.partner("t") == "s"

    def test_generator_count(self, presentation):
        """Test that signatures must have equal size."""
        with pytest.raises(SignatureMismatchError, match="1 and 2 generators"):
            build_isomorphism(presentation(h=2), presentation(g=2, s="@s"))

    def test_bases_differ(self, presentation):
        """Test that algebraic bases must agree."""
        with pytest.raises(SignatureMismatchError, match="algebraic bases differ"):
            build_isomorphism(presentation(h=2), presentation(g=3))

    def test_tampered_map_fails_verification(self, presentation):
        """Test that shifting σ(h) by z breaks the square over Q(ζ_8)."""
        iso = build_isomorphism(presentation(h=2), presentation(level=8, h=2))
        broken = iso._replace(linear_map=(("h", HElement.create(1, {"h": 1})),))
        report = verify_partial_iso(broken)
        assert not report.ok
        assert any("not conjugate" in f for f in report.failures)
        assert any("does not commute" in f for f in report.failures)

    @pytest.mark.parametrize("seed", range(50))
    def test_random_coherent_choices(self, presentation, seed):
        """Test that σ exists between random coherent choices for the same bases."""
        rng = random.Random(seed)
        bases = rng.sample([2, 3, 5, 7, 11, 13, 17, 19], rng.randint(1, 2))
        symbols = rng.randint(0, 2)

        def generators(prefix):
            out = {f"{prefix}{i}": b for i, b in enumerate(bases)}
            out |= {f"{prefix}t{i}": f"@{prefix}s{i}" for i in range(symbols)}
            return out

        def choices(prefix):
            out = {}
            for i in range(len(bases)):
                j = rng.randrange(840)
                levels = rng.sample(range(2, 9), rng.randint(0, 4))
                out[f"{prefix}{i}"] = {d: j % d for d in levels}
            return out

        p1 = presentation(choices=choices("h"), **generators("h"))
        p2 = presentation(choices=choices("g"), **generators("g"))
        iso = build_isomorphism(p1, p2)
        assert verify_partial_iso(iso, 8).ok
