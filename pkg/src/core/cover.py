"""
Finitely presented covers 0 → Z → H → F^× → 1 and the back-and-forth builder.

H is presented by named generators spanning a Q-vector space together with a
kernel generator z. A generator carries either a rational base b, with a
recorded coherent system of root choices d ↦ ζ_d^{j_d}·b^{1/d}, or a formal
transcendental symbol. ex is materialized lazily, one denominator at a time,
and every materialization returns a new presentation.
"""

import itertools
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import NamedTuple, Self, Sequence

from sympy.ntheory.modular import solve_congruence

from src.core.kummer import roots_conjugate, stabilizing_m
from src.core.radicals import (
    Monomial,
    RadicalTuple,
    combination_vanishes,
    radical,
)
from src.core.rational_multiplicative import FactoredRational, is_mult_independent
from src.service.arg_checkers import not_falsy, positive_int
from src.service.config import get_settings
from src.service.exceptions import (
    BudgetExceededError,
    MalformedInputError,
    NoConjugateChoiceError,
    NotACompatibleRootError,
    NotIndependentError,
    SignatureMismatchError,
)

logger = logging.getLogger(__name__)


# ===== H ELEMENTS =====


class HElement(NamedTuple):
    """kernel·z + Σ q_i·h_i with rational coefficients."""

    kernel: Fraction = Fraction(0)
    coords: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def create(cls, kernel=0, coords: dict[str, Fraction] | None = None) -> Self:
        items = sorted((k, Fraction(v)) for k, v in (coords or {}).items())
        return cls(Fraction(kernel), tuple((k, v) for k, v in items if v))

    @classmethod
    def generator(cls, name: str, q=1) -> Self:
        return cls.create(coords={name: Fraction(q)})

    @classmethod
    def kernel_multiple(cls, q=1) -> Self:
        return cls.create(kernel=q)

    def __add__(self, other: "HElement") -> "HElement":
        coords = dict(self.coords)
        for k, v in other.coords:
            coords[k] = coords.get(k, 0) + v
        return HElement.create(self.kernel + other.kernel, coords)

    def __neg__(self) -> "HElement":
        return self.scaled(-1)

    def __sub__(self, other: "HElement") -> "HElement":
        return self + (-other)

    def scaled(self, q) -> "HElement":
        q = Fraction(q)
        return HElement.create(self.kernel * q, {k: v * q for k, v in self.coords})

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.coords)


# ===== PRESENTATIONS =====


class CoverGenerator(NamedTuple):
    """A named generator of H whose ex-value is a rational base or a formal symbol."""

    name: str
    base: FactoredRational | None = None
    symbol: str | None = None

    @property
    def is_algebraic(self) -> bool:
        return self.base is not None


RootChoices = tuple[tuple[int, int], ...]


def _coherent(choices: dict[int, int]) -> bool:
    return all(
        (choices[a] - choices[b]) % gcd(a, b) == 0 for a, b in itertools.combinations(choices, 2)
    )


class CoverPresentation(NamedTuple):
    generators: tuple[CoverGenerator, ...]
    root_choices: tuple[tuple[str, RootChoices], ...]
    kernel_generator: str = "z"
    kernel_period: int = 1
    root_of_unity_level: int = 1
    denominator_bound: int = 1

    @classmethod
    def create(
        cls,
        generators: Sequence[CoverGenerator],
        root_choices: dict[str, dict[int, int]] | None = None,
        kernel_generator: str = "z",
        kernel_period: int = 1,
        root_of_unity_level: int = 1,
        denominator_bound: int = 1,
    ) -> Self:
        """
        Build a presentation and validate it.

        Raises:
            MalformedInputError: On duplicate names or a generator that is
                neither algebraic nor transcendental.
            NotIndependentError: If the algebraic bases are multiplicatively
                dependent.
            NotACompatibleRootError: If recorded root choices are incoherent.
        """
        not_falsy(kernel_generator, "kernel_generator")
        positive_int(kernel_period, "kernel_period")
        positive_int(root_of_unity_level, "root_of_unity_level")
        positive_int(denominator_bound, "denominator_bound")
        generators = tuple(generators)
        names = [g.name for g in generators]
        if len(set(names)) != len(names) or kernel_generator in names:
            raise MalformedInputError(f"generator names must be distinct, got {names}")
        for g in generators:
            if (g.base is None) == (g.symbol is None):
                raise MalformedInputError(f"generator {g.name} needs exactly one of base or symbol")
        symbols = [g.symbol for g in generators if not g.is_algebraic]
        if len(set(symbols)) != len(symbols):
            raise MalformedInputError(f"transcendental symbols must be distinct, got {symbols}")
        bases = [g.base for g in generators if g.is_algebraic]
        if not is_mult_independent(bases) or any(b.is_torsion() for b in bases):
            raise NotIndependentError(f"bases {[str(b) for b in bases]} are multiplicatively dependent")

        root_choices = root_choices or {}
        unknown = set(root_choices) - {g.name for g in generators if g.is_algebraic}
        if unknown:
            raise MalformedInputError(f"root choices for unknown algebraic generators {sorted(unknown)}")
        table = []
        bound = denominator_bound
        for g in generators:
            if not g.is_algebraic:
                continue
            choices = {1: 0} | {positive_int(d, "denominator"): j % d for d, j in root_choices.get(g.name, {}).items()}
            if not _coherent(choices):
                raise NotACompatibleRootError(f"root choices {choices} of {g.name} are not coherent")
            table.append((g.name, tuple(sorted(choices.items()))))
            bound = max(bound, *choices)
        return cls(
            generators, tuple(table), kernel_generator, kernel_period, root_of_unity_level, bound
        )

    def generator(self, name: str) -> CoverGenerator:
        for g in self.generators:
            if g.name == name:
                return g
        raise MalformedInputError(f"{name} is not a generator of the presentation")

    def choices(self, name: str) -> dict[int, int]:
        return dict(dict(self.root_choices).get(name, ((1, 0),)))

    @property
    def algebraic(self) -> tuple[CoverGenerator, ...]:
        return tuple(g for g in self.generators if g.is_algebraic)

    @property
    def transcendental(self) -> tuple[CoverGenerator, ...]:
        return tuple(g for g in self.generators if not g.is_algebraic)


def materialize(p: CoverPresentation, name: str, d: int) -> tuple[int, CoverPresentation]:
    """
    The twist of the d-th root of a generator, recording a new choice if needed.

    A new level takes the least twist consistent with every recorded level,
    which is the canonical root when nothing below it is recorded.
    """
    choices = p.choices(name)
    if d in choices:
        return choices[d], p
    congruences = [(j % gcd(d, e), gcd(d, e)) for e, j in choices.items() if gcd(d, e) > 1]
    twist = 0
    if congruences:
        solution = solve_congruence(*congruences)
        if solution is None:
            raise NotACompatibleRootError(f"recorded root choices of {name} are not coherent")
        twist = int(solution[0]) % d
    logger.debug("Materialized the level %d root of %s with twist %d", d, name, twist)
    choices[d] = twist
    table = tuple(
        (n, tuple(sorted(choices.items())) if n == name else c) for n, c in p.root_choices
    )
    return twist, p._replace(root_choices=table, denominator_bound=max(p.denominator_bound, d))


def eval_ex(
    p: CoverPresentation, v: HElement, *, budget: int | None = None
) -> tuple[Monomial, CoverPresentation]:
    """
    ex(v) as an exact monomial, together with the presentation after any new
    root choices were recorded.

    Raises:
        BudgetExceededError: If a denominator exceeds the denominator budget.
        MalformedInputError: If v names an unknown generator.
    """
    budget = budget or get_settings().budget_denominator
    value = Monomial.root_of_unity(v.kernel / p.kernel_period)
    for name, q in v.coords:
        g = p.generator(name)
        if not g.is_algebraic:
            value = value * Monomial.symbol(g.symbol, q)
            continue
        d = q.denominator
        if d > budget:
            raise BudgetExceededError(f"denominator {d} exceeds budget {budget}")
        twist, p = materialize(p, name, d)
        value = value * radical(g.base, d, twist) ** q.numerator
    return value, p


def relation_E(p: CoverPresentation, h1: HElement, h2: HElement) -> bool:
    """True iff h1 − h2 lies in the kernel Z·(kernel_period·z)."""
    diff = h1 - h2
    return not diff.coords and diff.kernel.denominator == 1 and diff.kernel % p.kernel_period == 0


def relation_S(p: CoverPresentation, h1: HElement, h2: HElement, h3: HElement) -> bool:
    """
    True iff ex(h1) + ex(h2) = ex(h3).

    Raises:
        TranscendentalAdditionError: If any value involves a formal symbol.
    """
    v1, p = eval_ex(p, h1)
    v2, p = eval_ex(p, h2)
    v3, _ = eval_ex(p, h3)
    return combination_vanishes([(1, v1), (1, v2), (-1, v3)])


# ===== PARTIAL ISOMORPHISMS =====


class PartialIso(NamedTuple):
    """
    σ: H_dom ⇀ H_cod on committed generators, σ(z) = z, with the induced map on
    ex-values recorded on every committed value.
    """

    domain: CoverPresentation
    codomain: CoverPresentation
    linear_map: tuple[tuple[str, HElement], ...] = ()
    field_map: tuple[tuple[Monomial, Monomial], ...] = ()
    m: int = 1

    @classmethod
    def empty(cls, domain: CoverPresentation, codomain: CoverPresentation) -> Self:
        if domain.kernel_period != codomain.kernel_period:
            raise SignatureMismatchError(
                f"kernel periods {domain.kernel_period} and {codomain.kernel_period} differ"
            )
        return cls(domain, codomain)

    def image(self, v: HElement) -> HElement:
        """σ(v) for v in the committed fragment."""
        images = dict(self.linear_map)
        out = HElement.kernel_multiple(v.kernel)
        for name, q in v.coords:
            if name not in images:
                raise MalformedInputError(f"{name} is outside the domain of the partial map")
            out = out + images[name].scaled(q)
        return out

    @property
    def committed(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.linear_map)

    def kernel_shift(self, name: str) -> int:
        """The integer s with σ(h) = g + s·period·z."""
        return int(dict(self.linear_map)[name].kernel / self.domain.kernel_period)

    def partner(self, name: str) -> str:
        return dict(self.linear_map)[name].names[0]


class IsoVerification(NamedTuple):
    ok: bool
    failures: tuple[str, ...] = ()


def _root_tuples(
    iso: PartialIso, names: Sequence[str], level: int
) -> tuple[RadicalTuple, RadicalTuple, PartialIso]:
    """Domain roots at a level and their images under σ, as twist tuples."""
    dom, cod = iso.domain, iso.codomain
    bases, src, dst = [], [], []
    for name in names:
        j, dom = materialize(dom, name, level)
        partner = iso.partner(name)
        k, cod = materialize(cod, partner, level)
        bases.append(dom.generator(name).base)
        src.append(j)
        dst.append(k + iso.kernel_shift(name))
    iso = iso._replace(domain=dom, codomain=cod)
    return RadicalTuple.create(bases, level, src), RadicalTuple.create(bases, level, dst), iso


def _conductor(iso: PartialIso) -> int:
    return lcm(iso.domain.root_of_unity_level, iso.codomain.root_of_unity_level)


def _unused(iso: PartialIso, candidates: Sequence[CoverGenerator]) -> list[CoverGenerator]:
    used = {iso.partner(n) for n in iso.committed}
    return [g for g in candidates if g.name not in used]


def backforth_extend(
    iso: PartialIso,
    h_new: str,
    *,
    m: int | None = None,
    image: str | None = None,
    image_choice: int | None = None,
    shift_kernel: bool = True,
) -> PartialIso:
    """
    Extend a partial isomorphism to one more domain generator.

    A transcendental generator maps to an unused codomain transcendental. An
    algebraic generator with base b maps to an unused codomain generator of the
    same base; the kernel shift is chosen so that σ is the identity on the m-th
    roots, m = stabilizing_m of the committed bases and b, unless image_choice
    names the twist the domain m-th root must map to. With shift_kernel off
    the generator maps to its partner with no kernel shift and the field map
    carries the codomain's recorded root. The joint m-th roots are
    certified conjugate over Q(ζ_M) with M the materialized root-of-unity level.

    Raises:
        SignatureMismatchError: If no matching codomain generator is left.
        NoConjugateChoiceError: If the chosen image roots are not conjugate.
    """
    if h_new in iso.committed:
        raise MalformedInputError(f"{h_new} is already in the domain of the partial map")
    g = iso.domain.generator(h_new)
    if image is not None:
        target = iso.codomain.generator(image)
        if target not in _unused(iso, iso.codomain.generators):
            raise SignatureMismatchError(f"{image} is already an image of the partial map")
    else:
        pool = _unused(iso, iso.codomain.algebraic if g.is_algebraic else iso.codomain.transcendental)
        if g.is_algebraic:
            pool = [c for c in pool if c.base == g.base]
        if not pool:
            raise SignatureMismatchError(f"no codomain generator left to pair with {h_new}")
        target = pool[0]
    if g.is_algebraic != target.is_algebraic or (g.is_algebraic and g.base != target.base):
        raise SignatureMismatchError(f"{h_new} and {target.name} have different ex-values")

    if not g.is_algebraic:
        pair = (Monomial.symbol(g.symbol), Monomial.symbol(target.symbol))
        return iso._replace(
            linear_map=iso.linear_map + ((h_new, HElement.generator(target.name)),),
            field_map=iso.field_map + (pair,),
        )

    committed = [n for n in iso.committed if iso.domain.generator(n).is_algebraic]
    if m is None:
        m, _ = stabilizing_m([iso.domain.generator(n).base for n in committed] + [g.base])
    dom, cod = iso.domain, iso.codomain
    j, dom = materialize(dom, h_new, m)
    k, cod = materialize(cod, target.name, m)
    if image_choice is not None:
        wanted = image_choice
    else:
        wanted = j if shift_kernel else k
    shift = (wanted - k) % m
    extended = iso._replace(
        domain=dom,
        codomain=cod,
        linear_map=iso.linear_map
        + ((h_new, HElement.create(shift * dom.kernel_period, {target.name: 1})),),
        m=lcm(iso.m, m),
    )
    src, dst, extended = _root_tuples(extended, committed + [h_new], m)
    decision = roots_conjugate(src, dst, _conductor(extended))
    if not decision.verdict:
        raise NoConjugateChoiceError(
            f"mapping {h_new} to twist {wanted} of {target.name} breaks the relation "
            f"{decision.obstruction} over Q(ζ_{decision.conductor})"
        )
    pairs = tuple(zip(src.values(), dst.values()))
    logger.debug("Extended the partial map by %s -> %s at level %d", h_new, target.name, m)
    return extended._replace(field_map=extended.field_map + pairs[-1:])


def _presented(iso: PartialIso, bound: int) -> list[HElement]:
    names = iso.committed
    elements = [HElement.kernel_multiple(Fraction(1, d)) for d in range(1, bound + 1)]
    for d in range(1, bound + 1):
        elements += [HElement.generator(n, Fraction(1, d)) for n in names]
        elements += [
            HElement.create(coords={a: Fraction(1, d), b: Fraction(1, d)})
            for a, b in itertools.combinations(names, 2)
        ]
    return elements


def verify_partial_iso(iso: PartialIso, bound: int | None = None) -> IsoVerification:
    """
    Re-verify a partial isomorphism on the presented fragment up to a bound.

    Checks the commuting square ex_cod ∘ σ = f ∘ ex_dom against the recorded
    field map, that f is well defined and injective on presented values, that σ
    fixes the kernel and is additive, and that the roots of the algebraic
    generators at every level are Galois conjugate to their images.
    """
    bound = bound or max(iso.m, 1)
    failures = []
    recorded = dict(iso.field_map)
    f: dict[Monomial, Monomial] = {}
    dom, cod = iso.domain, iso.codomain
    for v in _presented(iso, bound):
        a, dom = eval_ex(dom, v)
        b, cod = eval_ex(cod, iso.image(v))
        if a in recorded and recorded[a] != b:
            failures.append(f"square does not commute at {v}")
        if f.setdefault(a, b) != b:
            failures.append(f"field map not well defined at {a}")
    if len(set(f.values())) != len(f):
        failures.append("field map is not injective on presented values")
    if iso.image(HElement.kernel_multiple()) != HElement.kernel_multiple():
        failures.append("kernel generator is not fixed")
    iso = iso._replace(domain=dom, codomain=cod)
    algebraic = [n for n in iso.committed if iso.domain.generator(n).is_algebraic]
    for d in range(1, bound + 1):
        level = lcm(iso.m, d)
        src, dst, iso = _root_tuples(iso, algebraic, level)
        decision = roots_conjugate(src, dst, _conductor(iso))
        if not decision.verdict:
            failures.append(f"roots at level {level} are not conjugate: {decision.obstruction}")
    return IsoVerification(not failures, tuple(failures))


def build_isomorphism(
    p1: CoverPresentation,
    p2: CoverPresentation,
    *,
    bound: int | None = None,
    shift_kernel: bool = True,
) -> PartialIso:
    """
    Build and verify σ between two presentations of the same signature.

    Algebraic generators pair by equal base, transcendentals in order, all
    against one stabilizing m for the full tuple of bases.

    By default opposite root choices are absorbed into the kernel coordinate:
    σ(h) = g + s·z and the field map fixes the m-th roots, so √2 ↦ √2 when the
    presentations pick opposite square roots. With shift_kernel off σ(h) = g
    and the field map sends √2 ↦ -√2 instead; this fails when the choices are
    not jointly conjugate.

    Raises:
        SignatureMismatchError: If generator counts, bases or kernels differ.
        NoConjugateChoiceError: If verification fails.
    """
    if len(p1.generators) != len(p2.generators):
        raise SignatureMismatchError(
            f"{len(p1.generators)} and {len(p2.generators)} generators"
        )
    if sorted(map(str, (g.base for g in p1.algebraic))) != sorted(map(str, (g.base for g in p2.algebraic))):
        raise SignatureMismatchError("algebraic bases differ")
    iso = PartialIso.empty(p1, p2)
    m, _ = stabilizing_m([g.base for g in p1.algebraic])
    for g in p1.generators:
        iso = backforth_extend(iso, g.name, m=m, shift_kernel=shift_kernel)
    bound = bound or max(p1.denominator_bound, p2.denominator_bound, m)
    report = verify_partial_iso(iso, bound)
    if not report.ok:
        raise NoConjugateChoiceError("; ".join(report.failures))
    logger.info(
        "Built an isomorphism on %d generators verified to denominator %d", len(p1.generators), bound
    )
    return iso
