"""
Radical monomials and root tuples.

A Monomial is an exact element of the group generated by the roots of unity,
the positive real radicals of positive rationals and formal transcendental
symbols. Any such element is e(q)·∏ p^{x_p}·∏ t^{y_t} for a unique q in [0, 1)
and rational exponents x, y, which makes products, powers and equality
syntactic.

Membership in a field Q(ζ_M)(g_1, ..., g_s) and conjugacy over it are decided
exactly by enumerating the automorphisms through their action on roots of unity
and on the square roots of primes.
"""

import itertools
import logging
from fractions import Fraction
from math import floor, gcd, lcm
from typing import NamedTuple, Self, Sequence

from sympy import totient

from src.core.cyclotomic_field import (
    CyclotomicElement,
    add,
    common,
    embed,
    mul,
    quadratic_character,
    quadratic_conductor,
    sqrt_in_cyclotomic,
)
from src.core.rational_multiplicative import (
    ExponentLattice,
    FactoredRational,
    SupportKey,
    echelon,
    left_kernel,
    merge_supports,
)
from src.service.arg_checkers import positive_int
from src.service.config import get_settings
from src.service.exceptions import (
    BudgetExceededError,
    MalformedInputError,
    TranscendentalAdditionError,
    UnsupportedValueShapeError,
)

logger = logging.getLogger(__name__)


def _frac_items(d: dict) -> tuple:
    return tuple(sorted((k, Fraction(v)) for k, v in d.items() if v))


# ===== MONOMIALS =====


class Monomial(NamedTuple):
    """e(root)·∏ p^x (positive real branch)·∏ symbol^y."""

    root: Fraction = Fraction(0)
    primes: tuple[tuple[int, Fraction], ...] = ()
    symbols: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def create(
        cls,
        root=0,
        primes: dict[int, Fraction] | None = None,
        symbols: dict[str, Fraction] | None = None,
    ) -> Self:
        return cls(Fraction(root) % 1, _frac_items(primes or {}), _frac_items(symbols or {}))

    @classmethod
    def one(cls) -> Self:
        return cls()

    @classmethod
    def root_of_unity(cls, q) -> Self:
        """e(q) = exp(2πiq)."""
        return cls.create(root=q)

    @classmethod
    def from_rational(cls, a: FactoredRational) -> Self:
        return cls.create(root=Fraction(1, 2) if a.sign < 0 else 0, primes=a.factors)

    @classmethod
    def symbol(cls, name: str, exponent=1) -> Self:
        return cls.create(symbols={name: Fraction(exponent)})

    def __mul__(self, other: "Monomial") -> "Monomial":
        primes = dict(self.primes)
        for p, x in other.primes:
            primes[p] = primes.get(p, 0) + x
        symbols = dict(self.symbols)
        for s, y in other.symbols:
            symbols[s] = symbols.get(s, 0) + y
        return Monomial.create(self.root + other.root, primes, symbols)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial.create(
            self.root * k,
            {p: x * k for p, x in self.primes},
            {s: y * k for s, y in self.symbols},
        )

    def inverse(self) -> "Monomial":
        return self**-1

    def is_algebraic(self) -> bool:
        return not self.symbols

    @property
    def root_order(self) -> int:
        return self.root.denominator

    @property
    def support(self) -> tuple[SupportKey, ...]:
        return merge_supports([p for p, _ in self.primes], [s for s, _ in self.symbols])

    def free_vector(self, support: Sequence[SupportKey]) -> tuple[Fraction, ...]:
        f = dict(self.primes) | dict(self.symbols)
        return tuple(f.get(x, Fraction(0)) for x in support)

    def __str__(self) -> str:
        parts = [f"e({self.root})"] if self.root else []
        parts += [f"{p}^({x})" for p, x in self.primes]
        parts += [f"{s}^({y})" for s, y in self.symbols]
        return "*".join(parts) or "1"


def canonical_root(b: FactoredRational, m: int) -> Monomial:
    """
    The canonical m-th root of a rational.

    Positive real for b > 0; e(1/(2m)) times the positive real root of |b| for
    b < 0. The m-th power of the canonical dm-th root is the canonical m-th root.
    """
    return Monomial.create(
        root=Fraction(1, 2 * m) if b.sign < 0 else 0,
        primes={p: Fraction(e, m) for p, e in b.exponents},
    )


def radical(b: FactoredRational, m: int, twist: int) -> Monomial:
    """ζ_m^twist times the canonical m-th root of b."""
    return canonical_root(b, m) * Monomial.root_of_unity(Fraction(twist, m))


# ===== ROOT TUPLES =====


class RadicalTuple(NamedTuple):
    """Specific m-th roots ζ_m^{twist_i}·b_i^{1/m} of a tuple of rationals."""

    bases: tuple[FactoredRational, ...]
    m: int
    twists: tuple[int, ...]

    @classmethod
    def create(
        cls, bases: Sequence[FactoredRational], m: int, twists: Sequence[int] | None = None
    ) -> Self:
        """
        Build a root tuple, reducing twists modulo m.

        Raises:
            MalformedInputError: If m < 1 or the twist count differs from the bases.
        """
        if m < 1:
            raise MalformedInputError(f"root denominator must be positive, got {m}")
        twists = tuple(twists) if twists is not None else (0,) * len(bases)
        if len(twists) != len(bases):
            raise MalformedInputError(f"{len(twists)} twists for {len(bases)} bases")
        return cls(tuple(bases), m, tuple(t % m for t in twists))

    def values(self) -> tuple[Monomial, ...]:
        return tuple(radical(b, self.m, j) for b, j in zip(self.bases, self.twists))

    def powers_reproduce_bases(self) -> bool:
        return all(
            v**self.m == Monomial.from_rational(b) for v, b in zip(self.values(), self.bases)
        )


# ===== CONTEXT FIELDS =====


class ContextField(NamedTuple):
    """Q(ζ_M)(fixed) for a conductor M and fixed radical monomials."""

    conductor: int
    fixed: tuple[Monomial, ...] = ()

    @classmethod
    def create(cls, conductor: int, fixed: Sequence[Monomial] = ()) -> Self:
        positive_int(conductor, "conductor")
        return cls(conductor, tuple(fixed))


def _pair(e: Sequence[int], angles: Sequence[Fraction]) -> Fraction:
    return sum((a * x for a, x in zip(e, angles)), Fraction(0)) % 1


def abelian_relations(values: Sequence[Monomial]) -> tuple[tuple[SupportKey, ...], list[list[int]]]:
    """
    Basis of the e ∈ Z^r with ∏ values_i^{e_i} abelian over Q(symbols).

    These are the products whose free part is a half-integer at every prime
    and an integer at every symbol.
    """
    r = len(values)
    support = merge_supports(*(v.support for v in values))
    if not r:
        return support, []
    vecs = [
        [x * (2 if isinstance(key, int) else 1) for key, x in zip(support, v.free_vector(support))]
        for v in values
    ]
    den = lcm(1, *(x.denominator for vec in vecs for x in vec))
    stacked = [[int(x * den) for x in vec] for vec in vecs]
    stacked += [[den * (i == j) for j in range(len(support))] for i in range(len(support))]
    kernel = left_kernel(stacked, len(support))
    h, _, _ = echelon([row[:r] for row in kernel], r)
    return support, h


class GaloisFrame(NamedTuple):
    """
    The automorphisms over Q(ζ_M) of a radical extension, seen on a tuple of monomials.

    Each automorphism raises roots of unity to some k ≡ 1 mod M. For each such
    k, `rotation(k)` holds the angles by which one fixed extension moves the
    values; it takes √p to quadratic_character(p, k)·√p. Any other extension
    differs from it by a character killing the abelian relations. So
    u_i ↦ e(a_i)·u_i extends to an automorphism iff, for some k, a - rotation
    pairs to an integer with every relation.
    """

    values: tuple[Monomial, ...]
    relations: tuple[tuple[int, ...], ...]
    exponents: tuple[int, ...]
    ramified: tuple[tuple[int, int], ...]
    vectors: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def create(cls, values: Sequence[Monomial], conductor: int, *, budget: int | None = None) -> Self:
        """
        Find the abelian relations and the exponents k that must be tried.

        Raises:
            BudgetExceededError: If more exponents than the orbit budget must be tried.
        """
        budget = budget or get_settings().budget_orbit
        values = tuple(values)
        support, relations = abelian_relations(values)
        vectors = tuple(v.free_vector(support) for v in values)
        ramified = tuple(
            (j, p)
            for j, p in enumerate(support)
            if isinstance(p, int)
            and any(sum(e * vec[j] for e, vec in zip(row, vectors)).denominator != 1 for row in relations)
        )
        modulus = lcm(
            conductor,
            *(v.root_order for v in values),
            *(quadratic_conductor(p) for _, p in ramified),
        )
        size = int(totient(modulus)) // int(totient(conductor))
        if size > budget:
            raise BudgetExceededError(f"Galois search over {size} exponents exceeds budget {budget}")
        exponents = tuple(
            k for k in range(1, modulus + 1) if (k - 1) % conductor == 0 and gcd(k, modulus) == 1
        )
        return cls(values, tuple(tuple(row) for row in relations), exponents, ramified, vectors)

    def rotation(self, k: int) -> tuple[Fraction, ...]:
        flipped = [j for j, p in self.ramified if quadratic_character(p, k) == -1]
        return tuple(
            (v.root * (k - 1) + sum((vec[j] for j in flipped), Fraction(0))) % 1
            for v, vec in zip(self.values, self.vectors)
        )

    def conjugating_exponent(self, angles: Sequence[Fraction]) -> int | None:
        """The least k for which u_i ↦ e(angles_i)·u_i extends to an automorphism."""
        for k in self.exponents:
            delta = [a - t for a, t in zip(angles, self.rotation(k))]
            if not any(_pair(e, delta) for e in self.relations):
                return k
        return None

    def obstruction(self, angles: Sequence[Fraction]) -> tuple[int, ...] | None:
        """The first relation whose product u_i ↦ e(angles_i)·u_i moves, or None."""
        for e in self.relations:
            if _pair(e, angles):
                return e
        return None


def relation_group(
    values: Sequence[Monomial], context: ContextField, *, budget: int | None = None
) -> ExponentLattice:
    """
    The lattice of e ∈ Z^r with ∏ values_i^{e_i} in the context field.

    A product lies in Q(ζ_M)(fixed) iff every automorphism over Q(ζ_M) that
    fixes the fixed values also fixes it. Each exponent k whose rotation can be
    corrected to fix them contributes the abelian relations it preserves.
    """
    s, r = len(context.fixed), len(values)
    frame = GaloisFrame.create(context.fixed + tuple(values), context.conductor, budget=budget)
    _, fixed_relations = abelian_relations(context.fixed)
    columns = {
        tuple(_pair(e, rotation) for e in frame.relations): None
        for rotation in map(frame.rotation, frame.exponents)
        if not any(_pair(e, rotation[:s]) for e in fixed_relations)
    }
    n = len(frame.relations)
    den = lcm(1, *(x.denominator for c in columns for x in c))
    stacked = [[int(c[j] * den) for c in columns] for j in range(n)]
    stacked += [[den * (a == b) for b in range(len(columns))] for a in range(len(columns))]
    rows = []
    for row in left_kernel(stacked, len(columns)):
        rows.append(
            tuple(sum(c * e[i] for c, e in zip(row[:n], frame.relations)) for i in range(s, s + r))
        )
    return ExponentLattice(tuple(range(r)), tuple(rows)).canonical()


def galois_orbit(
    r: RadicalTuple, context: ContextField, *, budget: int | None = None
) -> list[RadicalTuple]:
    """
    All Galois conjugates of a root tuple over a context field.

    Conjugates of m-th roots differ from them by m-th roots of unity, so each
    twist vector is tested for an automorphism realizing it.

    Raises:
        BudgetExceededError: If (Z/m)^r exceeds the orbit budget.
    """
    budget = budget or get_settings().budget_orbit
    size = r.m ** len(r.bases)
    if size > budget:
        raise BudgetExceededError(f"orbit search over {size} characters exceeds budget {budget}")
    frame = GaloisFrame.create(context.fixed + r.values(), context.conductor, budget=budget)
    still = (Fraction(0),) * len(context.fixed)
    orbit = []
    for chi in itertools.product(range(r.m), repeat=len(r.bases)):
        if frame.conjugating_exponent(still + tuple(Fraction(c, r.m) for c in chi)) is not None:
            orbit.append(
                RadicalTuple(r.bases, r.m, tuple((t + c) % r.m for t, c in zip(r.twists, chi)))
            )
    logger.debug("Orbit of %d-th roots of %d bases has size %d", r.m, len(r.bases), len(orbit))
    return orbit


# ===== CYCLOTOMIC VALUES =====


def to_cyclotomic(value: Monomial, *, bound: int | None = None) -> CyclotomicElement:
    """
    The monomial as an exact cyclotomic element.

    Raises:
        UnsupportedValueShapeError: If it has symbols or non-half-integer exponents.
    """
    if not value.is_algebraic():
        raise UnsupportedValueShapeError(f"{value} involves formal transcendentals")
    rational = Fraction(1)
    s = 1
    for p, x in value.primes:
        if (2 * x).denominator != 1:
            raise UnsupportedValueShapeError(f"{value} is not in a cyclotomic field")
        whole = floor(x)
        rational *= Fraction(p) ** whole
        if x != whole:
            s *= p
    _, root = sqrt_in_cyclotomic(s, bound=bound)
    zeta = CyclotomicElement.zeta(value.root_order, value.root.numerator)
    zeta, root = common(zeta, root, bound=bound)
    return mul(mul(zeta, root), CyclotomicElement.from_rational(rational, zeta.n))


def _class_key(value: Monomial) -> tuple:
    return tuple((p, x - Fraction(floor(2 * x), 2)) for p, x in value.primes if (2 * x).denominator != 1)


def combination_vanishes(terms: Sequence[tuple[int, Monomial]], *, bound: int | None = None) -> bool:
    """
    Whether Σ c_i·v_i = 0 for algebraic radical monomials v_i.

    Monomials whose free parts differ modulo half-integers are linearly
    independent over the cyclotomic closure, so each class is summed separately
    after dividing out a class representative.

    Raises:
        TranscendentalAdditionError: If any monomial involves a formal symbol.
    """
    if any(not v.is_algebraic() for _, v in terms):
        raise TranscendentalAdditionError("additive relations among formal transcendentals are refused")
    classes: dict[tuple, list[tuple[int, Monomial]]] = {}
    for c, v in terms:
        if c:
            classes.setdefault(_class_key(v), []).append((c, v))
    for key, members in classes.items():
        rep = Monomial.create(primes=dict(key)).inverse()
        elements = [to_cyclotomic(v * rep, bound=bound) for _, v in members]
        n = lcm(*(e.n for e in elements))
        total = CyclotomicElement.from_rational(0, n)
        for (c, _), e in zip(members, elements):
            total = add(total, mul(CyclotomicElement.from_rational(c, n), embed(e, n, bound=bound)))
        if not total.is_zero():
            return False
    return True