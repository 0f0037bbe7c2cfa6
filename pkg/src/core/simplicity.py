"""
Simplicity and k-simplicity of rationals, the stabilizer N and pure hulls.

Over Q the roots of unity are ±1, so a tuple is simple exactly when its
exponent lattice has full rank and trivial Smith invariants. Inside a
cyclotomic field the prime 2 entangles with the roots of unity and is tested
through the quadratic conductor rule.
"""

import itertools
import logging
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Sequence

from sympy import divisors, primefactors

from src.core.cyclotomic_field import (
    CyclotomicElement,
    is_qth_power_in_cyclotomic,
    mul,
    quadratic_conductor,
    sqrt_in_cyclotomic,
)
from src.core.radicals import RadicalTuple
from src.core.rational_multiplicative import (
    ExponentLattice,
    FactoredRational,
    is_mult_independent,
    lattice_of,
    member,
    normal_form,
    power_product,
    saturate,
    smith_index,
)
from src.service.exceptions import (
    MalformedInputError,
    NotIndependentError,
    NotSimpleError,
)

logger = logging.getLogger(__name__)


class PurityWitness(NamedTuple):
    """root^n equals ∏ t_i^{exponents_i} although root is not in ⟨t⟩."""

    root: FactoredRational
    n: int
    exponents: tuple[int, ...]

    def holds(self, t: Sequence[FactoredRational]) -> bool:
        target = power_product(t, self.exponents)
        return self.root**self.n == target


class SimplicityCertificate(NamedTuple):
    elements: tuple[FactoredRational, ...]
    verdict: bool
    independent: bool
    smith_invariants: tuple[int, ...]
    witness: PurityWitness | None = None


class StabilizerResult(NamedTuple):
    n: int
    conductor: int
    witness: CyclotomicElement


class PureHullBasis(NamedTuple):
    """A simple basis of square roots over the saturation of a tuple."""

    base_tuple: tuple[FactoredRational, ...]
    saturation: ExponentLattice
    half_basis: RadicalTuple
    conductors: tuple[int, ...]
    conductor: int
    index: int


def is_k_simple(a: FactoredRational, k: int) -> bool:
    """
    True iff a is not a root of unity and no divisor m > 1 of k divides the gcd
    of a's prime exponents.
    """
    if k < 2:
        raise MalformedInputError(f"k must exceed 1, got {k}")
    if a.is_torsion():
        return False
    g = a.exponent_gcd()
    return all(g % m for m in divisors(k) if m > 1)


def _purity_witness(t: Sequence[FactoredRational], lattice: ExponentLattice) -> PurityWitness:
    sat = saturate(lattice)
    bound = smith_index(lattice)
    for u in sat.rows:
        if member(lattice, u) is not None:
            continue
        for k in range(2, bound + 1):
            coeffs = member(lattice, tuple(k * x for x in u))
            if coeffs is not None:
                break
        root = FactoredRational.create(1, dict(zip(lattice.support, u)))
        target = power_product(t, coeffs)
        if target.sign > 0:
            return PurityWitness(root, k, coeffs)
        if k % 2:
            return PurityWitness(FactoredRational(-1, root.exponents), k, coeffs)
        return PurityWitness(root, 2 * k, tuple(2 * c for c in coeffs))
    raise AssertionError("saturation index above 1 without a new saturation row")


def is_simple_tuple(t: Sequence[FactoredRational]) -> SimplicityCertificate:
    """
    Decide simplicity of a tuple of rationals in Q^×.

    The verdict is true iff the tuple is multiplicatively independent and its
    exponent lattice is saturated. An independent but impure tuple carries a
    purity-violating witness found through the saturation.
    """
    t = tuple(t)
    lattice = lattice_of(t)
    _, invariants = normal_form(lattice)
    independent = is_mult_independent(t)
    if not independent:
        return SimplicityCertificate(t, False, False, tuple(invariants))
    if all(d == 1 for d in invariants):
        return SimplicityCertificate(t, True, True, tuple(invariants))
    witness = _purity_witness(t, lattice)
    logger.debug("Tuple %s is impure: %s", [str(a) for a in t], witness)
    return SimplicityCertificate(t, False, True, tuple(invariants), witness)


def is_simple_in_context(
    t: Sequence[FactoredRational], conductor: int, primes: Sequence[int] | None = None
) -> bool:
    """
    Simplicity of a rational tuple inside Q(ζ_conductor), modulo roots of unity.

    Args:
        t: The tuple.
        conductor: The ambient cyclotomic conductor.
        primes: Restrict purity to these primes; all primes when None.
    """
    t = tuple(t)
    if not is_mult_independent(t):
        return False
    if any(a.is_torsion() for a in t):
        return False
    _, invariants = normal_form(lattice_of(t))
    bad = {p for d in invariants for p in primefactors(d)}
    considered = set(primes) if primes is not None else bad | {2}
    if any(p in bad for p in considered if p != 2):
        return False
    if 2 not in considered:
        return True
    for e in itertools.product((0, 1), repeat=len(t)):
        if any(e):
            b = power_product(t, e)
            if is_qth_power_in_cyclotomic(b, 2, conductor):
                return False
    return True


def stabilizer_N(a: FactoredRational) -> StabilizerResult:
    """
    The maximal N with a^{1/N} simple over a cyclotomic field, and that field.

    Over Q the bound φ(N) | [Q : Q] leaves N ∈ {1, 2}; every simple rational has
    N = 2 with the quadratic conductor of its squarefree kernel.

    Raises:
        NotSimpleError: If a is a root of unity or a proper power.
    """
    if a.is_torsion() or a.exponent_gcd() != 1:
        raise NotSimpleError(f"{a} is not simple in Q")
    conductor, root = sqrt_in_cyclotomic(a.squarefree_kernel())
    scale = CyclotomicElement.from_rational(_square_part(a), conductor)
    return StabilizerResult(2, conductor, mul(root, scale))


def _square_part(a: FactoredRational) -> Fraction:
    """The positive rational r with a = kernel(a)·r²."""
    r = Fraction(1)
    for p, e in a.exponents:
        r *= Fraction(p) ** ((e - e % 2) // 2)
    return r


def pure_hull(t: Sequence[FactoredRational]) -> PureHullBasis:
    """
    Saturate a tuple and adjoin square roots of the saturated basis.

    Raises:
        NotIndependentError: If the tuple is multiplicatively dependent.
    """
    t = tuple(t)
    if not is_mult_independent(t):
        raise NotIndependentError(f"{[str(a) for a in t]} is multiplicatively dependent")
    lattice = lattice_of(t)
    sat = saturate(lattice)
    bases = tuple(FactoredRational.create(1, dict(zip(sat.support, row))) for row in sat.rows)
    conductors = tuple(quadratic_conductor(abs(u.squarefree_kernel())) for u in bases)
    return PureHullBasis(
        base_tuple=t,
        saturation=sat,
        half_basis=RadicalTuple.create(bases, 2),
        conductors=conductors,
        conductor=lcm(1, *conductors),
        index=smith_index(lattice) * 2 ** len(t),
    )
