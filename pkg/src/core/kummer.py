"""
Kummer degrees, conjugacy of root choices and the stabilizing integer m.

All decisions are exact over the context field Q(ζ_M)(fixed radicals). An
automorphism acts on roots of unity by some exponent k ≡ 1 mod M and on a root
tuple by a twist shift; conjugacy asks for a compatible pair.
"""

import itertools
import logging
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Sequence

from sympy import primefactors

from src.core.radicals import (
    ContextField,
    GaloisFrame,
    Monomial,
    RadicalTuple,
    canonical_root,
    galois_orbit,
    radical,
    relation_group,
)
from src.core.rational_multiplicative import (
    ExponentLattice,
    FactoredRational,
    group_index,
    is_mult_independent,
    lattice_of,
    normal_form,
)
from src.core.simplicity import PureHullBasis, is_simple_in_context, pure_hull
from src.service.arg_checkers import positive_int
from src.service.config import get_settings
from src.service.exceptions import (
    BudgetExceededError,
    ConductorIncompatibleError,
    NotACompatibleRootError,
    NotIndependentError,
    NotSimpleInContextError,
    ShapeMismatchError,
)

logger = logging.getLogger(__name__)


class ConjugacyDecision(NamedTuple):
    """
    Whether one root tuple is a Galois conjugate of another.

    On a true verdict the conjugating automorphism raises roots of unity to
    `galois_exponent` and multiplies the roots by ζ_m^witness, one twist shift
    per coordinate. On a false verdict `obstruction` is a relation e for which
    ∏ r_i^{e_i} is abelian over Q(ζ_M)(fixed) but moved by the shift even
    after every cyclotomic correction.
    """

    verdict: bool
    conductor: int
    witness: tuple[int, ...] | None = None
    obstruction: tuple[int, ...] | None = None
    galois_exponent: int | None = None


class ExtensionFailure(NamedTuple):
    d: int
    choice: RadicalTuple


def _fixed_values(fixed: Sequence[RadicalTuple]) -> tuple[Monomial, ...]:
    return tuple(v for r in fixed for v in r.values())


def kummer_degree(t: Sequence[FactoredRational], n: int, conductor: int = 1) -> int:
    """
    [Q(ζ_M)(t^{1/n}) : Q(ζ_M)] as the index of the relation group of the
    canonical n-th roots.

    Raises:
        ConductorIncompatibleError: If μ_n is not contained in Q(ζ_M).
        NotSimpleInContextError: If t is not pure at the primes of n in Q(ζ_M).
    """
    positive_int(n, "n")
    positive_int(conductor, "conductor")
    if lcm(2, conductor) % n:
        raise ConductorIncompatibleError(f"ζ_{n} is not in Q(ζ_{conductor})")
    t = tuple(t)
    if not t:
        return 1
    if not is_simple_in_context(t, conductor, primes=primefactors(n)):
        raise NotSimpleInContextError(
            f"{[str(a) for a in t]} is not simple at the primes of {n} in Q(ζ_{conductor})"
        )
    relations = relation_group([canonical_root(b, n) for b in t], ContextField.create(conductor))
    return group_index(relations, ExponentLattice.full(relations.support))


def roots_conjugate(
    r1: RadicalTuple,
    r2: RadicalTuple,
    conductor: int = 1,
    fixed: Sequence[RadicalTuple] = (),
) -> ConjugacyDecision:
    """
    Decide whether an automorphism over Q(ζ_M)(fixed) maps r1 to r2.

    Raises:
        ShapeMismatchError: If the tuples name roots of different bases or degrees.
    """
    if r1.bases != r2.bases or r1.m != r2.m:
        raise ShapeMismatchError("root tuples must share bases and denominator")
    positive_int(conductor, "conductor")
    m = r1.m
    still = _fixed_values(fixed)
    frame = GaloisFrame.create(still + r1.values(), conductor)
    shift = tuple((b - a) % m for a, b in zip(r1.twists, r2.twists))
    angles = (Fraction(0),) * len(still) + tuple(Fraction(s, m) for s in shift)
    k = frame.conjugating_exponent(angles)
    if k is None:
        obstruction = frame.obstruction(angles)
        return ConjugacyDecision(False, conductor, obstruction=obstruction[len(still):])
    images = tuple(radical(b, m, j + s) for b, j, s in zip(r1.bases, r1.twists, shift))
    if images != r2.values():
        raise AssertionError("conjugation witness does not reproduce the target tuple")
    return ConjugacyDecision(True, conductor, witness=shift, galois_exponent=k)


def root_orbit(
    r: RadicalTuple,
    conductor: int = 1,
    fixed: Sequence[RadicalTuple] = (),
    *,
    budget: int | None = None,
) -> list[RadicalTuple]:
    """The Galois orbit of a root tuple over Q(ζ_M)(fixed)."""
    return galois_orbit(r, ContextField.create(conductor, _fixed_values(fixed)), budget=budget)


def stabilizing_m(b: Sequence[FactoredRational]) -> tuple[int, PureHullBasis]:
    """
    An m such that fixing the m-th roots of b determines all further root
    choices up to conjugacy: twice the exponent of saturate(⟨b⟩)/⟨b⟩.

    Raises:
        NotIndependentError: If b is multiplicatively dependent.
    """
    b = tuple(b)
    if not is_mult_independent(b):
        raise NotIndependentError(f"{[str(a) for a in b]} is multiplicatively dependent")
    hull = pure_hull(b)
    if not b:
        return 1, hull
    _, invariants = normal_form(lattice_of(b))
    exponent = lcm(1, *invariants)
    return 2 * exponent, hull


def extension_consistent(
    b: Sequence[FactoredRational],
    m: int,
    d: int,
    choice_m: RadicalTuple,
    choice_dm: RadicalTuple,
    conductor: int = 1,
) -> bool:
    """
    Whether choice_dm is conjugate to the reference lift of choice_m over
    Q(ζ_M)(choice_m), i.e. whether the isomorphism fixing the m-th roots
    extends to one taking the reference dm-th roots to choice_dm.

    Raises:
        NotACompatibleRootError: If the tuples do not fit b, m, d or
            choice_dm^d differs from choice_m.
    """
    b = tuple(b)
    if choice_m.bases != b or choice_dm.bases != b or choice_m.m != m or choice_dm.m != d * m:
        raise NotACompatibleRootError("root choices must be m-th and dm-th roots of b")
    if tuple(v**d for v in choice_dm.values()) != choice_m.values():
        raise NotACompatibleRootError("the dm-th roots do not power down to the m-th roots")
    if d == 1:
        return True
    reference = RadicalTuple.create(b, d * m, choice_m.twists)
    decision = roots_conjugate(reference, choice_dm, conductor, fixed=[choice_m])
    return decision.verdict


def lifts(choice_m: RadicalTuple, d: int) -> list[RadicalTuple]:
    """Every dm-th root tuple whose d-th power is choice_m."""
    m = choice_m.m
    return [
        RadicalTuple.create(choice_m.bases, d * m, [j + m * k for j, k in zip(choice_m.twists, ks)])
        for ks in itertools.product(range(d), repeat=len(choice_m.bases))
    ]


def determines_isomorphism_type(
    b: Sequence[FactoredRational],
    m: int,
    d_max: int,
    conductor: int = 1,
    choice_m: RadicalTuple | None = None,
    *,
    budget: int | None = None,
) -> ExtensionFailure | None:
    """
    Check extension_consistent for every d ≤ d_max and every lift.

    Returns:
        The first failing (d, choice), or None when the m-th roots determine
        the isomorphism type up to d_max.

    Raises:
        BudgetExceededError: If the lifts at some level exceed the orbit budget.
    """
    b = tuple(b)
    budget = budget or get_settings().budget_orbit
    choice_m = choice_m or RadicalTuple.create(b, m)
    for d in range(1, d_max + 1):
        if d ** len(b) > budget:
            raise BudgetExceededError(f"{d ** len(b)} lifts at level {d} exceed budget {budget}")
        for choice in lifts(choice_m, d):
            if not extension_consistent(b, m, d, choice_m, choice, conductor):
                logger.debug("Level %d lift %s is not conjugate", d, choice.twists)
                return ExtensionFailure(d, choice)
    return None
