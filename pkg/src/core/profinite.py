"""
Finite truncations of Ẑ, congruence systems and the kernel-shift map σ.

An element of Ẑ is only ever seen through residues on a finite divisor-closed
index set. Two covers of the same F^× fragment differ on a generator by a
coherent system of roots of unity, which is read level by level as the
residues of a single ν ∈ Ẑ.
"""

import itertools
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import NamedTuple, Self, Sequence

from sympy import divisors
from sympy.ntheory.modular import solve_congruence

from src.core.cover import CoverPresentation, HElement, eval_ex, materialize
from src.core.radicals import Monomial
from src.service.arg_checkers import positive_int
from src.service.config import get_settings
from src.service.exceptions import (
    BudgetExceededError,
    InconsistentError,
    MalformedInputError,
)

logger = logging.getLogger(__name__)


class ZhatApprox(NamedTuple):
    """Compatible residues r_n on a divisor-closed index set."""

    residues: tuple[tuple[int, int], ...]

    @classmethod
    def create(cls, residues: dict[int, int]) -> Self:
        """
        Raises:
            MalformedInputError: If the index set is not divisor-closed.
            InconsistentError: If two residues are incompatible.
        """
        index = set(residues)
        for n in index:
            positive_int(n, "modulus")
            if not set(divisors(n)) <= index:
                raise MalformedInputError(f"index set is not closed under divisors of {n}")
        for a, b in itertools.combinations(sorted(index), 2):
            if b % a == 0 and (residues[b] - residues[a]) % a:
                raise InconsistentError(f"residues {residues[a]} mod {a} and {residues[b]} mod {b} disagree")
        return cls(tuple(sorted((n, r % n) for n, r in residues.items())))

    @classmethod
    def from_residue(cls, modulus: int, residue: int) -> Self:
        positive_int(modulus, "modulus")
        return cls(tuple((int(n), residue % int(n)) for n in divisors(modulus)))

    @property
    def index_set(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.residues)

    @property
    def modulus(self) -> int:
        return lcm(1, *self.index_set)

    @property
    def residue(self) -> int:
        """The residue modulo the lcm of the index set."""
        if self.modulus in self.index_set:
            return self.residue_at(self.modulus)
        return crt_solve(CongruenceSystem.create(self.residues)).residue_at(self.modulus)

    def residue_at(self, n: int) -> int:
        found = dict(self.residues).get(n)
        if found is None:
            raise MalformedInputError(f"{n} is not in the index set")
        return found

    def restrict(self, index_set: Sequence[int]) -> "ZhatApprox":
        res = dict(self.residues)
        missing = set(index_set) - set(res)
        if missing:
            raise MalformedInputError(f"{sorted(missing)} are not in the index set")
        return ZhatApprox.create({n: res[n] for n in index_set})

    def __add__(self, other: "ZhatApprox") -> "ZhatApprox":
        mine, theirs = dict(self.residues), dict(other.residues)
        return ZhatApprox(tuple((n, (mine[n] + theirs[n]) % n) for n in sorted(set(mine) & set(theirs))))


class CongruenceSystem(NamedTuple):
    constraints: tuple[tuple[int, int], ...]

    @classmethod
    def create(cls, constraints: Sequence[tuple[int, int]]) -> Self:
        return cls(tuple((positive_int(n, "modulus"), int(b)) for n, b in constraints))


def crt_solve(system: CongruenceSystem) -> ZhatApprox:
    """
    The unique solution of z ≡ β_n mod n on the divisor closure of the lcm.

    Raises:
        InconsistentError: If two constraints contradict each other.
    """
    for (n1, b1), (n2, b2) in itertools.combinations(system.constraints, 2):
        if (b1 - b2) % gcd(n1, n2):
            raise InconsistentError(f"z ≡ {b1} mod {n1} contradicts z ≡ {b2} mod {n2}")
    if not system.constraints:
        return ZhatApprox.from_residue(1, 0)
    residue, modulus = solve_congruence(*((b % n, n) for n, b in system.constraints))
    return ZhatApprox.from_residue(int(modulus), int(residue))


def _discrete_log(value: Monomial, n: int) -> int | None:
    """The k with value = e(k/n), by enumeration of μ_n."""
    for k in range(n):
        if Monomial.root_of_unity(Fraction(k, n)) == value:
            return k
    return None


def _check_bound(bound: int) -> int:
    positive_int(bound, "bound")
    budget = get_settings().budget_denominator
    if bound > budget:
        raise BudgetExceededError(f"truncation bound {bound} exceeds budget {budget}")
    return bound


def _unit_kernel(p: CoverPresentation) -> CoverPresentation:
    if p.kernel_period != 1:
        raise MalformedInputError("Ẑ shifts need a presentation with ex(z) = 1")
    return p


def nu_for(
    h_data: tuple[CoverPresentation, str],
    g_data: tuple[CoverPresentation, str],
    bound: int,
) -> ZhatApprox:
    """
    The ν ∈ Ẑ, modulo lcm(1, ..., bound), with ex_H(h/n) = ex_G((g + ν)/n) for
    every n ≤ bound.

    Raises:
        InconsistentError: If ex_H(h) differs from ex_G(g), or a discrepancy is
            not an n-th root of unity.
        BudgetExceededError: If the bound exceeds the denominator budget.
    """
    _check_bound(bound)
    (hp, h), (gp, g) = h_data, g_data
    hp, gp = _unit_kernel(hp), _unit_kernel(gp)
    a, _ = eval_ex(hp, HElement.generator(h))
    b, _ = eval_ex(gp, HElement.generator(g))
    if a != b:
        raise InconsistentError(f"{h} and {g} cover different elements {a} and {b}")
    constraints = []
    for n in range(1, bound + 1):
        a, hp = eval_ex(hp, HElement.generator(h, Fraction(1, n)))
        b, gp = eval_ex(gp, HElement.generator(g, Fraction(1, n)))
        beta = _discrete_log(a * b.inverse(), n)
        if beta is None:
            raise InconsistentError(f"ex({h}/{n}) and ex({g}/{n}) differ by {a * b.inverse()}")
        constraints.append((n, beta))
    return crt_solve(CongruenceSystem.create(constraints))


def choice_point(p: CoverPresentation, generator: str, bound: int) -> ZhatApprox:
    """The point of Ẑ named by a generator's coherent root choices up to a bound."""
    _check_bound(bound)
    constraints = []
    for n in range(1, bound + 1):
        twist, p = materialize(p, generator, n)
        constraints.append((n, twist))
    return crt_solve(CongruenceSystem.create(constraints))


class SigmaMap(NamedTuple):
    """σ(h) = g + ν_h·z per generator pair, verified up to a bound."""

    shifts: tuple[tuple[str, str, ZhatApprox], ...]
    bound: int

    def shift(self, name: str) -> ZhatApprox:
        for h, _, nu in self.shifts:
            if h == name:
                return nu
        raise MalformedInputError(f"{name} is not in the domain of σ")


def _commutes(
    hp: CoverPresentation,
    gp: CoverPresentation,
    pairs: Sequence[tuple[str, str, ZhatApprox]],
    n: int,
) -> tuple[bool, CoverPresentation, CoverPresentation]:
    h = HElement.create(coords={name: Fraction(1, n) for name, _, _ in pairs})
    g = HElement.create(coords={name: Fraction(1, n) for _, name, _ in pairs})
    nu = sum(s.residue_at(n) for _, _, s in pairs)
    a, hp = eval_ex(hp, h)
    b, gp = eval_ex(gp, g + HElement.kernel_multiple(Fraction(nu, n)))
    return a == b, hp, gp


def build_sigma(hp: CoverPresentation, gp: CoverPresentation, bound: int) -> SigmaMap:
    """
    σ: H → G with ex_H = ex_G ∘ σ on every presented element up to a bound.

    Generators pair by position. Each shift comes from nu_for; the commuting
    identity is checked on every generator and every pairwise sum at every
    level n ≤ bound.

    Raises:
        InconsistentError: If the presentations do not cover the same fragment.
    """
    if len(hp.generators) != len(gp.generators):
        raise InconsistentError(
            f"{len(hp.generators)} and {len(gp.generators)} generators cannot correspond"
        )
    shifts = tuple(
        (h.name, g.name, nu_for((hp, h.name), (gp, g.name), bound))
        for h, g in zip(hp.generators, gp.generators)
    )
    for n in range(1, bound + 1):
        for size in (1, 2):
            for pairs in itertools.combinations(shifts, size):
                ok, hp, gp = _commutes(hp, gp, pairs, n)
                if not ok:
                    names = [h for h, _, _ in pairs]
                    raise InconsistentError(f"σ fails to commute on {names} at level {n}")
    logger.info("Built σ on %d generators verified to level %d", len(shifts), bound)
    return SigmaMap(shifts, bound)
