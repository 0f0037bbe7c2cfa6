"""
Relation lattices of finitely generated subgroups of the torus G_m^l.

The Zariski closure of the subgroup generated by some points is the diagonalizable
group cut out by the characters trivial on them. Its component group is the
torsion of Z^l/Λ, so counting components is a Smith index computation once Λ is
known exactly, torsion included.
"""

import logging
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Self, Sequence

from src.core.rational_multiplicative import (
    ExponentLattice,
    FactoredRational,
    SupportKey,
    left_kernel,
    merge_supports,
    smith_index,
)
from src.service.arg_checkers import positive_int
from src.service.exceptions import MalformedInputError, SupportMismatchError

logger = logging.getLogger(__name__)


class TorusCoordinate(NamedTuple):
    """rational·e(twist_exp/twist_order)·∏ symbol^exponent."""

    rational: FactoredRational = FactoredRational.one()
    twist_order: int = 1
    twist_exp: int = 0
    symbols: tuple[tuple[str, int], ...] = ()

    @classmethod
    def create(
        cls,
        rational: FactoredRational | None = None,
        twist: tuple[int, int] = (1, 0),
        symbols: dict[str, int] | None = None,
    ) -> Self:
        """
        Raises:
            MalformedInputError: If the twist order is not positive.
        """
        order, exp = twist
        if order < 1:
            raise MalformedInputError(f"twist order must be positive, got {order}")
        return cls(
            rational or FactoredRational.one(),
            order,
            exp % order,
            tuple(sorted((s, int(y)) for s, y in (symbols or {}).items() if y)),
        )

    @property
    def torsion(self) -> Fraction:
        """The root-of-unity angle in Q/Z, sign included."""
        half = Fraction(1, 2) if self.rational.sign < 0 else Fraction(0)
        return (half + Fraction(self.twist_exp, self.twist_order)) % 1

    @property
    def support(self) -> tuple[SupportKey, ...]:
        return merge_supports(self.rational.support, [s for s, _ in self.symbols])

    def free_vector(self, support: Sequence[SupportKey]) -> tuple[int, ...]:
        f = self.rational.factors | dict(self.symbols)
        return tuple(f.get(x, 0) for x in support)


TorusPoint = tuple[TorusCoordinate, ...]


class TorusSubgroupData(NamedTuple):
    generators: tuple[TorusPoint, ...]
    relation_lattice: ExponentLattice

    @classmethod
    def create(cls, gens: Sequence[TorusPoint]) -> Self:
        gens = tuple(tuple(g) for g in gens)
        return cls(gens, relation_lattice(gens))


def _dimension(gens: Sequence[TorusPoint]) -> int:
    dims = {len(g) for g in gens}
    if len(dims) > 1:
        raise SupportMismatchError(f"points of different dimensions {sorted(dims)}")
    return dims.pop() if dims else 0


def relation_lattice(gens: Sequence[TorusPoint]) -> ExponentLattice:
    """
    The characters n ∈ Z^l with ∏_i g_i^{n_i} = 1 for every generator g.

    Free parts contribute integer columns per generator; torsion angles
    contribute one column per generator that must vanish modulo L, the common
    order of every angle, enforced by L·I rows.
    """
    gens = tuple(gens)
    dim = _dimension(gens)
    axes = tuple(range(dim))
    if not gens:
        return ExponentLattice.full(axes)
    support = merge_supports(*(c.support for g in gens for c in g))
    order = lcm(2, *(c.torsion.denominator for g in gens for c in g))
    rows = []
    for i in range(dim):
        free = [x for g in gens for x in g[i].free_vector(support)]
        tors = [int(g[i].torsion * order) for g in gens]
        rows.append(free + tors)
    width = len(support) * len(gens)
    for j in range(len(gens)):
        rows.append([0] * width + [order if k == j else 0 for k in range(len(gens))])
    kernel = left_kernel(rows, width + len(gens))
    return ExponentLattice(axes, tuple(tuple(r[:dim]) for r in kernel)).canonical()


def closure_components(gens: Sequence[TorusPoint]) -> int:
    """Number of irreducible components of the Zariski closure of ⟨gens⟩."""
    return smith_index(relation_lattice(gens))


def component_count_of_preimage(lattice: ExponentLattice, d: int) -> int:
    """d^{rank Λ}·[saturate(Λ) : Λ]."""
    positive_int(d, "d")
    return d**lattice.rank * smith_index(lattice)


def pullback_components(gens: Sequence[TorusPoint], d: int) -> int:
    """
    Components of {x : x^d ∈ closure(⟨gens⟩)}, counted directly as
    [saturate(dΛ) : dΛ].
    """
    positive_int(d, "d")
    lattice = relation_lattice(gens)
    count = smith_index(lattice.scaled(d))
    logger.debug("Pullback by %d of a rank %d closure has %d components", d, lattice.rank, count)
    return count
