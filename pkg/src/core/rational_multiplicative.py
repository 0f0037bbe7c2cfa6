"""
Exact representation of Q^× and its finitely generated subgroups.

A nonzero rational is a sign together with a prime → exponent map. A finitely
generated subgroup of Q^×/{±1} (or of a group of formal monomials) is an integer
row matrix over an ordered support of primes and symbols. Canonical forms are
row-style Hermite normal forms, so equal subgroups compare equal syntactically.
"""

import logging
from fractions import Fraction
from math import gcd, prod
from typing import Literal, NamedTuple, Self, Sequence

from sympy import Matrix, factorint, isprime
from sympy.matrices.normalforms import invariant_factors

from src.service.config import get_settings
from src.service.exceptions import (
    FactorizationBudgetExceededError,
    MalformedInputError,
    NotASubgroupError,
    SupportMismatchError,
    ZeroInputError,
)

logger = logging.getLogger(__name__)

INFINITE: Literal["infinite"] = "infinite"

SupportKey = int | str


def support_key(x: SupportKey) -> tuple[int, int | str]:
    """Sort primes numerically first, then formal symbols by name."""
    return (0, x) if isinstance(x, int) else (1, x)


def merge_supports(*supports: Sequence[SupportKey]) -> tuple[SupportKey, ...]:
    return tuple(sorted({x for s in supports for x in s}, key=support_key))


# ===== FACTORED RATIONALS =====


class FactoredRational(NamedTuple):
    """A nonzero rational as a sign and a sorted tuple of (prime, exponent)."""

    sign: int
    exponents: tuple[tuple[int, int], ...] = ()

    @classmethod
    def create(cls, sign: int, factors: dict[int, int]) -> Self:
        """
        Build a factored rational from a factor map, dropping zero exponents.

        Raises:
            MalformedInputError: If the sign is not ±1 or a key is not prime.
        """
        if sign not in (1, -1):
            raise MalformedInputError(f"sign must be +1 or -1, got {sign}")
        for p in factors:
            if not isprime(p):
                raise MalformedInputError(f"factor key {p} is not prime")
        exps = tuple(sorted((int(p), int(e)) for p, e in factors.items() if e))
        return cls(sign, exps)

    @classmethod
    def one(cls) -> Self:
        return cls(1, ())

    @property
    def factors(self) -> dict[int, int]:
        return dict(self.exponents)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exponents)

    def value(self) -> Fraction:
        """Reconstruct the rational exactly."""
        num = prod(p**e for p, e in self.exponents if e > 0)
        den = prod(p**-e for p, e in self.exponents if e < 0)
        return Fraction(self.sign * num, den)

    def is_torsion(self) -> bool:
        """True for ±1, the roots of unity of Q."""
        return not self.exponents

    def exponent_gcd(self) -> int:
        return gcd(*(e for _, e in self.exponents)) if self.exponents else 0

    def vector(self, support: Sequence[SupportKey]) -> tuple[int, ...]:
        f = self.factors
        return tuple(f.get(p, 0) if isinstance(p, int) else 0 for p in support)

    def squarefree_kernel(self) -> int:
        """Signed product of the primes with odd exponent."""
        return self.sign * prod(p for p, e in self.exponents if e % 2)

    def __mul__(self, other: "FactoredRational") -> "FactoredRational":
        f = self.factors
        for p, e in other.exponents:
            f[p] = f.get(p, 0) + e
        return FactoredRational.create(self.sign * other.sign, f)

    def __pow__(self, k: int) -> "FactoredRational":
        return FactoredRational.create(
            self.sign if k % 2 else 1, {p: e * k for p, e in self.exponents}
        )

    def inverse(self) -> "FactoredRational":
        return self**-1

    def __str__(self) -> str:
        v = self.value()
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def as_fraction(q) -> Fraction:
    """
    Parse an int, Fraction or "num/den" string into a Fraction.

    Raises:
        MalformedInputError: If the value is a float or does not parse.
    """
    if isinstance(q, FactoredRational):
        return q.value()
    if isinstance(q, float) or isinstance(q, bool):
        raise MalformedInputError(f"exact rational required, got {q!r}")
    try:
        return Fraction(q)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise MalformedInputError(f"cannot parse rational {q!r}: {e}") from e


def _factor_integer(n: int, max_bits: int) -> dict[int, int]:
    if n.bit_length() > max_bits:
        raise FactorizationBudgetExceededError(
            f"{n.bit_length()}-bit component exceeds the factorization budget of {max_bits} bits"
        )
    logger.debug("Factoring %d-bit integer", n.bit_length())
    factors = factorint(n)
    for p in factors:
        if not isprime(p):
            raise FactorizationBudgetExceededError(f"composite {p} survived factorization")
    return {int(p): int(e) for p, e in factors.items()}


def factor(q, *, max_bits: int | None = None) -> FactoredRational:
    """
    Factor a nonzero rational exactly.

    Args:
        q: An int, Fraction, "num/den" string or FactoredRational.
        max_bits: Largest bit length accepted for numerator or denominator.
            Defaults to the configured factorization budget.

    Returns:
        The factored rational; its value() equals q.

    Raises:
        ZeroInputError: If q is zero.
        FactorizationBudgetExceededError: If a component is over budget.
    """
    if isinstance(q, FactoredRational):
        return q
    fq = as_fraction(q)
    if fq == 0:
        raise ZeroInputError("zero has no multiplicative factorization")
    max_bits = max_bits or get_settings().budget_factor
    f = _factor_integer(abs(fq.numerator), max_bits)
    for p, e in _factor_integer(fq.denominator, max_bits).items():
        f[p] = f.get(p, 0) - e
    return FactoredRational.create(1 if fq > 0 else -1, f)


# ===== INTEGER ROW REDUCTION =====


def _sub_row(mat: list[list[int]], target: int, source: int, k: int) -> None:
    if k:
        src = mat[source]
        mat[target] = [a - k * b for a, b in zip(mat[target], src)]


def echelon(
    rows: Sequence[Sequence[int]], ncols: int
) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """
    Row-style Hermite normal form with its unimodular transform.

    Pivot columns strictly increase, pivots are positive and the entries above
    each pivot are reduced into [0, pivot).

    Returns:
        (H, U, pivots) with U·A = H. Rows of U beyond len(pivots) span the
        integer left kernel of A.
    """
    a = [list(r) for r in rows]
    m = len(a)
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == m:
            break
        while True:
            live = [i for i in range(top, m) if a[i][col]]
            if not live:
                break
            best = min(live, key=lambda i: abs(a[i][col]))
            a[top], a[best] = a[best], a[top]
            u[top], u[best] = u[best], u[top]
            done = True
            for i in range(top + 1, m):
                if a[i][col]:
                    k = a[i][col] // a[top][col]
                    _sub_row(a, i, top, k)
                    _sub_row(u, i, top, k)
                    done = done and a[i][col] == 0
            if done:
                break
        if not a[top][col]:
            continue
        if a[top][col] < 0:
            a[top] = [-x for x in a[top]]
            u[top] = [-x for x in u[top]]
        for i in range(top):
            k = a[i][col] // a[top][col]
            _sub_row(a, i, top, k)
            _sub_row(u, i, top, k)
        pivots.append(col)
        top += 1
    return a[:top], u, pivots


def transpose(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    return [[r[j] for r in rows] for j in range(ncols)]


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Canonical basis of {x ∈ Z^m : x·A = 0} for the m-row matrix A."""
    m = len(rows)
    if m == 0:
        return []
    _, u, pivots = echelon(rows, ncols)
    basis = u[len(pivots):]
    h, _, _ = echelon(basis, m)
    return h


# ===== EXPONENT LATTICES =====


class ExponentLattice(NamedTuple):
    """Integer row matrix over an ordered support of primes or symbols."""

    support: tuple[SupportKey, ...]
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def create(cls, support: Sequence[SupportKey], rows: Sequence[Sequence[int]]) -> Self:
        """
        Build a lattice, checking every row has one entry per support element.

        Raises:
            SupportMismatchError: If a row has the wrong length.
        """
        support = tuple(support)
        for r in rows:
            if len(r) != len(support):
                raise SupportMismatchError(
                    f"row {tuple(r)} has {len(r)} entries for a support of size {len(support)}"
                )
        return cls(support, tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def full(cls, support: Sequence[SupportKey]) -> Self:
        n = len(support)
        return cls(tuple(support), tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def dimension(self) -> int:
        return len(self.support)

    def canonical(self) -> "ExponentLattice":
        h, _, _ = echelon(self.rows, self.dimension)
        return ExponentLattice(self.support, tuple(tuple(r) for r in h))

    @property
    def rank(self) -> int:
        return len(self.canonical().rows)

    def align(self, support: Sequence[SupportKey]) -> "ExponentLattice":
        """Re-express the lattice on a support containing its own."""
        support = tuple(support)
        missing = set(self.support) - set(support)
        if missing:
            raise SupportMismatchError(f"support lacks {sorted(missing, key=support_key)}")
        idx = {x: i for i, x in enumerate(self.support)}
        rows = tuple(
            tuple(r[idx[x]] if x in idx else 0 for x in support) for r in self.rows
        )
        return ExponentLattice(support, rows)

    def scaled(self, d: int) -> "ExponentLattice":
        return ExponentLattice(self.support, tuple(tuple(d * x for x in r) for r in self.rows))

    def same_subgroup(self, other: "ExponentLattice") -> bool:
        support = merge_supports(self.support, other.support)
        return self.align(support).canonical() == other.align(support).canonical()


def lattice_of(t: Sequence[FactoredRational]) -> ExponentLattice:
    """Exponent lattice of a tuple of rationals over the union of their supports."""
    support = merge_supports(*(x.support for x in t))
    return ExponentLattice(support, tuple(x.vector(support) for x in t))


def normal_form(lattice: ExponentLattice) -> tuple[ExponentLattice, list[int]]:
    """
    Hermite normal form and the nonzero Smith invariants of a lattice.

    Returns:
        (hnf, snf_diagonal) with d_1 | d_2 | ... listed in increasing order.
    """
    hnf = lattice.canonical()
    if not hnf.rows:
        return hnf, []
    invs = invariant_factors(Matrix([list(r) for r in hnf.rows]))
    return hnf, sorted(abs(int(d)) for d in invs if d != 0)


def smith_index(lattice: ExponentLattice) -> int:
    """[saturate(L) : L], the product of the Smith invariants."""
    return prod(normal_form(lattice)[1])


def saturate(lattice: ExponentLattice) -> ExponentLattice:
    """
    The pure hull of a lattice: its rational span intersected with Z^n.

    The result has the same rank, contains the input and has a torsion-free
    quotient in the ambient lattice.
    """
    hnf = lattice.canonical()
    n = hnf.dimension
    if not hnf.rows:
        return hnf
    orthogonal = left_kernel(transpose(hnf.rows, n), len(hnf.rows))
    if not orthogonal:
        return ExponentLattice.full(hnf.support)
    sat = left_kernel(transpose(orthogonal, n), len(orthogonal))
    return ExponentLattice(hnf.support, tuple(tuple(r) for r in sat))


def member(lattice: ExponentLattice, v: Sequence[int]) -> tuple[int, ...] | None:
    """
    Integer coefficients expressing v in the rows of the lattice, if any.

    Raises:
        SupportMismatchError: If v has a different length than the support.
    """
    if len(v) != lattice.dimension:
        raise SupportMismatchError(
            f"vector of length {len(v)} over a support of size {lattice.dimension}"
        )
    h, u, pivots = echelon(lattice.rows, lattice.dimension)
    w = list(v)
    coeffs = []
    for row, p in zip(h, pivots):
        if any(w[:p]) or w[p] % row[p]:
            return None
        c = w[p] // row[p]
        w = [a - c * b for a, b in zip(w, row)]
        coeffs.append(c)
    if any(w):
        return None
    m = len(lattice.rows)
    return tuple(sum(c * u[i][j] for i, c in enumerate(coeffs)) for j in range(m))


def is_mult_independent(t: Sequence[FactoredRational]) -> bool:
    """
    True iff the only integer relation among the tuple is the trivial one.

    A torsion coordinate never restores independence: any nonzero kernel vector
    of the exponent rows doubles to a relation with trivial sign.
    """
    if not t:
        return True
    return lattice_of(t).rank == len(t)


def group_index(sub: ExponentLattice, sup: ExponentLattice) -> int | Literal["infinite"]:
    """
    Index of one subgroup in another.

    Raises:
        NotASubgroupError: If a generator of sub is not in sup.
    """
    support = merge_supports(sub.support, sup.support)
    sub_c = sub.align(support).canonical()
    sup_c = sup.align(support).canonical()
    coords = []
    for r in sub_c.rows:
        c = member(sup_c, r)
        if c is None:
            raise NotASubgroupError(f"generator {r} is not in the larger lattice")
        coords.append(list(c))
    if len(sub_c.rows) != len(sup_c.rows):
        return INFINITE
    if not coords:
        return 1
    return abs(int(Matrix(coords).det()))


def power_product(t: Sequence[FactoredRational], exponents: Sequence[int]) -> FactoredRational:
    """∏ t_i^{e_i}."""
    out = FactoredRational.one()
    for a, e in zip(t, exponents):
        out = out * a**e
    return out
