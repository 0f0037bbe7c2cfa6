"""
Exact arithmetic in cyclotomic fields Q(ζ_n).

Elements are rational coefficient vectors in the power basis 1, ζ, ..., ζ^{φ(n)-1}
reduced modulo the n-th cyclotomic polynomial; ζ_n is identified with e(1/n).
"""

import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Literal, NamedTuple, Self, Sequence

from cacheout.lru import LRUCache
from sympy import Poly, Symbol, cyclotomic_poly as _sympy_cyclotomic_poly, factorint
from sympy.functions.combinatorial.numbers import legendre_symbol
from sympy.polys.domains import QQ

from src.core.rational_multiplicative import FactoredRational
from src.service.arg_checkers import positive_int, require_prime
from src.service.config import get_settings
from src.service.exceptions import (
    BoundExceededError,
    ConductorMismatchError,
    DivisionByZeroError,
    MalformedInputError,
    NotAMultipleError,
    NotSquarefreeError,
)

logger = logging.getLogger(__name__)

_X = Symbol("x")
_POLY_CACHE = LRUCache(maxsize=1024)
_CHARACTER_CACHE = LRUCache(maxsize=8192)


def _check_bound(n: int, bound: int | None) -> None:
    bound = bound or get_settings().budget_conductor
    if n > bound:
        raise BoundExceededError(f"conductor {n} exceeds the configured bound {bound}")


def cyclotomic_poly(n: int, *, bound: int | None = None) -> tuple[int, ...]:
    """
    The n-th cyclotomic polynomial as ascending integer coefficients.

    Raises:
        BoundExceededError: If n exceeds the conductor bound.
    """
    positive_int(n, "n")
    _check_bound(n, bound)
    coeffs = _POLY_CACHE.get(n)
    if coeffs is None:
        poly = Poly(_sympy_cyclotomic_poly(n, _X), _X)
        coeffs = tuple(int(c) for c in reversed(poly.all_coeffs()))
        _POLY_CACHE.set(n, coeffs)
        logger.debug("Materialized cyclotomic polynomial %d of degree %d", n, len(coeffs) - 1)
    return coeffs


def _modulus(n: int) -> Poly:
    return Poly(list(reversed(cyclotomic_poly(n, bound=max(n, 1)))), _X, domain=QQ)


def _to_poly(coeffs: Sequence[Fraction]) -> Poly:
    return Poly(
        [QQ(c.numerator, c.denominator) for c in reversed(coeffs)] or [QQ(0)], _X, domain=QQ
    )


def _reduce(n: int, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Reduce an ascending coefficient list modulo Φ_n into a length-φ(n) tuple."""
    deg = len(cyclotomic_poly(n, bound=max(n, 1))) - 1
    if len(coeffs) <= deg:
        out = list(coeffs)
    else:
        rem = _to_poly(coeffs).rem(_modulus(n))
        out = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(rem.all_coeffs())]
    out = [Fraction(c) for c in out] + [Fraction(0)] * (deg - len(out))
    return tuple(out[:deg])


# ===== FIELD ELEMENTS =====


class CyclotomicElement(NamedTuple):
    """An element of Q(ζ_n) in the power basis modulo Φ_n."""

    n: int
    coeffs: tuple[Fraction, ...]

    @classmethod
    def create(cls, n: int, coeffs: Sequence, *, bound: int | None = None) -> Self:
        """Build an element from arbitrary-length coefficients, reducing modulo Φ_n."""
        positive_int(n, "n")
        _check_bound(n, bound)
        return cls(n, _reduce(n, [Fraction(c) for c in coeffs]))

    @classmethod
    def from_rational(cls, q, n: int = 1) -> Self:
        return cls.create(n, [Fraction(q)], bound=n)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> Self:
        """ζ_n^k, reduced."""
        k %= n
        return cls.create(n, [0] * k + [1], bound=n)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational_value(self) -> Fraction | None:
        """The rational this element equals, or None if it is irrational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __add__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        return add(self, other)

    def __sub__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        return add(self, neg(other))

    def __mul__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        return mul(self, other)

    def __neg__(self) -> "CyclotomicElement":
        return neg(self)

    def __pow__(self, k: int) -> "CyclotomicElement":
        return power(self, k)


def _same_conductor(a: CyclotomicElement, b: CyclotomicElement) -> int:
    if a.n != b.n:
        raise ConductorMismatchError(
            f"conductors {a.n} and {b.n} differ; embed both into {lcm(a.n, b.n)} first"
        )
    return a.n


def add(a: CyclotomicElement, b: CyclotomicElement) -> CyclotomicElement:
    n = _same_conductor(a, b)
    return CyclotomicElement(n, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def neg(a: CyclotomicElement) -> CyclotomicElement:
    return CyclotomicElement(a.n, tuple(-x for x in a.coeffs))


def mul(a: CyclotomicElement, b: CyclotomicElement) -> CyclotomicElement:
    n = _same_conductor(a, b)
    prod_coeffs = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod_coeffs[i + j] += x * y
    return CyclotomicElement(n, _reduce(n, prod_coeffs))


def inv(a: CyclotomicElement) -> CyclotomicElement:
    """
    Multiplicative inverse.

    Raises:
        DivisionByZeroError: If a is zero.
    """
    if a.is_zero():
        raise DivisionByZeroError("zero has no inverse")
    inverse = _to_poly(a.coeffs).invert(_modulus(a.n))
    coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(inverse.all_coeffs())]
    return CyclotomicElement(a.n, _reduce(a.n, coeffs))


def power(a: CyclotomicElement, k: int) -> CyclotomicElement:
    if k < 0:
        return power(inv(a), -k)
    result = CyclotomicElement.from_rational(1, a.n)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def arith(
    op: Literal["add", "mul", "inv"],
    a: CyclotomicElement,
    b: CyclotomicElement | None = None,
) -> CyclotomicElement:
    """
    Field arithmetic modulo Φ_n.

    Raises:
        ConductorMismatchError: If a and b have different conductors.
        DivisionByZeroError: If inverting zero.
    """
    match op:
        case "add":
            return add(a, b)
        case "mul":
            return mul(a, b)
        case "inv":
            return inv(a)
    raise ValueError(f"unknown operation {op}")


def embed(a: CyclotomicElement, n: int, *, bound: int | None = None) -> CyclotomicElement:
    """
    Image of a under ζ_m ↦ ζ_n^{n/m}.

    Raises:
        NotAMultipleError: If the conductor of a does not divide n.
    """
    if n % a.n:
        raise NotAMultipleError(f"{n} is not a multiple of {a.n}")
    _check_bound(n, bound)
    step = n // a.n
    spread = [Fraction(0)] * ((len(a.coeffs) - 1) * step + 1)
    for i, c in enumerate(a.coeffs):
        spread[i * step] = c
    return CyclotomicElement(n, _reduce(n, spread))


def common(*elements: CyclotomicElement, bound: int | None = None) -> list[CyclotomicElement]:
    """Embed elements into the least common conductor."""
    n = lcm(*(e.n for e in elements))
    return [embed(e, n, bound=bound) for e in elements]


# ===== GALOIS ACTION =====


class GaloisMap(NamedTuple):
    """The automorphism ζ_n ↦ ζ_n^k of Q(ζ_n)."""

    n: int
    k: int

    @classmethod
    def create(cls, n: int, k: int) -> Self:
        """
        Build the map, reducing k modulo n.

        Raises:
            MalformedInputError: If k is not a unit modulo n.
        """
        positive_int(n, "n")
        k %= n
        if gcd(k, n) != 1:
            raise MalformedInputError(f"exponent {k} is not a unit modulo {n}")
        return cls(n, k)

    def compose(self, other: "GaloisMap") -> "GaloisMap":
        """self ∘ other."""
        if self.n != other.n:
            raise ConductorMismatchError(f"conductors {self.n} and {other.n} differ")
        return GaloisMap(self.n, (self.k * other.k) % self.n)


def galois_apply(g: GaloisMap, a: CyclotomicElement) -> CyclotomicElement:
    """
    Apply ζ ↦ ζ^k coefficient-wise and reduce.

    Raises:
        ConductorMismatchError: If the map and element conductors differ.
    """
    if g.n != a.n:
        raise ConductorMismatchError(f"map of conductor {g.n} applied to conductor {a.n}")
    out = [Fraction(0)] * a.n
    for i, c in enumerate(a.coeffs):
        out[(i * g.k) % a.n] += c
    return CyclotomicElement(a.n, _reduce(a.n, out))


# ===== SQUARE ROOTS AND POWER TESTS =====


def quadratic_conductor(a: int) -> int:
    """Absolute fundamental discriminant of Q(√a) for squarefree a (1 for a = 1)."""
    if a == 1:
        return 1
    return abs(a) if a % 4 == 1 else 4 * abs(a)


def quadratic_character(p: int, k: int) -> int:
    """
    The sign σ_k(√p)/√p for a prime p and k prime to the conductor of Q(√p).

    √p is the positive real root, so for p ≡ 3 mod 4 the Legendre symbol is
    corrected by the character of Q(i).
    """
    if p == 2:
        return 1 if k % 8 in (1, 7) else -1
    key = (p, k % quadratic_conductor(p))
    sign = _CHARACTER_CACHE.get(key)
    if sign is None:
        sign = int(legendre_symbol(k % p, p))
        if p % 4 == 3 and k % 4 == 3:
            sign = -sign
        _CHARACTER_CACHE.set(key, sign)
    return sign


def _is_squarefree(a: int) -> bool:
    return a != 0 and all(e == 1 for e in factorint(abs(a)).values())


def _gauss_sum(p: int) -> CyclotomicElement:
    """Σ (t|p) ζ_p^t; squares to p* = (-1)^{(p-1)/2} p."""
    return CyclotomicElement.create(p, [0] + [int(legendre_symbol(t, p)) for t in range(1, p)], bound=p)


_TWO_PART = {
    1: lambda: CyclotomicElement.from_rational(1),
    -1: lambda: CyclotomicElement.zeta(4),
    2: lambda: CyclotomicElement.zeta(8) + CyclotomicElement.zeta(8, 7),
    -2: lambda: CyclotomicElement.zeta(8) + CyclotomicElement.zeta(8, 3),
}


def sqrt_in_cyclotomic(a: int, *, bound: int | None = None) -> tuple[int, CyclotomicElement]:
    """
    Canonical square root of a squarefree integer in its least cyclotomic field.

    The root is positive real for a > 0 and i·√|a| for a < 0, built from
    quadratic Gauss sums over the odd primes of a and a ζ_8 correction for
    the sign and the prime 2.

    Returns:
        (conductor, witness) with witness² = a in Q(ζ_conductor).

    Raises:
        NotSquarefreeError: If a is zero or not squarefree.
    """
    if not _is_squarefree(a):
        raise NotSquarefreeError(f"{a} is not a nonzero squarefree integer")
    n = quadratic_conductor(a)
    _check_bound(n, bound)
    odd = sorted(p for p in factorint(abs(a)) if p != 2)
    witness = CyclotomicElement.from_rational(1, n)
    star = 1
    for p in odd:
        witness = mul(witness, embed(_gauss_sum(p), n, bound=n))
        star *= p if p % 4 == 1 else -p
    unit = a // star
    witness = mul(witness, embed(_TWO_PART[unit](), n, bound=n))
    # witness = i^(k + [unit<0]) √|a| with k the count of primes ≡ 3 mod 4
    k = sum(1 for p in odd if p % 4 == 3) + (unit < 0)
    if ((k - (a < 0)) // 2) % 2:
        witness = neg(witness)
    return n, witness


def is_qth_power_in_cyclotomic(
    a: FactoredRational, q: int, n: int, *, bound: int | None = None
) -> bool:
    """
    Whether a = β^q·ζ for some β and root of unity ζ in Q(ζ_n).

    For odd q the norm argument reduces this to q dividing every prime exponent.
    For q = 2 the squarefree kernel s of |a| must have quadratic conductor
    dividing 2·lcm(2, n), since a root of unity that is not a square in Q(ζ_n)
    generates the unique quadratic extension inside Q(ζ_{2·lcm(2, n)}).

    Raises:
        NotPrimeError: If q is not prime.
        BoundExceededError: If n exceeds the conductor bound.
    """
    require_prime(q, "q")
    positive_int(n, "n")
    _check_bound(n, bound)
    if q != 2:
        return all(e % q == 0 for _, e in a.exponents)
    s = abs(a.squarefree_kernel())
    return (2 * lcm(2, n)) % quadratic_conductor(s) == 0
