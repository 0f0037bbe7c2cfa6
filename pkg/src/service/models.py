"""
Pydantic models shared by the cover-arithmetic commands.

Rationals travel as integers or "num/den" strings and are always emitted as
strings. Every request and response carries the schema version.
"""

from typing import Annotated, Literal, Self

from pydantic import BaseModel, ConfigDict, Field

from src.core.cover import CoverGenerator, CoverPresentation, HElement
from src.core.cyclotomic_field import CyclotomicElement
from src.core.profinite import ZhatApprox
from src.core.radicals import RadicalTuple
from src.core.rational_multiplicative import ExponentLattice, FactoredRational, factor
from src.core.torus_geometry import TorusCoordinate

SCHEMA_VERSION = "1"

Rational = Annotated[
    int | str, Field(description='A nonzero rational as an integer or a "num/den" string')
]


def parse_tuple(values: list[Rational]) -> tuple[FactoredRational, ...]:
    return tuple(factor(v) for v in values)


# ===== ENVELOPES =====


class CommandRequest(BaseModel):
    """Base of every command payload."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    schema_version: Annotated[Literal["1"], Field(description="Payload schema version")]


class CommandResponse(BaseModel):
    """Base of every command result."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    schema_version: Annotated[Literal["1"], Field(description="Result schema version")] = SCHEMA_VERSION
    budgets: Annotated[
        dict[str, int], Field(description="Effective budgets used for the computation")
    ] = {}


class ErrorResponse(BaseModel):
    """Standard error response model."""

    model_config = ConfigDict(frozen=True)

    schema_version: Literal["1"] = SCHEMA_VERSION
    error: Annotated[int | None, Field(description="Exit code")] = None
    error_type: Annotated[str | None, Field(description="Error type")] = None
    message: Annotated[str | None, Field(description="Error message")] = None


# ===== SHARED SCHEMAS =====


class FactoredRationalModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: Annotated[str, Field(description="The rational as a string")]
    sign: Annotated[int, Field(description="±1")]
    factors: Annotated[dict[int, int], Field(description="Prime to exponent map")]

    @classmethod
    def from_core(cls, a: FactoredRational) -> Self:
        return cls(value=str(a), sign=a.sign, factors=a.factors)


class LatticeModel(BaseModel):
    """Integer rows over an ordered support of primes and symbols."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    support: Annotated[list[int | str], Field(description="Primes and formal symbols")]
    rows: Annotated[list[list[int]], Field(description="Generating exponent vectors")]

    def to_core(self) -> ExponentLattice:
        return ExponentLattice.create(self.support, self.rows)

    @classmethod
    def from_core(cls, lattice: ExponentLattice) -> Self:
        return cls(support=list(lattice.support), rows=[list(r) for r in lattice.rows])


class CyclotomicElementModel(BaseModel):
    """Σ coeffs[k]·ζ_n^k in the power basis."""

    model_config = ConfigDict(frozen=True)

    n: int
    coeffs: list[str]

    @classmethod
    def from_core(cls, a: CyclotomicElement) -> Self:
        return cls(n=a.n, coeffs=[str(c) for c in a.coeffs])


class RadicalTupleModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    bases: list[Rational]
    m: Annotated[int, Field(gt=0, description="Root denominator")]
    twists: Annotated[
        list[int] | None, Field(description="Exponent of ζ_m per coordinate, canonical roots if omitted")
    ] = None

    def to_core(self) -> RadicalTuple:
        return RadicalTuple.create(parse_tuple(self.bases), self.m, self.twists)

    @classmethod
    def from_core(cls, r: RadicalTuple) -> Self:
        return cls(bases=[str(b) for b in r.bases], m=r.m, twists=list(r.twists))


class TwistModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    order: Annotated[int, Field(gt=0)]
    exp: int


class TorusCoordinateModel(BaseModel):
    """rational × e(exp/order) × symbol; absent parts are trivial."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    rational: Rational | None = None
    twist: TwistModel | None = None
    symbol: str | None = None

    def to_core(self) -> TorusCoordinate:
        return TorusCoordinate.create(
            factor(self.rational) if self.rational is not None else None,
            (self.twist.order, self.twist.exp) if self.twist else (1, 0),
            {self.symbol: 1} if self.symbol else None,
        )


class GeneratorModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: Annotated[str, Field(min_length=1)]
    base: Annotated[Rational | None, Field(description="ex-value of an algebraic generator")] = None
    symbol: Annotated[str | None, Field(description="Formal transcendental ex-value")] = None
    root_choices: Annotated[
        dict[int, int], Field(description="Denominator d to the twist of the recorded d-th root")
    ] = {}


class PresentationModel(BaseModel):
    """A finitely presented cover with its recorded root choices."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    generators: list[GeneratorModel]
    kernel_generator: str = "z"
    kernel_period: Annotated[int, Field(gt=0)] = 1
    root_of_unity_level: Annotated[int, Field(gt=0)] = 1
    denominator_bound: Annotated[int, Field(gt=0)] = 1

    def to_core(self) -> CoverPresentation:
        return CoverPresentation.create(
            [
                CoverGenerator(g.name, factor(g.base) if g.base is not None else None, g.symbol)
                for g in self.generators
            ],
            {g.name: g.root_choices for g in self.generators if g.root_choices},
            self.kernel_generator,
            self.kernel_period,
            self.root_of_unity_level,
            self.denominator_bound,
        )

    @classmethod
    def from_core(cls, p: CoverPresentation) -> Self:
        choices = dict(p.root_choices)
        return cls(
            generators=[
                GeneratorModel(
                    name=g.name,
                    base=str(g.base) if g.base is not None else None,
                    symbol=g.symbol,
                    root_choices=dict(choices.get(g.name, ())),
                )
                for g in p.generators
            ],
            kernel_generator=p.kernel_generator,
            kernel_period=p.kernel_period,
            root_of_unity_level=p.root_of_unity_level,
            denominator_bound=p.denominator_bound,
        )


def h_element_dict(v: HElement, kernel_generator: str) -> dict[str, str]:
    out = {name: str(q) for name, q in v.coords}
    if v.kernel:
        out[kernel_generator] = str(v.kernel)
    return out


class ZhatModel(BaseModel):
    """A truncated element of Ẑ as one residue modulo the lcm of its levels."""

    model_config = ConfigDict(frozen=True)

    mod: int
    residue: int

    @classmethod
    def from_core(cls, z: ZhatApprox) -> Self:
        return cls(mod=z.modulus, residue=z.residue)
