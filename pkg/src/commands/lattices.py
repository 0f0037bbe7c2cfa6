"""
Commands on rationals and their exponent lattices: factorization, simplicity,
the stabilizer N, pure hulls and saturation.
"""

from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field

from src.commands.router import CommandRouter, Flag
from src.core.cyclotomic_field import sqrt_in_cyclotomic
from src.core.rational_multiplicative import factor, saturate, smith_index
from src.core.simplicity import is_k_simple, is_simple_tuple, pure_hull, stabilizer_N
from src.service.models import (
    CommandRequest,
    CommandResponse,
    CyclotomicElementModel,
    FactoredRationalModel,
    LatticeModel,
    RadicalTupleModel,
    Rational,
    parse_tuple,
)

router = CommandRouter()


# ===== REQUEST AND RESPONSE MODELS =====


class FactorRequest(CommandRequest):
    q: Annotated[Rational, Field(description="The rational to factor")]


class FactorResponse(CommandResponse):
    factored: FactoredRationalModel


class TupleRequest(CommandRequest):
    t: Annotated[list[Rational], Field(description="A tuple of nonzero rationals")] = []


class PurityWitnessModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    root: str
    n: int
    exponents: list[int]


class SimpleCheckResponse(CommandResponse):
    verdict: bool
    independent: bool
    smith_invariants: list[int]
    witness: Annotated[
        PurityWitnessModel | None, Field(description="root^n = ∏ t_i^exponents_i with root outside ⟨t⟩")
    ] = None


class KSimpleRequest(CommandRequest):
    a: Rational
    k: Annotated[int, Field(ge=2)]


class VerdictResponse(CommandResponse):
    verdict: bool


class SingleRationalRequest(CommandRequest):
    a: Rational


class StabilizerResponse(CommandResponse):
    n: int
    conductor: int
    witness: CyclotomicElementModel


class PureHullResponse(CommandResponse):
    saturation: LatticeModel
    half_basis: RadicalTupleModel
    conductors: list[int]
    conductor: int
    index: int


class SaturateRequest(CommandRequest):
    lattice: LatticeModel


class SaturateResponse(CommandResponse):
    lattice: LatticeModel
    index: int


class SqrtRequest(CommandRequest):
    a: Annotated[int, Field(description="A nonzero squarefree integer")]


class SqrtResponse(CommandResponse):
    conductor: int
    witness: CyclotomicElementModel


# ===== COMMANDS =====


@router.command(
    "factor",
    request_model=FactorRequest,
    summary="Factor a nonzero rational into sign and prime powers",
    flags=[Flag("--q", "q", help="rational to factor")],
)
def factor_command(body: FactorRequest) -> FactorResponse:
    return FactorResponse(factored=FactoredRationalModel.from_core(factor(body.q)))


@router.command(
    "simple-check",
    request_model=TupleRequest,
    summary="Decide whether a tuple of rationals is simple in Q",
    flags=[Flag("--t", "t", append=True, help="tuple entry, repeatable")],
)
def simple_check(body: TupleRequest) -> SimpleCheckResponse:
    cert = is_simple_tuple(parse_tuple(body.t))
    witness = None
    if cert.witness is not None:
        witness = PurityWitnessModel(
            root=str(cert.witness.root), n=cert.witness.n, exponents=list(cert.witness.exponents)
        )
    return SimpleCheckResponse(
        verdict=cert.verdict,
        independent=cert.independent,
        smith_invariants=list(cert.smith_invariants),
        witness=witness,
    )


@router.command(
    "k-simple",
    request_model=KSimpleRequest,
    summary="Decide whether a rational is k-simple",
    flags=[Flag("--a", "a", help="the rational"), Flag("--k", "k", int, help="k ≥ 2")],
)
def k_simple(body: KSimpleRequest) -> VerdictResponse:
    return VerdictResponse(verdict=is_k_simple(factor(body.a), body.k))


@router.command(
    "stabilizer",
    request_model=SingleRationalRequest,
    summary="The stabilizer N of a simple rational and its cyclotomic witness",
    flags=[Flag("--a", "a", help="a simple rational")],
)
def stabilizer(body: SingleRationalRequest) -> StabilizerResponse:
    result = stabilizer_N(factor(body.a))
    return StabilizerResponse(
        n=result.n, conductor=result.conductor, witness=CyclotomicElementModel.from_core(result.witness)
    )


@router.command(
    "pure-hull",
    request_model=TupleRequest,
    summary="Saturate an independent tuple and adjoin square roots",
    flags=[Flag("--t", "t", append=True, help="tuple entry, repeatable")],
)
def pure_hull_command(body: TupleRequest) -> PureHullResponse:
    hull = pure_hull(parse_tuple(body.t))
    return PureHullResponse(
        saturation=LatticeModel.from_core(hull.saturation),
        half_basis=RadicalTupleModel.from_core(hull.half_basis),
        conductors=list(hull.conductors),
        conductor=hull.conductor,
        index=hull.index,
    )


@router.command(
    "saturate",
    request_model=SaturateRequest,
    summary="The pure hull of an exponent lattice and its index",
)
def saturate_command(body: SaturateRequest) -> SaturateResponse:
    lattice = body.lattice.to_core()
    return SaturateResponse(
        lattice=LatticeModel.from_core(saturate(lattice)), index=smith_index(lattice)
    )


@router.command(
    "sqrt",
    request_model=SqrtRequest,
    summary="Canonical square root of a squarefree integer in its least cyclotomic field",
    flags=[Flag("--a", "a", int, help="squarefree integer")],
)
def sqrt_command(body: SqrtRequest) -> SqrtResponse:
    conductor, witness = sqrt_in_cyclotomic(body.a)
    return SqrtResponse(conductor=conductor, witness=CyclotomicElementModel.from_core(witness))
