"""
Commands on Kummer extensions: degrees, conjugacy of root choices and the
stabilizing integer m.
"""

import logging
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field

from src.commands.router import CommandRouter, Flag
from src.core.kummer import (
    determines_isomorphism_type,
    kummer_degree,
    roots_conjugate,
    stabilizing_m,
)
from src.core.radicals import RadicalTuple
from src.service.models import (
    CommandRequest,
    CommandResponse,
    RadicalTupleModel,
    Rational,
    parse_tuple,
)

logger = logging.getLogger(__name__)

router = CommandRouter()


# ===== REQUEST AND RESPONSE MODELS =====


class KummerDegreeRequest(CommandRequest):
    t: Annotated[list[Rational], Field(description="A simple tuple")] = []
    n: Annotated[int, Field(gt=0)]
    conductor: Annotated[int, Field(gt=0, description="Ambient cyclotomic conductor M")] = 1


class KummerDegreeResponse(CommandResponse):
    degree: int


class ConjugateRequest(CommandRequest):
    r1: RadicalTupleModel
    r2: RadicalTupleModel
    conductor: Annotated[int, Field(gt=0)] = 1
    fixed: Annotated[
        list[RadicalTupleModel], Field(description="Radicals already adjoined to the base field")
    ] = []


class ConjugateResponse(CommandResponse):
    verdict: bool
    conductor: Annotated[int, Field(description="Conductor of the cyclotomic base field")]
    witness: Annotated[list[int] | None, Field(description="Twist shift per coordinate")] = None
    galois_exponent: Annotated[
        int | None, Field(description="Exponent k of the action ζ ↦ ζ^k on roots of unity")
    ] = None
    obstruction: Annotated[list[int] | None, Field(description="A separating relation")] = None


class StabilizerMRequest(CommandRequest):
    b: Annotated[list[Rational], Field(description="An independent tuple")] = []


class StabilizerMResponse(CommandResponse):
    m: int
    simple_basis: RadicalTupleModel
    conductor: int


class ExtensionCheckRequest(CommandRequest):
    b: list[Rational]
    m: Annotated[int, Field(gt=0)]
    d_max: Annotated[int, Field(gt=0)]
    conductor: Annotated[int, Field(gt=0)] = 1
    twists: Annotated[
        list[int] | None, Field(description="Twists of the fixed m-th roots, canonical if omitted")
    ] = None


class ExtensionFailureModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    d: int
    twists: list[int]


class ExtensionCheckResponse(CommandResponse):
    verdict: bool
    failure: ExtensionFailureModel | None = None


# ===== COMMANDS =====


@router.command(
    "kummer-degree",
    request_model=KummerDegreeRequest,
    summary="[Q(ζ_M)(t^(1/n)) : Q(ζ_M)] for a simple tuple t",
    flags=[
        Flag("--t", "t", append=True, help="tuple entry, repeatable"),
        Flag("--n", "n", int, help="root degree"),
        Flag("--conductor", "conductor", int, help="ambient conductor M"),
    ],
)
def kummer_degree_command(body: KummerDegreeRequest) -> KummerDegreeResponse:
    return KummerDegreeResponse(degree=kummer_degree(parse_tuple(body.t), body.n, body.conductor))


@router.command(
    "conjugate",
    request_model=ConjugateRequest,
    summary="Decide whether two root tuples are Galois conjugate over a context field",
)
def conjugate(body: ConjugateRequest) -> ConjugateResponse:
    decision = roots_conjugate(
        body.r1.to_core(), body.r2.to_core(), body.conductor, [r.to_core() for r in body.fixed]
    )
    return ConjugateResponse(
        verdict=decision.verdict,
        conductor=decision.conductor,
        witness=list(decision.witness) if decision.witness is not None else None,
        galois_exponent=decision.galois_exponent,
        obstruction=list(decision.obstruction) if decision.obstruction is not None else None,
    )


@router.command(
    "stabilizer-m",
    request_model=StabilizerMRequest,
    summary="An m whose roots determine all further root choices up to conjugacy",
    flags=[Flag("--b", "b", append=True, help="tuple entry, repeatable")],
)
def stabilizer_m(body: StabilizerMRequest) -> StabilizerMResponse:
    m, hull = stabilizing_m(parse_tuple(body.b))
    return StabilizerMResponse(
        m=m, simple_basis=RadicalTupleModel.from_core(hull.half_basis), conductor=hull.conductor
    )


@router.command(
    "extension-check",
    request_model=ExtensionCheckRequest,
    summary="Check that fixed m-th roots extend consistently to every level d ≤ d_max",
    flags=[
        Flag("--b", "b", append=True, help="tuple entry, repeatable"),
        Flag("--m", "m", int, help="level of the fixed roots"),
        Flag("--d-max", "d_max", int, help="largest extension degree checked"),
        Flag("--conductor", "conductor", int, help="materialized root-of-unity level"),
    ],
)
def extension_check(body: ExtensionCheckRequest) -> ExtensionCheckResponse:
    b = parse_tuple(body.b)
    choice = RadicalTuple.create(b, body.m, body.twists)
    failure = determines_isomorphism_type(b, body.m, body.d_max, body.conductor, choice)
    if failure is None:
        return ExtensionCheckResponse(verdict=True)
    logger.info("Extension fails at level %d", failure.d)
    return ExtensionCheckResponse(
        verdict=False,
        failure=ExtensionFailureModel(d=failure.d, twists=list(failure.choice.twists)),
    )
