"""
Commands on subgroups of the torus: closure and pullback component counts.
"""

from typing import Annotated

from pydantic import Field

from src.commands.router import CommandRouter, Flag
from src.core.torus_geometry import (
    closure_components,
    pullback_components,
    relation_lattice,
)
from src.service.models import CommandRequest, CommandResponse, LatticeModel, TorusCoordinateModel

router = CommandRouter()


def _point(text: str) -> list[dict]:
    """A comma separated point of rational coordinates, e.g. "2,-2"."""
    return [{"rational": c.strip()} for c in text.split(",")]


# ===== REQUEST AND RESPONSE MODELS =====


class ClosureRequest(CommandRequest):
    generators: Annotated[
        list[list[TorusCoordinateModel]], Field(description="Points of G_m^l, one list per point")
    ] = []


class ClosureResponse(CommandResponse):
    components: int
    relation_lattice: LatticeModel


class PullbackRequest(ClosureRequest):
    d: Annotated[int, Field(gt=0)]


class PullbackResponse(ClosureResponse):
    closure_components: int


# ===== COMMANDS =====

_POINT = Flag("--point", "generators", _point, append=True, help="comma separated rationals, repeatable")


@router.command(
    "closure",
    request_model=ClosureRequest,
    summary="Irreducible components of the Zariski closure of a generated subgroup",
    flags=[_POINT],
)
def closure(body: ClosureRequest) -> ClosureResponse:
    gens = [[c.to_core() for c in g] for g in body.generators]
    return ClosureResponse(
        components=closure_components(gens),
        relation_lattice=LatticeModel.from_core(relation_lattice(gens)),
    )


@router.command(
    "pullback",
    request_model=PullbackRequest,
    summary="Components of the preimage of the closure under the d-th power map",
    flags=[_POINT, Flag("--d", "d", int, help="power")],
)
def pullback(body: PullbackRequest) -> PullbackResponse:
    gens = [[c.to_core() for c in g] for g in body.generators]
    return PullbackResponse(
        components=pullback_components(gens, body.d),
        closure_components=closure_components(gens),
        relation_lattice=LatticeModel.from_core(relation_lattice(gens)),
    )
