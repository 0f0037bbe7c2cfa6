"""
Commands on cover presentations: the back-and-forth isomorphism builder, the
congruence solver and the Ẑ shift map σ.
"""

from typing import Annotated

from pydantic import Field

from src.commands.router import CommandRouter, Flag
from src.core.cover import build_isomorphism
from src.core.profinite import CongruenceSystem, build_sigma, crt_solve
from src.service.models import (
    CommandRequest,
    CommandResponse,
    PresentationModel,
    ZhatModel,
    h_element_dict,
)

router = CommandRouter()


def _congruence(text: str) -> list[int]:
    """Parse "n:b" as z ≡ b mod n; argparse reports the ValueError of a bad pair."""
    n, b = text.split(":")
    return [int(n), int(b)]


# ===== REQUEST AND RESPONSE MODELS =====


class BackforthRequest(CommandRequest):
    domain: PresentationModel
    codomain: PresentationModel
    bound: Annotated[int | None, Field(gt=0, description="Verification denominator bound")] = None
    shift_kernel: Annotated[
        bool, Field(description="Absorb opposite root choices into the kernel coordinate")
    ] = True


class BackforthResponse(CommandResponse):
    m: int
    linear_map: Annotated[
        dict[str, dict[str, str]], Field(description="Generator to the coefficients of its image")
    ]
    field_map: Annotated[list[list[str]], Field(description="Committed (value, image) pairs")]
    domain: PresentationModel
    codomain: PresentationModel


class ZhatSolveRequest(CommandRequest):
    constraints: Annotated[list[tuple[int, int]], Field(description="(modulus, residue) pairs")] = []


class ZhatSolveResponse(CommandResponse):
    mod: int
    residue: int


class ZhatSigmaRequest(CommandRequest):
    h: PresentationModel
    g: PresentationModel
    bound: Annotated[int, Field(gt=0)]


class ZhatSigmaResponse(CommandResponse):
    partners: dict[str, str]
    shifts: dict[str, ZhatModel]
    bound: int


# ===== COMMANDS =====


@router.command(
    "backforth",
    request_model=BackforthRequest,
    summary="Build and verify an isomorphism between two cover presentations",
)
def backforth(body: BackforthRequest) -> BackforthResponse:
    iso = build_isomorphism(
        body.domain.to_core(), body.codomain.to_core(), bound=body.bound, shift_kernel=body.shift_kernel
    )
    kernel = iso.codomain.kernel_generator
    return BackforthResponse(
        m=iso.m,
        linear_map={name: h_element_dict(v, kernel) for name, v in iso.linear_map},
        field_map=[[str(a), str(b)] for a, b in iso.field_map],
        domain=PresentationModel.from_core(iso.domain),
        codomain=PresentationModel.from_core(iso.codomain),
    )


@router.command(
    "zhat-solve",
    request_model=ZhatSolveRequest,
    summary="Solve a system of congruences z ≡ β_n mod n",
    flags=[Flag("--congruence", "constraints", _congruence, append=True, help="n:b, repeatable")],
)
def zhat_solve(body: ZhatSolveRequest) -> ZhatSolveResponse:
    solution = crt_solve(CongruenceSystem.create(body.constraints))
    return ZhatSolveResponse(mod=solution.modulus, residue=solution.residue)


@router.command(
    "zhat-sigma",
    request_model=ZhatSigmaRequest,
    summary="The kernel shifts of σ between two presentations of the same fragment",
)
def zhat_sigma(body: ZhatSigmaRequest) -> ZhatSigmaResponse:
    sigma = build_sigma(body.h.to_core(), body.g.to_core(), body.bound)
    return ZhatSigmaResponse(
        partners={h: g for h, g, _ in sigma.shifts},
        shifts={h: ZhatModel.from_core(nu) for h, _, nu in sigma.shifts},
        bound=sigma.bound,
    )
