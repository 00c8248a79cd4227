"""The bundled instance set run by ``padicradius verify``.

Each instance records what is known about it in closed form, so the suite
can compare computed reports against hand-derived values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffmod import DiffModule, Domain, Triangulation
from .laurent import LaurentPoly

F = Fraction
T = LaurentPoly.monomial(1)
ONE = LaurentPoly.constant(1)
ZERO = LaurentPoly()


@dataclass(frozen=True)
class Instance:
    name: str
    module: DiffModule
    order: int
    probes: tuple[tuple[Fraction, Fraction], ...] = ()
    marks: tuple[Fraction, ...] = ()
    # probes at which the radius is known to leave the skeleton value
    expected_stubs: tuple[tuple[Fraction, Fraction], ...] = ()
    note: str = ""
    tail: int = 8

    @property
    def triangulation(self) -> Triangulation:
        return Triangulation(self.marks)


def _dm(p, rows, domain) -> DiffModule:
    return DiffModule(p, tuple(tuple(row) for row in rows), domain)


ANNULUS_2 = Domain.annulus(-2, 0)

EXP_ANNULUS = Instance(
    "exp-annulus",
    _dm(2, [[ONE]], ANNULUS_2),
    64,
    probes=((F(1), F(-1)), (F(3), F(-1)), (F(5), F(-1))),
    note="y' = y; constant piece -(N - s_2(N))/N, tends to -1",
)

SLOPE2_ANNULUS = Instance(
    "slope2-annulus",
    _dm(3, [[LaurentPoly.monomial(-2)]], Domain.annulus(-2, F(-1, 4))),
    81,
    probes=((F(3), F(-2)), (F(6), F(-2))),
    note="y' = t^-2 y; embedded piece 2s - 40/81",
)

TRIVIAL_ANNULUS = Instance(
    "trivial-annulus",
    _dm(2, [[ZERO]], ANNULUS_2),
    16,
    probes=((F(1), F(-1)),),
    note="G = 0; R_S = 1",
)

NILPOTENT_ANNULUS = Instance(
    "nilpotent-annulus",
    _dm(2, [[LaurentPoly.monomial(-1)]], ANNULUS_2),
    16,
    probes=((F(1), F(-2)),),
    note="y' = y/t, solution t; G_n = 0 for n >= 2",
)

EXP_DISC = Instance(
    "exp-disc",
    _dm(2, [[ONE]], Domain.disc(0)),
    64,
    probes=((F(1), F(-1)),),
    note="y' = y on the unit disc; constant -(N - s_2(N))/N",
)

TRIVIAL_DISC = Instance(
    "trivial-disc",
    _dm(2, [[ZERO]], Domain.disc(0)),
    16,
    probes=((F(1), F(-1)),),
    note="G = 0; R_S = 1",
)

GAUSS_DISC = Instance(
    "gauss-disc",
    _dm(2, [[T]], Domain.disc(2)),
    32,
    probes=((F(1), F(-1)), (F(2), F(-1))),
    expected_stubs=((F(1), F(-1)),),
    note=("y' = t y, solution exp(t^2/2); near t = 1 it is an Artin-Hasse factor "
          "times exp(-u^4/4 - ...), radius 2^(-3/4) instead of 2^(-1)"),
)

AIRY_DISC = Instance(
    "airy-disc",
    _dm(2, [[ZERO, ONE], [T, ZERO]], Domain.disc(3)),
    64,
    probes=((F(1), F(-1)),),
    marks=(F(-1),),
    note="y'' = t y; rank 2 with a slope -1/2 piece",
)

BUNDLED: tuple[Instance, ...] = (
    EXP_ANNULUS,
    SLOPE2_ANNULUS,
    TRIVIAL_ANNULUS,
    NILPOTENT_ANNULUS,
    EXP_DISC,
    TRIVIAL_DISC,
    GAUSS_DISC,
    AIRY_DISC,
)


def by_name(name: str) -> Instance:
    for inst in BUNDLED:
        if inst.name == name:
            return inst
    raise KeyError(f"no bundled instance named {name!r}")
