"""N = 14: the A3 + A6 + E8 family in r and in s = r^2/(2r+1)."""
from __future__ import annotations

from fractions import Fraction

from ..ellsurf import INF, SurfaceModel
from ..exactalg import NumberField, Poly
from ..nslattice import RootLatticeSum
from .common import FamilyDescriptor, extended_model

R14 = RootLatticeSum.parse("A3+A6+E8")
D56_POLY = Poly((8, 3, 11))  # 11 s^2 + 3 s + 8


def coefficients(r, t):
    """Y^2 = X^3 + a X^2 + b X + c with the A3 fiber at t = 2r + 1."""
    a = (r + 1) ** 2 * t ** 2 + (3 * r ** 4 + 4 * r ** 3 + 2 * r ** 2) * t + r ** 6
    b = 2 * (r + 1) ** 2 * ((2 * r * r + 2 * r + 1) * t + r ** 4) * (t - (2 * r + 1)) * t ** 2
    c = (r + 1) ** 4 * (t - (2 * r + 1)) ** 2 * (t + r * r) * t ** 4
    return a, b, c


def s_coefficients(s, t, lam=1):
    """The same family in s with the A3 fiber at t = 1 and twist lam."""
    a = lam * ((s + 1) * t ** 2 + (3 * s * s + 2 * s) * t + s ** 3)
    b = lam ** 2 * (s + 1) * ((4 * s + 2) * t + 2 * s * s) * (t ** 3 - t ** 2)
    c = lam ** 3 * (s + 1) ** 2 * (t + s) * (t ** 3 - t ** 2) ** 2
    return a, b, c


def s_of_r(r):
    if r == INF:
        return INF
    r = Fraction(r)
    if 2 * r + 1 == 0:
        return INF
    return r * r / (2 * r + 1)


def involution(r):
    """w2 = w7 on X(14)/w14: r -> -r/(2r+1)."""
    if r == INF:
        return Fraction(-1, 2)
    r = Fraction(r)
    if 2 * r + 1 == 0:
        return INF
    return -r / (2 * r + 1)


def coordinate_1(s):
    """The earlier coordinate -s/(s+1) (CM points -8, -11 at 0, -1)."""
    if s == INF:
        return Fraction(-1)
    s = Fraction(s)
    if s + 1 == 0:
        return INF
    return -s / (s + 1)


def build() -> FamilyDescriptor:
    return FamilyDescriptor(
        N=14,
        parameters=("r", "s"),
        coefficients=coefficients,
        expected_R=R14,
        expected_places={0: "I7", INF: "II*"},
        involutions={"w2": involution},
        note="A3 at t = 2r+1, A6 at t = 0, E8 at infinity; s = r^2/(2r+1)",
    )


def d56_surface() -> SurfaceModel:
    """The s-model over Q(s0) with 11 s0^2 + 3 s0 + 8 = 0."""
    K = NumberField(D56_POLY, "s0")
    return extended_model(s_coefficients, K.gen())


def cm67_section_x():
    t = Poly.x(Fraction(1))
    return (Fraction(3 ** 4, 5 ** 2 * 22 ** 5) * t * (22 * t + 13)
            * (527076 * t ** 2 + 760364 * t + 275625))
