"""N = 57: the A5 + A11 family with a section of height 19/12, its charts and the curve 57a1."""
from __future__ import annotations

from fractions import Fraction

from ..ellsurf import INF, SurfaceModel, specialize
from ..exactalg import (
    EllipticCurvePoint,
    MPoly,
    Poly,
    RatFunc,
    VerificationFailed,
    WeierstrassCurve,
    ec_multiple,
)
from ..nslattice import RootLatticeSum
from .common import Chart, FamilyDescriptor, chart_model

R57 = RootLatticeSum.parse("A5+A11")
CURVE = WeierstrassCurve(0, -1, 1, -2, 2)   # s^2 = p(r) with s = 2y + 1
GENERATOR = (Fraction(2), Fraction(1))
TABLE = {1: (Fraction(2), 7), 2: (Fraction(1), 4), 3: (Fraction(-1), 16),
         4: (Fraction(0), 28), 5: (Fraction(5, 4), 43), 8: (Fraction(13, 9), 163)}


def p_of(r):
    return 4 * (r - 1) * (r * r - 2) + 1


def coefficients(r, t):
    """Y^2 = X^3 + a X^2 + 8 (r-1)^4 (r+1)^5 b t^2 X + 16 (r-1)^8 (r+1)^10 c t^4."""
    p = p_of(r)
    m = r * r - 2 * r
    d = (r * r - 1) ** 2 * (9 * t + (2 * r - 1) * p)
    c = 9 * t ** 2 - (2 * r - 1) * (8 * r * r + 4 * r - 22) * t + (2 * r - 1) ** 2 * p
    b = (t - m) * c + d
    a = (t - m) ** 2 * c + 2 * (t - m) * d + (r * r - 1) ** 4 * ((4 * r + 4) * t + p)
    u = (r - 1) ** 4 * (r + 1) ** 5
    return a, 8 * u * b * t ** 2, 16 * u * u * c * t ** 4


def section_x(r, t):
    """The generic Mordell-Weil generator (height 19/12)."""
    q = r * r - r + 1
    return (-4 * (r - 1) ** 4 * (r + 1) ** 5 * (2 * r - 1) * t ** 2 * (q ** 0 / q ** 2)
            + 4 * (r - 2) * (r + 1) ** 4 * t ** 3 * (q ** 0 / q))


CHART_R1 = Chart("r=1", param=lambda s: 1 + s, t_expr=lambda s, tp: tp * s - 1,
                 scale=lambda s: -8 * s ** 3,
                 domain="r = 1 + s, (t, X) -> (s t - 1, -8 s^3 X); s -> 0 merges everything into D18")
CHART_RINF = Chart("r=inf", param=lambda s: s ** -1, t_expr=lambda s, tp: tp * s ** -3,
                   scale=lambda s: s ** -12,
                   domain="r = 1/s, (t, X) -> (t/s^3, X/s^12); s -> 0 gives D6 + A11 with 2-torsion")
CHART_RM1 = Chart("r=-1", param=lambda s: s - 1, t_expr=lambda s, tp: tp * s + 3,
                  scale=lambda s: s ** 4,
                  domain="r = -1 + s, (t, X) -> (3 + s t, s^4 X); s -> 0 gives an I18 fiber at infinity")
CHARTS = {"r=1": CHART_R1, "r=inf": CHART_RINF, "r=-1": CHART_RM1}


def chart_surface(name: str) -> SurfaceModel:
    chart = CHARTS[name]
    return specialize(chart_model(coefficients, chart), chart.at)


def chart_section_x(name: str) -> Poly | None:
    """Limit of the generic section in the chart coordinates, or None if it has no limit."""
    chart = CHARTS[name]
    s = RatFunc.gen(Fraction(1))
    tp = Poly((Fraction(0), s ** 0))
    X = Poly(section_x(chart.param(s), chart.t_expr(s, tp))) * (s ** 0 / chart.scale(s))
    try:
        return Poly(tuple(c(chart.at) if isinstance(c, RatFunc) else c for c in X.c))
    except ZeroDivisionError:
        return None


def shioda_hall_d18_surface() -> SurfaceModel:
    """The Shioda-Hall surface with an I14* (D18) fiber at infinity, the r = 1 limit."""
    t = Poly.x(Fraction(1))
    return SurfaceModel.extended(t ** 3 + 8 * t, -(32 * t ** 2 + 128), 256 * t)


def d6_a11_surface() -> SurfaceModel:
    """The r = infinity limit: I2* (D6) at t = 0, I12 at infinity, 2-torsion (-4t, 0)."""
    t = Poly.x(Fraction(1))
    return SurfaceModel.extended(9 * t ** 4 - 16 * t ** 3 + 4 * t, 72 * t ** 5 - 128 * t ** 4,
                                 144 * t ** 6 - 256 * t ** 5)


def extra_section_x(r) -> tuple:
    """(X, splitting polynomial or None) of the extra section at a CM value of r."""
    t = Poly.x(Fraction(1))
    r = Fraction(r) if r != INF else r
    if r == 0:
        return -4 * t, None
    if r in (Fraction(5, 4), Fraction(1, 2)):
        return Poly(), None
    if r == Fraction(13, 9):
        return -28 * 11 ** 3 * (t ** 2 * Fraction(1, 3 ** 6) + t * Fraction(415454, 3 ** 18)), None
    if r == 2:
        return -972 * t, None
    if r == Fraction(17, 16):
        return (-Fraction(11 ** 3 * 3 ** 2, 2 ** 21 * 91 ** 2) * t ** 2
                * (7840 * t ** 2 - 2037 * t + 3267)), None
    if r == Fraction(-7, 4):
        q = (419430400 * t ** 5 + 2846883840 * t ** 4 + 17148174336 * t ** 3
             + 78784560576 * t ** 2 + 175272616341 * t - 12882888)
        den = (81920 * t ** 3 + 9216 * t ** 2 + 23868 * t + 39339) ** 2
        # the right-hand side is -11 times a square: Y lives over Q(sqrt(-11))
        return RatFunc(Fraction(3 ** 5 * 11 ** 4, 2 ** 12) * t ** 2 * q, den), Poly((11, 0, 1))
    raise KeyError(f"no extra section recorded at r = {r}")


def involution(point):
    """w57 on the curve s^2 = p(r): (x, y) -> (x, -1 - y), i.e. P -> -P."""
    if point is None:
        return None
    x, y = point
    return (Fraction(x), -1 - Fraction(y))


def build() -> FamilyDescriptor:
    return FamilyDescriptor(
        N=57,
        parameters=("r",),
        coefficients=coefficients,
        expected_R=R57,
        expected_places={0: "I6", INF: "I12"},
        generic_sections=lambda r: [section_x(r, Poly((r * 0, r ** 0)))],
        involutions={"w57": involution},
        charts=dict(CHARTS),
        note="A5 at t = 0, A11 at infinity; X(57)/w57 is the curve 57a1 via s^2 = p(r)",
    )


def curve_identity_holds() -> bool:
    """(2y + 1)^2 = p(x) modulo y^2 + y = x^3 - x^2 - 2x + 2, as polynomials."""
    x, y = MPoly.var(0, 2), MPoly.var(1, 2)
    lhs = (2 * y + 1) ** 2
    rel = y * y + y - (x ** 3 - x * x - 2 * x + 2)
    return lhs - p_of(x) - 4 * rel == MPoly({}, 2)


def n57_rational_points():
    """[(n, x(nP), -D)] for the six listed multiples of P = (2, 1)."""
    P = EllipticCurvePoint(CURVE, *GENERATOR)
    out = []
    for n, (r, d) in TABLE.items():
        Q = ec_multiple(P, n)
        if Q.is_infinity or Q.x != r:
            raise VerificationFailed(f"x({n}P)", r, None if Q.is_infinity else Q.x)
        if (2 * Q.y + 1) ** 2 != p_of(Q.x):
            raise VerificationFailed(f"(2y+1)^2 = p(x) at {n}P", p_of(Q.x), (2 * Q.y + 1) ** 2)
        out.append((n, Q.x, d))
    return out
