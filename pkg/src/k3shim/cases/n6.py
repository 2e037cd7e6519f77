"""N = 6: the A2 + D7 + E8 family, its charts at b = 0 and b = infinity, and the b = 81/64 solver."""
from __future__ import annotations

from fractions import Fraction

from ..ellsurf import INF, SurfaceModel
from ..exactalg import (
    ComputationMismatch,
    Poly,
    RatFunc,
    TruncatedSeries,
    poly_gcd,
    rational_roots,
    resultant,
    series_sqrt,
)
from ..nslattice import RootLatticeSum
from .common import Chart, FamilyDescriptor, chart_limit

R6 = RootLatticeSum.parse("A2+D7+E8")


def coefficients(b, t):
    """Y^2 = X^3 + t X^2 + 2 b t^3 (t-1) X + b^2 t^5 (t-1)^2."""
    return t, 2 * b * t ** 3 * (t - 1), b * b * t ** 5 * (t - 1) ** 2


def printed_discriminant(b, t):
    """The stated value 16 b^3 t^9 (t-1)^3 (27 b (t^2 - t) - 4); Tate's formula gives its negative."""
    return 16 * b ** 3 * t ** 9 * (t - 1) ** 3 * (27 * b * (t * t - t) - 4)


# b = beta^4 and (t, X) -> (t/beta^2, X/beta^2): the A2 fiber moves to t = beta^2
NEAR_ZERO = Chart(
    "near_zero",
    param=lambda s: s ** 4,
    t_expr=lambda s, tp: tp * (s ** -2),
    scale=lambda s: s ** -2,
    domain="b = beta^4 near 0; beta = 0 gives D10 + E8",
)
# b = 1/beta^3 and X -> X/beta^2
NEAR_INFINITY = Chart(
    "near_infinity",
    param=lambda s: s ** -3,
    t_expr=lambda s, tp: tp,
    scale=lambda s: s ** -2,
    domain="b = 1/beta^3 near infinity; beta = 0 gives A2 + E8 + E8",
)


def n6_chart(which: str, beta) -> SurfaceModel:
    """Chart surface at the given beta (beta = 0 allowed)."""
    chart = {"near_zero": NEAR_ZERO, "near_infinity": NEAR_INFINITY}.get(which)
    if chart is None:
        raise ValueError(f"unknown chart {which!r}; use near_zero or near_infinity")
    return chart_limit(coefficients, chart, Fraction(beta))


def printed_chart(which: str, beta) -> SurfaceModel:
    """The chart equations as displayed, for comparison with :func:`n6_chart`."""
    beta = Fraction(beta)
    t = Poly.x(Fraction(1))
    if which == "near_zero":
        return SurfaceModel.extended(t, 2 * t ** 3 * (t - beta ** 2), t ** 5 * (t - beta ** 2) ** 2)
    return SurfaceModel.extended(beta ** 2 * t, 2 * beta * t ** 3 * (t - 1), t ** 5 * (t - 1) ** 2)


def involution(r):
    """r -> -r on X(6)/w6; it fixes b = r^2."""
    if r == INF:
        return INF
    return -Fraction(r)


def build() -> FamilyDescriptor:
    return FamilyDescriptor(
        N=6,
        parameters=("b", "r", "beta"),
        coefficients=coefficients,
        expected_R=R6,
        expected_places={1: "I3", 0: "I3*", INF: "II*"},
        involutions={"w2": involution},
        charts={"near_zero": NEAR_ZERO, "near_infinity": NEAR_INFINITY},
        note="b = r^2; the A2, D7, E8 fibers sit at t = 1, 0, infinity",
    )


def coordinate_1(b):
    """The earlier rational coordinate 1 + 27b/16 (CM points -3, -4, -24 at infinity, 1, 0)."""
    if b == INF:
        return INF
    return 1 + Fraction(27, 16) * Fraction(b)


def _ring(b):
    """Helpers for polynomials in t whose coefficients are polynomials in t1 over Q(b)."""
    one = b ** 0

    def k(x):
        return Poly((x if isinstance(x, Poly) else Poly((x,)),))

    t1 = Poly((b * 0, one))
    T = Poly((Poly(()), Poly((one,))))
    return one, k, t1, T


def square_section_quartic(b):
    """The quartic in t (coefficients in Q(b)[t1]) whose squareness gives a height 19/12 section.

    Substitutes X = b (t^2 - t^3)(1 + t1 t) and divides by b^3 (t^4 - t^3)^2.
    """
    one, k, t1, T = _ring(b)
    X = (T ** 2 - T ** 3) * (k(one) + T * k(t1)) * k(b)
    a2, a4, a6 = coefficients(k(b), T)
    rhs = X ** 3 + a2 * X ** 2 + a4 * X + a6
    q = rhs.exact_div((T ** 4 - T ** 3) ** 2)
    return Poly(tuple(c * (one / b ** 3) for c in q.c))


def printed_square_quartic(b):
    one, k, t1, T = _ring(b)
    binv = one / b
    return (T ** 4 * k(-t1 ** 3) + T ** 3 * k(t1 ** 3 - t1 ** 2 * 3) + T ** 2 * k((t1 ** 2 - t1) * 3)
            + T * k(t1 * 3 - Poly((one,)) + t1 ** 2 * binv) + k(one))


def solve_square_section_n6():
    """Re-derive (b, t1) = (81/64, -9) and the square root 27t^2 - 18t - 1.

    Expands the square root of the quartic to order 4 at t = 0, sets the t^3
    and t^4 coefficients to zero, eliminates t1 by a resultant and strips the
    spurious factor at b = 0.
    """
    b = RatFunc.gen(Fraction(1))
    q = square_section_quartic(b)
    if q != printed_square_quartic(b):
        raise ComputationMismatch("substituted quartic differs from the displayed one")
    coeffs = list(q.c)
    coeffs[0] = coeffs[0][0]  # the constant 1, as a scalar of Q(b)
    root = series_sqrt(TruncatedSeries(coeffs, 5), 5)
    e3, e4 = root[3], root[4]
    res = resultant(e3, e4)
    res = res if isinstance(res, RatFunc) else RatFunc(Poly((res,)))
    num = res.num
    v = num.valuation() or 0
    core = Poly(num.c[v:])
    cand = [x for x in rational_roots(core) if x != 0]
    sols = []
    for b0 in cand:
        g = poly_gcd(e3.map_coeffs(lambda c: c(b0)), e4.map_coeffs(lambda c: c(b0)))
        for t10 in rational_roots(g) if g.degree() > 0 else []:
            sols.append((b0, t10))
    if sols != [(Fraction(81, 64), Fraction(-9))]:
        raise ComputationMismatch(f"square-section solutions {sols}, expected [(81/64, -9)]")
    b0, t10 = sols[0]
    qs = Poly(tuple(c(t10)(b0) if isinstance(c(t10), RatFunc) else c(t10) for c in q.c))
    sq = Poly((Fraction(-1), Fraction(-18), Fraction(27)))
    if qs != sq * sq:
        raise ComputationMismatch("specialized quartic is not (27t^2 - 18t - 1)^2")
    return b0, t10, sq


def cm19_section_x(b=Fraction(81, 64), t1=Fraction(-9)):
    t = Poly.x(Fraction(1))
    return (t ** 2 - t ** 3) * (1 + t1 * t) * b
