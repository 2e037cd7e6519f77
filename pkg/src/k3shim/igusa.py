"""The E7+E8 normal form, the Clebsch-Igusa dictionary and the N=6 refibration.

A surface Y^2 = X^3 + (a t^4 + a' t^3) X + (b'' t^7 + b t^6 + b' t^5) has a
III* fiber at t=0 and a II* fiber at t=infinity.  Its coefficients are
exchanged with Clebsch-Igusa invariants of a genus-2 curve by
:func:`kumar_forward` and :func:`kumar_inverse`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .ellsurf import (
    Section,
    SingularModel,
    SurfaceModel,
    fiber_configuration,
    height_gram,
    verify_section,
)
from .exactalg import Poly, field_sqrt, inverse, poly_discriminant
from .exactalg.errors import ComputationMismatch, K3ShimError
from .nslattice import determinant


class DegenerateCurve(K3ShimError):
    pass


class SingularQuartic(K3ShimError):
    pass


def _q(x):
    return Fraction(x) if isinstance(x, int) else x


@dataclass(frozen=True)
class E7E8Coefficients:
    a: Any
    ap: Any
    b: Any
    bp: Any
    bpp: Any

    def __post_init__(self):
        if self.ap == 0 or self.bpp == 0:
            raise TypeError("E7+E8 coefficients need a' != 0 and b'' != 0")

    def as_tuple(self):
        return (self.a, self.ap, self.b, self.bp, self.bpp)

    def map(self, f) -> "E7E8Coefficients":
        return E7E8Coefficients(*(f(x) for x in self.as_tuple()))


@dataclass(frozen=True)
class IgusaClebsch:
    I2: Any
    I4: Any
    I6: Any
    I10: Any

    def as_tuple(self):
        return (self.I2, self.I4, self.I6, self.I10)

    def normalized(self):
        """(I4/I2^2, I6/I2^3, I10/I2^5), or None when I2 = 0."""
        if self.I2 == 0:
            return None
        i2 = _q(self.I2)
        return (self.I4 * inverse(i2 ** 2), self.I6 * inverse(i2 ** 3), self.I10 * inverse(i2 ** 5))

    def weighted_equal(self, o: "IgusaClebsch") -> bool:
        """Equality in weighted projective space with weights (1, 2, 3, 5)."""
        a, b = self.as_tuple(), o.as_tuple()
        w = (1, 2, 3, 5)
        for i in range(4):
            for j in range(4):
                if a[i] ** w[j] * b[j] ** w[i] != b[i] ** w[j] * a[j] ** w[i]:
                    return False
        return True


def e7e8_to_surface(k: E7E8Coefficients) -> SurfaceModel:
    A = Poly((0, 0, 0, k.ap, k.a))
    B = Poly((0, 0, 0, 0, 0, k.bp, k.b, k.bpp))
    S = SurfaceModel.short(A, B)
    D = A * A * A * 4 + B * B * 27
    if D.is_zero():
        raise SingularModel("discriminant vanishes identically")
    return S


def normalize_aprime(k: E7E8Coefficients) -> E7E8Coefficients:
    """Rescale (t, X, Y) -> (-a't, a'^2 X, a'^3 Y) so that a' becomes -1."""
    ap = _q(k.ap)
    return E7E8Coefficients(k.a, -1, k.b, -k.bp * inverse(ap), -ap * k.bpp)


def kumar_forward(I: IgusaClebsch) -> E7E8Coefficients:
    if I.I10 == 0:
        raise DegenerateCurve("I10 = 0")
    I2, I4, I6, I10 = (_q(x) for x in I.as_tuple())
    return E7E8Coefficients(-I4 * Fraction(1, 12), -1, (I2 * I4 - 3 * I6) * Fraction(1, 108),
                            I2 * Fraction(1, 24), I10 * Fraction(1, 4))


def kumar_inverse(k: E7E8Coefficients) -> IgusaClebsch:
    a, ap, b, bp, bpp = (_q(x) for x in k.as_tuple())
    inv = inverse(ap)
    return IgusaClebsch(-24 * bp * inv, -12 * a, 96 * a * bp * inv - 36 * b, -4 * ap * bpp)


def weighted_ratio(k1: E7E8Coefficients, k2: E7E8Coefficients):
    """nu with normalize(k1) = nu-scaling of normalize(k2), or None.

    With a' fixed at -1 the remaining freedom scales (a, b, b', b'') by
    (nu^4, nu^6, nu^2, nu^10).
    """
    n1, n2 = normalize_aprime(k1), normalize_aprime(k2)
    if n2.bp == 0 or n1.bp == 0:
        raise ValueError("weighted matching needs b' != 0")
    nu2 = _q(n1.bp) * inverse(_q(n2.bp))
    if (n1.a == n2.a * nu2 ** 2 and n1.b == n2.b * nu2 ** 3 and n1.bpp == n2.bpp * nu2 ** 5):
        return nu2
    return None


def quartic_jacobian(Q: Poly):
    """Long Weierstrass coefficients of the Jacobian of y^2 = Q(t).

    Uses the classical invariants I, J of the binary quartic; the result is
    Y^2 = X^3 - 27 I X - 27 J.  Cubics are read as quartics with a4 = 0.
    """
    if Q.degree() not in (3, 4):
        raise ValueError("quartic_jacobian needs degree 3 or 4")
    if poly_discriminant(Q) == 0:
        raise SingularQuartic("quartic has a repeated root")
    a0, a1, a2, a3, a4 = (Q[i] for i in range(5))
    I = 12 * a0 * a4 - 3 * a1 * a3 + a2 * a2
    J = 72 * a0 * a2 * a4 - 27 * a0 * a3 * a3 - 27 * a1 * a1 * a4 + 9 * a1 * a2 * a3 - 2 * a2 * a2 * a2
    return (0, 0, 0, -27 * I, -27 * J), (I, J)


def _quartic_invariants(Q: Poly):
    a0, a1, a2, a3, a4 = (Q[i] for i in range(5))
    I = a0 * a4 * 12 - a1 * a3 * 3 + a2 * a2
    J = a0 * a2 * a4 * 72 - a0 * a3 * a3 * 27 - a1 * a1 * a4 * 27 + a1 * a2 * a3 * 9 - a2 * a2 * a2 * 2
    return I, J


@dataclass
class RefibrationResult:
    quartic: Poly          # Q(t) with coefficients polynomials in u
    A: Poly                # Jacobian coefficients as polynomials in u
    B: Poly
    raw: E7E8Coefficients  # read off after u -> 1/u
    coefficients: E7E8Coefficients
    nu_squared: Any
    expected: E7E8Coefficients


def n6_refibration_target(b) -> E7E8Coefficients:
    b = _q(b)
    return E7E8Coefficients(-3 * b, 1, -2 * b * b, -(b + 1), -b * b * b)


def refiber_n6(b) -> RefibrationResult:
    """Move the N=6 surface to its E7+E8 fibration by u = X/(t^4 - t^3) + b/t.

    Substitutes X = (t^3 - t^2)(t u - b) into the N=6 family, divides by
    (t^4 - t^3)^2 to get Y1^2 = Q(t), takes the Jacobian of the quartic and
    brings it to the normal form; the result is checked against
    (-3b, 1, -2b^2, -(b+1), -b^3) up to the admissible rescaling.
    """
    if b == 0:
        raise ValueError("b must be nonzero")
    b = _q(b)
    one = b * 0 + 1
    zero = b * 0

    def k(x):  # constant t-polynomial whose coefficient is a u-polynomial
        return Poly((x if isinstance(x, Poly) else Poly((x,)),))

    u = Poly((zero, one))
    T = Poly((Poly(()), Poly((one,))))
    X = (T ** 3 - T ** 2) * (T * k(u) - k(b))
    rhs = X ** 3 + T * X ** 2 + (T ** 4 - T ** 3) * X * k(2 * b) + T ** 5 * (T - k(one)) ** 2 * k(b * b)
    den = (T ** 4 - T ** 3) ** 2
    Q = rhs.exact_div(den)
    if Q.degree() != 4:
        raise ComputationMismatch(f"expected a quartic in t, got degree {Q.degree()}")
    I, J = _quartic_invariants(Q)
    A, B = I * (-27), J * (-27)
    if A.degree() > 8 or B.degree() > 12:
        raise ComputationMismatch("Jacobian is not a K3 model")
    # the E7 fiber sits at u = infinity: u -> 1/u with weights 4, 6
    Ai = Poly(tuple(A[8 - i] for i in range(9)))
    Bi = Poly(tuple(B[12 - i] for i in range(13)))
    if any(Ai[i] != 0 for i in (0, 1, 2)) or Ai.degree() > 4 or any(Bi[i] != 0 for i in range(5)) or Bi.degree() > 7:
        raise ComputationMismatch("Jacobian is not in E7+E8 shape after u -> 1/u")
    raw = E7E8Coefficients(Ai[4], Ai[3], Bi[6], Bi[5], Bi[7])
    target = n6_refibration_target(b)
    nu2 = weighted_ratio(raw, target)
    if nu2 is None or field_sqrt(nu2) is None:
        raise ComputationMismatch(f"refibration gave {raw.as_tuple()}, not equivalent to the expected form")
    return RefibrationResult(Q, A, B, raw, target, nu2, target)


def n6_e7e8_sections(r):
    """The two height-5/2 generators of the E7+E8 model with b = r^2."""
    r = _q(r)
    k = n6_refibration_target(r * r)
    S = e7e8_to_surface(k)
    out = []
    for s in (r, -r):
        X = Poly((0, 0, s ** 2 + 1, 2 * (s ** 4 + s ** 3), s ** 6))
        Y = Poly((0, 0, 0, s ** 3 + 1, 3 * (s ** 5 + s ** 4 + s ** 3), 3 * (s ** 7 + s ** 6), s ** 9))
        out.append(Section(X, Y, S))
    return S, out


def n6_e7e8_mw_report(r):
    S, secs = n6_e7e8_sections(r)
    cfg = fiber_configuration(S)
    heights = [verify_section(S, P, cfg).height for P in secs]
    gram = height_gram(S, secs, cfg)
    return {"surface": S, "config": cfg, "heights": heights, "gram": gram, "det": determinant(gram)}


def igusa_for_n6(b):
    """Clebsch-Igusa invariants of the N=6 point with coordinate b, plus the printed variant."""
    k = normalize_aprime(n6_refibration_target(b))
    I = kumar_inverse(k)
    b = _q(b)
    printed = IgusaClebsch(24 * b + 1, 36 * b, 72 * b * (5 * b + 4), 4 * b ** 3)
    return I, printed


__all__ = [
    "DegenerateCurve", "E7E8Coefficients", "IgusaClebsch", "RefibrationResult", "SingularQuartic",
    "e7e8_to_surface", "igusa_for_n6", "kumar_forward", "kumar_inverse", "n6_e7e8_mw_report",
    "n6_e7e8_sections", "n6_refibration_target", "normalize_aprime", "quartic_jacobian",
    "refiber_n6", "weighted_ratio",
]

