"""Chord-and-tangent group law on a long Weierstrass curve over an exact field."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .poly import inverse


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: Any = 0
    a2: Any = 0
    a3: Any = 0
    a4: Any = 0
    a6: Any = 0

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def contains(self, x, y) -> bool:
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6

    def point(self, x, y) -> "EllipticCurvePoint":
        if not self.contains(x, y):
            raise ValueError(f"({x}, {y}) is not on the curve")
        return EllipticCurvePoint(self, x, y)

    def infinity(self) -> "EllipticCurvePoint":
        return EllipticCurvePoint(self, None, None)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6


@dataclass(frozen=True, eq=False)
class EllipticCurvePoint:
    curve: WeierstrassCurve
    x: Any
    y: Any

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, o):
        if not isinstance(o, EllipticCurvePoint):
            return NotImplemented
        if self.is_infinity or o.is_infinity:
            return self.is_infinity and o.is_infinity
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y)) if not self.is_infinity else 0

    def __neg__(self):
        return ec_negate(self)

    def __add__(self, o):
        return ec_add(self, o)

    def __sub__(self, o):
        return ec_add(self, ec_negate(o))

    def __rmul__(self, n: int):
        return ec_multiple(self, n)

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


def ec_negate(P: EllipticCurvePoint) -> EllipticCurvePoint:
    if P.is_infinity:
        return P
    a1, _, a3, _, _ = P.curve.ainvs
    return EllipticCurvePoint(P.curve, P.x, -P.y - a1 * P.x - a3)


def ec_add(P: EllipticCurvePoint, Q: EllipticCurvePoint) -> EllipticCurvePoint:
    if P.curve != Q.curve:
        raise ValueError("points on different curves")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = P.curve.ainvs
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return P.curve.infinity()
        num = 3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1
        den = 2 * y1 + a1 * x1 + a3
    else:
        num = y2 - y1
        den = x2 - x1
    lam = num * inverse(den)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return EllipticCurvePoint(P.curve, x3, y3)


def ec_multiple(P: EllipticCurvePoint, n: int) -> EllipticCurvePoint:
    if n < 0:
        return ec_multiple(ec_negate(P), -n)
    result = P.curve.infinity()
    base = P
    while n:
        if n & 1:
            result = ec_add(result, base)
        n >>= 1
        if n:
            base = ec_add(base, base)
    return result
