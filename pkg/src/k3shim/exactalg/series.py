"""Truncated power series about a finite point or infinity."""
from __future__ import annotations

from .errors import NoSquareRootAtPoint, PrecisionLost
from .poly import Poly, field_sqrt, inverse


class TruncatedSeries:
    """sum c_i u^i + O(u^order), where u = t - t0 (or 1/t at infinity)."""

    __slots__ = ("coeffs", "order", "point")

    def __init__(self, coeffs, order: int, point=0):
        cs = list(coeffs)[:order]
        cs += [0] * (order - len(cs))
        self.coeffs = tuple(cs)
        self.order = order
        self.point = point

    @classmethod
    def from_poly(cls, f: Poly, order: int, point=0) -> "TruncatedSeries":
        """Expansion of f at t0 = point, or at infinity with u = 1/t.

        At infinity the series is u^deg(f) f(1/u), i.e. the reversed polynomial.
        """
        if point == "inf":
            g = f.reverse()
        elif point == 0:
            g = f
        else:
            g = f.shift(point)
        return cls(g.c, order, point)

    def _check(self, o):
        if isinstance(o, TruncatedSeries):
            if o.point != self.point:
                raise ValueError("series at different points")
            return o
        return TruncatedSeries([o], self.order, self.point)

    def __add__(self, o):
        o = self._check(o)
        n = min(self.order, o.order)
        return TruncatedSeries([self.coeffs[i] + o.coeffs[i] for i in range(n)], n, self.point)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order, self.point)

    def __sub__(self, o):
        return self + (-self._check(o))

    def __mul__(self, o):
        o = self._check(o)
        n = min(self.order, o.order)
        out = [0] * n
        for i in range(n):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(n - i):
                out[i + j] = out[i + j] + a * o.coeffs[j]
        return TruncatedSeries(out, n, self.point)

    __rmul__ = __mul__

    def __getitem__(self, i: int):
        if i >= self.order:
            raise PrecisionLost(f"coefficient {i} beyond order {self.order}")
        return self.coeffs[i]

    def __eq__(self, o):
        if not isinstance(o, TruncatedSeries):
            return NotImplemented
        n = min(self.order, o.order)
        return self.point == o.point and all(self.coeffs[i] == o.coeffs[i] for i in range(n))

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise PrecisionLost(f"cannot raise order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[:order], order, self.point)

    def to_poly(self) -> Poly:
        return Poly(self.coeffs)

    def __repr__(self):
        terms = " + ".join(f"({c})*u^{i}" for i, c in enumerate(self.coeffs) if c != 0) or "0"
        return f"{terms} + O(u^{self.order})"


def series_sqrt(f: TruncatedSeries, order: int | None = None) -> TruncatedSeries:
    """g with g^2 = f + O(u^order); g(0) is the field square root of f(0).

    Works over any coefficient ring in which 2 g(0) is invertible, so the
    coefficients may themselves be symbolic (polynomials or rational
    functions in auxiliary parameters).
    """
    if order is None:
        order = f.order
    if order > f.order:
        raise PrecisionLost(f"series known only to order {f.order}")
    c0 = f.coeffs[0] if f.order else 0
    if c0 == 0:
        raise NoSquareRootAtPoint("constant term vanishes")
    g0 = field_sqrt(c0)
    if g0 is None:
        raise NoSquareRootAtPoint(f"constant term {c0} is not a square")
    inv = inverse(2 * g0)
    g = [g0]
    for k in range(1, order):
        acc = f.coeffs[k]
        for i in range(1, k):
            acc = acc - g[i] * g[k - i]
        g.append(acc * inv)
    return TruncatedSeries(g, order, f.point)
