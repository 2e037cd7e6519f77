"""Rational function fields K(t) and simple algebraic number fields Q[x]/(g)."""
from __future__ import annotations

from fractions import Fraction

from .poly import Poly, field_sqrt, inverse, is_square_poly, poly_gcd, poly_xgcd
from .scalars import Mod


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly((x,))


def _depth(x) -> int:
    """Nesting level: 0 for scalars, 1 for K(t) or K[t], 2 for K(p)(t), and so on."""
    if isinstance(x, RatFunc):
        return _depth(x.num)
    if isinstance(x, Poly):
        for c in x.c:
            if c != 0:
                return 1 + _depth(c)
        return 1
    return 0


class RatFunc:
    """Element n/d of K(t) with d monic and gcd(n, d) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        num = _as_poly(num)
        den = Poly((1,)) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly((1,))
            elif den.degree() > 0:
                g = poly_gcd(num, den)
                if g.degree() > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lc = den.lc
            if lc != 1:
                inv = inverse(lc)
                num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def gen(cls, one=1) -> "RatFunc":
        return cls(Poly((0 * one, one)), _reduced=True)

    def _coerce(self, o):
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, Poly):
            if _depth(o) > _depth(self):
                # a polynomial over a field containing self: self acts as a scalar
                return NotImplemented
            return RatFunc(o, _reduced=True)
        return RatFunc(Poly((o,)), _reduced=True)

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, o):
        o = self._coerce(o)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, o):
        o = self._coerce(o)
        return o if o is NotImplemented else o + (-self)

    def __mul__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, o):
        o = self._coerce(o)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, o):
        o = self._coerce(o)
        return o if o is NotImplemented else o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def __eq__(self, o):
        if isinstance(o, (RatFunc, Poly, int, Fraction, Mod)):
            o = self._coerce(o)
            if o is NotImplemented:
                return o
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("pole of rational function")
        return self.num(x) * inverse(d)

    def is_poly(self) -> bool:
        return self.den.degree() == 0

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ValueError("not a polynomial")
        return self.num

    def degree(self) -> int:
        """deg num - deg den (minus the order of vanishing at infinity)."""
        return self.num.degree() - self.den.degree()

    def derivative(self) -> "RatFunc":
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den ** 2)

    def sqrt(self) -> "RatFunc | None":
        """Square root in K(t), or None."""
        if self.num.is_zero():
            return self
        # make the denominator a square by multiplying through
        n = is_square_poly(self.num * self.den)
        if n is None:
            return None
        return RatFunc(n, self.den)

    def map_coeffs(self, f) -> "RatFunc":
        return RatFunc(self.num.map_coeffs(f), self.den.map_coeffs(f))

    def __repr__(self):
        if self.is_poly():
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num})/({self.den}))"

    def format(self, var: str = "t") -> str:
        from .poly import format_poly

        if self.is_poly():
            return format_poly(self.num, var)
        return f"({format_poly(self.num, var)})/({format_poly(self.den, var)})"

    def __str__(self):
        return self.format()


class NumberField:
    """Q[x]/(g) for an irreducible monic-normalized g over Q."""

    def __init__(self, modulus: Poly, name: str = "w"):
        modulus = Poly(modulus).map_coeffs(Fraction).monic()
        if modulus.degree() < 1:
            raise ValueError("number field modulus must have degree >= 1")
        self.modulus = modulus
        self.name = name

    @property
    def degree(self) -> int:
        return self.modulus.degree()

    def __call__(self, value) -> "NFElem":
        if isinstance(value, NFElem):
            return value
        if isinstance(value, Poly):
            return NFElem(self, value % self.modulus)
        return NFElem(self, Poly((Fraction(value),)))

    def gen(self) -> "NFElem":
        return self(Poly((0, 1)))

    def __eq__(self, o):
        return isinstance(o, NumberField) and o.modulus == self.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"NumberField({self.modulus})"


class NFElem:
    __slots__ = ("field", "poly")

    def __init__(self, field: NumberField, poly: Poly):
        self.field = field
        self.poly = poly

    def _coerce(self, o):
        if isinstance(o, NFElem):
            if o.field != self.field:
                raise ValueError("elements of different number fields")
            return o.poly
        if isinstance(o, (int, Fraction)):
            return Poly((Fraction(o),))
        return None

    def _wrap(self, p: Poly) -> "NFElem":
        return NFElem(self.field, p % self.field.modulus)

    def __add__(self, o):
        p = self._coerce(o)
        return NotImplemented if p is None else NFElem(self.field, self.poly + p)

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.field, -self.poly)

    def __sub__(self, o):
        p = self._coerce(o)
        return NotImplemented if p is None else NFElem(self.field, self.poly - p)

    def __rsub__(self, o):
        p = self._coerce(o)
        return NotImplemented if p is None else NFElem(self.field, p - self.poly)

    def __mul__(self, o):
        p = self._coerce(o)
        return NotImplemented if p is None else self._wrap(self.poly * p)

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of 0 in a number field")
        d, u, _ = poly_xgcd(self.poly, self.field.modulus)
        if d.degree() != 0:
            raise ZeroDivisionError("modulus is reducible; element is a zero divisor")
        return self._wrap(u)

    def __truediv__(self, o):
        p = self._coerce(o)
        if p is None:
            return NotImplemented
        return self * NFElem(self.field, p).inverse()

    def __rtruediv__(self, o):
        p = self._coerce(o)
        if p is None:
            return NotImplemented
        return NFElem(self.field, p) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, o):
        p = self._coerce(o)
        if p is None:
            return False
        return self.poly == p

    def __hash__(self):
        return hash(self.poly)

    def __bool__(self):
        return not self.poly.is_zero()

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    def sqrt(self) -> "NFElem | None":
        """Square root, searched inside the field (quadratic fields and rationals)."""
        if self.poly.is_zero():
            return self
        if self.is_rational():
            q = self.poly[0]
            r = field_sqrt(q)
            if r is not None:
                return self.field(r)
            if self.field.degree == 2:
                # q = d * w^2 style: try q / disc being a square
                m = self.field.modulus
                disc = m[1] ** 2 - 4 * m[0]
                s = field_sqrt(Fraction(q) / disc)
                if s is not None:
                    # sqrt(disc) = 2w + m1
                    return (2 * self.field.gen() + m[1]) * s
            return None
        if self.field.degree == 2:
            # (u + v w)^2 = a + b w with w^2 = -m1 w - m0; solve via norms.
            m = self.field.modulus
            disc = m[1] ** 2 - 4 * m[0]
            # write element as x + y*sqrt(disc)
            a0, a1 = self.poly[0], self.poly[1]
            x = a0 - a1 * m[1] / 2
            y = a1 / 2
            # (u + v s)^2 = u^2 + v^2 disc + 2uv s
            nrm = x * x - y * y * disc
            rn = field_sqrt(nrm)
            if rn is None:
                return None
            for sgn in (1, -1):
                u2 = (x + sgn * rn) / 2
                u = field_sqrt(u2)
                if u is not None and u != 0:
                    v = y / (2 * u)
                    s = 2 * self.field.gen() + m[1]
                    cand = self.field(u) + s * v
                    if cand * cand == self:
                        return cand
                elif u2 == 0 or u is None:
                    v2 = (x - sgn * rn) / (2 * disc) if disc else None
                    v = field_sqrt(v2) if v2 is not None else None
                    if v is not None:
                        s = 2 * self.field.gen() + m[1]
                        cand = s * v
                        if cand * cand == self:
                            return cand
            return None
        raise NotImplementedError("square roots only in quadratic fields")

    def __repr__(self):
        return f"[{self.poly}]".replace("t", self.field.name)

    __str__ = __repr__
