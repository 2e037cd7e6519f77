"""Sparse multivariate polynomials (used for lifting systems and chart limits)."""
from __future__ import annotations

from fractions import Fraction


class MPoly:
    """Polynomial in ``nvars`` variables stored as {exponent tuple: coefficient}."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: dict | None, nvars: int):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def var(cls, i: int, nvars: int, one=1) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): one}, nvars)

    @classmethod
    def const(cls, c, nvars: int) -> "MPoly":
        return cls({(0,) * nvars: c}, nvars)

    def _lift(self, o) -> "MPoly":
        if isinstance(o, MPoly):
            return o
        return MPoly.const(o, self.nvars)

    def __add__(self, o):
        o = self._lift(o)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, MPoly):
            if o == 0:
                return MPoly({}, self.nvars)
            return MPoly({e: c * o for e, c in self.terms.items()}, self.nvars)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = MPoly.const(1, self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, o):
        o = self._lift(o)
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def exact_div(self, o):
        if isinstance(o, MPoly):
            if len(o.terms) != 1 or next(iter(o.terms)) != (0,) * self.nvars:
                raise ArithmeticError("exact division only by constants")
            o = next(iter(o.terms.values()))
        inv = Fraction(1, o) if isinstance(o, int) else 1 / o
        return self * inv

    def __call__(self, values):
        """Evaluate at a point (list of ring elements)."""
        total = 0
        powers = [dict() for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    pw = powers[i].get(k)
                    if pw is None:
                        pw = values[i] ** k
                        powers[i][k] = pw
                    term = term * pw
            total = total + term
        return total

    def diff(self, i: int) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MPoly(out, self.nvars)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def map_coeffs(self, f) -> "MPoly":
        return MPoly({e: f(c) for e, c in self.terms.items()}, self.nvars)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)
