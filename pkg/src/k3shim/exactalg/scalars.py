"""Scalar rings: rationals, residues mod p, p-adic residues with precision.

Rationals are plain :class:`fractions.Fraction`.  Residues mod a prime are
:class:`Mod`; truncated p-adic integers are :class:`Padic`.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import InvalidPrime, NotRecognized, PrecisionLost


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre_symbol(a: int, p: int) -> int:
    """Quadratic residue symbol (a/p) for an odd prime p."""
    if p <= 2 or not is_prime(p):
        raise InvalidPrime(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a mod the odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def rational_sqrt(q) -> Fraction | None:
    """Nonnegative rational square root of q, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def squarefree_int(n: int) -> int:
    """Squarefree part of a nonzero integer (sign kept), by trial division."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    q = 2
    while q * q <= n:
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e % 2:
            out *= q
        q += 1
    return sign * out * n


class Mod:
    """Element of the prime field GF(p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError("mixing residues of different primes")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else Mod(self.v - o, self.p)

    def __rsub__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else Mod(o - self.v, self.p)

    def __mul__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def inverse(self) -> "Mod":
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 mod p")
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by 0 mod p")
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else Mod(o, self.p) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Mod(pow(self.v, n, self.p), self.p)

    def __eq__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"

    def sqrt(self) -> "Mod | None":
        r = sqrt_mod(self.v, self.p)
        return None if r is None else Mod(r, self.p)


class Padic:
    """Truncated p-adic number u * p^0 known modulo p^k.

    ``value`` is a residue in [0, p^k).  Arithmetic keeps the smallest
    precision of its operands; division by an element of positive valuation
    lowers the precision by that valuation.
    """

    __slots__ = ("p", "k", "value")

    def __init__(self, value: int, p: int, k: int):
        if k < 0:
            raise PrecisionLost("negative precision")
        self.p, self.k = p, k
        self.value = value % (p ** k) if k else 0

    @classmethod
    def from_rational(cls, q, p: int, k: int) -> "Padic":
        q = Fraction(q)
        if q.denominator % p == 0:
            raise ValueError("denominator divisible by p")
        m = p ** k
        return cls(q.numerator * pow(q.denominator, -1, m), p, k)

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    def valuation(self) -> int:
        """p-adic valuation, capped at the precision k."""
        v, x = 0, self.value
        if x == 0:
            return self.k
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def _other(self, o):
        if isinstance(o, Padic):
            if o.p != self.p:
                raise ValueError("mixing different primes")
            return o.value, o.k
        if isinstance(o, int):
            return o, self.k
        if isinstance(o, Fraction):
            return Padic.from_rational(o, self.p, self.k).value, self.k
        return None

    def __add__(self, o):
        t = self._other(o)
        if t is None:
            return NotImplemented
        k = min(self.k, t[1])
        return Padic(self.value + t[0], self.p, k)

    __radd__ = __add__

    def __sub__(self, o):
        t = self._other(o)
        if t is None:
            return NotImplemented
        return Padic(self.value - t[0], self.p, min(self.k, t[1]))

    def __rsub__(self, o):
        t = self._other(o)
        if t is None:
            return NotImplemented
        return Padic(t[0] - self.value, self.p, min(self.k, t[1]))

    def __mul__(self, o):
        t = self._other(o)
        if t is None:
            return NotImplemented
        return Padic(self.value * t[0], self.p, min(self.k, t[1]))

    __rmul__ = __mul__

    def __neg__(self):
        return Padic(-self.value, self.p, self.k)

    def __truediv__(self, o):
        t = self._other(o)
        if t is None:
            return NotImplemented
        other = Padic(t[0], self.p, min(self.k, t[1]))
        v = other.valuation()
        if v >= other.k:
            raise ZeroDivisionError("division by a p-adic zero at this precision")
        k = min(self.k, other.k) - v
        if self.valuation() < v:
            raise ValueError("quotient is not p-integral")
        m = self.p ** k
        unit = (other.value // self.p ** v) % m
        num = (self.value // self.p ** v) % m if v else self.value % m
        return Padic(num * pow(unit, -1, m), self.p, k)

    def __pow__(self, n: int):
        if n < 0:
            return Padic(1, self.p, self.k) / self ** (-n)
        return Padic(pow(self.value, n, self.modulus), self.p, self.k)

    def __eq__(self, o):
        t = self._other(o)
        if t is None:
            return False
        k = min(self.k, t[1])
        return (self.value - t[0]) % (self.p ** k) == 0

    def __hash__(self):
        return hash((self.p, self.k, self.value))

    def reduce(self, k: int) -> "Padic":
        if k > self.k:
            raise PrecisionLost(f"only {self.k} digits known")
        return Padic(self.value, self.p, k)

    def __repr__(self):
        return f"{self.value} + O({self.p}^{self.k})"


def rational_reconstruct(x: Padic) -> Fraction:
    """The unique a/b with |a|, b <= sqrt(p^k/2), p not dividing b, a/b = x.

    Half-extended Euclid on (p^k, x).  Raises NotRecognized when no fraction
    within the bound exists.
    """
    m = x.modulus
    bound = isqrt(m // 2)
    r0, r1 = m, x.value % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(s1, m) != 1:
        raise NotRecognized(f"{x} has no small rational preimage")
    num, den = (r1, s1) if s1 > 0 else (-r1, -s1)
    if (num - den * x.value) % m:
        raise NotRecognized("reconstruction failed verification")
    return Fraction(num, den)
