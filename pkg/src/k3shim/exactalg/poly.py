"""Dense univariate polynomials over an exact coefficient ring.

Coefficients may be ``int``/``Fraction`` (treated as Q), :class:`Mod`,
number-field elements, rational functions, or even other polynomials
(for resultants over polynomial rings).  Anything supporting ``+ - *`` and,
where a field is needed, ``/`` works.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .scalars import Mod, rational_sqrt


def inverse(c):
    """Multiplicative inverse of a field element (ints are read in Q)."""
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


class Poly:
    """Polynomial with ascending coefficient tuple ``c``; zero is ``()``."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, Poly):
            coeffs = coeffs.c
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.c = tuple(cs)

    # construction helpers
    @classmethod
    def x(cls, one=1):
        return cls((0 * one, one))

    @classmethod
    def const(cls, a):
        return cls((a,))

    @classmethod
    def monomial(cls, n: int, a=1):
        return cls((0,) * n + (a,))

    @classmethod
    def from_roots(cls, roots):
        out = cls((1,))
        for r in roots:
            out = out * cls((-r, 1))
        return out

    # basic structure
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __getitem__(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __len__(self):
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def coefficients(self):
        return list(self.c)

    # arithmetic
    @staticmethod
    def _lift(o):
        return o if isinstance(o, Poly) else Poly((o,))

    def __add__(self, o):
        if not isinstance(o, Poly):
            if o == 0:
                return self
            o = Poly((o,))
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-v for v in self.c))

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) + (-self)

    def __mul__(self, o):
        if not isinstance(o, Poly):
            if o == 0:
                return Poly()
            return Poly(tuple(v * o for v in self.c))
        a, b = self.c, o.c
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u == 0:
                continue
            for j, v in enumerate(b):
                out[i + j] = out[i + j] + u * v
        return Poly(out)

    def __rmul__(self, o):
        if o == 0:
            return Poly()
        return Poly(tuple(o * v for v in self.c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, o):
        if isinstance(o, Poly):
            if len(o.c) != len(self.c):
                return False
            return all(a == b for a, b in zip(self.c, o.c))
        if isinstance(o, (int, Fraction, Mod)):
            return self.degree() <= 0 and self[0] == o
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __divmod__(self, g: "Poly"):
        g = self._lift(g)
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        dg = g.degree()
        lc = g.lc
        inv = None if lc == 1 else inverse(lc)
        r = list(self.c)
        if len(r) - 1 < dg:
            return Poly(), self
        q = [0] * (len(r) - dg)
        for i in range(len(r) - 1, dg - 1, -1):
            coef = r[i]
            if coef == 0:
                continue
            if inv is not None:
                coef = coef * inv
            q[i - dg] = coef
            for j, gv in enumerate(g.c):
                r[i - dg + j] = r[i - dg + j] - coef * gv
        return Poly(q), Poly(r[:dg])

    def __floordiv__(self, g):
        return divmod(self, g)[0]

    def __mod__(self, g):
        return divmod(self, g)[1]

    def exact_div(self, g) -> "Poly":
        q, r = divmod(self, g)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def __truediv__(self, o):
        if isinstance(o, Poly):
            if o.degree() == 0:
                return self * inverse(o.c[0])
            return self.exact_div(o)
        return self * inverse(o)

    # evaluation and calculus
    def __call__(self, x):
        acc = 0
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(i * v for i, v in enumerate(self.c) if i))

    def map_coeffs(self, f) -> "Poly":
        return Poly(tuple(f(v) for v in self.c))

    def monic(self) -> "Poly":
        if self.is_zero() or self.lc == 1:
            return self
        return self * inverse(self.lc)

    def shift(self, a) -> "Poly":
        """The polynomial f(x + a)."""
        return self(Poly((a, 1)))

    def scale_var(self, a) -> "Poly":
        """The polynomial f(a x)."""
        out, p = [], 1
        for v in self.c:
            out.append(v * p)
            p = p * a
        return Poly(out)

    def reverse(self, n: int | None = None) -> "Poly":
        """x^n f(1/x), with n defaulting to the degree."""
        if n is None:
            n = self.degree()
        if n < self.degree():
            raise ValueError("reversal degree below the polynomial degree")
        return Poly(tuple(reversed(self.c + (0,) * (n + 1 - len(self.c)))))

    def valuation(self) -> int | None:
        """Order of vanishing at 0 (None for the zero polynomial)."""
        for i, v in enumerate(self.c):
            if v != 0:
                return i
        return None

    def __repr__(self):
        return f"Poly({list(self.c)!r})"

    def __str__(self):
        return format_poly(self)


def _format_coeff(c, inner: str) -> str:
    if isinstance(c, Poly):
        return format_poly(c, inner)
    if type(c).__name__ == "RatFunc":
        return c.format(inner)
    return str(c)


def format_poly(f: Poly, var: str = "t", inner: str = "p") -> str:
    """Render f in ``var``; nested polynomial or rational-function coefficients use ``inner``."""
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree(), -1, -1):
        c = f.c[i]
        if c == 0:
            continue
        cs = _format_coeff(c, inner)
        if isinstance(c, Poly) or "+" in cs[1:] or "-" in cs[1:]:
            cs = f"({cs})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


def _is_function_field(f: Poly) -> bool:
    return any(type(c).__name__ == "RatFunc" for c in f.c)


def _clear_denominators(f: Poly) -> list:
    """Coefficients of a polynomial over Q(r), scaled into Z[r]."""
    from .fields import RatFunc

    cs = [c if isinstance(c, RatFunc) else RatFunc(Poly((c,))) for c in f.c]
    L = Poly((1,))
    for c in cs:
        if c.den.degree() > 0:
            L = L * c.den.exact_div(poly_gcd(L, c.den))
    out = [c.num * L.exact_div(c.den) for c in cs]
    den = 1
    for c in out:
        for x in c.c:
            den = lcm(den, Fraction(x).denominator)
    return [Poly(tuple(int(Fraction(x) * den) for x in c.c)) for c in out]


def _primitive(cs: list) -> list:
    """Divide a list of Z[r] polynomials by their content in Z[r]."""
    g = Poly()
    for c in cs:
        if not c.is_zero():
            g = c if g.is_zero() else poly_gcd(g, c)
            if g.degree() == 0:
                break
    if g.degree() > 0:
        gi = Poly(tuple(_integer_primitive(g)))
        cs = [Poly(tuple(int(x) for x in c.exact_div(gi).c)) for c in cs]
    k = 0
    for c in cs:
        for x in c.c:
            k = gcd(k, x)
    if k > 1:
        cs = [Poly(tuple(x // k for x in c.c)) for c in cs]
    return cs


def _strip(cs: list) -> list:
    while cs and cs[-1].is_zero():
        cs = cs[:-1]
    return cs


def _pseudo_remainder(a: list, b: list) -> list:
    lb = b[-1]
    while len(a) >= len(b) and a:
        la = a[-1]
        shift = len(a) - len(b)
        a = [x * lb for x in a]
        for i, y in enumerate(b):
            a[i + shift] = a[i + shift] - la * y
        a = _strip(a)
    return a


def _function_field_gcd(f: Poly, g: Poly) -> Poly:
    """gcd over K(r) by a primitive pseudo-remainder sequence in K[r][t]."""
    from .fields import RatFunc

    a = _primitive(_strip(_clear_denominators(f)))
    b = _primitive(_strip(_clear_denominators(g)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_remainder(a, b)
        a, b = b, (_primitive(r) if r else r)
    out = Poly(tuple(RatFunc(c) for c in a))
    return out.monic()


def _integer_primitive(f: Poly) -> list[int]:
    den = 1
    for c in f.c:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f.c]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _int_divides(d: list[int], f: list[int]) -> bool:
    """Whether d divides f in Z[x] (d primitive)."""
    f = list(f)
    n, ld = len(d) - 1, d[-1]
    while len(f) - 1 >= n:
        q, rem = divmod(f[-1], ld)
        if rem:
            return False
        shift = len(f) - 1 - n
        if q:
            for i, c in enumerate(d):
                f[i + shift] -= q * c
        f.pop()
        while f and f[-1] == 0:
            f.pop()
    return not f


def _heuristic_gcd(f: Poly, g: Poly) -> Poly | None:
    """gcd in Q[x] by evaluation at a large integer and xi-adic reconstruction.

    Returns None when the heuristic fails; callers fall back to Euclid.
    """
    a, b = _integer_primitive(f), _integer_primitive(g)
    bound = min(max(abs(c) for c in a), max(abs(c) for c in b))
    xi = 2 * bound + 29
    for _ in range(6):
        av = sum(c * xi ** i for i, c in enumerate(a))
        bv = sum(c * xi ** i for i, c in enumerate(b))
        h = gcd(av, bv)
        coeffs = []
        while h:
            c = h % xi
            if c > xi // 2:
                c -= xi
            coeffs.append(c)
            h = (h - c) // xi
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if coeffs:
            k = 0
            for c in coeffs:
                k = gcd(k, c)
            coeffs = [c // k for c in coeffs]
            if _int_divides(coeffs, a) and _int_divides(coeffs, b):
                return Poly(tuple(Fraction(c) for c in coeffs)).monic()
        xi = xi * 73794 // 27011
    return None


def _is_rational_poly(f: Poly) -> bool:
    return all(isinstance(c, (int, Fraction)) for c in f.c)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over a field."""
    a, b = Poly(f), Poly(g)
    if a.is_zero() or b.is_zero():
        return (b if a.is_zero() else a).monic() if not (a.is_zero() and b.is_zero()) else a
    if a.degree() > 0 and b.degree() > 0 and (_is_function_field(a) or _is_function_field(b)):
        return _function_field_gcd(a, b)
    if min(a.degree(), b.degree()) > 2 and _is_rational_poly(a) and _is_rational_poly(b):
        h = _heuristic_gcd(a, b)
        if h is not None:
            return h
    while not b.is_zero():
        a, b = b, a % b
        if not b.is_zero():
            b = b.monic()
    return a.monic()


def poly_xgcd(f: Poly, g: Poly):
    """(d, u, v) with u f + v g = d monic, over a field."""
    r0, r1 = Poly(f), Poly(g)
    s0, s1 = Poly((1,)), Poly()
    t0, t1 = Poly(), Poly((1,))
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = inverse(r0.lc)
    return r0 * inv, s0 * inv, t0 * inv


def _is_field_poly(f: Poly) -> bool:
    return all(not isinstance(c, Poly) and not hasattr(c, "terms") for c in f.c)


def _exact_quotient(num, den):
    if den == 1:
        return num
    if hasattr(num, "exact_div"):
        return num.exact_div(den)
    if isinstance(num, int) and isinstance(den, int):
        q, r = divmod(num, den)
        if r:
            raise ArithmeticError("inexact integer division")
        return q
    return num / den


def _bareiss_det(m):
    """Determinant by fraction-free elimination over an integral domain."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = _exact_quotient(num, prev)
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sylvester_matrix(f: Poly, g: Poly):
    m, n = f.degree(), g.degree()
    size = m + n
    rows = []
    fc = list(reversed(f.c))
    gc = list(reversed(g.c))
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def resultant(f: Poly, g: Poly):
    """Res(f, g).  Euclidean over fields, Sylvester/Bareiss over rings."""
    f, g = Poly(f), Poly(g)
    if f.is_zero() or g.is_zero():
        return 0
    m, n = f.degree(), g.degree()
    if m == 0:
        return f.lc ** n
    if n == 0:
        return g.lc ** m
    if not (_is_field_poly(f) and _is_field_poly(g)):
        return _bareiss_det(sylvester_matrix(f, g))
    if all(isinstance(c, int) for c in f.c + g.c):
        f = f.map_coeffs(Fraction)
    res = 1
    while True:
        m, n = f.degree(), g.degree()
        if n == 0:
            return res * g.lc ** m
        r = f % g
        if r.is_zero():
            return 0 * res
        k = r.degree()
        if (m * n) % 2:
            res = -res
        res = res * g.lc ** (m - k)
        f, g = g, r


def poly_discriminant(f: Poly):
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    f = Poly(f)
    n = f.degree()
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    r = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    lc = f.lc
    if isinstance(r, Poly):
        return r.exact_div(Poly._lift(lc)) * sign
    if hasattr(r, "exact_div"):
        return r.exact_div(lc) * sign
    out = sign * Fraction(r) / lc if isinstance(r, (int, Fraction)) and isinstance(lc, (int, Fraction)) else sign * r / lc
    if isinstance(out, Fraction) and out.denominator == 1:
        return int(out)
    return out


def squarefree_decomposition(f: Poly):
    """Yun's algorithm: list of (g_i, i) with f = lc * prod g_i^i.

    The g_i are monic, squarefree and pairwise coprime; only nonconstant
    ones are returned.  Valid in characteristic 0 or above deg f.
    """
    f = Poly(f)
    if f.degree() <= 0:
        return []
    f = f.monic()
    d = f.derivative()
    if d.is_zero():
        raise ValueError("derivative vanishes; characteristic too small")
    a = poly_gcd(f, d)
    b = f.exact_div(a)
    c = d.exact_div(a)
    dd = c - b.derivative()
    out = []
    i = 1
    while b.degree() > 0:
        a = poly_gcd(b, dd)
        if a.degree() > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = dd.exact_div(a)
        dd = c - b.derivative()
        i += 1
    return out


def multiplicity(f: Poly, g: Poly) -> int:
    """Largest m with g^m | f (f nonzero, deg g >= 1)."""
    if f.is_zero():
        raise ValueError("multiplicity in the zero polynomial")
    m = 0
    while True:
        q, r = divmod(f, g)
        if not r.is_zero():
            return m
        f = q
        m += 1


def field_sqrt(x):
    """Square root of a field element, or None if it is not a square."""
    if isinstance(x, (int, Fraction)):
        return rational_sqrt(x)
    if hasattr(x, "sqrt"):
        return x.sqrt()
    raise TypeError(f"no square-root routine for {type(x).__name__}")


def is_square_poly(f: Poly) -> Poly | None:
    """g with g^2 = f, or None.  Over Q the root has positive leading coefficient."""
    f = Poly(f)
    if f.is_zero():
        return Poly()
    if all(isinstance(c, int) for c in f.c):
        f = f.map_coeffs(Fraction)
    s = field_sqrt(f.lc)
    if s is None:
        return None
    if f.degree() == 0:
        return Poly((s,))
    if f.degree() % 2:
        return None
    g = Poly((s,))
    for part, e in squarefree_decomposition(f):
        if e % 2:
            return None
        g = g * part ** (e // 2)
    if g * g != f:
        return None
    if isinstance(g.lc, Fraction) and g.lc < 0:
        g = -g
    return g


def content_int(f: Poly) -> Poly:
    """Primitive integer polynomial proportional to f over Q (positive lc)."""
    cs = [Fraction(c) for c in f.c]
    den = 1
    for c in cs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return Poly()
    if ints[-1] < 0:
        g = -g
    return Poly(tuple(v // g for v in ints))


def _roots_mod_p(f_int: list[int], p: int) -> list[int]:
    out = []
    for x in range(p):
        acc = 0
        for v in reversed(f_int):
            acc = (acc * x + v) % p
        if acc == 0:
            out.append(x)
    return out


def rational_roots(f: Poly) -> list[Fraction]:
    """All rational roots of f in Q[x], sorted, via p-adic lifting."""
    from .scalars import Padic, is_prime, rational_reconstruct
    from .errors import NotRecognized

    f = Poly(f)
    if f.degree() < 1:
        return []
    roots = []
    v = f.valuation()
    if v:
        roots.append(Fraction(0))
        f = Poly(f.c[v:])
    if f.degree() < 1:
        return roots
    parts = squarefree_decomposition(f.map_coeffs(Fraction))
    sqf = Poly((1,))
    for part, _ in parts:
        sqf = sqf * part
    h = content_int(sqf)
    ints = [int(c) for c in h.c]
    a0, an = abs(ints[0]), abs(ints[-1])
    bound = 2 * max(a0, an) ** 2 + 1
    hd = h.derivative()
    p = 5
    while True:
        if is_prime(p) and ints[-1] % p:
            hp = Poly(tuple(Mod(c, p) for c in ints))
            if poly_gcd(hp, hp.derivative()).degree() == 0:
                break
        p += 1
    k = 1
    while p ** k <= bound:
        k += 1
    for r0 in _roots_mod_p(ints, p):
        x = r0
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            m = p ** prec
            fx = h(x) % m
            dfx = int(hd(x)) % m
            x = (x - fx * pow(dfx, -1, m)) % m
        try:
            q = rational_reconstruct(Padic(int(x), p, k))
        except NotRecognized:
            continue
        if h(q) == 0:
            roots.append(q)
    return sorted(set(roots))
