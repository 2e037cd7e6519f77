"""Independent reference computations used by several test modules."""
import random
from fractions import Fraction as F

import sympy

from k3shim.exactalg import Mod, Poly

b_sym, t_sym = sympy.symbols("b t")


def to_expr(f, param=b_sym):
    """A polynomial in t with coefficients in Q or Q(param) as a sympy expression."""
    text = str(f).replace("^", "**")
    return sympy.sympify(text, locals={"p": param, "t": t_sym})


def weierstrass_discriminant(a1, a2, a3, a4, a6):
    """Tate's formula for the discriminant of a long Weierstrass model."""
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def random_rational(rng: random.Random) -> F:
    """A parameter value well away from the small special values of the families."""
    return F(rng.choice((-1, 1)) * rng.randint(101, 997), rng.randint(2, 97))


def mod_p(c, p: int) -> int:
    if isinstance(c, Mod):
        return c.v % p
    q = F(c)
    return q.numerator * pow(q.denominator, -1, p) % p


def naive_count(S, p: int) -> int:
    """Points of the Weierstrass model over F_p, fiber by fiber, by enumerating (x, y)."""
    a1, a2, a3, a4, a6 = ([mod_p(c, p) for c in f.c] for f in S.long_coefficients())
    weights = (1, 2, 3, 4, 6)

    def at(coeffs, t):
        return sum(c * pow(t, i, p) for i, c in enumerate(coeffs)) % p

    def fiber(vals):
        A1, A2, A3, A4, A6 = vals
        n = 1  # the point at infinity of the fiber
        for x in range(p):
            for y in range(p):
                if (y * y + A1 * x * y + A3 * y - (x ** 3 + A2 * x * x + A4 * x + A6)) % p == 0:
                    n += 1
        return n

    total = sum(fiber([at(c, t) for c in (a1, a2, a3, a4, a6)]) for t in range(p))
    inf = [(c[2 * w] if len(c) > 2 * w else 0) for c, w in zip((a1, a2, a3, a4, a6), weights)]
    return total + fiber(inf)


def scale_t(f: Poly, c) -> Poly:
    """f(c t)."""
    return Poly(tuple(a * F(c) ** i for i, a in enumerate(Poly(f).c)))
