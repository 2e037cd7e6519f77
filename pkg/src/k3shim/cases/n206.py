"""N = 206: checks on the degree-10 branch polynomial P10 and its consequences."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..ellsurf import INF
from ..exactalg import Mod, Poly, VerificationFailed, is_prime, poly_discriminant, poly_gcd, rational_sqrt

P10 = Poly((4096, 18224, 28840, 19883, 6646, 733, -220, -331, -42, -13, 8))
DISC_P10 = -(2 ** 138) * 103 ** 7
DISC_P10_SQ = 2 ** 311 * 103 ** 14
CM_VALUES = {0: -4, 1: -19, -1: -19, 2: -163, -2: -163, INF: -8}
BRANCH_D = -4 * 206


def p10_of_square() -> Poly:
    """P10(r^2) as a polynomial of degree 20 in r."""
    c = [0] * 21
    for i, a in enumerate(P10.c):
        c[2 * i] = a
    return Poly(tuple(c))


def involution(r):
    """w2 = w103 acts as r -> -r; r0 = r^2 is invariant."""
    if r == INF:
        return INF
    return -Fraction(r)


def _x_power_mod(f: Poly, p: int, e: int) -> Poly:
    """x^(p^e) modulo f over F_p."""
    x = Poly((Mod(0, p), Mod(1, p)))
    out = x
    for _ in range(e):
        base, n, acc = out, p, Poly((Mod(1, p),))
        while n:
            if n & 1:
                acc = (acc * base) % f
            n >>= 1
            if n:
                base = (base * base) % f
        out = acc
    return out


def irreducible_mod_p(f: Poly, p: int) -> bool:
    """Rabin's test over F_p (f of nonzero leading coefficient mod p)."""
    fp = Poly(tuple(Mod(int(c), p) for c in f.c))
    n = fp.degree()
    if n != f.degree():
        return False
    x = Poly((Mod(0, p), Mod(1, p)))
    if (_x_power_mod(fp, p, n) - x) % fp != Poly():
        return False
    for q in {q for q in range(2, n + 1) if n % q == 0 and is_prime(q)}:
        h = _x_power_mod(fp, p, n // q) - x
        if poly_gcd(fp, h % fp).degree() > 0:
            return False
    return True


def class_number(D: int) -> int:
    """Number of reduced primitive positive definite forms of discriminant D < 0."""
    from math import gcd

    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("D must be a negative discriminant")
    h, a = 0, 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


@dataclass
class X206Report:
    clauses: dict = field(default_factory=dict)
    equations: list = field(default_factory=list)
    irreducibility_prime: int | None = None

    @property
    def ok(self) -> bool:
        return all(v[0] for v in self.clauses.values())


def x206_verify(strict: bool = True) -> X206Report:
    """Check the printed facts about P10; raises VerificationFailed naming the clause."""
    rep = X206Report()

    def clause(name, ok, expected, got):
        rep.clauses[name] = (ok, expected, got)
        if strict and not ok:
            raise VerificationFailed(f"x206 clause {name}", expected, got)

    d = poly_discriminant(P10)
    clause("disc P10", d == DISC_P10, DISC_P10, d)
    q = p10_of_square()
    d2 = poly_discriminant(q)
    clause("disc P10(r^2)", d2 == DISC_P10_SQ, DISC_P10_SQ, d2)

    prime = next((p for p in range(5, 400) if is_prime(p) and p != 103 and irreducible_mod_p(P10, p)), None)
    rep.irreducibility_prime = prime
    clause("P10 irreducible", P10.degree() == 10 and prime is not None, "a prime with P10 irreducible mod p", prime)

    for r, D in CM_VALUES.items():
        v = Fraction(P10.lc) if r == INF else Fraction(q(r))
        ratio = v / (-D)
        clause(f"P10(r^2) at r={r}", rational_sqrt(ratio) is not None, f"{-D} times a square", v)

    rep.equations = ["s^2 = -P10(r^2)", "s0^2 = -P10(r0)", "s0'^2 = -r0*P10(r0)"]
    h = class_number(BRANCH_D)
    roots = q.degree() if d2 != 0 else None
    clause("branch point count", roots == 20 and h == 20, 20, (roots, h))
    return rep
