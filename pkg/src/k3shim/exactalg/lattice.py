"""Integer LLL reduction and recognition of p-adic algebraic numbers."""
from __future__ import annotations

from math import gcd

from .errors import DegenerateBasis, NotRecognized
from .poly import Poly
from .scalars import Padic


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis) -> list[list[int]]:
    """LLL-reduce the rows of an integer matrix with delta = 3/4.

    Gram-Schmidt data are kept exactly, scaled to integers
    (``d[i]`` are the leading Gram determinants and ``lam`` the scaled
    coefficients), so no rounding ever happens.
    """
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return []
    # 1-based bookkeeping: d[0] = 1, d[i] = Gram determinant of b_1..b_i.
    d = [0] * (n + 1)
    d[0] = 1
    lam = [[0] * (n + 1) for _ in range(n + 1)]

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l]:
            q = (2 * lam[k][l] + d[l]) // (2 * d[l])
            bk, bl = b[k - 1], b[l - 1]
            for i in range(len(bk)):
                bk[i] -= q * bl[i]
            lam[k][l] -= q * d[l]
            for i in range(1, l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k - 1], b[k - 2] = b[k - 2], b[k - 1]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        bb = (d[k - 2] * d[k] + lm * lm) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lm * t) // d[k - 1]
            lam[i][k - 1] = (bb * t + lm * lam[i][k]) // d[k]
        d[k - 1] = bb

    d[1] = _dot(b[0], b[0])
    if d[1] == 0:
        raise DegenerateBasis("zero vector in basis")
    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(b[k - 1], b[j - 1])
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise DegenerateBasis("rows are linearly dependent")
                    d[k] = u
        red(k, k - 1)
        if 4 * d[k] * d[k - 2] < 3 * d[k - 1] ** 2 - 4 * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
    return b


def _poly_from_vec(v) -> Poly:
    return Poly(tuple(v))


def _primitive(f: Poly) -> Poly:
    g = 0
    for c in f.c:
        g = gcd(g, int(c))
    if g == 0:
        return f
    if f.lc < 0:
        g = -g
    return Poly(tuple(int(c) // g for c in f.c))


def _int_poly_gcd(polys: list[Poly]) -> Poly:
    from fractions import Fraction

    from .poly import content_int, poly_gcd

    g = polys[0].map_coeffs(Fraction)
    for f in polys[1:]:
        g = poly_gcd(g, f.map_coeffs(Fraction))
    return content_int(g)


def recognize_algebraic(x: Padic, degree_bound: int) -> Poly:
    """Primitive integer F of degree <= d with F(x) = 0 mod p^k and small height.

    The lattice {c : sum c_i x^i = 0 mod p^k} is LLL-reduced; every reduced
    vector whose sup-norm times p^2 stays below p^(k/(d+1)) is accepted, and
    the answer is the gcd of the accepted polynomials.
    """
    d = degree_bound
    if d < 1:
        raise ValueError("degree bound must be >= 1")
    p, k = x.p, x.k
    m = p ** k
    rows = [[m] + [0] * d]
    pw = 1
    for i in range(1, d + 1):
        pw = pw * x.value % m
        row = [0] * (d + 1)
        row[0] = -pw % m
        row[i] = 1
        rows.append(row)
    reduced = lll_reduce(rows)
    good = []
    for v in reduced:
        h = max(abs(c) for c in v)
        if h == 0:
            continue
        if (h * p * p) ** (d + 1) <= m:
            f = _poly_from_vec(v)
            if f.degree() >= 1:
                good.append(f)
    if not good:
        raise NotRecognized(f"no relation of degree <= {d} at precision {p}^{k}")
    f = _primitive(_int_poly_gcd(good))
    if f.degree() < 1 or f(x.value) % m:
        raise NotRecognized("accepted vectors share no nontrivial factor")
    return f
