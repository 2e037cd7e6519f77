"""Mod-p search for CM members of a family and p-adic lifting of the answer.

The pipeline is: choose a prime p that splits in the CM field, scan the
parameter residues mod p (point counts pick out the residues whose
transcendental Frobenius trace fits the target discriminant), look for a
section of a prescribed shape by testing whether RHS(X) / divisor^2 is a
constant times a square over F_p, Newton-lift the surviving solutions,
recognize the rational parameter and re-verify the record exactly.

A section shape is X = B0 + u1 B1 + ... + um Bm with B_i polynomials in t
over Q(r) and a divisor prod (t - tau_i)^{e_i} such that RHS(X) is
divisible by the divisor squared for every (r, u).  The lifted system has
unknowns (r, u, c, s) with RHS(X) / divisor^2 = c (t^k + s_{k-1} t^{k-1} +
... + s_0)^2, as many equations as unknowns.

Sections with poles use X = t^a q(t) / d(t)^2 with d monic.  Contact with
the fiber node at t = 0 (to order i0) and at infinity (to order i_inf)
fixes the lowest and highest coefficients of q in terms of d and r; the
remaining coefficients of q and d are the unknowns, and the numerator of
RHS(X) divided by t^(2 i0) must be c times a monic square.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .cases import build_family, verify_cm_record
from .cases.common import CMRecord, FamilyDescriptor, Witness
from .ellsurf import SurfaceModel, fiber_configuration
from .exactalg import (
    InvalidPrime,
    Mod,
    NotRecognized,
    Padic,
    Poly,
    RatFunc,
    VerificationFailed,
    is_prime,
    is_square_poly,
    legendre_symbol,
    poly_gcd,
    rational_reconstruct,
    squarefree_int,
)
from .exactalg.errors import K3ShimError
from .nslattice import component_contribution

F = Fraction


class NotFound(K3ShimError):
    pass


class SearchBudgetExceeded(NotFound):
    pass


class LiftStuck(K3ShimError):
    pass


class BadReduction(K3ShimError):
    pass


# ---------------------------------------------------------------------------
# section shapes


@dataclass(frozen=True)
class PoleShape:
    """X = t^a q(t) / d(t)^2, deg q = deg_q, d monic of degree deg_d.

    The section meets the multiplicative fiber at t = 0 in component
    ``contact0`` and the one at infinity in component ``contact_inf``, so
    X agrees with the node series there to those orders.
    """

    a: int
    deg_q: int
    deg_d: int
    contact0: int
    contact_inf: int

    @property
    def inf_shift(self) -> int:
        """e with X_inf(s) = s^e q~(s) / d~(s)^2 for the reversed polynomials."""
        return 4 - self.a - self.deg_q + 2 * self.deg_d

    def fixed_low(self) -> int:
        return self.contact0 - self.a

    def fixed_high(self) -> int:
        return self.contact_inf - self.inf_shift

    def free_q(self) -> list[int]:
        return list(range(self.fixed_low(), self.deg_q + 1 - self.fixed_high()))

    @property
    def unknowns(self) -> int:
        return self.deg_d + len(self.free_q())

    def half_degree(self) -> int:
        total = 6 * self.deg_d + 12 - 2 * self.contact_inf - 2 * self.contact0
        if total % 2 or total < 0:
            raise ValueError("numerator degree is not even for this pole shape")
        return total // 2


@dataclass(frozen=True)
class SectionShape:
    """Expected extra section: X = basis[0] + sum u_i basis[i], RHS divisible by divisor^2.

    ``basis`` entries and divisor roots are built from the parameter (a
    RatFunc generator for the symbolic shape).  ``basis`` is None for shapes
    recorded only by their size (sections with poles).
    """

    description: str
    incidences: str
    height: Fraction
    unknowns: int
    basis: Callable[[Any, Poly], list] | None = None
    divisor: Callable[[Any], list] | None = None
    po: int = 0
    pole: PoleShape | None = None


def node_series(a2: Poly, a4: Poly, order: int) -> Poly:
    """The X-coordinate of the fiber singularity near t = 0, to O(t^order).

    Solves 3 x^2 + 2 a2 x + a4 = 0 by fixed-point iteration for a model with
    a4(0) = 0 and a2(0) != 0, i.e. x = -(3 x^2 + a4) / (2 a2).
    """
    a0 = a2.c[0]
    inv = [a0 ** 0 / a0]
    for n in range(1, order):
        acc = a0 * 0
        for i in range(1, min(n, a2.degree()) + 1):
            acc = acc + a2.c[i] * inv[n - i]
        inv.append(-acc / a0)
    inv_p = Poly(tuple(inv))
    x = Poly()
    for _ in range(order):
        rhs = (x * x * 3 + a4) * inv_p * Fraction(-1, 2)
        x = Poly(rhs.c[:order])
    return x


def _t_of(p) -> Poly:
    one = p ** 0 if not isinstance(p, int) else Fraction(1)
    return Poly((one * 0, one))


def _shape_n6_19() -> SectionShape:
    def basis(b, t):
        return [-b * t ** 2 * (t - 1), -b * t ** 3 * (t - 1)]

    return SectionShape("X = -b t^2 (t - 1)(1 + u t)", "far D7 component at t=0, A2 component at t=1",
                        F(19, 12), 1, basis, lambda b: [(b * 0, 3), (b ** 0, 1)])


def _shape_n14_67() -> SectionShape:
    def basis(r, t):
        tau = 2 * r + 1
        return [t * 0] + [t ** (i + 1) * (t - tau) for i in range(3)]

    return SectionShape("X = t (t - (2r+1)) (u0 + u1 t + u2 t^2)",
                        "A6 component 1 at t=0, A3 component 1 at t=2r+1, Y of valuation 1 there",
                        F(67, 28), 3, basis, lambda r: [(r * 0, 1), (2 * r + 1, 1)])


def _shape_n57_267() -> SectionShape:
    fam = build_family(57)

    def basis(r, t):
        a2, a4, _ = fam.coefficients(r, t)
        x = node_series(Poly(a2), Poly(a4), 3)
        return [Poly((r * 0, r * 0, x.c[2] if x.degree() >= 2 else r * 0)), t ** 3, t ** 4]

    return SectionShape("X = x2(r) t^2 + u0 t^3 + u1 t^4 with x2 from the A5 node",
                        "A5 component 3 at t=0, identity component at infinity",
                        F(5, 2), 2, basis, lambda r: [(r * 0, 3)])


def _shape_n57_627() -> SectionShape:
    pole = PoleShape(a=2, deg_q=5, deg_d=3, contact0=3, contact_inf=6)
    return SectionShape("X = t^2 q(t) / d(t)^2 with q quintic and d monic cubic",
                        "A5 component 3 at t=0, A11 component 6 at infinity, P.O = 3",
                        F(11, 2), pole.unknowns, po=3, pole=pole)


_SHAPES = {(6, -19): _shape_n6_19, (14, -67): _shape_n14_67,
           (57, -267): _shape_n57_267, (57, -627): _shape_n57_627}


def achievable_heights(family: FamilyDescriptor, max_po: int = 2) -> set:
    """All 4 + 2 P.O - sum of fiber contributions with 0 <= P.O <= max_po."""
    sums = {F(0)}
    for kind, n in family.expected_R.factors:
        comps = range(n + 1) if kind == "A" else range(4) if kind == "D" else range(2)
        new = set()
        for s in sums:
            for c in comps:
                try:
                    new.add(s + component_contribution(kind, n, c))
                except Exception:
                    continue
        sums = new
    return {4 + 2 * po - s for po in range(max_po + 1) for s in sums if 4 + 2 * po - s > 0}


def section_shape(N: int, D: int) -> SectionShape:
    """The registered extra-section shape for (N, D); NotFound if the height budget rules it out."""
    family = build_family(N)
    target = F(-D, 2 * N)
    if not family.generic_sections(F(1)) and target not in achievable_heights(family):
        raise NotFound(f"no section of height {target} = |D|/2N exists on the N={N} family")
    if (N, D) not in _SHAPES:
        raise NotFound(f"no section shape registered for N={N}, D={D}")
    return _SHAPES[(N, D)]()


# ---------------------------------------------------------------------------
# search parameters


def _threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("K3SHIM_THREADS")
    return max(1, int(env)) if env and env.isdigit() else 1


@dataclass
class SearchSpec:
    family: FamilyDescriptor
    D: int
    shape: SectionShape
    prime: int | None = None
    precision_start: int = 8
    precision_max: int = 1024
    use_point_counts: bool = True
    budget: int = 2 * 10 ** 7
    threads: int | None = None

    @classmethod
    def for_target(cls, N: int, D: int, **kw) -> "SearchSpec":
        return cls(build_family(N), D, section_shape(N, D), **kw)

    def validate(self) -> None:
        if self.D >= 0:
            raise ValueError("the discriminant must be negative")
        floor = F(-self.D, 2 * self.family.N)
        if self.shape.height < floor:
            raise NotFound(f"shape height {self.shape.height} is below |D|/2N = {floor}")
        if not self.family.generic_sections(F(1)) and self.shape.height != floor:
            raise NotFound(f"generic rank 0 needs height exactly {floor}, shape has {self.shape.height}")
        if self.prime is not None and not usable_prime(self.prime, self.D, self.family):
            raise InvalidPrime(f"p = {self.prime} is not usable for D = {self.D}")


@dataclass(frozen=True)
class ModPCandidate:
    p: int
    residue: int
    unknowns: tuple
    scale: int
    root: tuple
    point_count: int | None = None

    def solution_vector(self) -> list[int]:
        return [self.residue, *self.unknowns, self.scale, *self.root]


@dataclass
class LiftResult:
    parameter: Padic
    values: list
    history: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# primes and point counts


def _family_denominators(family: FamilyDescriptor) -> int:
    S = family.surface()
    out = 1
    for c in S.coeffs:
        for a in c.c:
            for part in ((a.num, a.den) if isinstance(a, RatFunc) else ()):
                for q in part.c:
                    out = out * Fraction(q).denominator // np.gcd(out, Fraction(q).denominator)
            if not isinstance(a, RatFunc):
                d = Fraction(a).denominator
                out = out * d // np.gcd(out, d)
    return int(out)


def usable_prime(p: int, D: int, family: FamilyDescriptor | None = None) -> bool:
    if p < 5 or not is_prime(p) or legendre_symbol(D % p, p) != 1:
        return False
    if family is not None and (family.N % p == 0 or _family_denominators(family) % p == 0):
        return False
    return True


def choose_prime(D: int, family: FamilyDescriptor | None = None, after: int = 0) -> int:
    """Smallest p > after, p >= 5, of good reduction for the family, with (D/p) = +1."""
    if D >= 0:
        raise ValueError("D must be negative")
    p = max(after + 1, 5)
    while not usable_prime(p, D, family):
        p += 1
    return p


def _mod_list(poly: Poly, p: int) -> list[int]:
    out = []
    for c in poly.c:
        if isinstance(c, Mod):
            out.append(c.v % p)
        else:
            q = Fraction(c)
            if q.denominator % p == 0:
                raise BadReduction(f"coefficient {q} has p = {p} in its denominator")
            out.append(q.numerator * pow(q.denominator, -1, p) % p)
    return out


def _model_prime(S: SurfaceModel) -> int | None:
    for c in S.coeffs:
        for a in c.c:
            if isinstance(a, Mod):
                return a.p
    return None


def _legendre_table(p: int) -> np.ndarray:
    chi = -np.ones(p, dtype=np.int64)
    chi[0] = 0
    chi[(np.arange(1, p) ** 2) % p] = 1
    return chi


def _tate_discriminant(a1, a2, a3, a4, a6) -> Poly:
    """Discriminant of a long Weierstrass model, valid in every characteristic."""
    b2, b4, b6 = a1 * a1 + a2 * 4, a4 * 2 + a1 * a3, a3 * a3 + a6 * 4
    b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9


def count_points_mod_p(S: SurfaceModel, p: int | None = None) -> int:
    """Sum over t in P^1(F_p) of the F_p-points of the Weierstrass fiber (point at infinity included).

    Singular fibers are counted on the Weierstrass cubic itself.  The fiber at
    t = infinity uses the coefficients of t^(2i) in a_i.  BadReduction if the
    discriminant vanishes identically mod p.
    """
    p = p or _model_prime(S)
    if p is None or p < 3:
        raise ValueError("an odd prime is required")
    lc = [_mod_list(c, p) for c in S.long_coefficients()]
    if _tate_discriminant(*(Poly(tuple(Mod(v, p) for v in c)) for c in lc)).is_zero():
        raise BadReduction(f"discriminant vanishes identically mod {p}")
    chi = _legendre_table(p)
    xs = np.arange(p, dtype=np.int64)

    def fiber_counts(coeffs_at):
        # coeffs_at: (5, T) array of a1, a2, a3, a4, a6 values per fiber
        a1, a2, a3, a4, a6 = (c[:, None] for c in coeffs_at)
        x = xs[None, :]
        f = (4 * ((x * x % p) * x % p + a2 * (x * x % p) + a4 * x + a6) + (a1 * x + a3) ** 2) % p
        return (p + 1 + chi[f].sum(axis=1)).sum()

    ts = np.arange(p, dtype=np.int64)
    finite = np.zeros((5, p), dtype=np.int64)
    for i, c in enumerate(lc):
        acc = np.zeros(p, dtype=np.int64)
        for a in reversed(c):
            acc = (acc * ts + a) % p
        finite[i] = acc
    weights = (2, 4, 6, 8, 12)
    for c, w in zip(lc, weights):
        if len(c) > w + 1 and any(c[w + 1:]):
            raise BadReduction("coefficient degrees exceed the K3 bounds")
    infinite = np.array([[c[w] if len(c) > w else 0] for c, w in zip(lc, weights)], dtype=np.int64)
    return int(fiber_counts(finite) + fiber_counts(infinite))


def transcendental_traces(count: int, p: int, known_sections: int) -> list[int]:
    """Possible traces of Frobenius on the rank-2 transcendental part.

    From sum_t #W_t = (p+1)^2 + p (sum of section signs) + trace(T), with the
    known sections defined over F_p and one extra section of sign +-1.
    """
    base = count - (p + 1) ** 2 - p * known_sections
    return [base - p, base + p]


def cm_compatible(count: int, p: int, D: int, known_sections: int) -> bool:
    """True if some transcendental trace x has 4p^2 - x^2 = |D| times a nonzero square."""
    target = squarefree_int(-D)
    for x in transcendental_traces(count, p, known_sections):
        disc = 4 * p * p - x * x
        if disc > 0 and squarefree_int(disc) == target:
            return True
    return False


# ---------------------------------------------------------------------------
# scalar evaluation of symbolic data at residues and p-adic jets


class _Jet:
    """Value and gradient modulo m (forward-mode derivatives for Newton's method)."""

    __slots__ = ("v", "g", "m")

    def __init__(self, v: int, g, m: int):
        self.m = m
        self.v = v % m
        self.g = g

    @staticmethod
    def lift(x, m: int, n: int) -> "_Jet":
        return _Jet(_frac_mod(x, m), [0] * n, m)

    def _co(self, o):
        if isinstance(o, _Jet):
            return o
        return _Jet(_frac_mod(o, self.m), [0] * len(self.g), self.m)

    def __add__(self, o):
        o = self._co(o)
        m = self.m
        return _Jet(self.v + o.v, [(a + b) % m for a, b in zip(self.g, o.g)], m)

    __radd__ = __add__

    def __neg__(self):
        m = self.m
        return _Jet(-self.v, [(-a) % m for a in self.g], m)

    def __sub__(self, o):
        return self + (-self._co(o))

    def __rsub__(self, o):
        return self._co(o) - self

    def __mul__(self, o):
        o = self._co(o)
        m = self.m
        return _Jet(self.v * o.v, [(self.v * b + o.v * a) % m for a, b in zip(self.g, o.g)], m)

    __rmul__ = __mul__

    def inverse(self) -> "_Jet":
        iv = pow(self.v, -1, self.m)
        m = self.m
        return _Jet(iv, [(-a * iv * iv) % m for a in self.g], m)


def _frac_mod(x, m: int) -> int:
    if isinstance(x, Mod):
        return x.v
    q = Fraction(x)
    return q.numerator * pow(q.denominator, -1, m) % m


def _zero(x, m):
    return x * 0 if isinstance(x, _Jet) else 0


def _ev_poly(f: Poly, x, m: int):
    acc = _zero(x, m)
    for c in reversed(f.c):
        acc = acc * x + _frac_mod(c, m)
        if not isinstance(acc, _Jet):
            acc %= m
    return acc


def _ev(c, x, m: int):
    """A coefficient of the symbolic data (RatFunc in the parameter or a constant) at x mod m."""
    if isinstance(c, RatFunc):
        num, den = _ev_poly(c.num, x, m), _ev_poly(c.den, x, m)
        if isinstance(den, _Jet):
            if den.v % _prime_of(m) == 0:
                raise BadReduction("the parameter hits a pole of the family")
            return num * den.inverse()
        if den % _prime_of(m) == 0:
            raise BadReduction("the parameter hits a pole of the family")
        return num * pow(den, -1, m) % m
    if isinstance(x, _Jet):
        return _Jet.lift(c, m, len(x.g))
    return _frac_mod(c, m)


_PRIME_OF: dict = {}


def _prime_of(m: int) -> int:
    return _PRIME_OF.get(m, m)


@dataclass
class _SymbolicShape:
    """The family and shape over Q(r), as coefficient lists in t."""

    rhs: list            # a2, a4, a6 coefficient lists (extended model)
    basis: list          # coefficient lists of B0 .. Bm
    roots: list          # (tau coefficient, multiplicity)
    k: int               # half the degree of RHS / divisor^2
    pole: PoleShape | None = None

    @classmethod
    def build(cls, spec: SearchSpec) -> "_SymbolicShape":
        if spec.shape.basis is None and spec.shape.pole is None:
            raise SearchBudgetExceeded(f"shape '{spec.shape.description}' has {spec.shape.unknowns} "
                                       "unknowns; no scan is attempted")
        r = RatFunc.gen(Fraction(1))
        t = _t_of(r)
        S = spec.family.surface()
        if S.form != "extended":
            raise ValueError("the search works on extended models")
        rhs = [list(c.c) for c in S.coeffs]
        if spec.shape.pole is not None:
            return cls(rhs, [], [], spec.shape.pole.half_degree(), spec.shape.pole)
        basis = [list(Poly(b).c) for b in spec.shape.basis(r, t)]
        roots = list(spec.shape.divisor(r))
        degx = max(len(b) for b in basis) - 1
        total = 3 * degx - 2 * sum(e for _, e in roots)
        if total % 2:
            raise ValueError("RHS / divisor^2 has odd degree for this shape")
        return cls(rhs, basis, roots, total // 2)


# ---------------------------------------------------------------------------
# batched polynomial arithmetic mod p (rows = candidates)


def _bmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((max(A.shape[0], B.shape[0]), A.shape[1] + B.shape[1] - 1), dtype=np.int64)
    for i in range(A.shape[1]):
        out[:, i:i + B.shape[1]] = (out[:, i:i + B.shape[1]] + A[:, i:i + 1] * B) % p
    return out


def _badd(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    n = max(A.shape[1], B.shape[1])
    out = np.zeros((max(A.shape[0], B.shape[0]), n), dtype=np.int64)
    out[:, :A.shape[1]] += A
    out[:, :B.shape[1]] += B
    return out % p


def _divide_monic(A: np.ndarray, d: list[int], p: int):
    """Quotient and remainder of each row by the monic polynomial d."""
    A = A.copy()
    n, m = A.shape[1] - 1, len(d) - 1
    q = np.zeros((A.shape[0], max(n - m + 1, 1)), dtype=np.int64)
    for i in range(n - m, -1, -1):
        c = A[:, i + m].copy()
        q[:, i] = c
        for j in range(m + 1):
            A[:, i + j] = (A[:, i + j] - c * d[j]) % p
    return q, A[:, :m]


def _poly_from_roots(roots: list, p: int) -> list[int]:
    out = [1]
    for tau, e in roots:
        for _ in range(e):
            out = [(a - tau * b) % p for a, b in zip([0] + out, out + [0])]
    return out


def _square_test(Q: np.ndarray, k: int, p: int):
    """Rows that are c * (monic degree-k polynomial)^2 with c != 0; returns (mask, c, S)."""
    lc = Q[:, 2 * k]
    ok = lc != 0
    inv = np.array([pow(int(v), -1, p) if v else 0 for v in lc], dtype=np.int64)
    R = Q * inv[:, None] % p
    S = np.zeros((Q.shape[0], k + 1), dtype=np.int64)
    S[:, k] = 1
    half = pow(2, -1, p)
    for i in range(1, k + 1):
        # coefficient of t^(2k-i) in S^2 with s_{k-i} unknown
        acc = np.zeros(Q.shape[0], dtype=np.int64)
        for a in range(k - i + 1, k):
            b = 2 * k - i - a
            if k - i < b <= k:
                acc = (acc + S[:, a] * S[:, b]) % p
        S[:, k - i] = (R[:, 2 * k - i] - acc) * half % p
    S2 = _bmul(S, S, p)
    ok &= np.all(S2 == R, axis=1)
    return ok, lc, S[:, :k]


# ---------------------------------------------------------------------------
# the scan


def _residue_data(sym: _SymbolicShape, r0: int, p: int):
    rhs = [[_ev(c, r0, p) for c in coeffs] for coeffs in sym.rhs]
    basis = [[_ev(c, r0, p) for c in b] for b in sym.basis]
    roots = [(_ev(tau, r0, p), e) for tau, e in sym.roots]
    return rhs, basis, roots


def _good_residue(spec: SearchSpec, r0: int, p: int) -> bool:
    """The reduction at r0 is a K3 surface with the generic fiber configuration."""
    S = spec.family.surface()
    try:
        Sp = S.map_coeffs(lambda c: Mod(_ev(c, r0, p), p))
        return fiber_configuration(Sp).root_lattice == spec.family.expected_R
    except (BadReduction, K3ShimError, ZeroDivisionError):
        return False


def _residue_count(spec: SearchSpec, r0: int, p: int) -> tuple[bool, int | None]:
    """(keep, point count): good reduction with the generic fibers and, if enabled, a CM-compatible count."""
    if not _good_residue(spec, r0, p):
        return False, None
    if not spec.use_point_counts:
        return True, None
    Sp = spec.family.surface().map_coeffs(lambda c: Mod(_ev(c, r0, p), p))
    count = count_points_mod_p(Sp, p)
    return cm_compatible(count, p, spec.D, len(spec.family.generic_sections(F(1)))), count


def _grid(m: int, p: int, first: int | None = None) -> np.ndarray:
    """All vectors in F_p^m (optionally with the first coordinate fixed), in lexicographic order."""
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if first is None:
        return np.indices((p,) * m, dtype=np.int64).reshape(m, -1).T
    rest = _grid(m - 1, p)
    return np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest])


def _weighted_reverse(c: list, weight: int) -> list:
    """Coefficients of s^weight f(1/s) for the coefficient list c of f."""
    c = list(c) + [c[0] * 0 if c else 0] * (weight + 1 - len(c))
    return c[:weight + 1][::-1]


def _node_mod_p(a2: list[int], a4: list[int], order: int, p: int) -> list[int]:
    x = node_series(Poly(tuple(Mod(v, p) for v in a2)), Poly(tuple(Mod(v, p) for v in a4)), order)
    return ([_frac_mod(c, p) for c in x.c] + [0] * order)[:order]


def _scan_residue_pole(spec: SearchSpec, sym: _SymbolicShape, r0: int, p: int, count) -> list[ModPCandidate]:
    ps = sym.pole
    (a2, a4, a6), _, _ = _residue_data(sym, r0, p)
    a2, a4, a6 = (_weighted_reverse(c, w)[::-1] for c, w in ((a2, 4), (a4, 8), (a6, 12)))
    if a2[0] == 0 or a2[4] == 0:
        return []
    node0 = _node_mod_p(a2, a4, ps.contact0, p)[ps.a:]
    node_inf = _node_mod_p(_weighted_reverse(a2, 4), _weighted_reverse(a4, 8), ps.contact_inf, p)[ps.inf_shift:]
    row = lambda c: np.array([c or [0]], dtype=np.int64)  # noqa: E731
    free = ps.free_q()
    nd, lo, hi, k = ps.deg_d, ps.fixed_low(), ps.fixed_high(), sym.k
    out = []
    for first in range(p):
        grid = _grid(ps.unknowns, p, first)
        n = grid.shape[0]
        d = np.hstack([grid[:, :nd], np.ones((n, 1), dtype=np.int64)])
        d2 = _bmul(d, d, p)
        q = np.zeros((n, ps.deg_q + 1), dtype=np.int64)
        q[:, free] = grid[:, nd:]
        q[:, :lo] = _bmul(row(node0), d2, p)[:, :lo]
        d2rev = _bmul(d[:, ::-1], d[:, ::-1], p)
        q[:, ps.deg_q + 1 - hi:] = _bmul(row(node_inf), d2rev, p)[:, :hi][:, ::-1]
        tq = np.hstack([np.zeros((n, ps.a), dtype=np.int64), q])
        tq2 = _bmul(tq, tq, p)
        d4 = _bmul(d2, d2, p)
        num = _badd(_badd(_bmul(tq2, tq, p), _bmul(_bmul(tq2, d2, p), row(a2), p), p),
                    _badd(_bmul(_bmul(tq, d4, p), row(a4), p), _bmul(_bmul(d4, d2, p), row(a6), p), p), p)
        lo_cut, hi_cut = 2 * ps.contact0, 2 * ps.contact0 + 2 * k
        keep = ~np.any(num[:, :lo_cut] != 0, axis=1) & ~np.any(num[:, hi_cut + 1:] != 0, axis=1)
        Q = num[:, lo_cut:hi_cut + 1]
        ok, lc, S = _square_test(Q, k, p)
        keep &= ok & (Q[:, 0] != 0)
        for idx in np.nonzero(keep)[0]:
            dp = Poly(tuple(Mod(int(v), p) for v in d[idx]))
            Qp = Poly(tuple(Mod(int(v), p) for v in Q[idx]))
            if poly_gcd(dp, Qp).degree() > 0:
                continue
            out.append(ModPCandidate(p, r0, tuple(int(v) for v in grid[idx]), int(lc[idx]),
                                     tuple(int(v) for v in S[idx]), count))
    return out


def _scan_residue(spec: SearchSpec, sym: _SymbolicShape, r0: int, p: int) -> list[ModPCandidate]:
    keep, count = _residue_count(spec, r0, p)
    if not keep:
        return []
    if sym.pole is not None:
        return _scan_residue_pole(spec, sym, r0, p, count)
    (a2, a4, a6), basis, roots = _residue_data(sym, r0, p)
    grid = _grid(spec.shape.unknowns, p)
    width = max(len(b) for b in basis)
    B = np.zeros((len(basis), width), dtype=np.int64)
    for i, b in enumerate(basis):
        B[i, :len(b)] = b
    X = (B[0][None, :] + grid @ B[1:]) % p
    row = lambda c: np.array([c or [0]], dtype=np.int64)  # noqa: E731
    X2 = _bmul(X, X, p)
    rhs = _badd(_badd(_bmul(X2, X, p), _bmul(X2, row(a2), p), p), _badd(_bmul(X, row(a4), p), row(a6), p), p)
    d = _poly_from_roots([(tau, 2 * e) for tau, e in roots], p)
    Q, rem = _divide_monic(rhs, d, p)
    keep = np.all(rem == 0, axis=1)
    k = sym.k
    if Q.shape[1] < 2 * k + 1:
        return []
    if np.any(Q[:, 2 * k + 1:]):
        keep &= ~np.any(Q[:, 2 * k + 1:] != 0, axis=1)
    Q = Q[:, :2 * k + 1]
    ok, lc, S = _square_test(Q, k, p)
    keep &= ok
    for tau, _ in roots:
        val = np.zeros(Q.shape[0], dtype=np.int64)
        for j in range(2 * k, -1, -1):
            val = (val * tau + Q[:, j]) % p
        keep &= val != 0
    out = []
    for idx in np.nonzero(keep)[0]:
        out.append(ModPCandidate(p, r0, tuple(int(v) for v in grid[idx]), int(lc[idx]),
                                 tuple(int(v) for v in S[idx]), count))
    return out


def scan_mod_p(spec: SearchSpec, p: int | None = None) -> list[ModPCandidate]:
    """All (residue, unknowns) mod p where the shape yields c times a square; sorted, thread-count independent."""
    spec.validate()
    p = p or spec.prime or choose_prime(spec.D, spec.family)
    sym = _SymbolicShape.build(spec)
    size = p * p ** spec.shape.unknowns
    if size > spec.budget:
        raise SearchBudgetExceeded(f"search space {p}^{spec.shape.unknowns + 1} = {size} exceeds budget {spec.budget}")
    with ThreadPoolExecutor(max_workers=_threads(spec.threads)) as pool:
        parts = list(pool.map(lambda r0: _scan_residue(spec, sym, r0, p), range(p)))
    found = sorted((c for part in parts for c in part), key=lambda c: (c.residue, c.unknowns, c.root))
    if not found:
        raise NotFound(f"no residue mod {p} carries a section of shape '{spec.shape.description}'")
    return found


# ---------------------------------------------------------------------------
# Hensel lifting


def _lmul(f: list, g: list, zero) -> list:
    out = [zero for _ in range(len(f) + len(g) - 1)]
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return out


def _ladd(f: list, g: list, zero) -> list:
    n = max(len(f), len(g))
    return [(f[i] if i < len(f) else zero) + (g[i] if i < len(g) else zero) for i in range(n)]


def _node_jets(a2: list, a4: list, order: int, zero) -> list:
    """node_series on coefficient lists (jets or Fractions)."""
    inv0 = a2[0].inverse() if isinstance(a2[0], _Jet) else 1 / a2[0]
    inv = [inv0]
    for n in range(1, order):
        acc = zero
        for i in range(1, min(n, len(a2) - 1) + 1):
            acc = acc + a2[i] * inv[n - i]
        inv.append(-(acc * inv0))
    x = [zero] * order
    for _ in range(order):
        rhs = _ladd(_lmul(x, x, zero), [], zero)
        rhs = _ladd([v * 3 for v in rhs], a4, zero)
        x = [v * Fraction(-1, 2) for v in _lmul(rhs, inv, zero)[:order]]
    return x


def _pole_parts(ps: PoleShape, a2: list, a4: list, d: list, qfree: list, zero) -> list:
    """The coefficients of q: node contact at both ends fixes the outer ones."""
    node0 = _node_jets(a2, a4, ps.contact0, zero)[ps.a:]
    node_inf = _node_jets(_weighted_reverse(a2, 4), _weighted_reverse(a4, 8), ps.contact_inf, zero)[ps.inf_shift:]
    lo, hi = ps.fixed_low(), ps.fixed_high()
    low = _lmul(node0, _lmul(d, d, zero), zero)[:lo]
    rev = d[::-1]
    high = _lmul(node_inf, _lmul(rev, rev, zero), zero)[:hi][::-1]
    return low + list(qfree) + high


def _system_pole(sym: _SymbolicShape, z: list, m: int) -> list:
    ps = sym.pole
    r = z[0]
    zero = r * 0
    nd, n_u = ps.deg_d, ps.unknowns
    d = list(z[1:1 + nd]) + [zero + 1]
    qfree = z[1 + nd:1 + n_u]
    c, s = z[1 + n_u], z[2 + n_u:]
    a2, a4, a6 = ([_ev(q, r, m) for q in coeffs] for coeffs in sym.rhs)
    a2, a4, a6 = (_weighted_reverse(f, w)[::-1] for f, w in ((a2, 4), (a4, 8), (a6, 12)))
    q = _pole_parts(ps, a2, a4, d, qfree, zero)
    tq = [zero] * ps.a + q
    tq2, d2 = _lmul(tq, tq, zero), _lmul(d, d, zero)
    d4 = _lmul(d2, d2, zero)
    num = _ladd(_ladd(_lmul(tq2, tq, zero), _lmul(_lmul(tq2, d2, zero), a2, zero), zero),
                _ladd(_lmul(_lmul(tq, d4, zero), a4, zero), _lmul(_lmul(d4, d2, zero), a6, zero), zero), zero)
    k = sym.k
    Q = (num[2 * ps.contact0:] + [zero] * (2 * k + 1))[:2 * k + 1]
    S2 = _lmul(list(s) + [zero + 1], list(s) + [zero + 1], zero)
    return [Q[i] - c * S2[i] for i in range(2 * k + 1)]


def _system(sym: _SymbolicShape, z: list, m: int) -> list:
    """Coefficients of RHS(X)/divisor^2 - c S^2 at the jet vector z = (r, u, c, s)."""
    if sym.pole is not None:
        return _system_pole(sym, z, m)
    n_u = len(sym.basis) - 1
    r, u = z[0], z[1:1 + n_u]
    c, s = z[1 + n_u], z[2 + n_u:]
    a2, a4, a6 = ([_ev(q, r, m) for q in coeffs] for coeffs in sym.rhs)
    basis = [[_ev(q, r, m) for q in b] for b in sym.basis]
    width = max(len(b) for b in basis)
    X = []
    for i in range(width):
        acc = basis[0][i] if i < len(basis[0]) else r * 0
        for j in range(n_u):
            if i < len(basis[j + 1]):
                acc = acc + u[j] * basis[j + 1][i]
        X.append(acc)

    def mul(f, g):
        out = [r * 0 for _ in range(len(f) + len(g) - 1)]
        for i, a in enumerate(f):
            for j, b in enumerate(g):
                out[i + j] = out[i + j] + a * b
        return out

    def add(f, g):
        n = max(len(f), len(g))
        return [(f[i] if i < len(f) else r * 0) + (g[i] if i < len(g) else r * 0) for i in range(n)]

    X2 = mul(X, X)
    rhs = add(add(mul(X2, X), mul(X2, a2)), add(mul(X, a4), a6))
    d = [r ** 0 if isinstance(r, int) else r * 0 + 1]
    for tau, e in sym.roots:
        tv = _ev(tau, r, m)
        for _ in range(2 * e):
            d = add([r * 0] + d, [-(tv * a) for a in d])
    # synthetic division by the monic d; the remainder vanishes identically by construction
    A = list(rhs)
    deg_d = len(d) - 1
    q = [r * 0] * max(len(A) - deg_d, 1)
    for i in range(len(A) - 1 - deg_d, -1, -1):
        coef = A[i + deg_d]
        q[i] = coef
        for j in range(deg_d + 1):
            A[i + j] = A[i + j] - coef * d[j]
    k = sym.k
    q = (q + [r * 0] * (2 * k + 1))[:2 * k + 1]
    S = list(s) + [r * 0 + 1]
    S2 = mul(S, S)
    return [q[i] - c * S2[i] for i in range(2 * k + 1)]


def _solve_mod(J: list, b: list, p: int, m: int) -> list[int]:
    n = len(J)
    A = [row[:] + [b[i]] for i, row in enumerate(J)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] % p), None)
        if piv is None:
            raise LiftStuck("the Jacobian is singular mod p")
        A[col], A[piv] = A[piv], A[col]
        inv = pow(A[col][col], -1, m)
        A[col] = [v * inv % m for v in A[col]]
        for i in range(n):
            if i != col and A[i][col] % m:
                f = A[i][col]
                A[i] = [(a - f * c) % m for a, c in zip(A[i], A[col])]
    return [A[i][n] for i in range(n)]


def _newton_step(sym: _SymbolicShape, z: list[int], p: int, prec: int) -> list[int]:
    m = p ** prec
    _PRIME_OF[m] = p
    n = len(z)
    jets = [_Jet(v, [1 if j == i else 0 for j in range(n)], m) for i, v in enumerate(z)]
    eqs = _system(sym, jets, m)
    J = [e.g for e in eqs]
    b = [e.v for e in eqs]
    delta = _solve_mod(J, b, p, m)
    return [(v - d) % m for v, d in zip(z, delta)]


def hensel_lift(spec: SearchSpec, candidate: ModPCandidate, k: int, sym: _SymbolicShape | None = None) -> LiftResult:
    """Newton-lift a mod-p solution to precision p^k; LiftStuck if the root is not simple."""
    sym = sym or _SymbolicShape.build(spec)
    p = candidate.p
    z = candidate.solution_vector()
    _PRIME_OF[p] = p
    if len(z) != 2 + spec.shape.unknowns + sym.k:
        raise LiftStuck("candidate does not match the shape")
    try:
        eqs = _system(sym, [_Jet(v, [1 if j == i else 0 for j in range(len(z))], p) for i, v in enumerate(z)], p)
    except BadReduction as e:
        raise LiftStuck(str(e)) from e
    if any(e.v % p for e in eqs):
        raise LiftStuck("candidate is not a solution mod p")
    _solve_mod([e.g for e in eqs], [0] * len(eqs), p, p)
    prec, history = 1, [(1, z[0] % p)]
    while prec < k:
        prec = min(2 * prec, k)
        z = _newton_step(sym, z, p, prec)
        history.append((prec, z[0]))
    return LiftResult(Padic(z[0], p, k), [Padic(v, p, k) for v in z], history)


def _reconstruct(values: list[Padic]) -> tuple | None:
    try:
        return tuple(rational_reconstruct(v) for v in values)
    except NotRecognized:
        return None


def _exact_section(spec: SearchSpec, r: Fraction, u: tuple) -> tuple[Any, Any]:
    """X over Q and the splitting polynomial of Y (None if Y is rational)."""
    t = Poly.x(Fraction(1))
    S = spec.family.surface(r)
    ps = spec.shape.pole
    if ps is not None:
        a2, a4, _ = (_weighted_reverse(list(c.c), w)[::-1] for c, w in zip(S.coeffs, (4, 8, 12)))
        d = list(u[:ps.deg_d]) + [Fraction(1)]
        q = Poly(tuple(_pole_parts(ps, [Fraction(v) for v in a2], [Fraction(v) for v in a4],
                                   d, list(u[ps.deg_d:]), Fraction(0))))
        dp = Poly(tuple(d))
        X = RatFunc(t ** ps.a * q, dp * dp)
        rhs = S.rhs(X)
        num, den = rhs.num, rhs.den
    else:
        basis = [Poly(b) for b in spec.shape.basis(r, t)]
        X = basis[0]
        for ui, b in zip(u, basis[1:]):
            X = X + b * ui
        rhs = S.rhs(X)
        num, den = rhs, Poly((Fraction(1),))
    if num.is_zero():
        raise VerificationFailed("RHS(X) vanishes identically")
    c = Fraction(num.lc) / Fraction(den.lc)
    if not is_square_poly(num * (1 / Fraction(num.lc))) or not is_square_poly(den * (1 / Fraction(den.lc))):
        raise VerificationFailed("RHS(X) is not a constant times a square")
    sf = squarefree_int(c.numerator * c.denominator)
    return X, (None if sf == 1 else Poly((-sf, 0, 1)))


def find_cm_point(spec: SearchSpec, progress: Callable[[dict], None] | None = None,
                  max_primes: int = 3) -> CMRecord:
    """choose_prime -> scan -> lift -> reconstruct -> verify; only verified records are returned."""
    spec.validate()
    emit = progress or (lambda event: None)
    sym = _SymbolicShape.build(spec)
    p = spec.prime or choose_prime(spec.D, spec.family)
    last_error: Exception | None = None
    for _ in range(max_primes):
        emit({"event": "prime", "p": p})
        try:
            cands = scan_mod_p(spec, p)
        except SearchBudgetExceeded:
            raise
        except NotFound as e:
            last_error = e
            p = choose_prime(spec.D, spec.family, after=p)
            continue
        emit({"event": "scan", "p": p, "candidates": len(cands)})
        for cand in cands:
            try:
                rec = _lift_and_verify(spec, sym, cand, emit)
            except (LiftStuck, NotRecognized, VerificationFailed, BadReduction) as e:
                emit({"event": "rejected", "residue": cand.residue, "reason": str(e)})
                last_error = e
                continue
            emit({"event": "found", "parameter": str(rec.parameter)})
            return rec
        if spec.prime is not None:
            break
        p = choose_prime(spec.D, spec.family, after=p)
    raise NotFound(f"no verified CM point for N={spec.family.N}, D={spec.D}: {last_error}")


def _lift_and_verify(spec: SearchSpec, sym: _SymbolicShape, cand: ModPCandidate, emit) -> CMRecord:
    k, prev = spec.precision_start, None
    n_u = spec.shape.unknowns
    while k <= spec.precision_max:
        lift = hensel_lift(spec, cand, k, sym)
        guess = _reconstruct(lift.values[:1 + n_u])
        emit({"event": "lift", "residue": cand.residue, "precision": k,
              "parameter": None if guess is None else str(guess[0])})
        if guess is not None and guess == prev:
            break
        prev, k = guess, 2 * k
    else:
        raise NotRecognized(f"no stable reconstruction up to p^{spec.precision_max}")
    r, u = prev[0], prev[1:]
    X, field_poly = _exact_section(spec, r, u)
    sections = tuple(spec.family.generic_sections(r)) + (X,)
    rec = CMRecord(spec.family.N, r, spec.D,
                   Witness("section", ("family", spec.family.N, r), None, sections=sections,
                           field_poly=field_poly, note=f"found by search mod {cand.p}"),
                   f"p-adic search mod {cand.p}")
    verify_cm_record(rec)
    return rec


__all__ = [
    "BadReduction", "LiftResult", "LiftStuck", "ModPCandidate", "NotFound", "SearchBudgetExceeded",
    "SearchSpec", "SectionShape", "achievable_heights", "choose_prime", "cm_compatible",
    "count_points_mod_p", "find_cm_point", "hensel_lift", "node_series", "scan_mod_p",
    "section_shape", "transcendental_traces", "usable_prime",
]
