"""Elliptic K3 surfaces over K(t): models, fibers, sections and heights.

Conventions: the short model is Y^2 = X^3 + A X + B with
Delta = -16 (4 A^3 + 27 B^2); a K3 model has deg A <= 8, deg B <= 12, and
at t = infinity one uses u = 1/t, X = X'/u^4, Y = Y'/u^6.  Heights are in
the normalization where h = 4 + 2 (P.O) - sum of local corrections.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exactalg import (
    Mod,
    Poly,
    RatFunc,
    WeierstrassCurve,
    ec_add,
    ec_multiple,
    field_sqrt,
    inverse,
    poly_gcd,
    rational_roots,
    squarefree_decomposition,
)
from .exactalg.errors import K3ShimError
from .nslattice import RootLatticeSum, component_contribution, determinant


class NotK3(K3ShimError):
    pass


class SingularModel(K3ShimError):
    pass


class SmoothFiber(K3ShimError):
    pass


class NotASection(K3ShimError):
    pass


class DependentSections(K3ShimError):
    pass


class NeedsRenormalization(K3ShimError):
    pass


class PreconditionViolated(K3ShimError):
    pass


class InternalError(K3ShimError):
    pass


INF = "inf"

EULER = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}


def _P(x) -> Poly:
    return x if isinstance(x, Poly) else Poly((x,))


def _third(x):
    return x * Fraction(1, 3)


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True, eq=False)
class SurfaceModel:
    """Weierstrass model over K(t).

    ``form`` is ``"short"`` (coeffs A, B), ``"extended"`` (coeffs of
    X^2, X, 1: Y^2 = X^3 + a2 X^2 + a4 X + a6) or ``"long"``
    (a1, a2, a3, a4, a6).  ``substitution`` records how a short model was
    obtained from its parent.
    """

    form: str
    coeffs: tuple
    substitution: str = ""

    def __post_init__(self):
        n = {"short": 2, "extended": 3, "long": 5}.get(self.form)
        if n is None or len(self.coeffs) != n:
            raise ValueError(f"bad model form {self.form!r} with {len(self.coeffs)} coefficients")
        object.__setattr__(self, "coeffs", tuple(_P(c) for c in self.coeffs))

    @classmethod
    def short(cls, A, B) -> "SurfaceModel":
        return cls("short", (A, B))

    @classmethod
    def extended(cls, a2, a4, a6) -> "SurfaceModel":
        """Y^2 = X^3 + a2 X^2 + a4 X + a6 (a4 is the literal X-coefficient)."""
        return cls("extended", (a2, a4, a6))

    @classmethod
    def abc(cls, a, b, c) -> "SurfaceModel":
        """Y^2 = X^3 + a X^2 + 2 b X + c."""
        return cls("extended", (a, _P(b) * 2, c))

    @classmethod
    def long(cls, a1, a2, a3, a4, a6) -> "SurfaceModel":
        return cls("long", (a1, a2, a3, a4, a6))

    def long_coefficients(self) -> tuple:
        z = Poly()
        if self.form == "short":
            return (z, z, z, self.coeffs[0], self.coeffs[1])
        if self.form == "extended":
            return (z, self.coeffs[0], z, self.coeffs[1], self.coeffs[2])
        return self.coeffs

    def short_coefficients(self) -> tuple[Poly, Poly]:
        if self.form == "short":
            return self.coeffs
        if self.form == "extended":
            a2, a4, a6 = self.coeffs
            A = a4 - _third(a2 * a2)
            B = a6 - _third(a2 * a4) + a2 * a2 * a2 * Fraction(2, 27)
            return A, B
        a1, a2, a3, a4, a6 = self.coeffs
        b2 = a1 * a1 + a2 * 4
        b4 = a4 * 2 + a1 * a3
        b6 = a3 * a3 + a6 * 4
        c4 = b2 * b2 - b4 * 24
        c6 = -(b2 * b2 * b2) + b2 * b4 * 36 - b6 * 216
        return c4 * Fraction(-1, 48), c6 * Fraction(-1, 864)

    def to_short_coordinates(self, X, Y):
        """Map a point of this model to the short model."""
        if self.form == "short":
            return X, Y
        if self.form == "extended":
            return X + _third(self.coeffs[0]), Y
        a1, a2, a3, _, _ = self.coeffs
        b2 = a1 * a1 + a2 * 4
        return X + b2 * Fraction(1, 12), Y + (a1 * X + a3) * Fraction(1, 2)

    def from_short_coordinates(self, x, y):
        if self.form == "short":
            return x, y
        if self.form == "extended":
            return x - _third(self.coeffs[0]), y
        a1, a2, a3, _, _ = self.coeffs
        b2 = a1 * a1 + a2 * 4
        X = x - b2 * Fraction(1, 12)
        return X, y - (a1 * X + a3) * Fraction(1, 2)

    def contains(self, X, Y) -> bool:
        a1, a2, a3, a4, a6 = self.long_coefficients()
        lhs = Y * Y + X * Y * a1 + Y * a3
        rhs = X * X * X + X * X * a2 + X * a4 + a6
        return lhs == rhs

    def rhs(self, X):
        if self.form == "long":
            raise ValueError("long models have no single right-hand side")
        a1, a2, a3, a4, a6 = self.long_coefficients()
        return X * X * X + X * X * a2 + X * a4 + a6

    def map_coeffs(self, f) -> "SurfaceModel":
        return SurfaceModel(self.form, tuple(c.map_coeffs(f) for c in self.coeffs), self.substitution)

    def substitute_t(self, t_expr: Poly) -> "SurfaceModel":
        """Coefficient-wise composition with a polynomial t -> t_expr."""
        return SurfaceModel(self.form, tuple(Poly(c(t_expr)) if not c.is_zero() else c for c in self.coeffs))

    def twist(self, lam) -> "SurfaceModel":
        A, B = self.short_coefficients()
        return SurfaceModel.short(A * lam * lam, B * lam * lam * lam)

    def __eq__(self, o):
        return isinstance(o, SurfaceModel) and self.form == o.form and self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.form, self.coeffs))

    def __repr__(self):
        names = {"short": ("A", "B"), "extended": ("a2", "a4", "a6"),
                 "long": ("a1", "a2", "a3", "a4", "a6")}[self.form]
        inner = ", ".join(f"{n}={c}" for n, c in zip(names, self.coeffs))
        return f"SurfaceModel.{self.form}({inner})"


def _vinf(f: Poly, weight: int):
    """Valuation at t = infinity of a weight-w coefficient (None = infinite)."""
    return None if f.is_zero() else weight - f.degree()


def _ge(v, bound) -> bool:
    return v is None or v >= bound


def surface_discriminant(S: SurfaceModel):
    """(Delta(t), valuation of Delta at infinity = 24 - deg Delta)."""
    A, B = S.short_coefficients()
    D = (A * A * A * 4 + B * B * 27) * (-16)
    if D.is_zero():
        raise SingularModel("discriminant vanishes identically")
    return D, 24 - D.degree()


def k3_certificate(S: SurfaceModel) -> list[str]:
    """Reasons the short model fails to be a minimal K3 model (empty if it is one)."""
    A, B = S.short_coefficients()
    problems = []
    if A.degree() > 8:
        problems.append(f"deg A = {A.degree()} > 8")
    if B.degree() > 12:
        problems.append(f"deg B = {B.degree()} > 12")
    D = (A * A * A * 4 + B * B * 27) * (-16)
    if D.is_zero():
        problems.append("discriminant vanishes identically")
        return problems
    if problems:
        return problems
    if _ge(_vinf(A, 8), 4) and _ge(_vinf(B, 12), 6):
        problems.append("non-minimal at t = infinity")
    g = A if B.is_zero() else B if A.is_zero() else poly_gcd(A, B)
    if g.degree() >= 4:
        for part, e in squarefree_decomposition(g):
            if e < 4:
                continue
            for sub, (va, vb) in refine_group(part, [A, B]):
                if _ge(va, 4) and _ge(vb, 6):
                    problems.append(f"non-minimal at roots of {sub}")
    return problems


def to_short_form(S: SurfaceModel) -> SurfaceModel:
    A, B = S.short_coefficients()
    sub = {"short": "identity",
           "extended": "X -> X - a2/3",
           "long": "Y -> Y - (a1 X + a3)/2, then X -> X - b2/12"}[S.form]
    out = SurfaceModel("short", (A, B), sub)
    problems = k3_certificate(out)
    if problems:
        raise NotK3("; ".join(problems))
    return out


def specialize(S: SurfaceModel, value) -> SurfaceModel:
    """Evaluate every coefficient (a function of a parameter) at ``value``."""
    def ev(c):
        if isinstance(c, (RatFunc, Poly)):
            try:
                return c(value)
            except ZeroDivisionError:
                raise NeedsRenormalization(f"coefficient has a pole at {value}") from None
        return c
    out = S.map_coeffs(ev)
    problems = k3_certificate(out)
    if problems:
        raise NeedsRenormalization(f"specialization at {value} degenerates: " + "; ".join(problems))
    return out


# ---------------------------------------------------------------------------
# places and valuations


def _is_rational_field(f: Poly) -> bool:
    return all(isinstance(c, (int, Fraction)) for c in f.c)


def _field_prime(f: Poly) -> int | None:
    for c in f.c:
        if isinstance(c, Mod):
            return c.p
    return None


def split_by_valuation(g: Poly, f: Poly):
    """Split the squarefree g into pieces on whose roots v(f) is constant."""
    if f.is_zero():
        return [(g, None)]
    out = []
    cur_g, cur_f, level = g, f, 0
    while cur_g.degree() > 0:
        h = poly_gcd(cur_g, cur_f)
        rest = cur_g.exact_div(h) if h.degree() > 0 else cur_g
        if rest.degree() > 0:
            out.append((rest.monic(), level))
        if h.degree() <= 0:
            break
        cur_f = cur_f.exact_div(h)
        cur_g = h
        level += 1
    return out


def refine_group(g: Poly, fs: list[Poly]):
    """Pieces of g with constant valuation vector of the polynomials fs."""
    groups = [(g.monic(), ())]
    for f in fs:
        nxt = []
        for sub, vals in groups:
            for piece, v in split_by_valuation(sub, f):
                nxt.append((piece, vals + (v,)))
        groups = nxt
    return groups


def _split_linear(g: Poly) -> list[Poly]:
    """Split off rational (or F_p-rational) linear factors where cheap."""
    if g.degree() <= 1:
        return [g]
    if _is_rational_field(g):
        roots = rational_roots(g)
        out = []
        rest = g.map_coeffs(Fraction)
        for r in roots:
            lin = Poly((-r, Fraction(1)))
            out.append(lin)
            rest = rest.exact_div(lin)
        if rest.degree() > 0:
            out.append(rest.monic())
        return out
    p = _field_prime(g)
    if p is not None and p <= 2000:
        out, rest = [], g
        for x in range(p):
            if rest.degree() > 0 and rest(Mod(x, p)) == 0:
                lin = Poly((Mod(-x, p), Mod(1, p)))
                out.append(lin)
                rest = rest.exact_div(lin)
        if rest.degree() > 0:
            out.append(rest.monic())
        return out
    return [g]


@dataclass(frozen=True, eq=False)
class Place:
    """A point of P^1, or a Galois-stable group of points given by a squarefree poly."""

    poly: Poly | None

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree()

    @property
    def root(self):
        if self.poly is None or self.poly.degree() != 1:
            return None
        return -self.poly[0] * inverse(self.poly[1])

    def label(self) -> str:
        if self.poly is None:
            return "t=inf"
        r = self.root
        if r is not None:
            return f"t={r.format('p') if isinstance(r, RatFunc) else r}"
        return f"roots of {self.poly}"

    def __eq__(self, o):
        if not isinstance(o, Place):
            return NotImplemented
        if self.poly is None or o.poly is None:
            return self.poly is None and o.poly is None
        return self.poly == o.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"Place({self.label()})"


def make_place(place) -> Place:
    if isinstance(place, Place):
        return place
    if place is None or place == INF:
        return Place(None)
    if isinstance(place, Poly):
        return Place(place.monic())
    return Place(Poly((-place, 1)) if not isinstance(place, int) else Poly((Fraction(-place), Fraction(1))))


# ---------------------------------------------------------------------------
# Kodaira classification


def kodaira_from_valuations(va, vb, vd) -> tuple[str, int, tuple | None]:
    """(Kodaira symbol, Euler number, (root type, rank) or None) in characteristic 0."""
    if vd == 0:
        raise SmoothFiber("discriminant does not vanish here")
    if va == 0:
        n = vd
        return f"I{n}", n, (("A", n - 1) if n >= 2 else None)
    if va is not None and va >= 4 and vb is not None and vb >= 6:
        raise SingularModel("model is not minimal at this place")
    if (va is None or va >= 2) and vb == 3 or (va == 2 and (vb is None or vb >= 3)):
        if vd >= 6:
            n = vd - 6
            return (f"I{n}*", n + 6, ("D", n + 4))
    table = {2: ("II", None), 3: ("III", ("A", 1)), 4: ("IV", ("A", 2)),
             8: ("IV*", ("E", 6)), 9: ("III*", ("E", 7)), 10: ("II*", ("E", 8))}
    if vd in table:
        sym, lat = table[vd]
        return sym, EULER[sym], lat
    raise InternalError(f"unexpected valuations v(A)={va}, v(B)={vb}, v(Delta)={vd}")


@dataclass
class FiberDatum:
    place: Place
    kodaira: str
    euler: int
    lattice: tuple | None
    components_rational: bool | None
    valuations: tuple

    @property
    def count(self) -> int:
        return self.place.degree

    @property
    def lattice_label(self) -> str | None:
        return None if self.lattice is None else f"{self.lattice[0]}{self.lattice[1]}"

    def describe(self) -> str:
        extra = f" ({self.lattice_label})" if self.lattice else ""
        mult = f" x{self.count}" if self.count > 1 else ""
        return f"{self.kodaira}{extra} at {self.place.label()}{mult}"


@dataclass
class FiberConfiguration:
    fibers: list
    euler_total: int
    root_lattice: RootLatticeSum

    def reducible(self) -> list:
        return [f for f in self.fibers if f.lattice is not None]

    def at(self, place) -> FiberDatum | None:
        pl = make_place(place)
        for f in self.fibers:
            if f.place == pl:
                return f
        return None

    def kodaira_multiset(self) -> list[str]:
        out = []
        for f in self.fibers:
            out += [f.kodaira] * f.count
        return sorted(out)

    def describe(self) -> str:
        return "; ".join(f.describe() for f in self.fibers) + f"; R = {self.root_lattice}"


def _valuation(f: Poly, g: Poly):
    if f.is_zero():
        return None
    from .exactalg import multiplicity

    return multiplicity(f, g)


def _split_test(value) -> bool | None:
    try:
        return field_sqrt(value) is not None
    except (TypeError, NotImplementedError):
        return None


def _local_data(A: Poly, B: Poly, D: Poly, place: Place):
    if place.is_infinity:
        return _vinf(A, 8), _vinf(B, 12), 24 - D.degree()
    g = place.poly
    vals = refine_group(g, [A, B, D])
    if len(vals) != 1:
        raise ValueError(f"valuations are not constant on the roots of {g}")
    return vals[0][1]


def _classify(A, B, D, place: Place, vals) -> FiberDatum:
    va, vb, vd = vals
    sym, euler, lat = kodaira_from_valuations(va, vb, vd)
    rational = None
    if sym.startswith("I") and not sym.endswith("*") and lat is not None:
        if place.is_infinity:
            rational = _split_test(B[12] * 6) if B.degree() == 12 else None
        elif place.root is not None:
            rational = _split_test(B(place.root) * 6)
    return FiberDatum(place, sym, euler, lat, rational, (va, vb, vd))


def classify_fiber(S: SurfaceModel, place) -> FiberDatum:
    A, B = S.short_coefficients()
    D, vinf = surface_discriminant(S)
    pl = make_place(place)
    vals = _local_data(A, B, D, pl)
    if vals[2] == 0:
        raise SmoothFiber(f"fiber at {pl.label()} is smooth")
    return _classify(A, B, D, pl, vals)


def fiber_configuration(S: SurfaceModel) -> FiberConfiguration:
    A, B = S.short_coefficients()
    D, vinf = surface_discriminant(S)
    fibers = []
    for part, e in squarefree_decomposition(D):
        for piece, vals in refine_group(part, [A, B, D]):
            for sub in _split_linear(piece):
                pl = Place(sub.monic())
                fibers.append(_classify(A, B, D, pl, vals))
    if vinf > 0:
        pl = Place(None)
        fibers.append(_classify(A, B, D, pl, (_vinf(A, 8), _vinf(B, 12), vinf)))
    total = sum(f.euler * f.count for f in fibers)
    if total != 24:
        raise InternalError(f"Euler numbers sum to {total}, not 24")
    lat = []
    for f in fibers:
        if f.lattice is not None:
            lat += [f.lattice] * f.count
    fibers.sort(key=_fiber_sort_key)
    return FiberConfiguration(fibers, total, RootLatticeSum(tuple(lat)))


def _fiber_sort_key(f: FiberDatum):
    reducible = 0 if f.lattice is not None else 1
    inf = 1 if f.place.is_infinity else 0
    return (reducible, inf, f.place.degree, str(f.place.poly))


# ---------------------------------------------------------------------------
# sections and heights


@dataclass(frozen=True, eq=False)
class Section:
    """A section (X(t), Y(t)) of the model S, in that model's coordinates."""

    X: Any
    Y: Any
    model: SurfaceModel

    def __post_init__(self):
        for name in ("X", "Y"):
            v = getattr(self, name)
            if not isinstance(v, RatFunc):
                object.__setattr__(self, name, RatFunc(_P(v)))

    def short_xy(self):
        return self.model.to_short_coordinates(self.X, self.Y)

    def __neg__(self):
        x, y = self.short_xy()
        X, Y = self.model.from_short_coordinates(x, -y)
        return Section(X, Y, self.model)

    def __add__(self, o: "Section") -> "Section":
        return section_add(self, o)

    def __rmul__(self, n: int) -> "Section":
        return section_multiple(self, n)


def zero_section(S: SurfaceModel) -> None:
    """The zero section is represented by ``None``."""
    return None


def _generic_curve(S: SurfaceModel):
    A, B = S.short_coefficients()
    return WeierstrassCurve(0, 0, 0, RatFunc(A), RatFunc(B))


def section_add(P: Section | None, Q: Section | None) -> Section | None:
    if P is None:
        return Q
    if Q is None:
        return P
    S = P.model
    E = _generic_curve(S)
    from .exactalg.ec import EllipticCurvePoint

    p1 = EllipticCurvePoint(E, *P.short_xy())
    p2 = EllipticCurvePoint(E, *Q.short_xy())
    r = ec_add(p1, p2)
    if r.is_infinity:
        return None
    X, Y = S.from_short_coordinates(r.x, r.y)
    return Section(X, Y, S)


def section_multiple(P: Section | None, n: int) -> Section | None:
    if P is None:
        return None
    S = P.model
    E = _generic_curve(S)
    from .exactalg.ec import EllipticCurvePoint

    r = ec_multiple(EllipticCurvePoint(E, *P.short_xy()), n)
    if r.is_infinity:
        return None
    X, Y = S.from_short_coordinates(r.x, r.y)
    return Section(X, Y, S)


def section_from_x(S: SurfaceModel, X) -> Section:
    """Build the section with the given X (choosing one square root for Y)."""
    X = X if isinstance(X, RatFunc) else RatFunc(_P(X))
    if S.form == "long":
        raise NotImplementedError("section_from_x needs a short or extended model")
    rhs = S.rhs(X)
    Y = rhs.sqrt()
    if Y is None:
        raise NotASection("right-hand side is not a square in K(t)")
    return Section(X, Y, S)


@dataclass
class LocalCorrection:
    place: str
    kodaira: str
    component: str
    value: Fraction
    count: int = 1


@dataclass
class HeightBreakdown:
    naive: Fraction
    po: Fraction
    corrections: list = field(default_factory=list)
    height: Fraction = Fraction(0)
    ambiguous: list = field(default_factory=list)

    @property
    def is_torsion(self) -> bool:
        return self.height == 0

    def describe(self) -> str:
        parts = " - ".join(f"{c.value}" + (f"*{c.count}" if c.count > 1 else "") for c in self.corrections if c.value)
        return f"h = {self.naive}" + (f" - {parts}" if parts else "") + f" = {self.height}"


def _rf_val(f: RatFunc, g: Poly):
    """Valuation of a rational function along the squarefree g (None for 0)."""
    if f.num.is_zero():
        return None
    from .exactalg import multiplicity

    return multiplicity(f.num, g) - multiplicity(f.den, g)


def _rf_vinf(f: RatFunc, weight: int):
    if f.num.is_zero():
        return None
    return weight - f.degree()


def _contribution(fiber: FiberDatum, vx, vpsi2, vpsi3, vdx):
    """(component label, correction) for a section with given local valuations."""
    kind, n = fiber.lattice
    if vx is not None and vx < 0:
        return "0", Fraction(0)
    if not ((vpsi2 is None or vpsi2 > 0) and (vdx is None or vdx > 0)):
        return "0", Fraction(0)
    if kind == "A" and fiber.kodaira.startswith("I"):
        m = n + 1
        half = Fraction(m, 2)
        i = half if vpsi2 is None else min(Fraction(vpsi2), half)
        val = i * (m - i) / m
        lab = f"{i}" if i == m - i else f"{i} or {m - i}"
        return lab, val
    if vpsi2 is not None and (vpsi3 is None or vpsi3 >= 3 * vpsi2):
        val = Fraction(2, 3) * vpsi2
    else:
        val = Fraction(vpsi3, 4)
    if kind == "D":
        if val == 1 and n != 4:
            return "near", val
        return ("far" if n != 4 else "non-identity"), val
    return "non-identity", val


def verify_section(S: SurfaceModel, P: Section | None, config: FiberConfiguration | None = None) -> HeightBreakdown:
    """Check P lies on S and compute its canonical height with all local data."""
    if P is None:
        return HeightBreakdown(Fraction(4), Fraction(0), [], Fraction(0))
    if not S.contains(P.X, P.Y):
        raise NotASection("Y^2 differs from the right-hand side at X")
    if config is None:
        config = fiber_configuration(S)
    A, B = S.short_coefficients()
    x, y = S.to_short_coordinates(P.X, P.Y)
    Ar, Br = RatFunc(A), RatFunc(B)
    # P.O from poles of x (finite) and the chart at infinity
    po = Fraction(0)
    for part, e in squarefree_decomposition(x.den):
        if e % 2:
            raise NotASection("x has an odd-order pole")
        po += Fraction(e, 2) * part.degree()
    deg_x = x.degree()
    if deg_x > 4:
        if (deg_x - 4) % 2:
            raise NotASection("x has an odd-order pole at infinity")
        po += Fraction(deg_x - 4, 2)
    psi2 = y * 2
    psi3 = x ** 4 * 3 + Ar * x * x * 6 + Br * x * 12 - Ar * Ar
    dx = x * x * 3 + Ar
    corrections = []
    ambiguous = []
    for fib in config.reducible():
        if fib.place.is_infinity:
            vx = _rf_vinf(x, 4)
            vals = [(1, (vx, _rf_vinf(psi2, 6), _rf_vinf(psi3, 16), _rf_vinf(dx, 8)))]
            groups = [(fib.place, vals[0][1])]
        else:
            groups = []
            pieces = [(fib.place.poly, ())]
            for f in (x.den, x.num, psi2.num, psi3.num, dx.num):
                nxt = []
                for sub, vv in pieces:
                    for piece, v in split_by_valuation(sub, f):
                        nxt.append((piece, vv + (v,)))
                pieces = nxt
            for piece, (vden, vnum, vp2, vp3, vdx) in pieces:
                vx = (vnum if vnum is not None else None) if not vden else -vden
                groups.append((Place(piece), (vx, vp2, vp3, vdx)))
        for pl, (vx, vp2, vp3, vdx) in groups:
            lab, val = _contribution(fib, vx, vp2, vp3, vdx)
            if " or " in lab:
                ambiguous.append((pl.label(), lab))
            corrections.append(LocalCorrection(pl.label(), fib.kodaira, lab, val, pl.degree))
    naive = 4 + 2 * po
    h = naive - sum((c.value * c.count for c in corrections), Fraction(0))
    if h < 0:
        raise InternalError(f"negative height {h}")
    return HeightBreakdown(naive, po, corrections, h, ambiguous)


def canonical_height(S: SurfaceModel, P: Section | None, config=None) -> Fraction:
    return verify_section(S, P, config).height


def height_pairing(S: SurfaceModel, P: Section | None, Q: Section | None, config=None) -> Fraction:
    """<P, Q> = (h(P+Q) - h(P) - h(Q)) / 2 via the generic-fiber group law."""
    if config is None:
        config = fiber_configuration(S)
    hp = canonical_height(S, P, config)
    hq = canonical_height(S, Q, config)
    hs = canonical_height(S, section_add(P, Q), config)
    return (hs - hp - hq) / 2


def height_gram(S: SurfaceModel, basis: list, config=None) -> list[list[Fraction]]:
    if config is None:
        config = fiber_configuration(S)
    n = len(basis)
    h = [canonical_height(S, P, config) for P in basis]
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = h[i]
        for j in range(i + 1, n):
            s = canonical_height(S, section_add(basis[i], basis[j]), config)
            g[i][j] = g[j][i] = (s - h[i] - h[j]) / 2
    return g


def ns_discriminant(S: SurfaceModel, R: RootLatticeSum, basis: list, torsion: int = 1, config=None) -> Fraction:
    """|disc NS| = disc(R) * Reg(MW) / tau^2."""
    gram = height_gram(S, basis, config) if basis else []
    reg = determinant(gram) if gram else Fraction(1)
    if reg == 0:
        raise DependentSections("height Gram matrix is singular")
    return Fraction(R.disc) * reg / (torsion * torsion)


def minimal_section_height(R: RootLatticeSum, assignment, po: int = 0) -> Fraction:
    from .nslattice import minimal_section_height as msh

    return msh(R, assignment, po)


# ---------------------------------------------------------------------------
# the valuation lemma for extended models


@dataclass
class ABCReport:
    nu: int
    mu: int | None
    v_delta: int
    v_disc: int | None
    clause_ge_2nu: bool
    clause_3nu: bool
    clause_exact: bool | None

    @property
    def ok(self) -> bool:
        return self.clause_ge_2nu and self.clause_3nu and self.clause_exact is not False


def _val_at(f: Poly, t0):
    if f.is_zero():
        return None
    g = f.shift(t0) if t0 != 0 else f
    return g.valuation()


def abc_trick_check(a: Poly, b: Poly, c: Poly, t0=0) -> ABCReport:
    """Valuation lemma for Y^2 = X^3 + a X^2 + 2 b X + c at t = t0.

    Requires a(t0) != 0, v(b) = nu > 0 and v(c) >= 2 nu.  With v(b^2 - a c) = 2 nu + mu:
    v(Delta) >= 2 nu always,
    v(Delta) >= 3 nu iff v(b^2 - a c) >= 3 nu, and v(Delta) = 2 nu + mu when mu < nu.
    """
    a, b, c = _P(a), _P(b), _P(c)
    vb, vc = _val_at(b, t0), _val_at(c, t0)
    if vb is None:
        raise PreconditionViolated("b vanishes identically, so nu is undefined")
    nu = vb
    if vc is not None and vc < 2 * nu:
        raise PreconditionViolated(f"v(c) = {vc} < 2 nu = {2 * nu}")
    if nu == 0:
        raise PreconditionViolated("nu must be positive")
    if _val_at(a, t0) != 0:
        # with a(t0) = 0 the cubic has a triple root there and b^2 - a c no longer controls Delta
        raise PreconditionViolated("a must not vanish at t0")
    D, _ = surface_discriminant(SurfaceModel.abc(a, b, c))
    vd = _val_at(D, t0)
    disc = b * b - a * c
    vdisc = _val_at(disc, t0)
    mu = None if vdisc is None else vdisc - 2 * nu
    c1 = vd >= 2 * nu
    c2 = (vd >= 3 * nu) == (vdisc is None or vdisc >= 3 * nu)
    c3 = None if mu is None or mu >= nu else (vd == 2 * nu + mu)
    return ABCReport(nu, mu, vd, vdisc, c1, c2, c3)


__all__ = [
    "ABCReport", "DependentSections", "FiberConfiguration", "FiberDatum", "HeightBreakdown",
    "INF", "InternalError", "LocalCorrection", "NeedsRenormalization", "NotASection", "NotK3",
    "Place", "PreconditionViolated", "Section", "SingularModel", "SmoothFiber", "SurfaceModel",
    "abc_trick_check", "canonical_height", "classify_fiber", "fiber_configuration", "height_gram",
    "height_pairing", "k3_certificate", "kodaira_from_valuations", "make_place",
    "minimal_section_height", "ns_discriminant", "refine_group", "section_add", "section_from_x",
    "section_multiple", "specialize", "split_by_valuation", "surface_discriminant", "to_short_form",
    "verify_section",
]
