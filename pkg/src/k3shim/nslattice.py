"""Root lattices, discriminant forms and the local conditions for L_N.

Component conventions for fibers (used by sections and glue data):

* ``A_n``: components 0..n around the cycle, 0 the identity component.
* ``D_n``: 0 identity, 1 the other simple component next to it ("near"),
  2 and 3 the two simple components at the far end ("far").
* ``E6``: 0 identity, 1 and 2 the other simple components.
* ``E7``: 0 identity, 1 the other simple component.
* ``E8``: only the identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod

from .exactalg.errors import K3ShimError
from .exactalg.scalars import legendre_symbol


class WrongDiscriminant(K3ShimError):
    pass


class InvalidAssignment(K3ShimError, ValueError):
    pass


_ORDER = {"A": 0, "D": 1, "E": 2}


def _valid(kind: str, n: int) -> bool:
    return (kind == "A" and n >= 1) or (kind == "D" and n >= 4) or (kind == "E" and 6 <= n <= 8)


@dataclass(frozen=True)
class RootLatticeSum:
    factors: tuple = ()

    def __post_init__(self):
        fs = []
        for kind, n in self.factors:
            if not _valid(kind, n):
                raise ValueError(f"no root lattice {kind}{n}")
            fs.append((kind, int(n)))
        object.__setattr__(self, "factors", tuple(sorted(fs, key=lambda f: (_ORDER[f[0]], f[1]))))

    @classmethod
    def parse(cls, text: str) -> "RootLatticeSum":
        text = text.strip()
        if text in ("", "0"):
            return cls(())
        out = []
        for part in re.split(r"[+⊕, ]+", text):
            if not part:
                continue
            m = re.fullmatch(r"([ADE])_?(\d+)", part)
            if not m:
                raise ValueError(f"cannot parse root lattice {part!r}")
            out.append((m.group(1), int(m.group(2))))
        return cls(tuple(out))

    def __add__(self, o: "RootLatticeSum") -> "RootLatticeSum":
        return RootLatticeSum(self.factors + o.factors)

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.factors)

    @property
    def disc(self) -> int:
        return root_lattice_disc(self)

    def __str__(self):
        return "+".join(f"{k}{n}" for k, n in self.factors) or "0"

    def __len__(self):
        return len(self.factors)


def simple_disc(kind: str, n: int) -> int:
    if kind == "A":
        return n + 1
    if kind == "D":
        return 4
    return 9 - n


def root_lattice_disc(R: RootLatticeSum) -> int:
    return prod(simple_disc(k, n) for k, n in R.factors)


@lru_cache(maxsize=None)
def cartan_matrix(kind: str, n: int) -> tuple:
    """Cartan (Gram) matrix with the node numbering of the module docstring."""
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
    edges = []
    if kind == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif kind == "E":
        edges = [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    for i, j in edges:
        c[i][j] = c[j][i] = -1
    return tuple(tuple(r) for r in c)


def _inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def determinant(m) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


@lru_cache(maxsize=None)
def inverse_cartan(kind: str, n: int) -> tuple:
    return tuple(tuple(r) for r in _inverse(cartan_matrix(kind, n)))


def component_root(kind: str, n: int, comp) -> int | None:
    """0-based simple-root index of a fiber component (None for the identity)."""
    comp = normalize_component(kind, n, comp)
    if comp == 0:
        return None
    if kind == "A":
        return comp - 1
    if kind == "D":
        return {1: 0, 2: n - 2, 3: n - 1}[comp]
    if kind == "E" and n == 6:
        return {1: 0, 2: 4}[comp]
    if kind == "E" and n == 7:
        return 5
    raise InvalidAssignment(f"component {comp} of {kind}{n}")


def normalize_component(kind: str, n: int, comp) -> int:
    if isinstance(comp, str):
        if comp in ("identity", "id", "0"):
            return 0
        if kind == "D" and comp == "near":
            return 1
        if kind == "D" and comp == "far":
            return 2
        try:
            comp = int(comp)
        except ValueError:
            raise InvalidAssignment(f"unknown component {comp!r} for {kind}{n}") from None
    limit = {"A": n, "D": 3, "E": {6: 2, 7: 1, 8: 0}[n] if kind == "E" else 0}[kind]
    if not 0 <= comp <= limit:
        raise InvalidAssignment(f"component {comp} out of range for {kind}{n}")
    return comp


def component_contribution(kind: str, n: int, comp) -> Fraction:
    """Height correction for a section meeting the given component."""
    comp = normalize_component(kind, n, comp)
    if comp == 0:
        return Fraction(0)
    if kind == "A":
        return Fraction(comp * (n + 1 - comp), n + 1)
    if kind == "D":
        return Fraction(1) if comp == 1 else Fraction(n, 4)
    return {6: Fraction(4, 3), 7: Fraction(3, 2)}[n]


@dataclass(frozen=True)
class DiscriminantForm:
    """Finite quadratic module: generators of given orders, Gram of b mod 1, q mod 2."""

    orders: tuple
    qvals: tuple
    bvals: tuple = ()

    @property
    def size(self) -> int:
        return prod(self.orders) if self.orders else 1

    def b(self, i: int, j: int) -> Fraction:
        if i == j:
            return self.qvals[i] / 2
        for (a, c, v) in self.bvals:
            if {a, c} == {i, j}:
                return v
        return Fraction(0)

    def q(self, x) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            total += xi * xi * self.qvals[i]
            for j in range(i + 1, len(x)):
                total += 2 * xi * x[j] * self.b(i, j)
        return total % 2

    def elements(self):
        def rec(i):
            if i == len(self.orders):
                yield ()
                return
            for rest in rec(i + 1):
                for v in range(self.orders[i]):
                    yield (v,) + rest
        return list(rec(0))

    def values(self) -> list[Fraction]:
        return sorted(self.q(x) for x in self.elements())


def _simple_form(kind: str, n: int):
    if kind == "A":
        return [(n + 1, Fraction(n, n + 1))], []
    if kind == "D":
        if n % 2:
            return [(4, Fraction(n, 4) % 2)], []
        return [(2, Fraction(n, 4) % 2), (2, Fraction(1))], [(0, 1, Fraction(1, 2))]
    if n == 6:
        return [(3, Fraction(4, 3))], []
    if n == 7:
        return [(2, Fraction(3, 2))], []
    return [], []


def discriminant_form(R: RootLatticeSum) -> DiscriminantForm:
    """Orthogonal sum of the standard A/D/E discriminant forms."""
    orders, qvals, bvals = [], [], []
    for kind, n in R.factors:
        gens, bs = _simple_form(kind, n)
        base = len(orders)
        for o, q in gens:
            orders.append(o)
            qvals.append(q)
        for i, j, v in bs:
            bvals.append((base + i, base + j, v))
    return DiscriminantForm(tuple(orders), tuple(qvals), tuple(bvals))


class GramDiscriminantGroup:
    """L*/L with its quadratic form, computed from an integral Gram matrix."""

    def __init__(self, gram):
        self.gram = [[Fraction(x) for x in row] for row in gram]
        for row in self.gram:
            for x in row:
                if x.denominator != 1:
                    raise WrongDiscriminant("Gram matrix is not integral")
        self.n = len(gram)
        self.det = determinant(self.gram)
        inv = _inverse(self.gram)
        gens = []
        for j in range(self.n):
            v = tuple(inv[i][j] % 1 for i in range(self.n))
            if any(v):
                gens.append(v)
        seen = {tuple([Fraction(0)] * self.n)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple((a + b) % 1 for a, b in zip(x, g))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        self.elements = sorted(seen)

    @property
    def size(self) -> int:
        return len(self.elements)

    def q(self, y) -> Fraction:
        g = self.gram
        total = Fraction(0)
        for i in range(self.n):
            if y[i]:
                for j in range(self.n):
                    if y[j]:
                        total += y[i] * g[i][j] * y[j]
        return total % 2

    def order(self, y) -> int:
        o = 1
        for v in y:
            o = o * v.denominator // _gcd(o, v.denominator)
        return o

    def values(self) -> list[Fraction]:
        return sorted(self.q(y) for y in self.elements)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def block_cartan(R: RootLatticeSum):
    n = R.rank
    m = [[0] * n for _ in range(n)]
    off = 0
    for kind, k in R.factors:
        c = cartan_matrix(kind, k)
        for i in range(k):
            for j in range(k):
                m[off + i][off + j] = c[i][j]
        off += k
    return m


@dataclass(frozen=True)
class GlueData:
    """Mordell-Weil generators as fiber-component incidences.

    ``assignments[i][f]`` is the component met by generator i on the f-th
    factor of R; ``mw_gram`` is their height-pairing matrix.
    """

    assignments: tuple
    mw_gram: tuple
    torsion: int = 1


def glue_from_incidences(R: RootLatticeSum, assignments, po=(0,), torsion: int = 1) -> GlueData:
    """Single- or multi-generator glue with heights from the contribution table."""
    if len(assignments) != 1:
        raise ValueError("heights of several generators need an explicit Gram matrix")
    h = minimal_section_height(R, assignments[0], po[0])
    return GlueData(tuple(tuple(a) for a in assignments), ((h,),), torsion)


def minimal_section_height(R: RootLatticeSum, assignment, po: int = 0) -> Fraction:
    """4 + 2 (P.O) minus the contributions of the assigned components."""
    if len(assignment) != len(R.factors):
        raise InvalidAssignment("one component per reducible fiber is required")
    total = Fraction(4 + 2 * po)
    for (kind, n), comp in zip(R.factors, assignment):
        total -= component_contribution(kind, n, comp)
    return total


def essential_gram(R: RootLatticeSum, glue: GlueData | None = None):
    """Gram matrix of the essential lattice on roots plus MW generator vectors."""
    base = block_cartan(R)
    if glue is None or not glue.assignments:
        return base
    r = R.rank
    k = len(glue.assignments)
    n = r + k
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(r):
        for j in range(r):
            g[i][j] = Fraction(base[i][j])
    roots = []
    for a in glue.assignments:
        idx = []
        off = 0
        for (kind, m), comp in zip(R.factors, a):
            ri = component_root(kind, m, comp)
            idx.append(None if ri is None else (off + ri, kind, m, ri))
            off += m
        roots.append(idx)
    for p, idx in enumerate(roots):
        for entry in idx:
            if entry is not None:
                g[entry[0]][r + p] = g[r + p][entry[0]] = Fraction(-1)
    for p in range(k):
        for q in range(k):
            val = Fraction(glue.mw_gram[p][q])
            for e1, e2 in zip(roots[p], roots[q]):
                if e1 is not None and e2 is not None:
                    val += inverse_cartan(e1[1], e1[2])[e1[3]][e2[3]]
            g[r + p][r + q] = val
    return g


def prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


@dataclass
class LocalVerdict:
    p: int
    c: int | None
    required: bool
    passed: bool
    note: str = ""


@dataclass
class LNReport:
    N: int
    disc: int
    verdicts: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts if v.required)

    def witness(self, p: int) -> int | None:
        for v in self.verdicts:
            if v.p == p:
                return v.c
        return None


def check_LN_conditions(N: int, R: RootLatticeSum, glue: GlueData | None = None) -> LNReport:
    """Check |disc| = 2N and, at each odd p | N, a class of norm c/p with
    chi_p(c) = -chi_p(2N/p)."""
    ps = prime_factors(N)
    if any(N % (p * p) == 0 for p in ps) or len(ps) % 2:
        raise ValueError(f"N={N} must be squarefree with an even number of prime factors")
    gram = essential_gram(R, glue)
    grp = GramDiscriminantGroup(gram)
    disc = abs(grp.det)
    if disc != 2 * N or grp.size != 2 * N:
        raise WrongDiscriminant(f"|disc| = {disc}, expected {2 * N}")
    report = LNReport(N, int(disc))
    report.notes.append("condition at 2 holds automatically and is not re-verified")
    odd = [p for p in ps if p != 2]
    skipped = odd[-1] if N % 2 and odd else None
    if skipped is not None:
        report.notes.append(f"condition at p={skipped} is implied by the others (N odd)")
    for p in odd:
        best = None
        for y in grp.elements:
            o = grp.order(y)
            if o == 1 or o % p or any(o % q == 0 for q in ps if q != p):
                continue
            c = grp.q(y) * p
            if c.denominator != 1:
                continue
            c = int(c) % (2 * p)
            if best is None or c < best:
                best = c
        target = -legendre_symbol(2 * N // p, p)
        ok = best is not None and legendre_symbol(best, p) == target
        report.verdicts.append(LocalVerdict(p, best, p != skipped, ok,
                                            f"chi_{p}({best}) = {legendre_symbol(best, p) if best is not None else None}, "
                                            f"-chi_{p}({2 * N // p}) = {target}"))
    return report


__all__ = [
    "DiscriminantForm", "GlueData", "GramDiscriminantGroup", "InvalidAssignment", "LNReport",
    "LocalVerdict", "RootLatticeSum", "WrongDiscriminant", "block_cartan", "cartan_matrix",
    "check_LN_conditions", "component_contribution", "component_root", "determinant",
    "discriminant_form", "essential_gram", "glue_from_incidences", "inverse_cartan",
    "minimal_section_height", "prime_factors", "root_lattice_disc",
]

