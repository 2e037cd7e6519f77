"""CM catalogs for N = 6, 14, 57, 206 with machine-checkable witnesses."""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from ..ellsurf import (
    INF,
    SurfaceModel,
    fiber_configuration,
    height_gram,
    section_from_x,
    section_multiple,
    verify_section,
)
from ..exactalg import NumberField, Poly, RatFunc, VerificationFailed, poly_discriminant, rational_sqrt
from ..nslattice import RootLatticeSum, determinant
from . import n6, n14, n57, n206
from .common import CatalogCorrupt, CMRecord, CMReport, FamilyDescriptor, Witness

F = Fraction


def build_family(N: int) -> FamilyDescriptor:
    builders = {6: n6.build, 14: n14.build, 57: n57.build}
    if N not in builders:
        raise ValueError(f"no family builder for N={N}; choose 6, 14 or 57")
    return builders[N]()


def involution(N: int, value):
    """The Atkin-Lehner involution on the parameter (a point of 57a1 for N = 57)."""
    table = {6: n6.involution, 14: n14.involution, 57: n57.involution, 206: n206.involution}
    if N not in table:
        raise ValueError(f"no involution recorded for N={N}")
    return table[N](value)


def _t():
    return Poly.x(F(1))


def _generic57(r):
    return n57.section_x(F(r), _t())


def _catalog6() -> list[CMRecord]:
    return [
        CMRecord(6, INF, -3, Witness("chart", ("chart", "N6:near_infinity"), "A2+E8+E8",
                                     note="b = 1/beta^3 with beta -> 0: t=0 fiber becomes II*, t=1 becomes IV"),
                 "1 + 27b/16 = inf"),
        CMRecord(6, F(0), -4, Witness("chart", ("chart", "N6:near_zero"), "D10+E8",
                                      note="b = beta^4 with beta -> 0: A2 and D7 merge to D10"),
                 "1 + 27b/16 = 1"),
        CMRecord(6, F(-16, 27), -24, Witness("degeneration", ("family", 6, F(-16, 27)), "A1+A2+D7+E8",
                                             note="27b(t^2 - t) - 4 acquires a double root"),
                 "1 + 27b/16 = 0"),
        CMRecord(6, F(81, 64), -19, Witness("section", ("family", 6, F(81, 64)), "A2+D7+E8",
                                            sections=(n6.cm19_section_x(),),
                                            note="X = b(t^2 - t^3)(1 - 9t), height 19/12"),
                 "1 + 27b/16 = 3211/1024"),
    ]


def _catalog14() -> list[CMRecord]:
    return [
        CMRecord(14, F(0), -8, Witness("degeneration", ("family", 14, F(0)), "A3+E7+E8",
                                       note="the A6 fiber becomes E7"), "s = 0; -s/(s+1) = 0"),
        CMRecord(14, F(-1, 2), -11, Witness("degeneration", ("family", 14, F(-1, 2)), "A10+E8",
                                            note="the A3 and A6 fibers merge"), "s = inf; -s/(s+1) = -1"),
        CMRecord(14, n14.D56_POLY, -56, Witness("degeneration", ("orbit", "N14:d56"), "A1+A3+A6+E8",
                                                note="extra I2 fiber over Q(s0), 11 s0^2 + 3 s0 + 8 = 0"),
                 "16t^2 + 13t + 8 = 0 for t = -s/(s+1)"),
        CMRecord(14, F(-35, 44), -67, Witness("section", ("family", 14, F(-35, 44)), "A3+A6+E8",
                                              sections=(n14.cm67_section_x(),),
                                              note="height 67/28 = 4 - 3/4 - 6/7"),
                 "s = -1225/1144; -s/(s+1) = -1225/81"),
    ]


def _catalog57() -> list[CMRecord]:
    t = _t()
    recs = [
        CMRecord(57, F(2), -7, Witness("section", ("family", 57, F(2)), "A5+A12",
                                       sections=(n57.extra_section_x(2)[0],),
                                       note="A11 becomes A12; the generic section is 3 times (-972t, 26244t^2)"),
                 "+-1P on 57a1"),
        CMRecord(57, F(1), -4, Witness("chart", ("chart", "N57:r=1"), "D18",
                                       note="fibers and section merge into I14*"), "+-2P on 57a1"),
        CMRecord(57, F(-1), -16, Witness("chart", ("chart", "N57:r=-1"), "A17",
                                         sections=(Poly((F(-108),)),),
                                         note="the generic section tends to X = -108, height 8/9"),
                 "+-3P on 57a1"),
    ]
    for r, D, n in ((F(0), -28, 4), (F(5, 4), -43, 5), (F(13, 9), -163, 8)):
        recs.append(CMRecord(57, r, D, Witness("section", ("family", 57, r), "A5+A11",
                                               sections=(_generic57(r), n57.extra_section_x(r)[0])),
                             f"+-{n}P on 57a1"))
    recs.append(CMRecord(57, INF, -19, Witness("chart", ("chart", "N57:r=inf"), "A11+D6",
                                               sections=(4 * t ** 3 - 8 * t ** 2,), torsion=(-4 * t,),
                                               note="2-torsion (-4t, 0)"),
                         "point at infinity of 57a1"))
    recs.append(CMRecord(57, F(5), -123, Witness("section", ("family", 57, F(5)), "A5+A12",
                                                 sections=(_generic57(5),),
                                                 note="A12 fiber; section height 41/26")))
    for r, D in ((F(1, 2), -24), (F(17, 16), -267), (F(-7, 4), -627)):
        X, fp = n57.extra_section_x(r)
        recs.append(CMRecord(57, r, D, Witness("section", ("family", 57, r), "A5+A11",
                                               sections=(_generic57(r), X), field_poly=fp)))
    return recs


def _catalog206() -> list[CMRecord]:
    out = []
    for r, D in ((F(0), -4), (F(1), -19), (F(2), -163), (INF, -8)):
        out.append(CMRecord(206, r, D, Witness("branch", ("branch", r)),
                            "r0 = r^2 = " + ("inf" if r == INF else str(r * r))))
    out.append(CMRecord(206, n206.p10_of_square(), n206.BRANCH_D,
                        Witness("branch", ("branch-orbit",), note="the 20 roots of P10(r^2)"),
                        "class number of Q(sqrt(-206)) is 20"))
    return out


def cm_catalog(N: int, verify: bool = False) -> list[CMRecord]:
    """The CM records for N; with ``verify`` every witness is re-checked (CatalogCorrupt on failure)."""
    table = {6: _catalog6, 14: _catalog14, 57: _catalog57, 206: _catalog206}
    if N not in table:
        raise ValueError(f"no CM catalog for N={N}; choose 6, 14, 57 or 206")
    recs = table[N]()
    if verify:
        verify_catalog(recs)
    return recs


def verify_catalog(records: list[CMRecord]) -> list[CMReport]:
    out = []
    for rec in records:
        try:
            out.append(verify_cm_record(rec))
        except VerificationFailed as e:
            raise CatalogCorrupt(f"record N={rec.N} D={rec.D}: {e}") from e
    return out


def witness_surface(w: Witness) -> SurfaceModel:
    kind = w.surface[0]
    if kind == "family":
        _, N, value = w.surface
        return build_family(N).surface(value)
    if kind == "chart":
        name = w.surface[1]
        if name.startswith("N6:"):
            return n6.n6_chart(name[3:], 0)
        if name.startswith("N57:"):
            return n57.chart_surface(name[4:])
    if kind == "orbit" and w.surface[1] == "N14:d56":
        return n14.d56_surface()
    raise ValueError(f"unknown witness surface {w.surface!r}")


def _extend(S: SurfaceModel, X, field_poly):
    """Base-change the surface and X to Q[x]/(field_poly)."""
    K = NumberField(field_poly, "w")
    lift = lambda c: K(c)  # noqa: E731
    S2 = S.map_coeffs(lift)
    X2 = X.map_coeffs(lift) if isinstance(X, (Poly, RatFunc)) else K(X)
    return S2, X2


def _verify_branch(rec: CMRecord) -> CMReport:
    w = rec.witness
    if w.surface[0] == "branch-orbit":
        q = rec.parameter
        d = poly_discriminant(q)
        h = n206.class_number(rec.D)
        ok = q.degree() == h and d != 0
        if not ok:
            raise VerificationFailed(f"N=206 branch orbit for D={rec.D}", h, q.degree())
        return CMReport(rec, None, [], [], F(-rec.D), None, True, f"degree {q.degree()} = h({rec.D})")
    r = w.surface[1]
    v = F(n206.P10.lc) if r == INF else F(n206.p10_of_square()(r))
    ok = rational_sqrt(v / (-rec.D)) is not None
    if not ok:
        raise VerificationFailed(f"P10(r^2) at r={r} is -D times a square", -rec.D, v)
    return CMReport(rec, None, [], [], F(-rec.D), None, True, f"P10(r^2) = {v}")


def _torsion_order(T) -> int:
    for n in range(2, 13):
        if section_multiple(T, n) is None:
            return n
    raise VerificationFailed("torsion section order", "at most 12", "larger")


_CHART_PARAMETERS = {"N6:near_infinity": INF, "N6:near_zero": F(0)}


def witness_parameter(w: Witness):
    """The parameter value the witness surface sits at, or None for Galois orbits."""
    kind = w.surface[0]
    if kind == "family":
        return w.surface[2]
    if kind == "branch":
        return w.surface[1]
    if kind == "chart":
        name = w.surface[1]
        if name in _CHART_PARAMETERS:
            return _CHART_PARAMETERS[name]
        if name.startswith("N57:r="):
            value = name[len("N57:r="):]
            return INF if value == "inf" else F(value)
    return None


def verify_cm_record(rec: CMRecord) -> CMReport:
    """Recompute the witness and compare |disc NS| with |D|; VerificationFailed on mismatch."""
    w = rec.witness
    at = witness_parameter(w)
    if at is not None and at != rec.parameter:
        raise VerificationFailed(f"witness parameter for N={rec.N} D={rec.D}", rec.parameter_label(), at)
    if w.surface[0] == "family" and w.surface[1] != rec.N:
        raise VerificationFailed(f"witness family for the N={rec.N} record", rec.N, w.surface[1])
    if w.kind == "branch":
        return _verify_branch(rec)
    S = witness_surface(w)
    sections, torsion = list(w.sections), list(w.torsion)
    if w.field_poly is not None:
        S0 = S
        lifted = [_extend(S0, X, w.field_poly) for X in sections + torsion]
        if lifted:
            S = lifted[0][0]
        sections = [x for _, x in lifted[:len(sections)]]
        torsion = [x for _, x in lifted[len(sections):]]
    cfg = fiber_configuration(S)
    R = cfg.root_lattice
    if w.root_lattice is not None and R != RootLatticeSum.parse(w.root_lattice):
        raise VerificationFailed(f"root lattice for N={rec.N} D={rec.D}", w.root_lattice, str(R))
    secs = [section_from_x(S, X) for X in sections]
    tors = [section_from_x(S, X) for X in torsion]
    for T in tors:
        if verify_section(S, T, cfg).height != 0:
            raise VerificationFailed("torsion section height", 0, verify_section(S, T, cfg).height)
    heights = [verify_section(S, P, cfg).height for P in secs]
    gram = height_gram(S, secs, cfg) if secs else []
    reg = determinant(gram) if gram else F(1)
    tau = 1
    for T in tors:  # listed torsion sections are independent generators
        tau *= _torsion_order(T)
    disc = F(R.disc) * reg / (tau * tau)
    picard = 2 + R.rank + len(secs)
    ok = disc == -rec.D and picard == 20
    if not ok:
        raise VerificationFailed(f"|disc NS| for N={rec.N} at {rec.parameter_label()}",
                                 (-rec.D, 20), (disc, picard))
    return CMReport(rec, R, heights, gram, disc, picard, True, w.note)


def record_summary(rep: CMReport) -> dict[str, Any]:
    rec = rep.record
    return {
        "N": rec.N,
        "parameter": rec.parameter_label(),
        "D": rec.D,
        "witness": rec.witness.kind,
        "root_lattice": None if rep.root_lattice is None else str(rep.root_lattice),
        "heights": [str(h) for h in rep.heights],
        "disc": str(rep.disc),
        "picard": rep.picard,
        "ok": rep.ok,
        "cross_reference": rec.cross_reference,
    }
