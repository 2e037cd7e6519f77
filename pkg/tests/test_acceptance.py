"""Acceptance criteria 1 to 9, one test per clause.

Each test carries a ``criterion`` marker; ``conftest.py`` folds the clause
outcomes into one PASS/FAIL line per criterion at the end of the run.  A
criterion passes only when every clause passes.  Running this file as a
script prints the same lines without pytest.

Two clauses state values that do not hold (the sign of Delta for the N=6
family and the Y-coordinate of the r=2 generator on N=57).  They are written
exactly as stated and marked ``xfail(strict=True)``: they report as failures
of their criterion, and the suite breaks if they ever start to pass.
"""
import random
import sys
import time
from fractions import Fraction as F

import pytest

from k3shim.cases import build_family, cm_catalog, n14, n57, n57_rational_points, n6
from k3shim.cases.catalog import verify_cm_record
from k3shim.cases.common import shioda_hall_a18_surface
from k3shim.cases.n206 import P10, class_number, p10_of_square, x206_verify
from k3shim.cli import main as cli_main
from k3shim.cmsearch import SearchSpec, count_points_mod_p, find_cm_point
from k3shim.ellsurf import (
    INF,
    SurfaceModel,
    abc_trick_check,
    fiber_configuration,
    section_from_x,
    section_multiple,
    surface_discriminant,
    verify_section,
)
from k3shim.exactalg import Padic, Poly, RatFunc, field_sqrt, rational_reconstruct, rational_sqrt
from k3shim.igusa import (
    IgusaClebsch,
    igusa_for_n6,
    kumar_forward,
    kumar_inverse,
    n6_e7e8_mw_report,
    n6_refibration_target,
    refiber_n6,
    weighted_ratio,
)
from k3shim.nslattice import RootLatticeSum, check_LN_conditions, glue_from_incidences

SIGN_ANALYSIS = ("the stated Delta has the wrong overall sign: Tate's formula gives "
                 "-16 b^3 t^9 (t-1)^3 (27b(t^2-t)-4); the corrected clause holds")
Y_ANALYSIS = ("(-972t, 26244t^2) is not on the r=2 surface: RHS(-972t) = 26244^2 t^2, so Y = 26244t; "
              "with that Y the height 7/78 and disc 7 clauses hold")


def _q(N: int, D: int):
    return next(r for r in cm_catalog(N) if r.D == D)


def _rlat(S) -> str:
    return str(fiber_configuration(S).root_lattice)


def _bt():
    b = RatFunc.gen(F(1))
    return b, Poly((b * 0, b ** 0))


# ---------------------------------------------------------------------------
# 1. the N=6 discriminant


def _n6_delta_expected(sign):
    b, t = _bt()
    return (t ** 9 * (t - 1) ** 3 * (t * t * b * 27 - t * b * 27 - 4)) * (b ** 3 * 16 * sign)


@pytest.mark.criterion(1)
@pytest.mark.xfail(strict=True, reason=SIGN_ANALYSIS)
def test_c1_delta_as_stated():
    assert surface_discriminant(build_family(6).surface())[0] == _n6_delta_expected(1)


@pytest.mark.criterion(1)
def test_c1_delta_corrected_sign():
    assert surface_discriminant(build_family(6).surface())[0] == _n6_delta_expected(-1)


# ---------------------------------------------------------------------------
# 2. fiber suites


def _euler24(S):
    cfg = fiber_configuration(S)
    assert cfg.euler_total == 24
    return cfg


@pytest.mark.criterion(2)
def test_c2_n6_generic():
    assert str(_euler24(build_family(6).surface()).root_lattice) == "A2+D7+E8"


@pytest.mark.criterion(2)
def test_c2_a18_surface():
    cfg = _euler24(shioda_hall_a18_surface())
    assert cfg.at(INF).kodaira == "I19" and str(cfg.root_lattice) == "A18"


@pytest.mark.criterion(2)
def test_c2_d18_surface():
    cfg = _euler24(n57.shioda_hall_d18_surface())
    assert cfg.at(INF).kodaira == "I14*" and str(cfg.root_lattice) == "D18"


@pytest.mark.criterion(2)
def test_c2_d6_surface_with_torsion():
    S = n57.d6_a11_surface()
    cfg = _euler24(S)
    assert cfg.at(0).kodaira == "I2*" and cfg.at(0).lattice == ("D", 6)
    t = Poly.x(F(1))
    T = section_from_x(S, -4 * t)
    assert T.Y == Poly() and section_multiple(T, 2) is None


@pytest.mark.criterion(2)
def test_c2_chart_near_zero():
    assert str(_euler24(n6.n6_chart("near_zero", 0)).root_lattice) == "D10+E8"


@pytest.mark.criterion(2)
def test_c2_chart_near_infinity():
    cfg = _euler24(n6.n6_chart("near_infinity", 0))
    assert str(cfg.root_lattice) == "A2+E8+E8"
    assert cfg.at(1).kodaira == "IV"
    assert sorted(f.kodaira for f in cfg.fibers if f.lattice == ("E", 8)) == ["II*", "II*"]


# ---------------------------------------------------------------------------
# 3. N=6 CM points


@pytest.mark.criterion(3)
def test_c3_double_root_at_minus_16_27():
    assert _rlat(build_family(6).surface(F(-16, 27))) == "A1+A2+D7+E8"
    assert verify_cm_record(_q(6, -24)).disc == 24


@pytest.mark.criterion(3)
def test_c3_square_section():
    b0, t1, sq = n6.solve_square_section_n6()
    assert (b0, t1) == (F(81, 64), F(-9))
    assert sq == Poly((F(-1), F(-18), F(27)))


@pytest.mark.criterion(3)
def test_c3_coordinate():
    assert n6.coordinate_1(F(81, 64)) == F(3211, 2 ** 10)


# ---------------------------------------------------------------------------
# 4. the genus-2 chain


@pytest.mark.criterion(4)
def test_c4_refibration():
    b = RatFunc.gen(F(1))
    target = n6_refibration_target(b)
    assert target.as_tuple() == (-3 * b, 1, -2 * b ** 2, -(b + 1), -b ** 3)
    nu2 = weighted_ratio(refiber_n6(b).raw, target)
    assert nu2 is not None and field_sqrt(nu2) is not None


@pytest.mark.criterion(4)
def test_c4_height_five_halves_sections():
    rep = n6_e7e8_mw_report(2)
    assert rep["heights"] == [F(5, 2), F(5, 2)] and rep["det"] == 6


@pytest.mark.criterion(4)
def test_c4_invariants_and_flag(capsys):
    b = RatFunc.gen(F(1))
    I, printed = igusa_for_n6(b)
    assert I.as_tuple() == (24 * (b + 1), 36 * b, 72 * b * (5 * b + 4), 4 * b ** 3)
    assert printed.I2 != I.I2
    assert cli_main(["igusa", "--level", "6", "--b", "2"]) == 0
    assert '"I2_discrepancy": true' in capsys.readouterr().out


@pytest.mark.criterion(4)
def test_c4_kumar_round_trip():
    x = RatFunc.gen(F(1))
    I = IgusaClebsch(x, x ** 2 + 1, x ** 3 - 2 * x, x ** 5 + 3)
    assert kumar_inverse(kumar_forward(I)).as_tuple() == I.as_tuple()


# ---------------------------------------------------------------------------
# 5. N=14


@pytest.mark.criterion(5)
def test_c5_t7_divides_delta():
    D = surface_discriminant(build_family(14).surface())[0]
    assert all(c == 0 for c in D.c[:7]) and D.c[7] != 0


@pytest.mark.criterion(5)
@pytest.mark.parametrize("value,lattice", [(F(0), "A3+E7+E8"), (F(-1, 2), "A10+E8")])
def test_c5_degenerations(value, lattice):
    assert _rlat(build_family(14).surface(value)) == lattice


@pytest.mark.criterion(5)
def test_c5_extra_a1():
    assert _rlat(n14.d56_surface()) == "A1+A3+A6+E8"


@pytest.mark.criterion(5)
def test_c5_section_height():
    S = build_family(14).surface(F(-35, 44))
    P = section_from_x(S, n14.cm67_section_x())
    assert S.contains(P.X, P.Y)
    assert verify_section(S, P).height == F(67, 28)


@pytest.mark.criterion(5)
def test_c5_coordinate():
    assert n14.coordinate_1(n14.s_of_r(F(-35, 44))) == F(-1225, 81)


@pytest.mark.criterion(5)
def test_c5_pipeline_from_scratch():
    start = time.monotonic()
    rec = find_cm_point(SearchSpec.for_target(14, -67, prime=17))
    assert rec.parameter == F(-35, 44)
    assert time.monotonic() - start <= 300


# ---------------------------------------------------------------------------
# 6. N=57


@pytest.mark.criterion(6)
def test_c6_generic_section():
    fam = build_family(57)
    res = fam.check()
    assert verify_section(fam.surface(), res["sections"][0], res["config"]).height == F(19, 12)
    assert res["disc"] == 114


@pytest.mark.criterion(6)
def test_c6_curve_identity_and_table():
    assert n57.curve_identity_holds()
    rows = n57_rational_points()
    assert [(n, r, d) for n, r, d in rows] == [(1, 2, 7), (2, 1, 4), (3, -1, 16), (4, 0, 28),
                                              (5, F(5, 4), 43), (8, F(13, 9), 163)]


@pytest.mark.criterion(6)
def test_c6_r1_limit():
    assert n57.chart_surface("r=1") == n57.shioda_hall_d18_surface()


def _r2_generator(Y_power):
    S = build_family(57).surface(F(2))
    t = Poly.x(F(1))
    X, Y = -972 * t, 26244 * t ** Y_power
    assert S.contains(X, Y)
    assert verify_section(S, section_from_x(S, X)).height == F(7, 78)
    assert verify_cm_record(_q(57, -7)).disc == 7


@pytest.mark.criterion(6)
@pytest.mark.xfail(strict=True, reason=Y_ANALYSIS)
def test_c6_r2_generator_as_stated():
    _r2_generator(2)


@pytest.mark.criterion(6)
def test_c6_r2_generator_corrected():
    _r2_generator(1)


@pytest.mark.criterion(6)
def test_c6_r_minus_1():
    rep = verify_cm_record(_q(57, -16))
    assert rep.disc == 16 and F(8, 9) in rep.heights


@pytest.mark.criterion(6)
@pytest.mark.parametrize("D", [-267, -627, -123, -24])
def test_c6_discriminants(D):
    rep = verify_cm_record(_q(57, D))
    assert rep.disc == -D and rep.picard == 20


@pytest.mark.criterion(6)
def test_c6_r_half_uses_x_zero():
    rec = _q(57, -24)
    assert rec.parameter == F(1, 2) and Poly() in [Poly(X) for X in rec.witness.sections]


# ---------------------------------------------------------------------------
# 7. N=206


@pytest.mark.criterion(7)
def test_c7_discriminants():
    from k3shim.exactalg import poly_discriminant

    assert poly_discriminant(P10) == -(2 ** 138) * 103 ** 7
    assert poly_discriminant(p10_of_square()) == 2 ** 311 * 103 ** 14


@pytest.mark.criterion(7)
def test_c7_branch_count():
    q = p10_of_square()
    assert q.degree() == 20 and class_number(-824) == 20


@pytest.mark.criterion(7)
@pytest.mark.parametrize("r,value,D", [(0, 4096, -4), (1, 77824, -19), (-1, 77824, -19), (2, 166912, -163),
                                       (-2, 166912, -163), (INF, 8, -8)])
def test_c7_evaluations(r, value, D):
    v = F(P10.lc) if r == INF else F(p10_of_square()(F(r)))
    assert v == value
    assert rational_sqrt(v / -D) is not None


@pytest.mark.criterion(7)
def test_c7_equations():
    rep = x206_verify()
    assert rep.ok
    assert rep.equations == ["s^2 = -P10(r^2)", "s0^2 = -P10(r0)", "s0'^2 = -r0*P10(r0)"]


# ---------------------------------------------------------------------------
# 8. local conditions


@pytest.mark.criterion(8)
@pytest.mark.parametrize("N,lattice,glue,c", [(6, "A2+D7+E8", None, 2), (14, "A3+A6+E8", None, 6),
                                              (57, "A5+A11", [(3, 1)], 4)])
def test_c8_ln_conditions(N, lattice, glue, c):
    R = RootLatticeSum.parse(lattice)
    rep = check_LN_conditions(N, R, glue_from_incidences(R, glue) if glue else None)
    assert rep.passed and c in [v.c for v in rep.verdicts]


# ---------------------------------------------------------------------------
# 9. property suites


def _poly(rng, deg, shift=0, unit=True):
    cs = [F(rng.randint(-9, 9)) for _ in range(deg + 1)]
    if unit and cs[0] == 0:
        cs[0] = F(1)
    return Poly(tuple([F(0)] * shift + cs))


@pytest.mark.criterion(9)
def test_c9_abc_lemma():
    rng = random.Random(9)
    for _ in range(200):
        nu = rng.randint(1, 3)
        a = _poly(rng, 2)
        b = _poly(rng, 2, shift=nu)
        c = _poly(rng, 2, shift=2 * nu + rng.randint(0, 2), unit=rng.random() < 0.5)
        rep = abc_trick_check(a, b, c)
        D, _ = surface_discriminant(SurfaceModel.abc(a, b, c))
        assert rep.ok and rep.v_delta == next(i for i, x in enumerate(D.c) if x != 0)


@pytest.mark.criterion(9)
def test_c9_rational_reconstruction():
    rng = random.Random(10 ** 4)
    for _ in range(10 ** 4):
        q = F(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6))
        p = rng.choice((10007, 10009, 10037))
        if q.denominator % p == 0:
            continue
        assert rational_reconstruct(Padic.from_rational(q, p, 6)) == q


@pytest.mark.criterion(9)
def test_c9_height_of_multiples():
    fam = build_family(57)
    for r in (F(3), F(-5, 2)):
        S = fam.surface(r)
        cfg = fiber_configuration(S)
        P = section_from_x(S, fam.generic_sections(r)[0])
        h = verify_section(S, P, cfg).height
        for n in (2, 3):
            assert verify_section(S, section_multiple(P, n), cfg).height == n * n * h


@pytest.mark.criterion(9)
def test_c9_euler_and_twist_invariants():
    rng = random.Random(24)
    for N in (6, 14, 57):
        fam = build_family(N)
        for _ in range(10):
            r = F(rng.choice((-1, 1)) * rng.randint(101, 997), rng.randint(2, 97))
            assert fiber_configuration(fam.surface(r)).euler_total == 24
    A, B = build_family(14).surface(F(3)).short_coefficients()
    for p, lam in ((5, 2), (11, 2), (13, 2)):
        S, St = SurfaceModel.short(A, B), SurfaceModel.short(A * lam ** 2, B * lam ** 3)
        assert count_points_mod_p(S, p) + count_points_mod_p(St, p) == 2 * (p + 1) ** 2


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
