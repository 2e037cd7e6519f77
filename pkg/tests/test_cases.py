import random
from fractions import Fraction as F

import pytest
from oracles import random_rational

from k3shim.cases import build_family, cm_catalog, involution, n14, n57, n57_rational_points, n6
from k3shim.cases.catalog import verify_catalog, verify_cm_record
from k3shim.cases.common import CatalogCorrupt, Witness
from k3shim.cases.n206 import class_number, x206_verify
from k3shim.checklist import run_checks
from k3shim.ellsurf import INF, fiber_configuration
from k3shim.exactalg import Poly
from k3shim.exactalg.errors import VerificationFailed

# ---------------------------------------------------------------------------
# involutions


@pytest.mark.parametrize("N", [6, 14])
def test_involution_is_an_involution(N):
    rng = random.Random(N)
    for _ in range(50):
        r = random_rational(rng) * rng.choice((1, -1))
        assert involution(N, involution(N, r)) == r


def test_n6_involution_fixes_b():
    rng = random.Random(60)
    for _ in range(50):
        r = random_rational(rng)
        assert involution(6, r) ** 2 == r ** 2


def test_n14_involution_fixes_s():
    rng = random.Random(140)
    for _ in range(50):
        r = random_rational(rng) * rng.choice((1, -1))
        assert n14.s_of_r(involution(14, r)) == n14.s_of_r(r)


def test_n14_involution_poles():
    assert involution(14, F(-1, 2)) == INF
    assert involution(14, INF) == F(-1, 2)
    assert involution(14, F(-35, 44)) == F(-35, 26)


def test_n57_involution_is_negation():
    for n, r, _ in n57_rational_points():
        P = (r, next(y for y in _ys(r)))
        Q = involution(57, P)
        assert Q[0] == r and involution(57, Q) == P


def _ys(x):
    # roots of y^2 + y - (x^3 - x^2 - 2x + 2)
    from k3shim.exactalg import field_sqrt

    disc = 1 + 4 * (x ** 3 - x ** 2 - 2 * x + 2)
    s = field_sqrt(disc)
    return [(-1 + s) / 2, (-1 - s) / 2]


# ---------------------------------------------------------------------------
# family data


def test_n57_rational_points_table():
    rows = n57_rational_points()
    assert [(n, r) for n, r, _ in rows] == [(1, 2), (2, 1), (3, -1), (4, 0), (5, F(5, 4)), (8, F(13, 9))]
    assert [d for _, _, d in rows] == [7, 4, 16, 28, 43, 163]


def test_n57_curve_identity():
    assert n57.curve_identity_holds()


def test_n57_r1_chart_is_d18_surface():
    assert n57.chart_surface("r=1") == n57.shioda_hall_d18_surface()
    R = fiber_configuration(n57.shioda_hall_d18_surface()).root_lattice
    assert str(R) == "D18"


@pytest.mark.parametrize("value,lattice", [(F(0), "A3+E7+E8"), (F(-1, 2), "A10+E8")])
def test_n14_degenerations(value, lattice):
    assert str(fiber_configuration(n14.build().surface(value)).root_lattice) == lattice


def test_n14_extra_a1_over_quadratic_field():
    assert str(fiber_configuration(n14.d56_surface()).root_lattice) == "A1+A3+A6+E8"


def test_n14_coordinate():
    assert n14.coordinate_1(n14.s_of_r(F(-35, 44))) == F(-1225, 81)


def test_square_section_solver():
    b0, t1, sq = n6.solve_square_section_n6()
    assert (b0, t1) == (F(81, 64), F(-9))
    assert sq == Poly((F(-1), F(-18), F(27)))


@pytest.mark.parametrize("which", ["near_zero", "near_infinity"])
def test_n6_charts_match_display(which):
    for beta in (F(2), F(-3, 5)):
        assert n6.n6_chart(which, beta) == n6.printed_chart(which, beta)


def test_unknown_family():
    with pytest.raises(ValueError):
        build_family(7)
    with pytest.raises(ValueError):
        cm_catalog(7)


# ---------------------------------------------------------------------------
# CM catalogs


@pytest.mark.parametrize("N,discs", [(6, [-3, -4, -24, -19]), (14, [-8, -11, -56, -67]),
                                     (206, [-4, -19, -163, -8, -824])])
def test_catalog_verifies(N, discs):
    recs = cm_catalog(N)
    assert [r.D for r in recs] == discs
    reps = verify_catalog(recs)
    assert all(rep.ok for rep in reps)
    assert all(rep.disc == -rec.D for rep, rec in zip(reps, recs))


@pytest.mark.slow
def test_n57_catalog_verifies():
    recs = cm_catalog(57)
    assert sorted(-r.D for r in recs) == [4, 7, 16, 19, 24, 28, 43, 123, 163, 267, 627]
    for rep in verify_catalog(recs):
        assert rep.ok and rep.picard == 20


def test_corrupted_record_is_rejected():
    rec = next(r for r in cm_catalog(14) if r.D == -67)
    bad = type(rec)(**{**rec.__dict__, "D": -68})
    with pytest.raises(VerificationFailed):
        verify_cm_record(bad)
    with pytest.raises(CatalogCorrupt):
        verify_catalog([bad])


def test_corrupted_witness_section_is_rejected():
    rec = next(r for r in cm_catalog(6) if r.D == -19)
    w = rec.witness
    t = Poly.x(F(1))
    w2 = Witness(**{**w.__dict__, "sections": tuple(X + t for X in w.sections)})
    bad = type(rec)(**{**rec.__dict__, "witness": w2})
    with pytest.raises(Exception):
        verify_cm_record(bad)


# ---------------------------------------------------------------------------
# N = 206


def test_x206_clauses():
    rep = x206_verify()
    assert rep.ok
    assert rep.equations == ["s^2 = -P10(r^2)", "s0^2 = -P10(r0)", "s0'^2 = -r0*P10(r0)"]


@pytest.mark.parametrize("D,h", [(-3, 1), (-4, 1), (-23, 3), (-56, 4), (-824, 20)])
def test_class_numbers(D, h):
    assert class_number(D) == h


# ---------------------------------------------------------------------------
# built-in check lists


@pytest.mark.parametrize("case", ["n6", "n206"])
def test_checklist_has_no_failures(case):
    results = run_checks(case)
    assert results and not [r.line() for r in results if r.status == "FAIL"]


@pytest.mark.slow
@pytest.mark.parametrize("case", ["n14", "n57"])
def test_slow_checklists_have_no_failures(case):
    results = run_checks(case)
    assert not [r.line() for r in results if r.status == "FAIL"]


def test_errata_are_flagged_not_failed():
    errata = [r.name for r in run_checks("n6") if r.status == "ERRATUM"]
    assert errata
