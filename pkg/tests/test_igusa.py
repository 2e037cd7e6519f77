from fractions import Fraction as F

import pytest

from k3shim.ellsurf import fiber_configuration
from k3shim.exactalg import RatFunc, field_sqrt
from k3shim.igusa import (
    DegenerateCurve,
    E7E8Coefficients,
    IgusaClebsch,
    e7e8_to_surface,
    igusa_for_n6,
    kumar_forward,
    kumar_inverse,
    n6_e7e8_mw_report,
    n6_refibration_target,
    normalize_aprime,
    refiber_n6,
    weighted_ratio,
)

x = RatFunc.gen(F(1))


def test_forward_then_inverse_is_identity():
    I = IgusaClebsch(x + 2, x ** 2 - 3, 5 * x ** 3 + x, x ** 5 - 7)
    assert kumar_inverse(kumar_forward(I)).as_tuple() == I.as_tuple()


@pytest.mark.parametrize("ap", [F(-1), F(2), F(-3, 5)])
def test_inverse_then_forward_is_identity_after_normalizing(ap):
    k = E7E8Coefficients(x + 1, ap, x ** 2, 3 * x - 1, x ** 3 + 2)
    assert kumar_forward(kumar_inverse(k)).as_tuple() == normalize_aprime(k).as_tuple()


@pytest.mark.parametrize("lam", [F(2), F(-3), F(5, 7)])
def test_twist_scales_invariants_by_weight(lam):
    k = E7E8Coefficients(x + 1, F(-1), x ** 2, 3 * x - 1, x ** 3 + 2)
    kt = E7E8Coefficients(lam ** 2 * k.a, lam ** 2 * k.ap, lam ** 3 * k.b, lam ** 3 * k.bp, lam ** 3 * k.bpp)
    I, It = kumar_inverse(k), kumar_inverse(kt)
    assert It.as_tuple() == (lam * I.I2, lam ** 2 * I.I4, lam ** 3 * I.I6, lam ** 5 * I.I10)
    assert It.normalized() == I.normalized()


def test_degenerate_curve():
    with pytest.raises(DegenerateCurve):
        kumar_forward(IgusaClebsch(F(1), F(2), F(3), F(0)))


def test_e7e8_surface_configuration():
    k = E7E8Coefficients(F(1), F(-1), F(2), F(3), F(5))
    R = fiber_configuration(e7e8_to_surface(k)).root_lattice
    assert "E7" in str(R) and "E8" in str(R)


def test_refibration_reaches_normal_form():
    b = RatFunc.gen(F(1))
    res = refiber_n6(b)
    nu2 = weighted_ratio(res.raw, n6_refibration_target(b))
    assert nu2 is not None and field_sqrt(nu2) is not None
    target = n6_refibration_target(b)
    assert target.as_tuple() == (-3 * b, 1, -2 * b ** 2, -(b + 1), -b ** 3)


@pytest.mark.parametrize("r", [2, 3, F(5, 2)])
def test_two_sections_of_height_five_halves(r):
    rep = n6_e7e8_mw_report(r)
    assert rep["heights"] == [F(5, 2), F(5, 2)]
    assert rep["det"] == 6


def test_corrected_invariants_symbolic():
    b = RatFunc.gen(F(1))
    I, printed = igusa_for_n6(b)
    assert I.as_tuple() == (24 * (b + 1), 36 * b, 72 * b * (5 * b + 4), 4 * b ** 3)
    assert printed.I2 == 24 * b + 1 and printed.I2 != I.I2
    assert printed.as_tuple()[1:] == I.as_tuple()[1:]


@pytest.mark.parametrize("b,which,value", [(4, 1, 144), (1, 3, 4), (3, 0, 96)])
def test_invariant_values(b, which, value):
    I, _ = igusa_for_n6(F(b))
    assert I.as_tuple()[which] == value
