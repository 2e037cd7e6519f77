import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3shim.cases import build_family, cm_catalog, n57
from k3shim.cases.common import shioda_hall_a18_surface
from k3shim.ellsurf import INF, SurfaceModel
from k3shim.exactalg import Mod, Poly, RatFunc
from k3shim.formats import (
    FormatError,
    catalog_from_json,
    catalog_json,
    data_text,
    dumps,
    load_surface,
    param_json,
    parse_json,
    parse_param,
    parse_poly,
    parse_rat,
    poly_json,
    rat,
    record_from_json,
    record_json,
    surface_from_json,
    surface_json,
    validate,
)

fractions = st.fractions(max_denominator=10 ** 6).filter(lambda q: abs(q.numerator) < 10 ** 12)
polys = st.lists(fractions, min_size=1, max_size=8).map(lambda cs: Poly(tuple(cs)))


@settings(max_examples=200, deadline=None)
@given(fractions)
def test_rational_round_trip(q):
    s = rat(q)
    assert parse_rat(s) == q
    assert "." not in s and "e" not in s


@settings(max_examples=100, deadline=None)
@given(polys)
def test_poly_round_trip_lowest_degree_first(f):
    doc = poly_json(f)
    assert parse_poly(doc) == f
    if f.c:
        assert parse_rat(doc[0]) == f.c[0]


def test_rational_function_round_trip():
    t = Poly.x(F(1))
    X = RatFunc(t * t + 3, (t - F(1, 2)) ** 2)
    assert parse_poly(poly_json(X)) == X


@pytest.mark.parametrize("x", [F(-35, 44), F(0), INF])
def test_param_round_trip(x):
    assert parse_param(param_json(x)) == x


def test_bad_rational():
    with pytest.raises(FormatError):
        parse_rat("1/0")
    with pytest.raises(FormatError):
        parse_rat("x")


# ---------------------------------------------------------------------------
# surfaces


@pytest.mark.parametrize("S", [shioda_hall_a18_surface(), build_family(57).surface(F(2)),
                               SurfaceModel.short(Poly.x(F(1)) ** 4 + 1, Poly((F(2), F(-1))))])
def test_surface_round_trip(S):
    doc = surface_json(S)
    validate(doc, "surface")
    assert surface_from_json(doc) == S


def test_surface_over_fp():
    t = Poly.x(Mod(1, 7))
    S = SurfaceModel.extended(t, t ** 3 * 2, t ** 5 + Mod(3, 7))
    doc = surface_json(S, 7)
    assert doc["field"] == "Fp" and doc["p"] == 7
    assert surface_from_json(doc) == S


def test_surface_errors():
    with pytest.raises(FormatError, match="line 1"):
        parse_json('{"form": "short",', "surface")
    with pytest.raises(FormatError, match="schema"):
        parse_json('{"form": "weird", "coeffs": {}, "field": "Q"}', "surface")
    with pytest.raises(FormatError, match="a6"):
        surface_from_json({"form": "extended", "coeffs": {"a2": ["1"], "a4": ["0"]}, "field": "Q"})
    with pytest.raises(FormatError):
        surface_from_json({"form": "short", "coeffs": {"A": ["1"], "B": ["1"]}, "field": "Fp"})


@pytest.mark.parametrize("name,S", [
    ("shioda_hall_a18", shioda_hall_a18_surface()),
    ("shioda_hall_d18", n57.shioda_hall_d18_surface()),
    ("d6_a11", n57.d6_a11_surface()),
    ("n6_b_81_64", build_family(6).surface(F(81, 64))),
    ("n14_r_m35_44", build_family(14).surface(F(-35, 44))),
])
def test_shipped_surfaces(name, S):
    doc = json.loads(data_text(f"{name}.json"))
    validate(doc, "surface")
    assert load_surface(name) == S


# ---------------------------------------------------------------------------
# CM records and catalogs


@pytest.mark.parametrize("N", [6, 14, 57, 206])
def test_record_round_trip(N):
    for rec in cm_catalog(N):
        doc = record_json(rec)
        validate(doc, "cm_record")
        back = record_from_json(json.loads(dumps(doc)))
        assert record_json(back) == doc
        assert back.parameter == rec.parameter and back.D == rec.D


@pytest.mark.parametrize("N", [6, 14, 57, 206])
def test_shipped_catalog_matches_export(N):
    shipped = json.loads(data_text(f"catalog_n{N}.json"))
    assert shipped == catalog_json(N, cm_catalog(N))
    assert len(catalog_from_json(shipped)) == len(cm_catalog(N))


def test_catalog_schema_rejects_float_parameter():
    doc = catalog_json(14, cm_catalog(14))
    doc["records"][0]["parameter"] = -0.5
    with pytest.raises(FormatError):
        catalog_from_json(doc)


def test_dumps_is_deterministic():
    doc = catalog_json(57, cm_catalog(57))
    assert dumps(doc) == dumps(json.loads(dumps(doc)))
