from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from k3shim.cases import build_family
from k3shim.nslattice import (
    GramDiscriminantGroup,
    RootLatticeSum,
    WrongDiscriminant,
    block_cartan,
    cartan_matrix,
    check_LN_conditions,
    component_contribution,
    discriminant_form,
    glue_from_incidences,
    root_lattice_disc,
)

factor = st.one_of(
    st.tuples(st.just("A"), st.integers(1, 18)),
    st.tuples(st.just("D"), st.integers(4, 18)),
    st.tuples(st.just("E"), st.integers(6, 8)),
)
sums = st.lists(factor, min_size=1, max_size=5).filter(lambda fs: sum(n for _, n in fs) <= 18).map(RootLatticeSum)


@pytest.mark.parametrize("kind,n,disc", [("A", 1, 2), ("A", 18, 19), ("D", 4, 4), ("D", 18, 4),
                                         ("E", 6, 3), ("E", 7, 2), ("E", 8, 1)])
def test_single_factor_discriminants(kind, n, disc):
    assert root_lattice_disc(RootLatticeSum(((kind, n),))) == disc
    assert sympy.Matrix(cartan_matrix(kind, n)).det() == disc


@settings(max_examples=60, deadline=None)
@given(sums)
def test_discriminant_group_order(R):
    assert discriminant_form(R).size == root_lattice_disc(R)
    assert abs(GramDiscriminantGroup(block_cartan(R)).det) == root_lattice_disc(R)


@settings(max_examples=60, deadline=None)
@given(sums)
def test_q_values_in_expected_group(R):
    d = root_lattice_disc(R)
    for q in discriminant_form(R).qvals:
        assert 0 <= q < 2
        assert (q * d).denominator == 1


def test_parse_and_print_round_trip():
    for text in ("A2+D7+E8", "A3+A6+E8", "A5+A11", "A11+D6", "A1+A3+A6+E8"):
        assert str(RootLatticeSum.parse(text)) == text


@pytest.mark.parametrize("kind,n,comp,value", [("A", 5, 3, F(9, 6)), ("A", 11, 6, F(36, 12)),
                                               ("A", 2, 1, F(2, 3)), ("E", 7, 1, F(3, 2))])
def test_component_contributions(kind, n, comp, value):
    assert component_contribution(kind, n, comp) == value


# ---------------------------------------------------------------------------
# L_N conditions


def _glue57(comp):
    return glue_from_incidences(RootLatticeSum.parse("A5+A11"), [(comp, 1)])


@pytest.mark.parametrize("N,lattice,glue,c", [(6, "A2+D7+E8", None, 2), (14, "A3+A6+E8", None, 6),
                                              (57, "A5+A11", 3, 4)])
def test_ln_conditions_with_witness(N, lattice, glue, c):
    rep = check_LN_conditions(N, RootLatticeSum.parse(lattice), _glue57(glue) if glue else None)
    assert rep.passed and rep.disc == 2 * N
    assert c in [v.c for v in rep.verdicts]


def test_perturbed_glue_is_rejected():
    # A5 component 2 instead of 3 changes the height, so |disc| becomes 126
    R = RootLatticeSum.parse("A5+A11")
    assert check_LN_conditions(57, R, _glue57(3)).passed
    with pytest.raises(WrongDiscriminant, match="126"):
        check_LN_conditions(57, R, _glue57(2))


@pytest.mark.parametrize("N", [6, 14, 57])
def test_family_ns_discriminant_is_2N(N):
    assert build_family(N).check()["disc"] == 2 * N
