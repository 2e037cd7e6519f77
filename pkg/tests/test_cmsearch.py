from fractions import Fraction as F

import pytest
from oracles import mod_p, naive_count

from k3shim.cases import build_family
from k3shim.cmsearch import (
    BadReduction,
    LiftStuck,
    ModPCandidate,
    NotFound,
    SearchSpec,
    choose_prime,
    cm_compatible,
    count_points_mod_p,
    find_cm_point,
    hensel_lift,
    scan_mod_p,
    section_shape,
    transcendental_traces,
    usable_prime,
)
from k3shim.ellsurf import SurfaceModel
from k3shim.exactalg import Mod, Poly
from k3shim.exactalg.errors import InvalidPrime
from k3shim.formats import load_surface

# ---------------------------------------------------------------------------
# point counts against direct enumeration


def _small_surfaces():
    t = Poly.x(F(1))
    yield SurfaceModel.short(t ** 4 + 1, t ** 6 - t + 2)
    yield SurfaceModel.extended(t * t + 1, 2 * t ** 3 - t, t ** 5 + 3)
    yield build_family(6).surface(F(2))
    yield build_family(14).surface(F(3))
    yield build_family(57).surface(F(2))
    yield load_surface("shioda_hall_a18")


@pytest.mark.parametrize("p", [3, 5, 7])
def test_point_count_matches_enumeration(p):
    n = 0
    for S in _small_surfaces():
        try:
            ours = count_points_mod_p(S, p)
        except BadReduction:
            continue  # e.g. p = 3 divides 57
        assert ours == naive_count(S, p)
        n += 1
    assert n >= 3


def test_point_count_over_fp_model():
    t = Poly.x(Mod(1, 7))
    S = SurfaceModel.short(t ** 4 + Mod(1, 7), t ** 6 - t + Mod(2, 7))
    assert count_points_mod_p(S) == naive_count(S, 7)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_twist_counts_sum(p):
    # a quadratic twist swaps the sign of every fiber's trace, including split and nonsplit nodes
    lam = next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)
    S = build_family(57).surface(F(2))
    A, B = S.short_coefficients()
    St = SurfaceModel.short(A * lam ** 2, B * lam ** 3)
    S0 = SurfaceModel.short(A, B)
    assert count_points_mod_p(S0, p) + count_points_mod_p(St, p) == 2 * (p + 1) ** 2


def test_transcendental_traces():
    assert transcendental_traces(100, 5, 1) == [100 - 36 - 5 - 5, 100 - 36 - 5 + 5]


def test_cm_compatible_on_known_point():
    # the N=14 surface at r = -35/44 has CM by D = -67; its reduction mod 17 must pass the filter
    S = build_family(14).surface(F(-35, 44))
    Sp = SurfaceModel(S.form, tuple(Poly(tuple(Mod(mod_p(c, 17), 17) for c in a.c)) for a in S.coeffs))
    # the generic N=14 surface has Mordell-Weil rank 0, so no known sections enter the trace
    assert cm_compatible(count_points_mod_p(Sp), 17, -67, 0)
    assert not cm_compatible(count_points_mod_p(Sp), 17, -67 * 4 - 3, 0)


# ---------------------------------------------------------------------------
# primes


@pytest.mark.parametrize("N,D,p", [(6, -19, 5), (14, -67, 17), (57, -267, 23), (57, -627, 13),
                                   (6, -3, 7), (6, -4, 5)])
def test_choose_prime(N, D, p):
    assert choose_prime(D, build_family(N)) == p


def test_usable_prime_rejects_inert_and_bad_primes():
    fam = build_family(14)
    assert not usable_prime(13, -67, fam)  # -67 is not a square mod 13
    assert not usable_prime(7, -3, fam)     # 7 divides the level
    assert not usable_prime(15, -11, fam)
    with pytest.raises(ValueError):
        choose_prime(5)


def test_invalid_prime_in_spec():
    with pytest.raises(InvalidPrime):
        SearchSpec.for_target(14, -67, prime=13).validate()


# ---------------------------------------------------------------------------
# scan and lift


def _spec14(**kw):
    return SearchSpec.for_target(14, -67, prime=17, **kw)


def test_scan_contains_target_residue():
    residues = [c.residue for c in scan_mod_p(_spec14())]
    assert mod_p(F(-35, 44), 17) in residues


def test_scan_n6_contains_target_residue():
    residues = [c.residue for c in scan_mod_p(SearchSpec.for_target(6, -19))]
    assert residues == [mod_p(F(81, 64), 5)]


def test_scan_is_thread_independent():
    assert scan_mod_p(_spec14(threads=1)) == scan_mod_p(_spec14(threads=4))


def test_next_prime_still_contains_target():
    p2 = choose_prime(-67, build_family(14), after=17)
    residues = [c.residue for c in scan_mod_p(_spec14(), p2)]
    assert mod_p(F(-35, 44), p2) in residues


def test_hensel_precision_doubles_and_is_consistent():
    spec = _spec14()
    cand = next(c for c in scan_mod_p(spec) if c.residue == mod_p(F(-35, 44), 17))
    lift = hensel_lift(spec, cand, 32)
    precs = [k for k, _ in lift.history]
    assert precs == [1, 2, 4, 8, 16, 32]
    for k, v in lift.history:
        assert v % 17 ** k == lift.parameter.value % 17 ** k
    assert (44 * lift.parameter.value + 35) % 17 ** 32 == 0


def test_perturbed_candidate_is_stuck():
    spec = _spec14()
    cand = scan_mod_p(spec)[0]
    bad = ModPCandidate(cand.p, (cand.residue + 1) % 17, cand.unknowns, cand.scale, cand.root)
    with pytest.raises(LiftStuck):
        hensel_lift(spec, bad, 8)


# ---------------------------------------------------------------------------
# end to end


def test_find_n14_point():
    rec = find_cm_point(_spec14())
    assert rec.parameter == F(-35, 44)


def test_find_n6_point():
    assert find_cm_point(SearchSpec.for_target(6, -19)).parameter == F(81, 64)


def test_impossible_target():
    with pytest.raises(NotFound):
        find_cm_point(SearchSpec.for_target(14, -5))


def test_pole_shape_unknowns():
    shape = section_shape(57, -627)
    assert shape.pole is not None
    assert shape.pole.unknowns == 5
    assert shape.unknowns == 5


@pytest.mark.slow
def test_find_n57_point_with_pole_shape():
    events = []
    rec = find_cm_point(SearchSpec.for_target(57, -627), events.append)
    assert rec.parameter == F(-7, 4)
    assert rec.witness.field_poly == Poly((F(11), F(0), F(1)))
    assert events[0] == {"event": "prime", "p": 13}


@pytest.mark.slow
def test_find_n57_267():
    assert find_cm_point(SearchSpec.for_target(57, -267)).parameter == F(17, 16)
