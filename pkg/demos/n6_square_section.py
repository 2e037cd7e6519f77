"""
A CM point on the N=6 family from a square condition
====================================================

"""
from fractions import Fraction

from k3shim.cases import build_family, n6
from k3shim.cases.catalog import cm_catalog, verify_cm_record
from k3shim.ellsurf import fiber_configuration, section_from_x, verify_section

fam = build_family(6)
S = fam.surface()
print("generic fibers:", fiber_configuration(S).root_lattice)

# asking for a section whose RHS is a perfect square forces a single value of b
b0, t1, root = n6.solve_square_section_n6()
print("b =", b0, " t1 =", t1, " square root", root)

S0 = fam.surface(b0)
P = section_from_x(S0, n6.cm19_section_x())
print("section height", verify_section(S0, P).height)

rec = next(r for r in cm_catalog(6) if r.parameter == Fraction(81, 64))
rep = verify_cm_record(rec)
print("|disc NS| =", rep.disc, " Picard number", rep.picard)
