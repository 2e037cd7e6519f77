"""
Searching for a CM point mod p and lifting it
=============================================

"""
from fractions import Fraction

from k3shim.cmsearch import SearchSpec, choose_prime, find_cm_point, hensel_lift, scan_mod_p
from k3shim.exactalg import rational_reconstruct

spec = SearchSpec.for_target(14, -67)
p = choose_prime(spec.D, spec.family)
print("search prime", p)

# residues of r mod p where a section of the registered shape exists
cands = scan_mod_p(spec, p)
print("survivors:", [c.residue for c in cands])

# Newton lifting doubles the p-adic precision at each step
cand = next(c for c in cands if (44 * c.residue + 35) % p == 0)
lift = hensel_lift(spec, cand, 16)
for k, value in lift.history:
    print(f"  mod {p}^{k}: {value}")
print("reconstructed r =", rational_reconstruct(lift.parameter))

# the whole pipeline, ending with an exact verification of the record
events = []
rec = find_cm_point(spec, events.append)
print(rec.parameter, rec.cross_reference)
assert rec.parameter == Fraction(-35, 44)
print(len(events), "progress events")
