"""
Singular fibers of an elliptic K3 surface
=========================================

"""
from fractions import Fraction

from k3shim.ellsurf import fiber_configuration, k3_certificate
from k3shim.exactalg import Mod
from k3shim.formats import load_surface

# a surface with a single I19 fiber at infinity, read from the shipped data
S = load_surface("shioda_hall_a18")
print(S)

# an empty certificate means the model is a minimal K3 model
print("K3 problems:", k3_certificate(S) or "none")

cfg = fiber_configuration(S)
print(cfg.describe())
print("root lattice", cfg.root_lattice, "of rank", cfg.root_lattice.rank)
print("Euler numbers add up to", cfg.euler_total)

# the same surface reduced mod 7 still has the I19 fiber
S7 = S.map_coeffs(lambda c: Mod(int(Fraction(c)), 7))
print(fiber_configuration(S7).describe())
