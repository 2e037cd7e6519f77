"""
Igusa-Clebsch invariants along the N=6 family
=============================================

"""
from fractions import Fraction

from k3shim.exactalg import RatFunc
from k3shim.igusa import igusa_for_n6, n6_e7e8_mw_report

b = RatFunc.gen(Fraction(1))
I, printed = igusa_for_n6(b)
print("I2, I4, I6, I10 =", ", ".join(x.format("b") for x in I.as_tuple()))
print("printed I2 =", printed.I2.format("b"), "(differs)" if printed.I2 != I.I2 else "")

# the E7+E8 fibration carries two sections of height 5/2
rep = n6_e7e8_mw_report(2)
print("heights", ", ".join(map(str, rep["heights"])), " Gram determinant", rep["det"])

for value in (1, 4, Fraction(1, 2)):
    J, _ = igusa_for_n6(Fraction(value))
    print(f"b = {value}:", ", ".join(map(str, J.as_tuple())), " normalized", ", ".join(map(str, J.normalized())))
