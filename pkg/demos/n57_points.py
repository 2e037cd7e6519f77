"""
Rational points of 57a1 and CM points on the N=57 family
========================================================

"""
from k3shim.cases import cm_catalog, n57, n57_rational_points
from k3shim.cases.catalog import record_summary, verify_cm_record

# multiples nP of P = (2, 1) give parameter values r = x(nP)
for n, r, d in n57_rational_points():
    print(f"{n}P: r = {r}, |D| = {d}")

print("(2y+1)^2 = p(x) on the curve:", n57.curve_identity_holds())
print("r = 1 chart equals the D18 surface:", n57.chart_surface("r=1") == n57.shioda_hall_d18_surface())

# each catalog record is re-verified from its witness sections
for rec in cm_catalog(57):
    s = record_summary(verify_cm_record(rec))
    print(f"r = {s['parameter']:>6}  D = {s['D']:>5}  heights {', '.join(s['heights']) or '-'}")
