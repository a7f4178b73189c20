"""Moving j along degree-2 and degree-3 isogenies.

Starting from lambda = 3 + 2 sqrt(2) at tau = sqrt(2) i, the three degree-2
candidates land on 2 tau, tau/2 and (tau + 1)/(1 - tau).  Starting from
lambda = -1 at tau = i, the degree-3 quartic produces j(3i) and j((1+3i)/2).
"""

from cmlegendre.isogeny import isogeny_step, j3_quartic, tower
from cmlegendre.modular import recognize_quadratic
from cmlegendre.mpcore import CBall

lam = CBall(3) + 2 * CBall(2).sqrt()
tau = CBall(0) + CBall(0, 1) * CBall(2).sqrt()
print("degree 2 from sqrt(2) i:")
for c in isogeny_step(lam, 2, tau).candidates:
    cand = recognize_quadratic(c.j)
    print(f"  {c.branch:>18} -> {c.target:<16} j = {cand.sympy_value()}")

print("\nquartic at lambda = -1:", [complex(c.mid) for c in j3_quartic(-1, "x").coeffs])
print("degree 3 from i:")
for c in isogeny_step(-1, 3, CBall(0, 1)).candidates:
    cand = recognize_quadratic(c.j)
    print(f"  {c.branch} -> {c.target:<16} j = {cand.sympy_value()}")

print("\ntwo steps i -> 2i -> 4i:")
for step in tower(-1, CBall(0, 1), [2, 2]):
    print(f"  j = {float(step.choice.j.real):.6f}")
