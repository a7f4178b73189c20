"""Degree 2: from period representatives to j-invariants.

Lists the three period orbits of degree-2 self-isogenies, solves the nine
degree-2 case systems for lambda, and matches the resulting j-values to the
periods with the theta oracle.
"""

from cmlegendre.modular import j_q_expansion
from cmlegendre.pipeline import coverage, distinct_j, recognize, solve_degree
from cmlegendre.qforms import distinct_periods, enumerate_reps

D = 2

print("periods:")
for key, reps in distinct_periods(enumerate_reps(D)).items():
    t = reps[0]
    print(f"  {t.label():>18}  form {key}")

results = solve_degree(D)
js = distinct_j(results)
print("\nsolver j-values:")
for j in js:
    cand = recognize(j)
    print(f"  {complex(j.mid).real:>12.6f}  ->  {cand.sympy_value() if cand else '?'}")

cov = coverage(D, js)
print("\nperiod -> j, with the 4-term series next to it:")
for t, i in cov.periods:
    series = j_q_expansion(t.tau(), 4)
    print(f"  {t.label():>18}  j = {complex(js[i].mid).real:>10.3f}   series {float(series.real):.6f}")
print("bijection:", cov.ok)
