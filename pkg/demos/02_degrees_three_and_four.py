"""Degrees 3 and 4, system by system.

For odd degree the three systems S1, S2, S3 each pick out the periods whose
forms have the matching parity.  For D = 4 only S5 and S6 are solved; S6
produces the pair of conjugate values over Q(sqrt(5)).
"""

import time

from cmlegendre.pipeline import coverage, distinct_j, recognize, solve_degree

for D in (3, 4):
    t0 = time.perf_counter()
    results = solve_degree(D)
    print(f"D = {D}  ({time.perf_counter() - t0:.0f}s)")
    for label, recs in sorted(results.items()):
        vals = []
        for r in recs:
            cand = recognize(r.j_value)
            vals.append(str(cand.sympy_value()) if cand else f"{complex(r.j_value.mid):.6g}")
        print(f"  {label}: {', '.join(vals) or 'none'}")
    cov = coverage(D, distinct_j(results))
    for t, i in cov.periods:
        print(f"    {t.label():>18} <- j-value #{i}")
    print("  bijection:", cov.ok)
