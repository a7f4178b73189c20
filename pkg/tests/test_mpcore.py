from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmlegendre.errors import PrecisionExhausted
from cmlegendre.mpcore import CBall, UniPoly, ball_pi, poly_eval, poly_roots, root_clusters

small = st.fractions(min_value=-50, max_value=50, max_denominator=1000)
cplx = st.tuples(small, small)


def ball(z, prec):
    return CBall(z[0], z[1], prec=prec)


def test_exact_arithmetic_keeps_zero_radius():
    a, b = CBall(3), CBall(Fraction(1, 4))
    assert (a + b).is_exact()
    assert (a * b).is_exact()
    assert (a * b).contains(Fraction(3, 4))


def test_division_and_sqrt():
    third = CBall(1) / 3
    assert (3 * third).contains(1) and not third.is_exact()
    assert float(third.rad) < 1e-70
    r = CBall(2).sqrt()
    assert (r * r).contains(2)
    assert CBall(4).sqrt().is_exact()
    assert CBall(-1).sqrt().overlaps(CBall(0, 1))


def test_pi_and_exp():
    with mpmath.workdps(100):
        assert ball_pi(256).contains(+mpmath.pi)
        e = (CBall(0, 1) * ball_pi(256)).exp()
        assert e.overlaps(-1)
        assert float(e.rad) < 1e-70


@settings(max_examples=200, deadline=None)
@given(cplx, cplx, st.sampled_from(["add", "sub", "mul", "div"]))
def test_ball_containment_under_refinement(x, y, op):
    """The result at 64 bits contains the result at 128 bits (both contain the truth)."""
    if op == "div" and x == (0, 0) and y == (0, 0):
        return
    lo = [ball(x, 64), ball(y, 64)]
    hi = [ball(x, 128), ball(y, 128)]
    f = {"add": lambda a, b: a + b, "sub": lambda a, b: a - b,
         "mul": lambda a, b: a * b, "div": lambda a, b: b / a if a.is_nonzero() else a + b}[op]
    coarse, fine = f(*lo), f(*hi)
    assert coarse.overlaps(fine)
    assert coarse.inflate(fine.rad).contains(fine.midpoint())


@settings(max_examples=100, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=6, unique=True))
def test_vieta(roots):
    p = UniPoly.from_roots([ball(r, 256) for r in roots])
    got = poly_roots(p, 128)
    assert len(got) == len(roots)
    for z in got:
        assert poly_eval(p, z).contains_zero()
    n = p.degree
    c = p.coeffs
    s = CBall(0)
    prod = CBall(1)
    for z in got:
        s = s + z
        prod = prod * z
    assert s.overlaps(-c[n - 1] / c[n])
    assert prod.overlaps((-1) ** n * c[0] / c[n])


def test_multiple_root_raises():
    p = UniPoly.from_roots([1, 1, 2])
    with pytest.raises(PrecisionExhausted):
        poly_roots(p, 128, max_precision=256)


def test_root_clusters_multiplicities():
    p = UniPoly.from_roots([1, 1, 2, CBall(0, 1), CBall(0, 1), CBall(0, 1)])
    cl = root_clusters(p)
    assert sorted(m for _, m in cl) == [1, 2, 3]
    assert sum(m for _, m in cl) == 6


def test_poly_roots_deterministic():
    p = UniPoly([1, 0, 3, 0, 1, 7])
    a = poly_roots(p, 128, seed=5)
    b = poly_roots(p, 128, seed=5)
    assert [x.to_strings() for x in a] == [x.to_strings() for x in b]


def test_string_round_trip():
    z = CBall(1) / 7 + CBall(0, 2) / 3
    back = CBall.from_strings(*z.to_strings(), prec=z.prec)
    assert back.contains(z.midpoint()) and back.overlaps(z)
