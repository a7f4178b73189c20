from types import SimpleNamespace

import pytest
import sympy

from cmlegendre.errors import DegenerateSolution, DegreeTooSmall, SquareVariantForbidden, VariantParityMismatch
from cmlegendre.mpcore import CBall, UniPoly
from cmlegendre.pipeline import sympy_ball
from cmlegendre.qforms import SystemVariant
from cmlegendre.ramsys import (
    LAM,
    HFunction,
    assemble_h,
    build_d2_cases,
    build_system,
    census_ok,
    ramification_census,
    residual,
    s3_transport,
    solution_values_exact_d2_family1,
    verify_square_condition,
)

SQ3I = sympy.sqrt(3) * sympy.I
L3 = (1 + SQ3I) / 2
# an explicit degree-3 solution of system S1 at lambda = (1 + sqrt(3) i)/2
S1_POINT = {"k": sympy.Rational(-1, 3), LAM: L3, "alpha_1": 1 + L3, "beta_1": (1 + L3) / 3,
            "gamma_1": (-1 + SQ3I) / 2, "delta_1": (1 - SQ3I) / 2}


def balls(point):
    return {k: sympy_ball(str(v), 256) for k, v in point.items()}


def zero_residual(sys, point):
    return all(r.contains_zero() for r in residual(sys, balls(point)))


@pytest.mark.parametrize("D", range(3, 8))
def test_system_is_square(D):
    for v in SystemVariant.for_degree(D):
        if D == 4 and v is SystemVariant.S4:
            continue
        sys = build_system(D, v)
        assert len(sys.equations) == len(sys.unknowns) == 2 * D


def test_build_errors():
    with pytest.raises(DegreeTooSmall):
        build_system(2, "S1")
    with pytest.raises(VariantParityMismatch):
        build_system(3, "S4")
    with pytest.raises(VariantParityMismatch):
        build_system(4, "S2")
    with pytest.raises(SquareVariantForbidden):
        build_system(4, "S4")
    with pytest.raises(SquareVariantForbidden):
        build_system(9, "S1")


def test_d2_cases():
    cases = build_d2_cases()
    assert len(cases) == 9
    assert all(len(s.equations) == len(s.unknowns) == 4 for _, s in cases)
    assert len({c.name for c, _ in cases}) == 9


def _case(name):
    return dict((c.name, s) for c, s in build_d2_cases())[name]


def test_d2_family_one():
    sys = _case("D2:Q=x:s=0")
    point = solution_values_exact_d2_family1()
    assert zero_residual(sys, point)
    h = assemble_h(balls(point), shape=sys.shape)
    assert verify_square_condition(h)
    assert census_ok(ramification_census(h), 2)
    # h = i (x^2 - 1) / (2x)
    assert h(CBall(2)).overlaps(CBall(0, 3) / 4)


def test_d2_family_two():
    sys = _case("D2:Q=x:s=0")
    lam = 3 + 2 * sympy.sqrt(2)
    point = {"k": sympy.Rational(-1, 2), LAM: lam, "gamma": 1 + sympy.sqrt(2), "delta": -1 - sympy.sqrt(2)}
    assert zero_residual(sys, point)
    h = assemble_h(balls(point), shape=sys.shape)
    assert verify_square_condition(h)


def test_d3_s1_identity_and_transports():
    sys = build_system(3, "S1")
    assert zero_residual(sys, S1_POINT)
    h = assemble_h(SimpleNamespace(assignment=balls(S1_POINT), D=3, shape=None), "S1")
    assert verify_square_condition(h)
    assert census_ok(ramification_census(h), 3)
    p = S1_POINT
    # x -> 1 - x exchanges the fibres over 0 and 1
    flipped = {"k": p["k"], LAM: 1 - p[LAM], "alpha_1": 1 - p["gamma_1"], "beta_1": 1 - p["beta_1"],
               "gamma_1": 1 - p["alpha_1"], "delta_1": 1 - p["delta_1"]}
    # x -> lambda x exchanges the fibres over 1 and lambda
    scaled = {"k": p["k"], LAM: 1 / p[LAM], "alpha_1": p["alpha_1"] / p[LAM], "beta_1": p["beta_1"] / p[LAM],
              "gamma_1": p["delta_1"] / p[LAM], "delta_1": p["gamma_1"] / p[LAM]}
    assert zero_residual(sys, flipped)
    assert zero_residual(sys, scaled)
    for move in ("1-lambda", "1/lambda"):
        t = s3_transport(h, move)
        assert verify_square_condition(t)
        assert census_ok(ramification_census(t), 3)


def test_not_a_square():
    lam = CBall(-1)
    h = HFunction(UniPoly([1, 0, 1]), UniPoly([0, 3]), lam)
    assert not verify_square_condition(h)


def test_degenerate_rejected():
    sys = _case("D2:Q=x:s=0")
    point = dict(solution_values_exact_d2_family1())
    point["k"] = 0
    with pytest.raises(DegenerateSolution):
        assemble_h(balls(point), shape=sys.shape)
    point = dict(solution_values_exact_d2_family1())
    point["gamma"] = 1
    with pytest.raises(DegenerateSolution):
        assemble_h(balls(point), shape=sys.shape)


def test_census_patterns():
    assert census_ok({"0": [1, 2], "1": [1, 2], "lambda": [1, 2], "inf": [1, 2]}, 3)
    assert census_ok({"0": [2, 2], "1": [2, 2], "lambda": [2, 2], "inf": [1, 1, 1, 1]}, 4)
    assert census_ok({"0": [2, 2], "1": [2, 2], "lambda": [1, 1, 2], "inf": [1, 1, 2]}, 4)
    assert not census_ok({"0": [2, 2], "1": [1, 1, 2], "lambda": [1, 1, 2], "inf": [1, 1, 2]}, 4)
