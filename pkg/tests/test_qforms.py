import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmlegendre.errors import DegreeTooSmall
from cmlegendre.qforms import (
    QuadForm,
    SystemVariant,
    TauRep,
    distinct_periods,
    endo_order,
    enumerate_reps,
    form_of,
    fundamental_disc,
    predict_system,
    reduce_form,
    sl2_act,
)


@st.composite
def sl2_matrices(draw):
    p = draw(st.integers(-30, 30))
    r = draw(st.integers(-30, 30))
    if math.gcd(p, r) != 1:
        p, r = 1, draw(st.integers(-30, 30))
    # extended Euclid gives q, s with ps - qr = 1
    g, x, y = _egcd(p, r)
    s, q = x, -y
    k = draw(st.integers(-5, 5))
    return ((p, q + k * p), (r, s + k * r))


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


@st.composite
def forms(draw):
    a = draw(st.integers(1, 40))
    c = draw(st.integers(1, 40))
    bmax = math.isqrt(4 * a * c - 1)
    b = draw(st.integers(-bmax, bmax))
    return QuadForm(a, b, c)


@settings(max_examples=1000, deadline=None)
@given(forms(), sl2_matrices())
def test_sl2_action_preserves_disc_and_content(f, m):
    g = sl2_act(f, m)
    assert g.disc == f.disc
    assert g.content == f.content


@settings(max_examples=1000, deadline=None)
@given(forms(), sl2_matrices())
def test_reduction_idempotent_and_class_invariant(f, m):
    g, M = reduce_form(f)
    assert g.is_reduced()
    assert sl2_act(f, M) == g
    assert reduce_form(g)[0] == g
    assert reduce_form(sl2_act(f, m))[0] == g


@pytest.mark.parametrize("D,count,labels", [
    (2, 3, {"i", "sqrt(2)i", "(1+sqrt(7)i)/2"}),
    (3, 4, {"sqrt(3)i", "(1+sqrt(3)i)/2", "(1+sqrt(11)i)/2", "sqrt(2)i"}),
])
def test_enumeration_small_degrees(D, count, labels):
    groups = distinct_periods(enumerate_reps(D))
    assert len(groups) == count
    assert {reps[0].label() for reps in groups.values()} == labels


def test_enumeration_d3_keeps_imprimitive_form():
    reps = enumerate_reps(3)
    assert len(reps) == 5
    forms_ = [reduce_form(form_of(t))[0] for t in reps]
    assert len(set(forms_)) == len(forms_)
    # 2x^2+2xy+2y^2 and x^2+xy+y^2 describe the same period
    assert len(distinct_periods(reps)) == 4


@pytest.mark.parametrize("D", range(2, 13))
def test_reps_valid(D):
    reps = enumerate_reps(D, allow_square=True)
    for t in reps:
        assert form_of(t).disc == t.a * t.a - 4 * D
        assert float(t.tau(64).imag) > 0
        assert reduce_form(form_of(t))[0] == form_of(t)


def test_square_degree_needs_flag():
    with pytest.raises(ValueError):
        enumerate_reps(4)
    assert len(distinct_periods(enumerate_reps(4, allow_square=True))) == 7


def test_degree_too_small():
    with pytest.raises(DegreeTooSmall):
        enumerate_reps(1)


def test_tau_rep_validation():
    with pytest.raises(ValueError):
        TauRep(2, 3, 0, 1)
    with pytest.raises(ValueError):
        TauRep(2, 0, 1, 1)
    t = TauRep(2, 0, 0, 1)
    assert t.label() == "sqrt(2)i"
    assert t.delta == 8 and t.c == 2


def test_predict_system():
    by_label = {t.label(): predict_system(t) for t in enumerate_reps(3)}
    assert by_label["(1+sqrt(11)i)/2"] == {SystemVariant.S3}
    assert by_label["sqrt(3)i"] == {SystemVariant.S2}
    assert SystemVariant.S1 in {v for t in enumerate_reps(3) for v in predict_system(t)}
    even = {t.label(): predict_system(t) for t in enumerate_reps(4, allow_square=True)}
    assert even["(1+sqrt(15)i)/4"] == {SystemVariant.S5, SystemVariant.S6}


def test_orders():
    assert fundamental_disc(-8) == -8
    assert fundamental_disc(-12) == -3
    assert fundamental_disc(-16) == -4
    o = endo_order(TauRep(2, 0, 0, 1))
    assert o.field_disc == -8 and o.field_label() == "Q(sqrt(-2))"


def test_variant_parse():
    assert SystemVariant.parse("2") is SystemVariant.S2
    assert SystemVariant.parse("s5") is SystemVariant.S5
    assert SystemVariant.for_degree(4) == [SystemVariant.S4, SystemVariant.S5, SystemVariant.S6]
