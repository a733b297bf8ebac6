from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from contactred.errors import InputError
from contactred.orbit_arith import OrbitSpec, QuadSurd, compute_t0, integrality, prequant_report, u2_lens


def t0_of(text):
    return tuple(str(v) for v in compute_t0(OrbitSpec.parse(text)))


def test_integrality():
    assert integrality(OrbitSpec.parse("(2,1)/sqrt(5)")) == (True, (2, 1))
    assert integrality(OrbitSpec.parse("(1,0)")) == (True, (1, 0))
    assert integrality(OrbitSpec.parse("(1,sqrt(2))")) == (False, None)


def test_t0_values():
    assert t0_of("(2,1)/sqrt(5)") == ("1/sqrt(5)", "sqrt(5)", "5")
    assert t0_of("(1,0)") == ("1", "1", "1")
    assert t0_of("(3,4)/5") == ("1/5", "5", "25")
    assert str(OrbitSpec.parse("(3,4)/5").norm) == "1"


def test_t0_rejects_irrational_ray():
    with pytest.raises(InputError):
        compute_t0(OrbitSpec.parse("(1,sqrt(2))"))


def test_prequant_reports():
    r = prequant_report((2, 1))
    assert (r.n, str(r.F), r.lens) == (1, "-1/sqrt(5)", 1)
    r = prequant_report((4, 2))
    assert (r.n, r.primitive, str(r.F)) == (2, (2, 1), "-1/sqrt(5)")
    r = prequant_report((1, 0, 0))
    assert (r.n, str(r.F)) == (1, "-1")
    with pytest.raises(InputError):
        prequant_report((0, 0))


def test_u2_lens():
    assert u2_lens(2, 1) == 1
    assert u2_lens(3, 1) == 2
    assert u2_lens(1, 0) == 1
    with pytest.raises(InputError):
        u2_lens(2, 4)


@pytest.mark.parametrize("q, r, text", [
    (Fraction(1, 5), 5, "1/sqrt(5)"), (Fraction(2, 5), 5, "2/sqrt(5)"), (Fraction(3), 2, "3*sqrt(2)"),
    (Fraction(1, 40), 2, "1/(20*sqrt(2))"), (Fraction(-1), 7, "-sqrt(7)"), (Fraction(3, 4), 1, "3/4"),
])
def test_surd_printing(q, r, text):
    assert str(QuadSurd(q, r)) == text
    assert QuadSurd.from_expr(text) == QuadSurd(q, r)


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=4).filter(any))
def test_prequant_identities(d):
    r = prequant_report(d)
    assert r.n * QuadSurd.sqrt(sum(x * x for x in r.primitive)) == OrbitSpec.make([QuadSurd(Fraction(x)) for x in d]).norm
    assert r.t0 * sum(x * x for x in r.primitive) == r.T
    assert (r.F * r.F).square() == Fraction(1, sum(x * x for x in r.primitive) ** 2)


@given(st.fractions(min_value=Fraction(1, 100), max_value=100), st.integers(1, 60))
def test_surd_inverse(q, n):
    x = QuadSurd.sqrt(n) * q
    assert x * x.inverse() == QuadSurd(Fraction(1))
