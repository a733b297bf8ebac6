import sympy as sp
import pytest
from hypothesis import given, settings, strategies as st

from contactred.errors import InputError
from contactred.symexpr import (SamplingConfig, Status, canon, differentiate, is_zero, normalize, parse,
                                substitute, to_text)

x, y, z, s, q, a = sp.symbols("x y z s q a")


def P(text):
    return parse(text)


def test_exp_products_merge():
    assert normalize(P("exp(s)*exp(-s)")) == 1
    assert normalize(P("exp(a)*exp(s)")) == normalize(P("exp(a+s)"))
    assert normalize(P("exp(0)")) == 1


def test_commutativity_cancels():
    assert normalize(P("x*y - y*x")) == 0


def test_radical_powers_combine():
    assert normalize(P("x^(1/2)*x^(1/3)")) == normalize(P("x^(5/6)"))
    assert normalize(P("((x^2+2*x*y+y^2)^(1/2))^2")) == normalize(P("x^2+2*x*y+y^2"))


def test_sqrt_square_oracle_points():
    # frozen oracle: expand both sides at rational points
    lhs = P("((x^2+2*x*y+y^2)^(1/2))^2")
    rhs = P("x^2+2*x*y+y^2")
    for i in range(1, 21):
        pt = {x: sp.Rational(i, 7), y: sp.Rational(3 - i, 5)}
        assert sp.simplify(lhs.subs(pt) - rhs.subs(pt)) == 0


def test_canonical_form_is_unique():
    e1 = P("(x+1)^2/(2*x+2)")
    e2 = P("x/2 + 1/2")
    assert to_text(e1) == to_text(e2)
    assert sp.srepr(canon(e1).expr) == sp.srepr(canon(e2).expr)


def test_mixed_partials_of_opaque_commute():
    u = P("u(x,y)")
    assert differentiate(differentiate(u, x), y) == differentiate(differentiate(u, y), x)


@pytest.mark.parametrize("text, c, want", [
    ("u(z)", "z", "u'(z)"),
    ("exp(-s)", "s", "-exp(-s)"),
    ("x^2*y", "x", "2*x*y"),
])
def test_differentiate(text, c, want):
    assert differentiate(P(text), sp.Symbol(c)) == normalize(P(want))


def test_differentiate_needs_coordinate():
    with pytest.raises(InputError):
        differentiate(P("x"), P("x+1"))


def test_is_zero_verified_canonically():
    v = is_zero(P("(x+y)^2 - x^2 - 2*x*y - y^2"))
    assert v.status is Status.VERIFIED and v.method == "canonical"


def test_is_zero_falsified_with_witness():
    v = is_zero(P("x*y - 1"), SamplingConfig(seed=3))
    assert v.status is Status.FALSIFIED
    assert v.witness is not None
    assert abs(float(sp.Rational(v.witness["residual"]))) > SamplingConfig().tolerance


def test_independent_opaque_functions_do_not_collide():
    v = is_zero(P("u(z)*v(z) - w(z)"), SamplingConfig(seed=1))
    assert v.status is Status.FALSIFIED


@pytest.mark.parametrize("seed", range(5))
def test_sampling_never_verifies(seed):
    # exp(x)^2 - exp(2x) cancels canonically; a perturbed version can only be falsified
    v = is_zero(P("exp(x)^2 - exp(2*x) + 10^(-30)*x"), SamplingConfig(seed=seed))
    assert v.status is not Status.VERIFIED


def test_substitute_examples():
    assert substitute(P("u(q)"), {q: z}) == normalize(P("u(z)"))
    assert substitute(P("exp(-s)"), {s: P("s+s2")}) == normalize(P("exp(-s-s2)"))
    circle = {x: P("2*a/(1+a^2)"), y: P("(1-a^2)/(1+a^2)")}
    assert substitute(P("x^2+y^2"), circle) == 1


def test_substitute_strict_reports_unbound():
    with pytest.raises(InputError):
        substitute(P("x+y"), {x: 1})


@pytest.mark.parametrize("bad", ["x +", "sin(x)", "u'(", "x^^2", "(x"])
def test_parse_rejects(bad):
    with pytest.raises(InputError):
        parse(bad)


def test_parse_restricts_symbols():
    with pytest.raises(InputError):
        parse("x + w", ["x"])


# --- property tests --------------------------------------------------------

atoms = st.sampled_from(["x", "y", "z", "1", "2", "1/3", "-5/2", "exp(x)", "exp(-y)", "u(z)", "u'(z)"])


def _combine(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: f"({t[0]})+({t[1]})"),
        st.tuples(children, children).map(lambda t: f"({t[0]})*({t[1]})"),
        st.tuples(children, children).map(lambda t: f"({t[0]})-({t[1]})"),
        st.tuples(children, st.integers(1, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
        children.map(lambda c: f"exp({c})"),
    )


expr_text = st.recursive(atoms, _combine, max_leaves=6)


@settings(max_examples=80, deadline=None)
@given(expr_text)
def test_print_parse_round_trip(text):
    e = normalize(parse(text))
    back = parse(to_text(e))
    assert normalize(back) == e
    assert to_text(back) == to_text(e)


@settings(max_examples=60, deadline=None)
@given(expr_text, expr_text)
def test_difference_with_itself_is_canonical_zero(t1, t2):
    e = parse(f"({t1})*({t2})")
    f = parse(f"({t2})*({t1})")
    assert is_zero(e - f).status is Status.VERIFIED
