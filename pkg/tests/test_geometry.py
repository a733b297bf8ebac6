import pytest
from hypothesis import given, settings, strategies as st

from contactred.errors import InputError
from contactred.geometry import (Chart, DiffForm, MultiVector, SmoothMap, apply_vector, check_equal,
                                 check_zero, exterior_derivative, interior_product, lie_derivative,
                                 pullback, relatedness, schouten_bracket, sharp, wedge)
from contactred.symexpr import Status, normalize, parse

R3 = Chart.make("R3", "x y z")
G = Chart.make("G", "p q s")


def theta61():
    return DiffForm(R3, 1, {("x",): "-y", ("y",): "x", ("z",): "1"})


def lambda61():
    return MultiVector(R3, 2, {("x", "y"): "1/2", ("x", "z"): "-x/2", ("y", "z"): "-y/2"})


def dz():
    return R3.partial("z")


def test_wedge_examples():
    dxdy = wedge(R3.d("x"), R3.d("y"))
    assert dxdy == DiffForm(R3, 2, {("x", "y"): 1})
    assert wedge(R3.d("x"), R3.d("x")).is_canonical_zero
    assert wedge(dz(), lambda61()) == MultiVector(R3, 3, {("x", "y", "z"): "1/2"})


def test_index_order_sign():
    assert DiffForm(R3, 2, {("y", "x"): 1}) == -DiffForm(R3, 2, {("x", "y"): 1})


def test_exterior_derivative_examples():
    assert exterior_derivative(theta61()) == DiffForm(R3, 2, {("x", "y"): 2})
    thG = DiffForm(G, 1, {("p",): "-exp(-s)", ("q",): 1})
    assert exterior_derivative(thG) == DiffForm(G, 2, {("s", "p"): "exp(-s)"})
    top = DiffForm(R3, 3, {("x", "y", "z"): 5})
    assert exterior_derivative(top).is_canonical_zero


def test_interior_products():
    assert interior_product(dz(), R3.d("z")).value() == 1
    thG = DiffForm(G, 1, {("p",): "-exp(-s)", ("q",): 1})
    assert interior_product(G.partial("q"), thG).value() == 1
    assert interior_product(dz(), DiffForm(R3, 2, {("x", "y"): 2})).is_canonical_zero


def test_lie_derivative_examples():
    f = DiffForm(R3, 1, {("x",): "y^2"})
    assert lie_derivative(dz(), f).is_canonical_zero
    xdx = MultiVector(R3, 1, {("x",): "x"})
    bi = MultiVector(R3, 2, {("x", "y"): 1})
    assert lie_derivative(xdx, bi) == -bi
    X = R3.partial("x")
    th = theta61()
    cartan = exterior_derivative(interior_product(X, th)) + interior_product(X, exterior_derivative(th))
    assert lie_derivative(X, th) == cartan


def test_schouten_anchor_identities():
    assert schouten_bracket(R3.partial("x"), R3.partial("y")).is_canonical_zero
    L, E = lambda61(), dz()
    assert schouten_bracket(L, E).is_canonical_zero
    assert schouten_bracket(L, L) == 2 * wedge(E, L)


def test_schouten_of_vectors_is_lie_bracket():
    X = MultiVector(R3, 1, {("x",): "y", ("z",): "x^2"})
    Y = MultiVector(R3, 1, {("y",): "z*x"})
    br = schouten_bracket(X, Y)
    f = parse("f(x,y,z)")
    lhs = apply_vector(X, apply_vector(Y, f)) - apply_vector(Y, apply_vector(X, f))
    assert normalize(lhs - apply_vector(br, f)) == 0


def test_sharp_examples():
    LG = MultiVector(G, 2, {("s", "p"): "exp(s)", ("s", "q"): 1})
    assert sharp(LG, G.d("q")) == -G.partial("s")
    assert sharp(MultiVector.zero(R3, 2), R3.d("x")).is_canonical_zero
    # fixed by X_{J*u} = u E + ♯Λ(du) for J = z matching u(z)∂z + ½u'(z)(x∂x + y∂y)
    assert sharp(lambda61(), R3.d("z")) == MultiVector(R3, 1, {("x",): "x/2", ("y",): "y/2"})


def test_pullbacks():
    B = Chart.make("B", "t")
    J = SmoothMap(R3, B, ("z",), "J")
    assert pullback(J, B.d("t")) == R3.d("z")
    unit = SmoothMap(Chart.make("X", "x"), G, ("x", "x", "0"), "unit")
    thG = DiffForm(G, 1, {("p",): "-exp(-s)", ("q",): 1})
    assert pullback(unit, thG).is_canonical_zero


def test_pullback_rejects_wrong_chart():
    J = SmoothMap(R3, Chart.make("B", "t"), ("z",), "J")
    with pytest.raises(InputError):
        pullback(J, theta61())


def test_relatedness():
    B = Chart.make("B", "t")
    J = SmoothMap(R3, B, ("z",), "J")
    assert relatedness(SmoothMap.identity(R3), lambda61(), lambda61()).status is Status.VERIFIED
    assert relatedness(J, dz(), B.partial("t")).status is Status.VERIFIED
    assert relatedness(J, lambda61(), MultiVector.zero(B, 2)).status is Status.VERIFIED
    assert relatedness(J, dz(), 2 * B.partial("t")).status is Status.FALSIFIED


def test_check_zero_reports_witness():
    v = check_zero(DiffForm(R3, 1, {("x",): "x*y-1"}))
    assert v.status is Status.FALSIFIED and v.witness is not None


def test_json_round_trip():
    w = wedge(theta61(), R3.d("x"))
    assert DiffForm.from_json(w.to_json(), {"R3": R3}) == w


# --- property tests --------------------------------------------------------

coef = st.sampled_from(["0", "1", "x", "y", "z", "x*y", "z^2", "exp(x)", "y/(1+x^2)", "u(z)", "x-3*z"])


def forms(degree):
    idx = [("x",), ("y",), ("z",)] if degree == 1 else [("x", "y"), ("x", "z"), ("y", "z")]
    if degree == 0:
        return coef.map(lambda c: DiffForm(R3, 0, {(): c}))
    return st.lists(coef, min_size=3, max_size=3).map(lambda cs: DiffForm(R3, degree, dict(zip(idx, cs))))


def multivectors(degree):
    idx = {1: [("x",), ("y",), ("z",)], 2: [("x", "y"), ("x", "z"), ("y", "z")], 3: [("x", "y", "z")]}[degree]
    return st.lists(coef, min_size=len(idx), max_size=len(idx)).map(
        lambda cs: MultiVector(R3, degree, dict(zip(idx, cs))))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0, 1, 2]).flatmap(forms))
def test_d_squared_is_zero(w):
    assert exterior_derivative(exterior_derivative(w)).is_canonical_zero


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0, 1]).flatmap(forms))
def test_pullback_commutes_with_d(w):
    phi = SmoothMap(G, R3, ("p*q", "exp(s)", "q-s^2"), "phi")
    assert pullback(phi, exterior_derivative(w)) == exterior_derivative(pullback(phi, w))


def _graded_jacobi(P, Q, R):
    p, q, r = P.degree, Q.degree, R.degree
    sign = lambda a, b: (-1) ** ((a - 1) * (b - 1))
    total = (sign(p, r) * schouten_bracket(P, schouten_bracket(Q, R))
             + sign(q, p) * schouten_bracket(Q, schouten_bracket(R, P))
             + sign(r, q) * schouten_bracket(R, schouten_bracket(P, Q)))
    return total


@settings(max_examples=25, deadline=None)
@given(multivectors(1), multivectors(2), multivectors(2))
def test_schouten_graded_jacobi_random(P, Q, R):
    assert _graded_jacobi(P, Q, R).is_canonical_zero


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([1, 2]).flatmap(multivectors), st.sampled_from([1, 2]).flatmap(multivectors))
def test_schouten_graded_antisymmetry(P, Q):
    sign = (-1) ** ((P.degree - 1) * (Q.degree - 1))
    assert (schouten_bracket(P, Q) + sign * schouten_bracket(Q, P)).is_canonical_zero


def test_schouten_graded_jacobi_on_corpus_tensors(ex61):
    L = ex61.get("multivectors", "Lambda1")
    E = ex61.get("multivectors", "E1")
    M1 = L.chart
    X = MultiVector(M1, 1, {("x1",): "y1*z", ("z",): "x1"})
    for P, Q, R in [(L, L, L), (L, L, E), (L, E, X), (X, L, L)]:
        assert _graded_jacobi(P, Q, R).is_canonical_zero
