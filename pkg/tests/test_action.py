from dataclasses import replace

import pytest

from conftest import corpus
from contactred.action import (HamiltonianData, ReductionInput, albert_action, check_locally_free,
                               hamiltonian_to_action, reduce_contact, reduce_lcs, right_multiplication_action,
                               solve_level_set, verify_contact_action, verify_f_multiplicative,
                               verify_groupoid_action, verify_hamil_identity, verify_invariant_bracket_closure,
                               verify_legendrian_graph, verify_moment_jacobi, verify_reduced_bracket)
from contactred.errors import DescentFailure, InputError, NotHamiltonian, WrongLeafType
from contactred.geometry import Chart, DiffForm, SmoothMap, check_equal
from contactred.groupoid import verify_contact_groupoid
from contactred.symexpr import Status, normalize, parse


@pytest.fixture(scope="module")
def A1(ex61):
    return ex61.get("actions", "A1")


@pytest.fixture(scope="module")
def RM(r3):
    return right_multiplication_action(r3.get("groupoids", "R3"))


def test_example_action_axioms(A1, RM):
    assert verify_groupoid_action(A1).ok
    assert verify_groupoid_action(RM).ok


def test_moment_must_match_source(A1):
    M = A1.manifold
    bad = replace(A1, act=SmoothMap(A1.afp.chart, M, ("exp(-s/2)*x1", "exp(-s/2)*y1", "z"), "act_z"))
    v = verify_groupoid_action(bad)
    assert v.status is Status.FALSIFIED


def test_contact_action_law(A1, RM, ex61):
    assert verify_contact_action(A1).ok
    assert verify_contact_action(RM).ok
    assert verify_contact_action(ex61.get("actions", "A1_bad")).status is Status.FALSIFIED


def test_moment_is_jacobi(A1, RM):
    assert verify_moment_jacobi(A1).ok
    assert verify_moment_jacobi(RM).ok


def test_hamiltonian_identity(A1, RM):
    assert verify_hamil_identity(A1).ok
    assert verify_hamil_identity(RM).ok
    assert verify_hamil_identity(corpus("cosphere_6_2").get("actions", "C2")).ok


def test_legendrian_graph(A1, RM):
    assert verify_legendrian_graph(A1).ok
    assert verify_legendrian_graph(RM).ok


def test_local_freeness(A1):
    assert check_locally_free(A1, [1, 0, 0]).free
    origin = check_locally_free(A1, [0, 0, 0])
    assert not origin.free and origin.reasons == ("T J^-1(J(m)) lies in ker theta_M",)
    assert not check_locally_free(A1, [0, 0, 5]).free
    const = replace(A1, moment=SmoothMap(A1.manifold, A1.moment.target, ("0",), "J0"))
    lf = check_locally_free(const, [1, 0, 0])
    assert not lf.free and "J is not a submersion" in lf.reasons


def test_f_multiplicative(A1):
    assert verify_f_multiplicative(A1, "x1^2+y1^2").ok
    assert verify_f_multiplicative(corpus("cosphere_6_2").get("actions", "C1"), "sqrt(y1^2)").ok
    v = verify_f_multiplicative(A1, "1")
    assert v.status is Status.FALSIFIED and v.witness is not None
    with pytest.raises(InputError):
        verify_f_multiplicative(A1, "x1^2+y1^2", uhat="x1")


def _circle_input(ex61, F="x1^2+y1^2"):
    return ReductionInput((0,), parse(F), ex61.get("maps", "circle"))


def test_reduce_contact_circle(A1, ex61):
    red = reduce_contact(A1, _circle_input(ex61))
    assert red.certifications.ok
    assert red.alpha == DiffForm(red.slice.source, 1, {("a",): "2/(1+a^2)"})
    assert check_equal(red.alpha, ex61.get("forms", "alpha_circle")).ok
    assert red.jacobi.vector.components() == [normalize(parse("(1+a^2)/2"))]


def test_reduce_contact_needs_f_multiplicative(A1, ex61):
    with pytest.raises(DescentFailure) as err:
        reduce_contact(A1, _circle_input(ex61, "1"))
    assert err.value.condition.startswith("C1")


def test_reduce_wrong_leaf(A1, ex61):
    with pytest.raises(WrongLeafType):
        reduce_lcs(A1, _circle_input(ex61))


def test_slice_must_lie_in_level_set(A1):
    C = Chart.make("C", "a")
    off = SmoothMap(C, A1.manifold, ("a", "1", "1"), "off")
    with pytest.raises(InputError):
        reduce_contact(A1, ReductionInput((0,), parse("x1^2+y1^2"), off))


def test_reduce_cosphere_two(ex61):
    m = corpus("cosphere_6_2")
    red = reduce_contact(m.get("actions", "C2"), m.get("reductions", "redc2")[2])
    assert red.certifications.ok
    assert check_equal(red.alpha, m.get("forms", "alpha_expected2")).ok


def test_reduce_lcs_abelian():
    m = corpus("abelian_tstar")
    kind, A, R = m.get("reductions", "Tstar1.red")
    red = reduce_lcs(A, R)
    assert red.kind == "lcs" and red.certifications.ok
    assert red.Omega.chart.dim == 0


def test_bracket_closure_and_reduced_bracket(A1, ex61):
    F, h, k = parse("x1^2+y1^2"), parse("x1^2/(x1^2+y1^2)"), parse("x1*y1/(x1^2+y1^2)")
    assert verify_invariant_bracket_closure(A1, F, h, k).ok
    R = _circle_input(ex61)
    red = reduce_contact(A1, R)
    assert verify_reduced_bracket(A1, F, R, red, h, k).ok
    with pytest.raises(InputError):
        verify_invariant_bracket_closure(A1, F, parse("z"), k)


def test_solve_level_set():
    M = Chart.make("M", "x y z")
    iota = solve_level_set(M, [parse("z + x*y")], [1])
    assert [c.name for c in iota.source.coords] == ["x", "y"]
    assert normalize(iota.pull(parse("z + x*y")) - 1) == 0
    with pytest.raises(InputError):
        solve_level_set(M, [parse("x^2+y^2+z^2")], [1])


def _translation_data(moment="x"):
    M = Chart.make("Mp", "x y z", positive=["x"])
    T = Chart.make("T", "g")
    return HamiltonianData(
        manifold=M, theta=DiffForm(M, 1, {("z",): 1, ("y",): "x"}), group=T,
        law=SmoothMap(Chart.make("TT", "g g2"), T, ("g+g2",), "law"), identity=(0,),
        inverse=SmoothMap(T, T, ("-g",), "inv"), mc=(T.d("g"),),
        action=SmoothMap(Chart.make("MT", "x y z g"), M, ("x", "y+g", "z"), "act"), moment=(parse(moment),))


def test_hamiltonian_route_line():
    A = hamiltonian_to_action(_translation_data())
    assert A.groupoid.base.dim == 0
    assert verify_groupoid_action(A).ok
    assert verify_contact_action(A).ok
    assert verify_contact_groupoid(A.groupoid).ok


def test_hamiltonian_route_rank_two():
    M = Chart.make("M5", "x1 x2 y1 y2 z", positive=["x1"])
    T = Chart.make("T2", "g1 g2")
    H = HamiltonianData(
        manifold=M, theta=DiffForm(M, 1, {("z",): 1, ("y1",): "x1", ("y2",): "x2"}), group=T,
        law=SmoothMap(Chart.make("TT2", "g1 g2 h1 h2"), T, ("g1+h1", "g2+h2"), "law"), identity=(0, 0),
        inverse=SmoothMap(T, T, ("-g1", "-g2"), "inv"), mc=(T.d("g1"), T.d("g2")),
        action=SmoothMap(Chart.make("MT2", "x1 x2 y1 y2 z g1 g2"), M, ("x1", "x2", "y1+g1", "y2+g2", "z"), "act"),
        moment=(parse("x1"), parse("x2")))
    A = hamiltonian_to_action(H)
    assert [c.name for c in A.groupoid.base.coords] == ["w2"]
    assert A.moment.exprs == (normalize(parse("x2/x1")),)
    assert verify_groupoid_action(A).ok and verify_contact_action(A).ok


def test_hamiltonian_route_rejects_wrong_moment():
    with pytest.raises(NotHamiltonian):
        hamiltonian_to_action(_translation_data("2*x"))


def test_albert_route():
    M = Chart.make("M", "x y z")
    theta = DiffForm(M, 1, {("z",): 1, ("y",): "x"})
    act = SmoothMap(Chart.make("Mg", "x y z g"), M, ("x", "y+g", "z"))
    flow = SmoothMap(Chart.make("Mr", "x y z r"), M, ("x", "y", "z+r"))
    A = albert_action(M, theta, act, ["x"], flow)
    assert verify_groupoid_action(A).ok and verify_contact_action(A).ok
    with pytest.raises(NotHamiltonian):
        albert_action(M, theta, act, ["2*x"], flow)
    bad_flow = SmoothMap(flow.source, M, ("x", "y+r", "z"))
    with pytest.raises(InputError):
        albert_action(M, theta, act, ["x"], bad_flow)

