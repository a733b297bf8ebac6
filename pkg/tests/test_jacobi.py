import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from conftest import corpus
from contactred.errors import InputError, NotContact, NotLcsType
from contactred.geometry import Chart, DiffForm, MultiVector, SmoothMap, check_equal
from contactred.jacobi import (JacobiStructure, LcsData, StructureConstants, conformal_change,
                               contact_to_jacobi, hamiltonian_vf, jacobi_bracket, jacobi_to_contact,
                               jacobi_to_lcs, lcs_to_jacobi, leaf_type, lie_poisson, verify_conformal_jacobi_map,
                               verify_jacobi, verify_jacobi_map, verify_lcs)
from contactred.symexpr import Status, normalize, parse

R2 = Chart.make("R2", "x y")
R4 = Chart.make("R4", "x1 y1 x2 y2")
B = Chart.make("B", "t")
DT = JacobiStructure(B, MultiVector.zero(B, 2), B.partial("t"))


@pytest.fixture(scope="module")
def S1(ex61):
    return ex61.get("structures", "S1")


def test_example_structure_is_jacobi(S1, ex61):
    assert verify_jacobi(S1).status is Status.VERIFIED
    assert S1.bivector == ex61.get("multivectors", "Lambda1")
    assert S1.vector == ex61.get("multivectors", "E1")


def test_trivial_structure_is_jacobi():
    assert verify_jacobi(JacobiStructure(R2, MultiVector.zero(R2, 2), MultiVector.zero(R2, 1))).ok


def test_symplectic_bivector_with_euler_field_is_not_jacobi():
    S = JacobiStructure(R2, MultiVector(R2, 2, {("x", "y"): 1}), MultiVector(R2, 1, {("x",): "x"}))
    assert verify_jacobi(S).status is Status.FALSIFIED


def test_bracket_examples(S1):
    assert jacobi_bracket(S1, "x1*z", "x1*z") == 0
    assert jacobi_bracket(S1, "1", "z") == 1
    lhs = jacobi_bracket(S1, "x1*y1", "z")
    rhs = (parse("x1") * jacobi_bracket(S1, "y1", "z") + parse("y1") * jacobi_bracket(S1, "x1", "z")
           - parse("x1*y1") * jacobi_bracket(S1, "1", "z"))
    assert normalize(lhs - rhs) == 0


def test_hamiltonian_vector_fields(S1, r3):
    assert hamiltonian_vf(S1, 1) == S1.vector
    X = hamiltonian_vf(S1, "u(z)")
    assert X.components() == [normalize(parse(t)) for t in ("u'(z)*x1/2", "u'(z)*y1/2", "u(z)")]
    SG = r3.get("structures", "S_G")
    assert hamiltonian_vf(SG, "u(q)").components() == [0, normalize(parse("u(q)")), normalize(parse("-u'(q)"))]


def test_conformal_change(S1):
    assert conformal_change(S1, 1) == S1
    Su = conformal_change(S1, "exp(z)")
    assert verify_jacobi(Su).ok
    lhs = jacobi_bracket(Su, "x1", "y1")
    rhs = parse("exp(-z)") * jacobi_bracket(S1, "exp(z)*x1", "exp(z)*y1")
    assert normalize(lhs - rhs) == 0
    with pytest.raises(InputError):
        conformal_change(S1, "x1-x1")


def test_contact_to_jacobi_groupoid(r3):
    cd = contact_to_jacobi(r3.get("forms", "theta_G"))
    assert cd.reeb == r3.get("multivectors", "E_G")
    assert cd.bivector == r3.get("multivectors", "Lambda_G")


def test_contact_to_jacobi_on_line():
    cd = contact_to_jacobi(B.d("t"))
    assert cd.reeb == B.partial("t") and cd.bivector.is_canonical_zero


def test_non_contact_form_rejected():
    R3 = Chart.make("R3c", "x y z")
    with pytest.raises(NotContact):
        contact_to_jacobi(DiffForm(R3, 1, {("z",): 1}))


def test_jacobi_to_contact_round_trips(S1, ex61, r3):
    assert jacobi_to_contact(S1) == ex61.get("forms", "theta1")
    assert jacobi_to_contact(r3.get("structures", "S_G")) == r3.get("forms", "theta_G")
    assert jacobi_to_contact(DT) == B.d("t")


def test_symplectic_lcs():
    S = JacobiStructure.poisson(R2, MultiVector(R2, 2, {("x", "y"): 1}))
    data = jacobi_to_lcs(S)
    assert data.Omega == DiffForm(R2, 2, {("x", "y"): 1})
    assert data.omega.is_canonical_zero
    assert verify_lcs(data).ok
    assert lcs_to_jacobi(data) == S


def test_conformal_image_is_lcs():
    S = conformal_change(JacobiStructure.poisson(R2, MultiVector(R2, 2, {("x", "y"): 1})), "exp(x)")
    data = jacobi_to_lcs(S)
    assert data.omega == DiffForm(R2, 1, {("x",): -1})
    assert verify_lcs(data).ok


def test_verify_lcs_falsified_in_dimension_four():
    Om = DiffForm(R4, 2, {("x1", "y1"): 1, ("x2", "y2"): 1})
    assert verify_lcs(LcsData(R4, Om, R4.d("x1"))).status is Status.FALSIFIED


def test_odd_dimension_is_not_lcs(S1):
    with pytest.raises(NotLcsType):
        jacobi_to_lcs(S1)


def test_jacobi_maps(S1, ex61, r3):
    M1 = S1.chart
    assert verify_jacobi_map(SmoothMap.identity(M1), S1, S1).ok
    assert verify_jacobi_map(ex61.get("maps", "J1"), S1, DT).ok
    SG = r3.get("structures", "S_G")
    tgt = r3.get("maps", "tgt")
    assert verify_conformal_jacobi_map(tgt, "-exp(-s)", SG, DT).ok
    assert verify_jacobi_map(tgt, SG, DT).status is Status.FALSIFIED


SL2 = [[[0, "1/2"], ["1/2", 0]], [["1/2", 0], [0, "-1/2"]], [[0, "1/2"], ["-1/2", 0]]]


def test_lie_poisson_sl2_brackets():
    S = lie_poisson(StructureConstants.from_matrices([[[parse(str(v)) for v in r] for r in m] for m in SL2]))
    assert jacobi_bracket(S, "mu1", "mu2") == normalize(parse("-mu3"))
    assert jacobi_bracket(S, "mu1", "mu3") == normalize(parse("-mu2"))
    assert jacobi_bracket(S, "mu2", "mu3") == normalize(parse("mu1"))
    for c in ("mu1", "mu2", "mu3"):
        assert jacobi_bracket(S, "mu1^2+mu2^2-mu3^2", c) == 0
    assert leaf_type(S, [1, 0, 1]) == "lcs"


def test_lie_poisson_abelian_and_cross_product():
    assert lie_poisson(StructureConstants(2, {})).bivector.is_canonical_zero
    from fractions import Fraction
    eps = StructureConstants(3, {(0, 1): {2: Fraction(1)}, (1, 2): {0: Fraction(1)}, (0, 2): {1: Fraction(-1)}})
    S = lie_poisson(eps)
    want = MultiVector(S.chart, 2, {("mu1", "mu2"): "mu3", ("mu2", "mu3"): "mu1", ("mu3", "mu1"): "mu2"})
    assert S.bivector == want
    assert all(jacobi_bracket(S, "mu1^2+mu2^2+mu3^2", c) == 0 for c in S.chart.coords)


def test_bad_structure_constants():
    from fractions import Fraction
    bad = StructureConstants(3, {(0, 1): {0: Fraction(1)}, (1, 2): {1: Fraction(1)}})
    with pytest.raises(InputError):
        lie_poisson(bad)


def test_leaf_types(S1):
    assert leaf_type(S1, [0, 0, 0]) == "contact"
    assert leaf_type(DT, [0]) == "contact"


# --- bracket properties on 50 random pairs per corpus structure -------------

CORPUS_STRUCTURES = [("example_6_1", "S1"), ("example_6_1", "S2"), ("r3_groupoid", "S_G"),
                     ("r3_groupoid", "base_dt"), ("cosphere_6_2", "Sc1"), ("cosphere_6_2", "Sc2"),
                     ("sl2_casimir", "LP_sl2"), ("sl2_casimir", "LP_so3")]


def _exprs(chart):
    names = [c.name for c in chart.coords]
    leaf = st.one_of(st.sampled_from(names), st.integers(-3, 3).map(str), st.sampled_from(["u(%s)" % names[0]]))
    return st.recursive(leaf, lambda ch: st.one_of(
        st.tuples(ch, ch).map(lambda t: f"({t[0]})+({t[1]})"),
        st.tuples(ch, ch).map(lambda t: f"({t[0]})*({t[1]})"),
        ch.map(lambda c: f"exp({c})")), max_leaves=4)


@pytest.mark.parametrize("entry, name", CORPUS_STRUCTURES)
def test_bracket_antisymmetry_and_locality(entry, name):
    S = corpus(entry).get("structures", name)
    exprs = _exprs(S.chart)

    @settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(exprs, exprs, exprs)
    def check(f1, f2, g):
        assert normalize(jacobi_bracket(S, f1, g) + jacobi_bracket(S, g, f1)) == 0
        P = lambda t: parse(t, S.chart.coords)
        lhs = jacobi_bracket(S, f"({f1})*({f2})", g)
        rhs = (P(f1) * jacobi_bracket(S, f2, g) + P(f2) * jacobi_bracket(S, f1, g)
               - P(f1) * P(f2) * jacobi_bracket(S, "1", g))
        assert normalize(lhs - rhs) == 0

    check()
