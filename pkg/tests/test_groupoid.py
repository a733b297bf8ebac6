from dataclasses import replace

import pytest

from conftest import corpus
from contactred.errors import InputError
from contactred.geometry import DiffForm, MultiVector, SmoothMap
from contactred.groupoid import (anchor_images, conformal_rescale_groupoid, convention_switch, flfr_residual,
                                 isotropy_tangent, verify_base_compatibility, verify_contact_groupoid,
                                 verify_convention_switch, verify_groupoid, verify_kernel_characterization)
from contactred.jacobi import JacobiStructure
from contactred.symexpr import Status, normalize, parse


@pytest.fixture(scope="module")
def G(r3):
    return r3.get("groupoids", "R3")


@pytest.fixture(scope="module")
def T1():
    return corpus("abelian_tstar").get("groupoids", "Tstar1")


def test_groupoid_axioms(G, T1):
    assert verify_groupoid(G).ok
    assert verify_groupoid(T1).ok


def test_multiplying_third_slot_breaks_units(G):
    bad = replace(G, mult=SmoothMap(G.fp.chart, G.gamma, ("p", "q2", "s*s2"), "mult_bad"))
    v = verify_groupoid(bad)
    assert v.status is Status.FALSIFIED
    assert "unit" in v.failing()


def test_contact_groupoids(G, T1):
    assert verify_contact_groupoid(G).ok
    assert verify_contact_groupoid(T1).ok


def test_f_equal_one_is_falsified_with_witness(G):
    v = verify_contact_groupoid(replace(G, f=parse("1")))
    assert v.status is Status.FALSIFIED
    assert v.witness is not None and v.residual


def test_base_compatibility(G, T1):
    B = G.base
    assert verify_base_compatibility(G, JacobiStructure(B, MultiVector.zero(B, 2), B.partial("t"))).ok
    assert verify_base_compatibility(G).ok
    wrong = JacobiStructure(B, MultiVector.zero(B, 2), 2 * B.partial("t"))
    assert verify_base_compatibility(G, wrong).status is Status.FALSIFIED
    Bx = T1.base
    assert verify_base_compatibility(T1, JacobiStructure(Bx, MultiVector.zero(Bx, 2), MultiVector.zero(Bx, 1))).ok


def test_kernel_characterization(G, r3):
    assert verify_kernel_characterization(G).ok
    swapped = r3.get("groupoids", "R3_swap")
    assert verify_kernel_characterization(swapped).status is Status.FALSIFIED


def test_isotropy_contact_point(G):
    iso = isotropy_tangent(G, [0])
    assert iso.leaf == "contact"
    assert len(iso.vectors) == 1
    assert iso.checks.ok
    # the only direction at the unit is along s
    (v,) = iso.vectors
    assert v[0] == 0 and v[1] == 0 and v[2] != 0


def test_isotropy_lcs_point(T1):
    iso = isotropy_tangent(T1, [1])
    assert iso.leaf == "lcs" and len(iso.vectors) == 2 and iso.checks.ok


def test_convention_switch(G, T1):
    Gl = convention_switch(G)
    assert Gl.theta == DiffForm(G.gamma, 1, {("p",): 1, ("q",): "-exp(s)"})
    assert Gl.f_left == normalize(parse("exp(s)")) and Gl.f == 1
    assert flfr_residual(Gl).is_canonical_zero
    assert verify_convention_switch(G, Gl).ok
    T1l = convention_switch(T1)
    assert T1l.theta == -T1.theta and T1l.f_left == 1
    with pytest.raises(InputError):
        convention_switch(Gl)


def test_anchor_images(G, T1):
    assert anchor_images(G).ok
    assert anchor_images(T1).ok


def test_conformal_rescale(G):
    same = conformal_rescale_groupoid(G, 1)
    assert same.theta == G.theta and same.f == G.f
    two = conformal_rescale_groupoid(G, 2)
    assert two.theta == 2 * G.theta and two.f == G.f
    assert verify_contact_groupoid(two).ok
    ex = conformal_rescale_groupoid(G, "exp(t)")
    assert ex.f == normalize(parse("exp(-s+q-p)"))
    assert ex.theta == parse("exp(q)") * G.theta
    assert verify_contact_groupoid(ex).ok and verify_groupoid(ex).ok
    with pytest.raises(InputError):
        conformal_rescale_groupoid(G, "t-t")
