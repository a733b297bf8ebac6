"""Task operations available in manifests.

Each handler takes ``(manifest, args, cfg)`` and returns ``(verdict, result)``;
either may be None.  ``OPS`` maps the operation name to its required
arguments and handler.
"""
from __future__ import annotations

import sympy as sp

from .. import action as act_mod
from .. import groupoid as gpd
from .. import jacobi as jac
from .. import orbit_arith as orb
from ..errors import InputError
from ..geometry import MultiVector, check_equal, check_expr_zero, check_zero
from ..groupoid import _tuple_equal
from ..symexpr import Status, Verdict, combine, parse, to_text


def _e(chart, text):
    return parse(str(text), chart.coords)


def _structure(m, args, key="structure"):
    return m.get("structures", args[key])


def _expect_exprs(chart, got, want, label):
    want = [_e(chart, w) for w in want]
    if len(want) != len(got):
        raise InputError(f"{label}: expected {len(got)} entries, got {len(want)}")
    return _tuple_equal(got, want, chart)


def _expect_form(m, got, name, label):
    return check_equal(got, m.get("forms", name), label=label)


def verify_jacobi(m, a, cfg):
    return jac.verify_jacobi(_structure(m, a), cfg), None


def verify_lcs(m, a, cfg):
    name = a["structure"]
    data = m.lcs.get(name) or jac.jacobi_to_lcs(_structure(m, a))
    return jac.verify_lcs(data, cfg), data.to_json()


def contact_to_jacobi(m, a, cfg):
    cd = jac.contact_to_jacobi(m.get("forms", a["form"]))
    result = cd.jacobi.to_json()
    parts = [("Jacobi identities", jac.verify_jacobi(cd.jacobi, cfg))]
    if "expect_bivector" in a:
        parts.append(("bivector", check_equal(cd.bivector, m.get("multivectors", a["expect_bivector"]), cfg)))
    if "expect_vector" in a:
        parts.append(("Reeb field", check_equal(cd.reeb, m.get("multivectors", a["expect_vector"]), cfg)))
    return combine(parts), result


def jacobi_bracket(m, a, cfg):
    S = _structure(m, a)
    b = jac.jacobi_bracket(S, _e(S.chart, a["f"]), _e(S.chart, a["g"]))
    v = check_expr_zero(b - _e(S.chart, a["expect"]), S.chart, cfg) if "expect" in a else None
    return v, {"bracket": to_text(b)}


def hamiltonian_vf(m, a, cfg):
    S = _structure(m, a)
    X = jac.hamiltonian_vf(S, _e(S.chart, a["u"]))
    v = _expect_exprs(S.chart, X.components(), a["expect"], "hamiltonian_vf") if "expect" in a else None
    return v, X.to_json()


def casimir(m, a, cfg):
    S = _structure(m, a)
    C = _e(S.chart, a["function"])
    return combine([(f"{{C, {c}}}", check_expr_zero(jac.jacobi_bracket(S, C, c), S.chart, cfg))
                    for c in S.chart.coords]), None


def verify_jacobi_map(m, a, cfg):
    return jac.verify_jacobi_map(m.get("maps", a["map"]), _structure(m, a, "source"),
                                 _structure(m, a, "target"), cfg), None


def verify_conformal_jacobi_map(m, a, cfg):
    phi = m.get("maps", a["map"])
    return jac.verify_conformal_jacobi_map(phi, _e(phi.source, a["u"]), _structure(m, a, "source"),
                                           _structure(m, a, "target"), cfg), None


def leaf_type(m, a, cfg):
    kind = jac.leaf_type(_structure(m, a), a["point"])
    v = _status(kind == a["expect"], f"leaf type {kind}") if "expect" in a else None
    return v, {"leaf": kind}


def _status(ok, note):
    return Verdict(Status.VERIFIED if ok else Status.FALSIFIED, "exact", None if ok else {"observed": note},
                   note=note)


def _groupoid_op(fn):
    def run(m, a, cfg):
        return fn(m.get("groupoids", a["groupoid"]), cfg=cfg), None
    run.__name__ = fn.__name__
    return run


def verify_convention_switch(m, a, cfg):
    G = m.get("groupoids", a["groupoid"])
    Gl = gpd.convention_switch(G)
    return gpd.verify_convention_switch(G, Gl, cfg), {"theta_left": Gl.theta.to_json(),
                                                      "f_left": to_text(Gl.f_left)}


def anchor_images(m, a, cfg):
    G = m.get("groupoids", a["groupoid"])
    parts = [("right-handed", gpd.anchor_images(G, cfg))]
    if a.get("with_switch", True):
        parts.append(("left-handed", gpd.anchor_images(gpd.convention_switch(G), cfg)))
    return combine(parts), None


def isotropy(m, a, cfg):
    G = m.get("groupoids", a["groupoid"])
    iso = gpd.isotropy_tangent(G, a["point"], cfg=cfg)
    result = {"leaf": iso.leaf, "generators": [[to_text(u), bool(r)] for u, r in iso.generators],
              "vectors": [[to_text(c) for c in v] for v in iso.vectors]}
    parts = [("isotropy lemma", iso.checks)]
    if "expect_leaf" in a:
        parts.append(("leaf type", _status(iso.leaf == a["expect_leaf"], iso.leaf)))
    if "expect_dim" in a:
        parts.append(("dimension", _status(len(iso.vectors) == int(a["expect_dim"]), str(len(iso.vectors)))))
    return combine(parts), result


def _action_op(fn):
    def run(m, a, cfg):
        return fn(m.get("actions", a["action"]), cfg=cfg), None
    run.__name__ = fn.__name__
    return run


def verify_f_multiplicative(m, a, cfg):
    A = m.get("actions", a["action"])
    return act_mod.verify_f_multiplicative(A, _e(A.manifold, a["F"]),
                                           _e(A.manifold, a["uhat"]) if "uhat" in a else None, cfg), None


def locally_free(m, a, cfg):
    A = m.get("actions", a["action"])
    lf = act_mod.check_locally_free(A, a["point"])
    v = None
    if "expect" in a:
        v = _status(("free" if lf.free else "not-free") == a["expect"], "free" if lf.free else "not-free")
    return v, lf.to_json()


def bracket_closure(m, a, cfg):
    A = m.get("actions", a["action"])
    M = A.manifold
    return act_mod.verify_invariant_bracket_closure(A, _e(M, a["F"]), _e(M, a["h"]), _e(M, a["k"]), cfg), None


def _reduce(m, name, cfg):
    kind, A, R = m.get("reductions", name)
    fn = act_mod.reduce_contact if kind == "contact" else act_mod.reduce_lcs
    return A, R, fn(A, R, cfg)


def reduce(m, a, cfg):
    A, R, red = _reduce(m, a["reduction"], cfg)
    parts = [("certifications", red.certifications)]
    for key, attr in (("expect_alpha", "alpha"), ("expect_Omega", "Omega"), ("expect_omega", "omega")):
        if key in a:
            got = getattr(red, attr)
            if got is None:
                raise InputError(f"{key} given for a {red.kind} reduction")
            parts.append((attr, _expect_form(m, got, a[key], attr)))
    return combine(parts), red.to_json()


def reduced_bracket(m, a, cfg):
    A, R, red = _reduce(m, a["reduction"], cfg)
    M = A.manifold
    return act_mod.verify_reduced_bracket(A, R.F, R, red, _e(M, a["h"]), _e(M, a["k"]), cfg), None


def orbit_t0(m, a, cfg):
    spec = orb.OrbitSpec.parse(a["xi"])
    t0, T, count = orb.compute_t0(spec)
    result = {"xi": str(spec), "norm": str(spec.norm), "t0": str(t0), "T": str(T), "count": count}
    return _expect_fields(result, a.get("expect")), result


def orbit_prequant(m, a, cfg):
    result = orb.prequant_report(a["d"]).to_json()
    return _expect_fields(result, a.get("expect")), result


def orbit_u2lens(m, a, cfg):
    result = {"m": int(a["m"]), "n": int(a["n"]), "lens": orb.u2_lens(a["m"], a["n"])}
    return _expect_fields(result, a.get("expect")), result


def orbit_integrality(m, a, cfg):
    ok, n = orb.integrality(orb.OrbitSpec.parse(a["xi"]))
    result = {"integral": ok, "primitive": list(n) if n else None}
    return _expect_fields(result, a.get("expect")), result


def _expect_fields(result, expect):
    if expect is None:
        return None
    parts = []
    for k, want in expect.items():
        got = result.get(k)
        ok = got == want or str(got) == str(want)
        parts.append((k, Verdict(Status.VERIFIED if ok else Status.FALSIFIED, "exact",
                                 None if ok else {"expected": str(want), "observed": str(got)})))
    return combine(parts)


OPS = {
    "verify_jacobi": (("structure",), verify_jacobi),
    "verify_lcs": (("structure",), verify_lcs),
    "contact_to_jacobi": (("form",), contact_to_jacobi),
    "jacobi_bracket": (("structure", "f", "g"), jacobi_bracket),
    "hamiltonian_vf": (("structure", "u"), hamiltonian_vf),
    "casimir": (("structure", "function"), casimir),
    "verify_jacobi_map": (("map", "source", "target"), verify_jacobi_map),
    "verify_conformal_jacobi_map": (("map", "u", "source", "target"), verify_conformal_jacobi_map),
    "leaf_type": (("structure", "point"), leaf_type),
    "verify_groupoid": (("groupoid",), _groupoid_op(gpd.verify_groupoid)),
    "verify_contact_groupoid": (("groupoid",), _groupoid_op(gpd.verify_contact_groupoid)),
    "verify_base_compatibility": (("groupoid",), _groupoid_op(gpd.verify_base_compatibility)),
    "verify_kernel_characterization": (("groupoid",), _groupoid_op(gpd.verify_kernel_characterization)),
    "verify_convention_switch": (("groupoid",), verify_convention_switch),
    "anchor_images": (("groupoid",), anchor_images),
    "isotropy": (("groupoid", "point"), isotropy),
    "verify_groupoid_action": (("action",), _action_op(act_mod.verify_groupoid_action)),
    "verify_contact_action": (("action",), _action_op(act_mod.verify_contact_action)),
    "verify_moment_jacobi": (("action",), _action_op(act_mod.verify_moment_jacobi)),
    "verify_hamil_identity": (("action",), _action_op(act_mod.verify_hamil_identity)),
    "verify_legendrian_graph": (("action",), _action_op(act_mod.verify_legendrian_graph)),
    "verify_f_multiplicative": (("action", "F"), verify_f_multiplicative),
    "locally_free": (("action", "point"), locally_free),
    "bracket_closure": (("action", "F", "h", "k"), bracket_closure),
    "reduce": (("reduction",), reduce),
    "reduced_bracket": (("reduction", "h", "k"), reduced_bracket),
    "orbit_t0": (("xi",), orbit_t0),
    "orbit_integrality": (("xi",), orbit_integrality),
    "orbit_prequant": (("d",), orbit_prequant),
    "orbit_u2lens": (("m", "n"), orbit_u2lens),
}
