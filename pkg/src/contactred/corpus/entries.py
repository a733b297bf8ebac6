"""Built-in corpus.  Every entry is a manifest dictionary built in code so
that derived expressions (stereographic charts, rotation laws) are produced
by the expression layer itself rather than typed by hand."""
from __future__ import annotations

import sympy as sp

from ..errors import InputError
from ..symexpr import normalize, to_text
from .manifest import VERSION


def _chart(coords, **kw):
    return {"coords": list(coords), **kw}


def _map(src, tgt, exprs):
    return {"source": src, "target": tgt, "exprs": [e if isinstance(e, str) else to_text(normalize(e))
                                                    for e in exprs]}


def _tensor(chart, degree, terms):
    return {"chart": chart, "degree": degree, "terms": [[list(i) if not isinstance(i, str) else [i], t]
                                                        for i, t in terms]}


def _manifest(name, description, **sections):
    out = {"version": VERSION, "name": name, "description": description}
    out.update(sections)
    return out


def _merge(*blocks):
    out: dict = {}
    for b in blocks:
        for k, v in b.items():
            if isinstance(v, dict):
                out.setdefault(k, {}).update(v)
            elif isinstance(v, list):
                out.setdefault(k, []).extend(v)
            else:
                out[k] = v
    return out


def r3_block():
    """Contact groupoid on ℝ³ = {(p,q,s)} over ℝ with s = q, t = p."""
    return {
        "charts": {"G": _chart("pqs"), "B": _chart("t"), "GG": _chart(["p", "q", "s", "q2", "s2"])},
        "maps": {
            "src": _map("G", "B", ["q"]), "tgt": _map("G", "B", ["p"]),
            "unit": _map("B", "G", ["t", "t", "0"]), "inv": _map("G", "G", ["q", "p", "-s"]),
            "pr1": _map("GG", "G", ["p", "q", "s"]), "pr2": _map("GG", "G", ["q", "q2", "s2"]),
            "mult": _map("GG", "G", ["p", "q2", "s+s2"]),
        },
        "forms": {"theta_G": _tensor("G", 1, [("p", "-exp(-s)"), ("q", "1")]),
                  "dt": _tensor("B", 1, [("t", "1")])},
        "structures": {"base_dt": {"contact_form": "dt"}},
        "fiber_products": {"GG": {"chart": "GG", "pr1": "pr1", "pr2": "pr2",
                                  "selection": [[1, "p"], [1, "q"], [1, "s"], [2, "q"], [2, "s"]]}},
        "groupoids": {"R3": {"gamma": "G", "base": "B", "source": "src", "target": "tgt", "unit": "unit",
                             "inverse": "inv", "fiber_product": "GG", "mult": "mult",
                             "theta": "theta_G", "f": "exp(-s)"}},
    }


def _groupoid_tasks(g, prefix):
    return [{"name": f"{prefix}.{op}", "op": op, "groupoid": g}
            for op in ("verify_groupoid", "verify_contact_groupoid", "verify_base_compatibility",
                       "verify_kernel_characterization")]


def _action_tasks(a, prefix, legendrian=False):
    ops = ["verify_groupoid_action", "verify_contact_action", "verify_moment_jacobi", "verify_hamil_identity"]
    if legendrian:
        ops.append("verify_legendrian_graph")
    return [{"name": f"{prefix}.{op}", "op": op, "action": a} for op in ops]


def r3_groupoid():
    b = r3_block()
    tasks = _groupoid_tasks("R3", "R3") + [
        {"name": "R3.contact_to_jacobi", "op": "contact_to_jacobi", "form": "theta_G",
         "expect_bivector": "Lambda_G", "expect_vector": "E_G"},
        {"name": "R3.X_su", "op": "hamiltonian_vf", "structure": "S_G", "u": "u(q)",
         "expect": ["0", "u(q)", "-u'(q)"]},
        {"name": "R3.isotropy_0", "op": "isotropy", "groupoid": "R3", "point": [0],
         "expect_leaf": "contact", "expect_dim": 1},
        {"name": "R3.f_equals_1_is_rejected", "op": "verify_contact_groupoid", "groupoid": "R3_f1",
         "expect_status": "Falsified"},
        {"name": "R3.swapped_source_target", "op": "verify_kernel_characterization", "groupoid": "R3_swap",
         "expect_status": "Falsified"},
    ]
    extra = {
        "multivectors": {"Lambda_G": _tensor("G", 2, [(("s", "p"), "exp(s)"), (("s", "q"), "1")]),
                         "E_G": _tensor("G", 1, [("q", "1")])},
        "structures": {"S_G": {"contact_form": "theta_G"}},
        "groupoids": {"R3_f1": {"variant": {"of": "R3", "f": "1"}},
                      "R3_swap": {"variant": {"of": "R3", "source": "tgt", "target": "src"}}},
    }
    return _manifest("r3_groupoid", "contact groupoid (ℝ³, -exp(-s)dp + dq, f = exp(-s))",
                     **_merge(b, extra, {"tasks": tasks}))


def _example_61_block(n):
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    M = f"M{n}"
    coords = xs + ys + ["z"]
    theta = [(x, f"-{y}") for x, y in zip(xs, ys)] + [(y, x) for x, y in zip(xs, ys)] + [("z", "1")]
    af = f"AF{n}"
    half = "exp(-s/2)"
    sec = {
        "charts": {M: _chart(coords), af: _chart(coords + ["q", "s"])},
        "maps": {f"J{n}": _map(M, "B", ["z"]),
                 f"prM{n}": _map(af, M, coords), f"prG{n}": _map(af, "G", ["z", "q", "s"]),
                 f"act{n}": _map(af, M, [f"{half}*{c}" for c in xs + ys] + ["q"])},
        "forms": {f"theta{n}": _tensor(M, 1, theta)},
        "structures": {f"S{n}": {"contact_form": f"theta{n}"}},
        "fiber_products": {af: {"chart": af, "pr1": f"prM{n}", "pr2": f"prG{n}",
                                "selection": [[1, c] for c in coords] + [[2, "q"], [2, "s"]]}},
        "actions": {f"A{n}": {"groupoid": "R3", "manifold": M, "theta": f"theta{n}", "moment": f"J{n}",
                              "fiber_product": af, "act": f"act{n}"}},
    }
    return sec, xs, ys


def example_6_1():
    blocks = [r3_block()]
    tasks = []
    # n = 1: circle slice
    sec1, xs, ys = _example_61_block(1)
    d1 = {
        "charts": {"C1": _chart(["a"]), "R2": _chart(["x1", "y1"])},
        "maps": {"circle": _map("C1", "M1", ["2*a/(1+a^2)", "(1-a^2)/(1+a^2)", "0"]),
                 "circle_R2": _map("C1", "R2", ["2*a/(1+a^2)", "(1-a^2)/(1+a^2)"]),
                 "act1_bad": _map("AF1", "M1", ["exp(-s)*x1", "exp(-s/2)*y1", "q"])},
        "forms": {"lam2": _tensor("R2", 1, [("x1", "-y1"), ("y1", "x1")]),
                  "lam2_circle": {"pullback": {"map": "circle_R2", "form": "lam2"}},
                  "alpha_circle": {"scale": {"by": "-1", "form": "lam2_circle"}}},
        "actions": {"A1_bad": {"groupoid": "R3", "manifold": "M1", "theta": "theta1", "moment": "J1",
                               "fiber_product": "AF1", "act": "act1_bad"}},
        "reductions": {"red1": {"action": "A1", "x": [0], "F": "x1^2+y1^2", "slice": "circle"},
                       "red1_F1": {"action": "A1", "x": [0], "F": "1", "slice": "circle"},
                       "red1_lcs": {"action": "A1", "x": [0], "F": "x1^2+y1^2", "slice": "circle",
                                    "kind": "lcs"}},
    }
    blocks += [sec1, d1]
    tasks += [
        {"name": "n1.verify_jacobi", "op": "verify_jacobi", "structure": "S1"},
        {"name": "n1.contact_to_jacobi", "op": "contact_to_jacobi", "form": "theta1",
         "expect_bivector": "Lambda1", "expect_vector": "E1"},
        {"name": "n1.X_Ju", "op": "hamiltonian_vf", "structure": "S1", "u": "u(z)",
         "expect": ["u'(z)*x1/2", "u'(z)*y1/2", "u(z)"]},
        {"name": "n1.J_jacobi_map", "op": "verify_jacobi_map", "map": "J1", "source": "S1",
         "target": "base_dt"},
    ] + _action_tasks("A1", "n1", legendrian=True) + [
        {"name": "n1.cga_wrong_scaling", "op": "verify_contact_action", "action": "A1_bad",
         "expect_status": "Falsified"},
        {"name": "n1.F_multiplicative", "op": "verify_f_multiplicative", "action": "A1", "F": "x1^2+y1^2"},
        {"name": "n1.F_1_not_multiplicative", "op": "verify_f_multiplicative", "action": "A1", "F": "1",
         "expect_status": "Falsified"},
        {"name": "n1.free_at_100", "op": "locally_free", "action": "A1", "point": [1, 0, 0], "expect": "free"},
        {"name": "n1.not_free_at_origin", "op": "locally_free", "action": "A1", "point": [0, 0, 0],
         "expect": "not-free"},
        {"name": "n1.not_free_on_z_axis", "op": "locally_free", "action": "A1", "point": [0, 0, 3],
         "expect": "not-free"},
        {"name": "n1.reduce_circle", "op": "reduce", "reduction": "red1", "expect_alpha": "alpha_circle"},
        {"name": "n1.reduce_F1_fails", "op": "reduce", "reduction": "red1_F1", "expect_error": "DescentFailure"},
        {"name": "n1.reduce_wrong_leaf", "op": "reduce", "reduction": "red1_lcs", "expect_error": "WrongLeafType"},
        {"name": "n1.bracket_closure", "op": "bracket_closure", "action": "A1", "F": "x1^2+y1^2",
         "h": "x1^2/(x1^2+y1^2)", "k": "x1*y1/(x1^2+y1^2)"},
        {"name": "n1.reduced_bracket", "op": "reduced_bracket", "reduction": "red1",
         "h": "x1^2/(x1^2+y1^2)", "k": "x1*y1/(x1^2+y1^2)"},
    ]
    # n = 2: three-sphere slice
    sec2, xs, ys = _example_61_block(2)
    a, b, c = sp.symbols("a b c")
    r2 = a * a + b * b + c * c
    pts = [2 * a / (1 + r2), 2 * b / (1 + r2), 2 * c / (1 + r2), (r2 - 1) / (1 + r2)]
    d2 = {
        "charts": {"S3": _chart("abc"), "R4": _chart(["x1", "x2", "y1", "y2"])},
        "maps": {"sphere": _map("S3", "M2", pts + [0]), "sphere_R4": _map("S3", "R4", pts)},
        "forms": {"lam4": _tensor("R4", 1, [("x1", "-y1"), ("x2", "-y2"), ("y1", "x1"), ("y2", "x2")]),
                  "lam4_sphere": {"pullback": {"map": "sphere_R4", "form": "lam4"}},
                  "alpha_sphere": {"scale": {"by": "-1", "form": "lam4_sphere"}}},
        "reductions": {"red2": {"action": "A2", "x": [0], "F": "x1^2+x2^2+y1^2+y2^2", "slice": "sphere"}},
    }
    blocks += [sec2, d2]
    tasks += [
        {"name": "n2.verify_jacobi", "op": "verify_jacobi", "structure": "S2"},
        {"name": "n2.X_Ju", "op": "hamiltonian_vf", "structure": "S2", "u": "u(z)",
         "expect": ["u'(z)*x1/2", "u'(z)*x2/2", "u'(z)*y1/2", "u'(z)*y2/2", "u(z)"]},
    ] + _action_tasks("A2", "n2") + [
        {"name": "n2.free_at_10000", "op": "locally_free", "action": "A2", "point": [1, 0, 0, 0, 0],
         "expect": "free"},
        {"name": "n2.not_free_on_z_axis", "op": "locally_free", "action": "A2", "point": [0, 0, 0, 0, -2],
         "expect": "not-free"},
        {"name": "n2.reduce_sphere", "op": "reduce", "reduction": "red2", "expect_alpha": "alpha_sphere"},
    ]
    extra = {"multivectors": {
        "Lambda1": _tensor("M1", 2, [(("x1", "y1"), "1/2"), (("x1", "z"), "-x1/2"), (("y1", "z"), "-y1/2")]),
        "E1": _tensor("M1", 1, [("z", "1")])}}
    return _manifest("example_6_1", "J = z on (ℝ^(2n+1), Σ x dy - y dx + dz) for n = 1, 2",
                     **_merge(*blocks, extra, {"tasks": tasks}))


def cosphere_6_2():
    blocks = [r3_block()]
    tasks = []
    for n in (1, 2):
        xs = [f"x{i}" for i in range(1, n + 1)]
        ys = [f"y{i}" for i in range(1, n + 1)]
        M, af = f"T{n}", f"TA{n}"
        coords = xs + ys + ["z"]
        F = f"sqrt({'+'.join(y + '^2' for y in ys)})"
        if n == 1:
            D, slice_exprs, N_exprs = ["x1"], ["x1", "1", "0"], ["x1", "1"]
        else:
            D = ["x1", "x2", "a"]
            slice_exprs = ["x1", "x2", "2*a/(1+a^2)", "(1-a^2)/(1+a^2)", "0"]
            N_exprs = slice_exprs[:-1]
        blocks.append({
            "charts": {M: _chart(coords), af: _chart(coords + ["q", "s"]), f"D{n}": _chart(D),
                       f"TN{n}": _chart(xs + ys)},
            "maps": {f"Jc{n}": _map(M, "B", ["z"]), f"prMc{n}": _map(af, M, coords),
                     f"prGc{n}": _map(af, "G", ["z", "q", "s"]),
                     f"actc{n}": _map(af, M, xs + [f"exp(-s)*{y}" for y in ys] + ["q"]),
                     f"unit_covectors{n}": _map(f"D{n}", M, slice_exprs),
                     f"unit_covectors_TN{n}": _map(f"D{n}", f"TN{n}", N_exprs)},
            "forms": {f"thetac{n}": _tensor(M, 1, [(x, y) for x, y in zip(xs, ys)] + [("z", "1")]),
                      f"alpha_can{n}": _tensor(f"TN{n}", 1, [(x, y) for x, y in zip(xs, ys)]),
                      f"alpha_can_pulled{n}": {"pullback": {"map": f"unit_covectors_TN{n}", "form": f"alpha_can{n}"}},
                      f"alpha_expected{n}": {"scale": {"by": "-1", "form": f"alpha_can_pulled{n}"}}},
            "structures": {f"Sc{n}": {"contact_form": f"thetac{n}"}},
            "fiber_products": {af: {"chart": af, "pr1": f"prMc{n}", "pr2": f"prGc{n}",
                                    "selection": [[1, c] for c in coords] + [[2, "q"], [2, "s"]]}},
            "actions": {f"C{n}": {"groupoid": "R3", "manifold": M, "theta": f"thetac{n}", "moment": f"Jc{n}",
                                  "fiber_product": af, "act": f"actc{n}"}},
            "reductions": {f"redc{n}": {"action": f"C{n}", "x": [0], "F": F, "slice": f"unit_covectors{n}"}},
        })
        tasks += [
            {"name": f"n{n}.verify_jacobi", "op": "verify_jacobi", "structure": f"Sc{n}"},
            {"name": f"n{n}.X_Ju", "op": "hamiltonian_vf", "structure": f"Sc{n}", "u": "u(z)",
             "expect": ["0"] * n + [f"u'(z)*{y}" for y in ys] + ["u(z)"]},
        ] + _action_tasks(f"C{n}", f"n{n}") + [
            {"name": f"n{n}.F_multiplicative", "op": "verify_f_multiplicative", "action": f"C{n}", "F": F},
            {"name": f"n{n}.reduce_unit_covectors", "op": "reduce", "reduction": f"redc{n}",
             "expect_alpha": f"alpha_expected{n}"},
        ]
    return _manifest("cosphere_6_2", "J = z on (T*ℝⁿ × ℝ, Σ y dx + dz), reduced to the unit cosphere bundle",
                     **_merge(*blocks, {"tasks": tasks}))


def _tstar_block(k):
    xi = [f"xi{i}" for i in range(1, k + 1)] if k > 1 else ["xi"]
    g = [f"g{i}" for i in range(1, k + 1)] if k > 1 else ["g"]
    g2 = [f"{x}_2" for x in g]
    G, B, P = f"TS{k}", f"TS{k}_base", f"TS{k}_pairs"
    coords = xi + g + ["r"]
    name = f"Tstar{k}"
    return {
        "charts": {G: _chart(coords), B: _chart(xi), P: _chart(coords + g2 + ["r_2"]),
                   f"{G}_pt": _chart([])},
        "maps": {f"{G}.s": _map(G, B, xi), f"{G}.t": _map(G, B, xi),
                 f"{G}.unit": _map(B, G, xi + ["0"] * (k + 1)),
                 f"{G}.inv": _map(G, G, xi + [f"-{x}" for x in g] + ["-r"]),
                 f"{G}.pr1": _map(P, G, coords), f"{G}.pr2": _map(P, G, xi + g2 + ["r_2"]),
                 f"{G}.mult": _map(P, G, xi + [f"{a}+{b}" for a, b in zip(g, g2)] + ["r+r_2"]),
                 f"{G}.slice": _map(f"{G}_pt", G, ["1"] + ["0"] * (len(coords) - 1))},
        "forms": {f"{G}.theta": _tensor(G, 1, [(b, a) for a, b in zip(xi, g)] + [("r", "1")])},
        "fiber_products": {P: {"chart": P, "pr1": f"{G}.pr1", "pr2": f"{G}.pr2",
                               "selection": [[1, c] for c in coords] + [[2, c] for c in g + ["r"]]}},
        "groupoids": {name: {"gamma": G, "base": B, "source": f"{G}.s", "target": f"{G}.t",
                             "unit": f"{G}.unit", "inverse": f"{G}.inv", "fiber_product": P,
                             "mult": f"{G}.mult", "theta": f"{G}.theta", "f": "1"}},
        "actions": {f"{name}.right": {"right_multiplication": name}},
        "reductions": {f"{name}.red": {"action": f"{name}.right", "x": [1] + [0] * (k - 1), "F": "1",
                                       "slice": f"{G}.slice", "kind": "lcs"}},
    }, name


def abelian_tstar():
    blocks, tasks = [], []
    for k in (1, 2):
        b, name = _tstar_block(k)
        blocks.append(b)
        x = [1] + [0] * (k - 1)
        tasks += _groupoid_tasks(name, name) + [
            {"name": f"{name}.isotropy", "op": "isotropy", "groupoid": name, "point": x,
             "expect_leaf": "lcs", "expect_dim": k + 1},
        ] + _action_tasks(f"{name}.right", f"{name}.right") + [
            {"name": f"{name}.reduce_lcs", "op": "reduce", "reduction": f"{name}.red"},
        ]
    return _manifest("abelian_tstar", "abelian groupoids T*ℝ^k × ℝ (k = 1, 2) with θ = Σ ξ dg + dr, f = 1",
                     **_merge(*blocks, {"tasks": tasks}))


SL2_BASIS = [[["0", "1/2"], ["1/2", "0"]], [["1/2", "0"], ["0", "-1/2"]], [["0", "1/2"], ["-1/2", "0"]]]


def sl2_casimir():
    return _manifest(
        "sl2_casimir", "linear Poisson structure on sl(2)* in the μ-basis and its Casimir",
        charts={"sl2dual": _chart(["mu1", "mu2", "mu3"]), "so3dual": _chart(["m1", "m2", "m3"])},
        structures={"LP_sl2": {"lie_algebra": {"matrices": SL2_BASIS, "chart": "sl2dual"}},
                    "LP_so3": {"lie_algebra": {"dim": 3, "chart": "so3dual",
                                               "constants": [[0, 1, 2, "1"], [1, 2, 0, "1"], [2, 0, 1, "1"]]}}},
        tasks=[
            {"name": "sl2.verify_jacobi", "op": "verify_jacobi", "structure": "LP_sl2"},
            {"name": "sl2.bracket_12", "op": "jacobi_bracket", "structure": "LP_sl2", "f": "mu1", "g": "mu2",
             "expect": "-mu3"},
            {"name": "sl2.bracket_13", "op": "jacobi_bracket", "structure": "LP_sl2", "f": "mu1", "g": "mu3",
             "expect": "-mu2"},
            {"name": "sl2.bracket_23", "op": "jacobi_bracket", "structure": "LP_sl2", "f": "mu2", "g": "mu3",
             "expect": "mu1"},
            {"name": "sl2.casimir", "op": "casimir", "structure": "LP_sl2", "function": "mu1^2+mu2^2-mu3^2"},
            {"name": "sl2.cone_point_leaf", "op": "leaf_type", "structure": "LP_sl2", "point": [1, 0, 1],
             "expect": "lcs"},
            {"name": "so3.casimir", "op": "casimir", "structure": "LP_so3", "function": "m1^2+m2^2+m3^2"},
        ])


def u2_orbits():
    return _manifest("u2_orbits", "torus arithmetic for U(2) coadjoint orbits", tasks=[
        {"name": "t0.2_1_over_sqrt5", "op": "orbit_t0", "xi": "(2,1)/sqrt(5)",
         "expect": {"t0": "1/sqrt(5)", "T": "sqrt(5)", "count": 5, "norm": "1"}},
        {"name": "t0.3_4_over_5", "op": "orbit_t0", "xi": "(3,4)/5", "expect": {"t0": "1/5", "count": 25}},
        {"name": "t0.unit", "op": "orbit_t0", "xi": "(1,0)", "expect": {"t0": "1", "T": "1", "count": 1}},
        {"name": "integrality.irrational", "op": "orbit_integrality", "xi": "(1,sqrt(2))",
         "expect": {"integral": False}},
        {"name": "prequant.2_1", "op": "orbit_prequant", "d": [2, 1], "expect": {"n": 1, "F": "-1/sqrt(5)"}},
        {"name": "prequant.4_2", "op": "orbit_prequant", "d": [4, 2],
         "expect": {"n": 2, "F": "-1/sqrt(5)", "primitive": [2, 1]}},
        {"name": "prequant.1_0_0", "op": "orbit_prequant", "d": [1, 0, 0], "expect": {"n": 1, "F": "-1"}},
        {"name": "u2lens.2_1", "op": "orbit_u2lens", "m": 2, "n": 1, "expect": {"lens": 1}},
        {"name": "u2lens.3_1", "op": "orbit_u2lens", "m": 3, "n": 1, "expect": {"lens": 2}},
        {"name": "u2lens.1_0", "op": "orbit_u2lens", "m": 1, "n": 0, "expect": {"lens": 1}},
    ])


def albert_abelian():
    return _manifest(
        "albert_abelian", "translation action of ℝ on (ℝ³, dz + x dy) composed with the Reeb flow",
        charts={"M": _chart("xyz"), "Mg": _chart("xyzg"), "Mr": _chart("xyzr"), "pt": _chart([])},
        maps={"translate": _map("Mg", "M", ["x", "y+g", "z"]), "flow": _map("Mr", "M", ["x", "y", "z+r"]),
              "slice": _map("pt", "M", ["1", "0", "0"])},
        forms={"theta": _tensor("M", 1, [("y", "x"), ("z", "1")])},
        actions={"Alb": {"albert": {"manifold": "M", "theta": "theta", "action": "translate",
                                    "moment": ["x"], "flow": "flow"}}},
        reductions={"red": {"action": "Alb", "x": [1], "F": "1", "slice": "slice", "kind": "lcs"}},
        tasks=_action_tasks("Alb", "Alb", legendrian=True) + [
            {"name": "Alb.locally_free", "op": "locally_free", "action": "Alb", "point": [1, 0, 0],
             "expect": "free"},
            {"name": "Alb.reduce_lcs", "op": "reduce", "reduction": "red"},
        ])


def appendix_transforms():
    b = r3_block()
    extra = {
        "groupoids": {"R3_left": {"convention_switch": "R3"},
                      "R3_u2": {"conformal_rescale": {"of": "R3", "u": "2"}},
                      "R3_uexp": {"conformal_rescale": {"of": "R3", "u": "exp(t)"}}},
    }
    tasks = (_groupoid_tasks("R3_u2", "rescale_2") + _groupoid_tasks("R3_uexp", "rescale_exp_t") + [
        {"name": "switch.verify", "op": "verify_convention_switch", "groupoid": "R3"},
        {"name": "switch.groupoid_axioms", "op": "verify_groupoid", "groupoid": "R3_left"},
        {"name": "switch.two_sided_law", "op": "verify_contact_groupoid", "groupoid": "R3_left"},
        {"name": "anchors", "op": "anchor_images", "groupoid": "R3"},
        {"name": "anchors.rescaled", "op": "anchor_images", "groupoid": "R3_uexp"},
    ])
    return _manifest("appendix_transforms", "conformal rescaling and left/right conventions on the ℝ³ groupoid",
                     **_merge(b, extra, {"tasks": tasks}))


def hopf_circle():
    a, b, c, tau = sp.symbols("a b c tau")
    r2 = a * a + b * b + c * c
    x, y, u, v = [2 * a / (1 + r2), 2 * b / (1 + r2), 2 * c / (1 + r2), (r2 - 1) / (1 + r2)]
    cs, sn = (1 - tau ** 2) / (1 + tau ** 2), 2 * tau / (1 + tau ** 2)
    x2, y2, u2, v2 = cs * x - sn * y, sn * x + cs * y, cs * u - sn * v, sn * u + cs * v
    p, q = sp.symbols("p q")
    d = 1 + p * p + q * q
    sec = [(1 - p * p - q * q) / d, 0, 2 * p / d, 2 * q / d]
    chart_sec = [sec[0] / (1 - sec[3]), sec[1] / (1 - sec[3]), sec[2] / (1 - sec[3])]
    return _manifest(
        "hopf_circle", "circle action on S³ through the sphere-bundle groupoid, reduced to S²",
        charts={"S3": _chart("abc"), "R4": _chart("xyuv"), "T": _chart(["tau"]),
                "TT": _chart(["tau", "tau2"]), "S3T": _chart(["a", "b", "c", "tau"]), "D": _chart("pq", positive=["1-p^2-q^2"])},
        maps={"stereo": _map("S3", "R4", [x, y, u, v]),
              "law": _map("TT", "T", ["(tau+tau2)/(1-tau*tau2)"]), "tinv": _map("T", "T", ["-tau"]),
              "rotate": _map("S3T", "S3", [x2 / (1 - v2), y2 / (1 - v2), u2 / (1 - v2)]),
              "section": _map("D", "S3", chart_sec), "section_R4": _map("D", "R4", sec)},
        forms={"lam": _tensor("R4", 1, [("x", "-y"), ("y", "x"), ("u", "-v"), ("v", "u")]),
               "theta": {"pullback": {"map": "stereo", "form": "lam"}},
               "mc": _tensor("T", 1, [("tau", "2/(1+tau^2)")]),
               "dlam": {"d": "lam"},
               "Omega_expected": {"pullback": {"map": "section_R4", "form": "dlam"}},
               "zero_D": _tensor("D", 1, [])},
        actions={"Hopf": {"hamiltonian": {"manifold": "S3", "theta": "theta", "group": "T", "law": "law",
                                          "identity": [0], "inverse": "tinv", "mc": ["mc"],
                                          "action": "rotate", "moment": ["1"]}}},
        reductions={"red": {"action": "Hopf", "x": [], "F": "-1", "slice": "section", "kind": "lcs"}},
        tasks=[
            {"name": "Hopf.verify_groupoid_action", "op": "verify_groupoid_action", "action": "Hopf"},
            {"name": "Hopf.verify_contact_action", "op": "verify_contact_action", "action": "Hopf"},
            {"name": "Hopf.reduce_lcs", "op": "reduce", "reduction": "red",
             "expect_Omega": "Omega_expected", "expect_omega": "zero_D"},
        ])


ENTRIES = {
    "r3_groupoid": (r3_groupoid, "contact groupoid on ℝ³ with coordinates (p, q, s)"),
    "example_6_1": (example_6_1, "ℝ^(2n+1) with moment z, reduced to the standard sphere, n = 1, 2"),
    "cosphere_6_2": (cosphere_6_2, "T*ℝⁿ × ℝ with moment z, reduced to the unit cosphere bundle, n = 1, 2"),
    "abelian_tstar": (abelian_tstar, "abelian T*G × ℝ groupoids for G = ℝ and G = ℝ²"),
    "sl2_casimir": (sl2_casimir, "Casimir μ1² + μ2² - μ3² of the linear Poisson structure on sl(2)*"),
    "u2_orbits": (u2_orbits, "prequantization arithmetic and lens spaces for U(2) orbits"),
    "albert_abelian": (albert_abelian, "abelian Hamiltonian action lifted through the Reeb flow (G = ℝ)"),
    "appendix_transforms": (appendix_transforms, "conformal rescaling and convention switch on the ℝ³ groupoid"),
    "hopf_circle": (hopf_circle, "circle action on S³ as a sphere-bundle groupoid action, l.c.s. reduction"),
}


def corpus_list() -> list:
    return [{"name": k, "anchor": desc} for k, (_, desc) in ENTRIES.items()]


def corpus_manifest(name: str) -> dict:
    try:
        return ENTRIES[name][0]()
    except KeyError:
        raise InputError(f"unknown corpus entry {name!r}; see 'corpus list'") from None
