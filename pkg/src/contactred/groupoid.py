"""Contact groupoids in charts.

A fiber product ``A ×_{a,b} B`` is a chart whose coordinates are selected from
the coordinates of the two factors; the remaining coordinates of the factors
are expressions fixed by the matching condition.  The selection gives a way to
lift any composable pair back to fiber-product coordinates, which is what the
unit, inverse and associativity checks need.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import sympy as sp

from . import linalg
from .errors import InputError
from .geometry import (Chart, DiffForm, MultiVector, SmoothMap, apply_vector, check_expr_zero,
                       check_zero, differential, pullback, sharp)
from .jacobi import (JacobiStructure, _point_bindings, at_point, conformal_change, contact_to_jacobi,
                     contact_volume, hamiltonian_vf, leaf_type, verify_conformal_jacobi_map,
                     verify_jacobi_map)
from .symexpr import Status, Verdict, combine, jet_class, normalize, parse, substitute


@dataclass(frozen=True, eq=False)
class FiberProduct:
    """Coordinates of a fiber product of ``first`` and ``second``.

    ``selection[k] = (factor, index)`` says that coordinate ``k`` of the chart
    equals coordinate ``index`` of factor 1 or 2.
    """

    chart: Chart
    pr1: SmoothMap
    pr2: SmoothMap
    selection: tuple

    def __post_init__(self):
        if self.pr1.source != self.chart or self.pr2.source != self.chart:
            raise InputError("fiber product projections must start on its chart")
        if len(self.selection) != self.chart.dim:
            raise InputError("fiber product selection must cover every coordinate")
        sel = []
        for fac, idx in self.selection:
            fac = int(fac)
            tgt = self.pr1.target if fac == 1 else self.pr2.target if fac == 2 else None
            if tgt is None:
                raise InputError(f"selection factor must be 1 or 2, got {fac}")
            sel.append((fac, tgt.index(idx)))
        object.__setattr__(self, "selection", tuple(sel))
        for k, (fac, idx) in enumerate(sel):
            pr = self.pr1 if fac == 1 else self.pr2
            if normalize(pr.exprs[idx] - self.chart.coords[k]) != 0:
                raise InputError(f"selected coordinate {self.chart.coords[k]} does not match "
                                 f"its projection")

    @property
    def first(self) -> Chart:
        return self.pr1.target

    @property
    def second(self) -> Chart:
        return self.pr2.target

    def lift(self, a, b):
        """Fiber-product coordinates of the pair (a, b)."""
        return tuple(a[idx] if fac == 1 else b[idx] for fac, idx in self.selection)

    def apply(self, phi: SmoothMap, a, b):
        """phi(lift(a, b)) for a map phi starting on this chart."""
        binds = dict(zip(self.chart.coords, self.lift(a, b)))
        return tuple(substitute(e, binds, strict=False) for e in phi.exprs)

    def check_lift(self, a, b, cfg=None, label="pair") -> Verdict:
        """The lifted pair projects back to (a, b)."""
        parts = []
        for name, pr, want in (("first", self.pr1, a), ("second", self.pr2, b)):
            got = self.apply(pr, a, b)
            parts.append((f"{label}.{name}", _tuple_equal(got, want, None, cfg)))
        return combine(parts)

    def to_json(self):
        return {"chart": self.chart.name, "pr1": self.pr1.name, "pr2": self.pr2.name,
                "selection": [[f, i] for f, i in self.selection]}


def _tuple_equal(a, b, chart=None, cfg=None) -> Verdict:
    parts = []
    for i, (x, y) in enumerate(zip(a, b)):
        parts.append((str(i), check_expr_zero(sp.sympify(x) - sp.sympify(y), chart, cfg)))
    if len(a) != len(b):
        raise InputError("tuples of different length")
    return combine(parts)


def _fresh_names(taken, names, suffix="_k"):
    out = []
    taken = set(taken)
    for n in names:
        m = n + suffix
        while m in taken:
            m += "k"
        taken.add(m)
        out.append(m)
    return out


def triple_chart(fp: FiberProduct, inner: FiberProduct | None = None):
    """Chart of composable triples built from a fiber product.

    ``fp`` pairs (a, g); ``inner`` is the groupoid's own fiber product that
    supplies the third element h with t(h) = s(g).  Returns the chart and the
    expressions of a, g, h over it.
    """
    inner = inner or fp
    sel2 = [(k, idx) for k, (fac, idx) in enumerate(inner.selection) if fac == 2]
    names = _fresh_names([c.name for c in fp.chart.coords],
                         [inner.chart.coords[k].name for k, _ in sel2])
    T = Chart(fp.chart.name + "3", fp.chart.coords + tuple(sp.Symbol(n) for n in names),
              fp.chart.positive, fp.chart.nonzero)
    a = fp.pr1.exprs
    g = fp.pr2.exprs
    fresh = dict(zip([k for k, _ in sel2], T.coords[fp.chart.dim:]))
    binds = {}
    for k, (fac, idx) in enumerate(inner.selection):
        binds[inner.chart.coords[k]] = g[idx] if fac == 1 else fresh[k]
    h = tuple(substitute(e, binds, strict=False) for e in inner.pr2.exprs)
    return T, a, g, h


@dataclass(frozen=True, eq=False)
class GroupoidChart:
    """Chart data of a contact groupoid (Γ, θ, f) over Γ0.

    ``f`` is the right multiplicative factor and ``f_left`` the left one; the
    right-handed convention has ``f_left = 1`` and the multiplication law
    ``mult*θ = pr2*f · pr1*θ + pr1*f_left · pr2*θ``.
    """

    name: str
    gamma: Chart
    base: Chart
    source: SmoothMap
    target: SmoothMap
    unit: SmoothMap
    inverse: SmoothMap
    fp: FiberProduct
    mult: SmoothMap
    theta: DiffForm
    f: sp.Expr
    f_left: sp.Expr = sp.Integer(1)
    base_structure: JacobiStructure | None = None

    def __post_init__(self):
        for e in ("f", "f_left"):
            v = getattr(self, e)
            v = parse(v, self.gamma.coords) if isinstance(v, str) else sp.sympify(v)
            self.gamma.check_expr(v)
            object.__setattr__(self, e, normalize(v))
        checks = [(self.source, self.gamma, self.base), (self.target, self.gamma, self.base),
                  (self.unit, self.base, self.gamma), (self.inverse, self.gamma, self.gamma),
                  (self.mult, self.fp.chart, self.gamma)]
        for m, a, b in checks:
            if m.source != a or m.target != b:
                raise InputError(f"groupoid {self.name}: map {m.name} has wrong charts")
        if self.fp.first != self.gamma or self.fp.second != self.gamma:
            raise InputError(f"groupoid {self.name}: fiber product is not over Γ")
        if self.theta.chart != self.gamma or self.theta.degree != 1:
            raise InputError(f"groupoid {self.name}: θ must be a 1-form on Γ")
        if self.base_structure is not None and self.base_structure.chart != self.base:
            raise InputError(f"groupoid {self.name}: base structure lives on another chart")

    @cached_property
    def contact(self):
        return contact_to_jacobi(self.theta)

    @property
    def jacobi(self) -> JacobiStructure:
        return self.contact.jacobi

    @property
    def reeb(self) -> MultiVector:
        return self.contact.reeb

    @cached_property
    def base_jacobi(self) -> JacobiStructure:
        return self.base_structure or induced_base_structure(self)


def _compose_exprs(outer: SmoothMap, inner_exprs):
    binds = dict(zip(outer.source.coords, inner_exprs))
    return tuple(substitute(e, binds, strict=False) for e in outer.exprs)


def induced_base_structure(G: GroupoidChart) -> JacobiStructure:
    """The Jacobi structure on Γ0 making s a Jacobi map, read off along the units."""
    S = G.jacobi
    ds = [differential(G.gamma, e) for e in G.source.exprs]
    k = G.base.dim
    from .geometry import pairing, wedge
    lam = {}
    for a in range(k):
        for b in range(a + 1, k):
            lam[(a, b)] = G.unit.pull(pairing(S.bivector, wedge(ds[a], ds[b])))
    E = [G.unit.pull(apply_vector(S.vector, e)) for e in G.source.exprs]
    return JacobiStructure(G.base, MultiVector(G.base, 2, lam), MultiVector.vector(G.base, E),
                           f"{G.name}.base")


def verify_groupoid(G: GroupoidChart, cfg=None) -> Verdict:
    """Groupoid axioms in charts: matching, units, inverses, associativity."""
    fp, s, t, e, inv, m = G.fp, G.source, G.target, G.unit, G.inverse, G.mult
    parts = []
    parts.append(("s.pr1 = t.pr2", _tuple_equal(_compose_exprs(s, fp.pr1.exprs),
                                                _compose_exprs(t, fp.pr2.exprs), fp.chart, cfg)))
    parts.append(("s.mult = s.pr2", _tuple_equal(_compose_exprs(s, m.exprs),
                                                 _compose_exprs(s, fp.pr2.exprs), fp.chart, cfg)))
    parts.append(("t.mult = t.pr1", _tuple_equal(_compose_exprs(t, m.exprs),
                                                 _compose_exprs(t, fp.pr1.exprs), fp.chart, cfg)))
    parts.append(("s.unit = id", _tuple_equal(_compose_exprs(s, e.exprs), G.base.coords, G.base, cfg)))
    parts.append(("t.unit = id", _tuple_equal(_compose_exprs(t, e.exprs), G.base.coords, G.base, cfg)))
    g = G.gamma.coords
    parts.append(("inv.inv = id", _tuple_equal(_compose_exprs(inv, inv.exprs), g, G.gamma, cfg)))
    parts.append(("s.inv = t", _tuple_equal(_compose_exprs(s, inv.exprs), t.exprs, G.gamma, cfg)))
    parts.append(("t.inv = s", _tuple_equal(_compose_exprs(t, inv.exprs), s.exprs, G.gamma, cfg)))
    et = _compose_exprs(e, t.exprs)
    es = _compose_exprs(e, s.exprs)
    parts.append(("left unit pair", fp.check_lift(et, g, cfg)))
    parts.append(("left unit", _tuple_equal(fp.apply(m, et, g), g, G.gamma, cfg)))
    parts.append(("right unit pair", fp.check_lift(g, es, cfg)))
    parts.append(("right unit", _tuple_equal(fp.apply(m, g, es), g, G.gamma, cfg)))
    parts.append(("inverse pair", fp.check_lift(g, inv.exprs, cfg)))
    parts.append(("g.inv(g) = unit(t(g))", _tuple_equal(fp.apply(m, g, inv.exprs), et, G.gamma, cfg)))
    parts.append(("inv(g).g = unit(s(g))", _tuple_equal(fp.apply(m, inv.exprs, g), es, G.gamma, cfg)))
    parts.append(("associativity", _check_assoc(G, cfg)))
    return combine(parts)


def _check_assoc(G: GroupoidChart, cfg=None) -> Verdict:
    fp, m = G.fp, G.mult
    T, a, b, c = triple_chart(fp)
    ab = m.exprs
    bc = fp.apply(m, b, c)
    parts = [("(b,c) composable", fp.check_lift(b, c, cfg)),
             ("(ab,c) composable", fp.check_lift(ab, c, cfg)),
             ("(a,bc) composable", fp.check_lift(a, bc, cfg)),
             ("(ab)c = a(bc)", _tuple_equal(fp.apply(m, ab, c), fp.apply(m, a, bc), T, cfg))]
    return combine(parts)


def flfr_residual(G: GroupoidChart) -> DiffForm:
    """mult*θ - (pr2*f · pr1*θ + pr1*f_left · pr2*θ) on the fiber product."""
    fp = G.fp
    lhs = pullback(G.mult, G.theta)
    rhs = fp.pr2.pull(G.f) * pullback(fp.pr1, G.theta) + fp.pr1.pull(G.f_left) * pullback(fp.pr2, G.theta)
    return lhs - rhs


def verify_contact_groupoid(G: GroupoidChart, cfg=None) -> Verdict:
    """θ contact, the multiplication law, multiplicativity of f and df(E) = 0."""
    parts = []
    if contact_volume(G.theta).is_canonical_zero:
        parts.append(("contact", Verdict(Status.FALSIFIED, "canonical",
                                         {"reason": "θ ^ (dθ)^n is canonically zero"})))
        return combine(parts)
    parts.append(("contact", Verdict(Status.VERIFIED, "canonical-nonzero")))
    parts.append(("multiplication law", check_zero(flfr_residual(G), cfg)))
    fp = G.fp
    for label, h in (("f", G.f), ("f_left", G.f_left)):
        if h == 1 and label == "f_left":
            continue
        res = G.mult.pull(h) - fp.pr1.pull(h) * fp.pr2.pull(h)
        parts.append((f"{label} multiplicative", check_expr_zero(res, fp.chart, cfg)))
        parts.append((f"d{label}(E) = 0", check_expr_zero(apply_vector(G.reeb, h), G.gamma, cfg)))
    return combine(parts)


def verify_base_compatibility(G: GroupoidChart, S0: JacobiStructure | None = None, cfg=None) -> Verdict:
    """s is a Jacobi map and t a (-f)-conformal Jacobi map onto S0."""
    S0 = S0 or G.base_jacobi
    if G.f_left != 1:
        raise InputError("base compatibility is stated for right-handed data (f_left = 1)")
    return combine([("s Jacobi", verify_jacobi_map(G.source, G.jacobi, S0, cfg)),
                    ("t (-f)-conformal Jacobi",
                     verify_conformal_jacobi_map(G.target, -G.f, G.jacobi, S0, cfg))])


def _generic_function(G: GroupoidChart, name="u"):
    k = G.base.dim
    if k == 0:
        return None
    return jet_class(name, (0,) * k)(*G.base.coords)


def verify_kernel_characterization(G: GroupoidChart, cfg=None) -> Verdict:
    """ker Tt = {X_{s*u}} and ker Ts = {X_{f t*u}}: generic u plus rank counts."""
    u = _generic_function(G)
    S = G.jacobi
    parts = []
    su = G.source.pull(u) if u is not None else sp.Integer(1)
    tu = G.target.pull(u) if u is not None else sp.Integer(1)
    Xs = hamiltonian_vf(S, su)
    Xt = hamiltonian_vf(S, G.f * tu)
    parts.append(("dt(X_{s*u}) = 0", _tuple_equal(G.target.push(Xs), [0] * G.base.dim, G.gamma, cfg)))
    parts.append(("ds(X_{f t*u}) = 0", _tuple_equal(G.source.push(Xt), [0] * G.base.dim, G.gamma, cfg)))
    want = G.gamma.dim - G.base.dim
    for label, mp, fac in (("ker dt", G.source, 1), ("ker ds", G.target, G.f)):
        vecs = [hamiltonian_vf(S, fac * mp.pull(y)).components() for y in G.base.coords]
        vecs.append(hamiltonian_vf(S, fac).components())
        r = linalg.rank(vecs)
        st = Status.VERIFIED if r == want else Status.FALSIFIED
        parts.append((f"rank {label}", Verdict(st, "exact-rank", None if r == want else
                                               {"rank": r, "expected": want})))
    return combine(parts)


@dataclass(frozen=True)
class IsotropyTangent:
    """Basis of the isotropy Lie algebra at a base point.

    ``generators`` lists ``(u, with_reeb)``: the basis vector is
    ``X_{s*u} (+ E_Γ)`` evaluated at the unit over the point.
    """

    point: tuple
    leaf: str
    generators: tuple
    vectors: tuple
    unit_point: tuple
    checks: Verdict = field(default=None)


def _complement(kernel, n):
    basis = [list(v) for v in kernel]
    out = []
    for i in range(n):
        e = [sp.Integer(int(i == j)) for j in range(n)]
        if not linalg.in_span(basis, e):
            basis.append(e)
            out.append(e)
    return out


def isotropy_tangent(G: GroupoidChart, x, S0: JacobiStructure | None = None, cfg=None) -> IsotropyTangent:
    """Basis of T_x(Γ_x) built from functions whose differentials lie in ker ♯Λ0."""
    S0 = S0 or G.base_jacobi
    k = G.base.dim
    binds = _point_bindings(G.base, x)
    xs = tuple(binds[c] for c in G.base.coords)
    kind = leaf_type(S0, xs)
    L0 = [[at_point(G.base, S0.bivector[(i, j)], xs) for j in range(k)] for i in range(k)]
    E0 = [at_point(G.base, e, xs) for e in S0.vector.components()]
    rows = [[L0[i][j] for i in range(k)] for j in range(k)]
    kernel = linalg.nullspace(rows, k) if k else []
    shifted = [c - v for c, v in zip(G.base.coords, xs)]
    gens = [(normalize(sum((a * y for a, y in zip(vec, shifted)), sp.Integer(0))), False)
            for vec in kernel]
    if kind == "lcs":
        comp = _complement(kernel, k)
        if comp:
            cols = [[sum(c[i] * L0[i][j] for i in range(k)) for j in range(k)] for c in comp]
            coef = linalg.solve([[cols[m][j] for m in range(len(comp))] for j in range(k)],
                                [-e for e in E0])
            a = [sum(cm * c[i] for cm, c in zip(coef, comp)) for i in range(k)]
            u = normalize(sum((ai * y for ai, y in zip(a, shifted)), sp.Integer(0)))
        else:
            u = sp.Integer(0)
        gens.append((u, True))
    upt = tuple(at_point(G.base, e, xs) for e in G.unit.exprs)
    S = G.jacobi
    vectors = []
    for u, with_reeb in gens:
        X = hamiltonian_vf(S, G.source.pull(u))
        if with_reeb:
            X = X + G.reeb
        vectors.append(tuple(at_point(G.gamma, c, upt) for c in X.components()))
    iso = IsotropyTangent(xs, kind, tuple(gens), tuple(vectors), upt)
    return replace(iso, checks=verify_isotropy_lemma(G, iso, cfg))


def _jac_at(m: SmoothMap, pt):
    return [[at_point(m.source, e, pt) for e in row] for row in m.jacobian()]


def verify_isotropy_lemma(G: GroupoidChart, iso: IsotropyTangent, cfg=None) -> Verdict:
    """Each basis vector is killed by ds and dt, and by θ (contact leaf) or df
    (l.c.s. leaf); the vectors are independent."""
    Js, Jt = _jac_at(G.source, iso.unit_point), _jac_at(G.target, iso.unit_point)
    th = [at_point(G.gamma, G.theta[(i,)], iso.unit_point) for i in range(G.gamma.dim)]
    df = [at_point(G.gamma, c, iso.unit_point) for c in
          (differential(G.gamma, G.f)[(i,)] for i in range(G.gamma.dim))]
    parts = []
    for n, v in enumerate(iso.vectors):
        dsv = [sum(r[j] * v[j] for j in range(len(v))) for r in Js]
        dtv = [sum(r[j] * v[j] for j in range(len(v))) for r in Jt]
        parts.append((f"v{n} in ker ds", _tuple_equal(dsv, [0] * len(dsv), None, cfg)))
        parts.append((f"v{n} in ker dt", _tuple_equal(dtv, [0] * len(dtv), None, cfg)))
        pair = th if iso.leaf == "contact" else df
        lab = "theta" if iso.leaf == "contact" else "df"
        parts.append((f"{lab}(v{n}) = 0",
                       check_expr_zero(sum(a * b for a, b in zip(pair, v)), None, cfg)))
    r = linalg.rank([list(v) for v in iso.vectors]) if iso.vectors else 0
    parts.append(("independent", Verdict(Status.VERIFIED if r == len(iso.vectors) else Status.FALSIFIED,
                                         "exact-rank")))
    return combine(parts)


def convention_switch(G: GroupoidChart) -> GroupoidChart:
    """Left-handed data (θ_l, f_L, f_R) = (-θ/f, 1/f, 1) from right-handed data."""
    if G.f_left != 1:
        raise InputError("convention_switch expects right-handed data")
    return replace(G, name=G.name + ".left", theta=(-1 / G.f) * G.theta, f=sp.Integer(1),
                   f_left=normalize(1 / G.f), base_structure=None)


def verify_convention_switch(G: GroupoidChart, Gl: GroupoidChart, cfg=None) -> Verdict:
    """Gl obeys the two-sided law, equals the inversion pullback of G, and
    pulling back once more returns G."""
    inv = G.inverse
    return combine([
        ("two-sided law", check_zero(flfr_residual(Gl), cfg)),
        ("theta_l = inv*theta", check_zero(pullback(inv, G.theta) - Gl.theta, cfg)),
        ("f_l = inv*f", check_expr_zero(inv.pull(G.f) - Gl.f_left, G.gamma, cfg)),
        ("inv*theta_l = theta", check_zero(pullback(inv, Gl.theta) - G.theta, cfg)),
    ])


def anchor_images(G: GroupoidChart, cfg=None) -> Verdict:
    """The two anchor maps land in ker dt and ker ds along the units.

    For a generic function φ0 and 1-form φ1 on the base:
    s*φ0 · X_{f_L} + f_L ♯Λ(s*φ1) ∈ ker dt and t*φ0 · X_{f_R} + f_R ♯Λ(t*φ1) ∈ ker ds.
    """
    k = G.base.dim
    S = G.jacobi
    if k:
        phi0 = jet_class("phi", (0,) * k)(*G.base.coords)
        phi1 = DiffForm(G.base, 1, {(i,): jet_class(f"a{i + 1}", (0,) * k)(*G.base.coords)
                                    for i in range(k)})
    else:
        phi0, phi1 = sp.Integer(1), DiffForm.zero(G.base, 1)
    parts = []
    for label, first, second, fac in (("left anchor in ker dt", G.source, G.target, G.f_left),
                                      ("right anchor in ker ds", G.target, G.source, G.f)):
        V = first.pull(phi0) * hamiltonian_vf(S, fac) + fac * sharp(S.bivector, pullback(first, phi1))
        img = [G.unit.pull(c) for c in second.push(V)]
        parts.append((label, _tuple_equal(img, [0] * k, G.base, cfg)))
    return combine(parts)


def conformal_rescale_groupoid(G: GroupoidChart, u) -> GroupoidChart:
    """(Γ, s*u · θ, f · s*u / t*u) for a nowhere-vanishing u on the base."""
    u = parse(u, G.base.coords) if isinstance(u, str) else sp.sympify(u)
    if normalize(u) == 0:
        raise InputError("rescaling function is canonically zero")
    su, tu = G.source.pull(u), G.target.pull(u)
    base = None
    if G.base_structure is not None:
        base = conformal_change(G.base_structure, 1 / u)
    return replace(G, name=G.name + ".rescaled", theta=su * G.theta,
                   f=normalize(G.f * su / tu), base_structure=base)
