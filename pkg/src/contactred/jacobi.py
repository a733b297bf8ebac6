"""Jacobi structures, contact forms and locally conformal symplectic data."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import sympy as sp

from . import linalg
from .errors import InputError, NotContact, NotContactType, NotLcsType
from .geometry import (Chart, DiffForm, MultiVector, SmoothMap, apply_vector, check_zero,
                       differential, exterior_derivative, interior_product, pairing,
                       relatedness, schouten_bracket, sharp, wedge, wedge_all)
from .symexpr import Status, Verdict, combine, normalize, parse, substitute, to_text


@dataclass(frozen=True, eq=False)
class JacobiStructure:
    """A bivector Λ and a vector field E on a chart."""

    chart: Chart
    bivector: MultiVector
    vector: MultiVector
    name: str = ""

    def __post_init__(self):
        if self.bivector.degree != 2 or self.vector.degree != 1:
            raise InputError("Jacobi structure needs a bivector and a vector field")
        if self.bivector.chart != self.chart or self.vector.chart != self.chart:
            raise InputError("Jacobi structure: tensors live on another chart")

    @classmethod
    def poisson(cls, chart, bivector, name=""):
        return cls(chart, bivector, MultiVector.zero(chart, 1), name)

    def __eq__(self, other):
        return (isinstance(other, JacobiStructure) and self.chart == other.chart
                and self.bivector == other.bivector and self.vector == other.vector)

    def __hash__(self):
        return hash((self.chart.name, self.bivector, self.vector))

    def to_json(self):
        return {"chart": self.chart.name, "bivector": self.bivector.to_json(),
                "vector": self.vector.to_json()}


def _expr(chart, e):
    return parse(e, chart.coords) if isinstance(e, str) else sp.sympify(e)


def verify_jacobi(S: JacobiStructure, cfg=None) -> Verdict:
    """[Λ, Λ] = 2 E ^ Λ and [Λ, E] = 0."""
    L, E = S.bivector, S.vector
    r1 = schouten_bracket(L, L) - 2 * wedge(E, L)
    r2 = schouten_bracket(L, E)
    return combine([("[L,L]-2E^L", check_zero(r1, cfg)), ("[L,E]", check_zero(r2, cfg))])


def jacobi_bracket(S: JacobiStructure, f, g):
    """{f, g} = Λ(df, dg) + f E(g) - g E(f)."""
    f, g = _expr(S.chart, f), _expr(S.chart, g)
    df, dg = differential(S.chart, f), differential(S.chart, g)
    val = pairing(S.bivector, wedge(df, dg))
    val += f * apply_vector(S.vector, g) - g * apply_vector(S.vector, f)
    return normalize(val)


def hamiltonian_vf(S: JacobiStructure, u) -> MultiVector:
    """X_u = u E + ♯Λ(du)."""
    u = _expr(S.chart, u)
    return u * S.vector + sharp(S.bivector, differential(S.chart, u))


def conformal_change(S: JacobiStructure, u) -> JacobiStructure:
    """(uΛ, uE + ♯Λ(du)) for a nowhere-vanishing u."""
    u = _expr(S.chart, u)
    if normalize(u) == 0:
        raise InputError("conformal factor is canonically zero")
    return JacobiStructure(S.chart, u * S.bivector, hamiltonian_vf(S, u), S.name)


def _form_matrix(w: DiffForm):
    n = w.chart.dim
    return [[w[(i, j)] if i != j else sp.Integer(0) for j in range(n)] for i in range(n)]


def _bivector_matrix(L: MultiVector):
    n = L.chart.dim
    return [[L[(i, j)] if i != j else sp.Integer(0) for j in range(n)] for i in range(n)]


def _bivector_from_matrix(chart, m) -> MultiVector:
    return MultiVector(chart, 2, {(i, j): m[i][j] for i, j in combinations(range(chart.dim), 2)})


def _form_from_matrix(chart, m) -> DiffForm:
    return DiffForm(chart, 2, {(i, j): m[i][j] for i, j in combinations(range(chart.dim), 2)})


@dataclass(frozen=True, eq=False)
class ContactFormData:
    chart: Chart
    theta: DiffForm
    reeb: MultiVector
    bivector: MultiVector

    @property
    def jacobi(self) -> JacobiStructure:
        return JacobiStructure(self.chart, self.bivector, self.reeb)


def contact_volume(theta: DiffForm) -> DiffForm:
    n2 = theta.chart.dim - 1
    dth = exterior_derivative(theta)
    return wedge_all([theta] + [dth] * (n2 // 2))


def contact_to_jacobi(theta: DiffForm) -> ContactFormData:
    """Reeb field and bivector of a contact form.

    E solves ι(E)dθ = 0, θ(E) = 1; Λ is fixed by ♯Λ being inverse to
    μ(X) = -ι(X)dθ on ker θ and ♯Λ(θ) = 0, i.e. -Λ·W = I - E⊗θ with W the
    matrix of dθ.
    """
    chart = theta.chart
    n = chart.dim
    if theta.degree != 1:
        raise InputError("contact form must be a 1-form")
    if n % 2 == 0:
        raise NotContact(f"contact forms need odd dimension, chart {chart.name} has {n}")
    if contact_volume(theta).is_canonical_zero:
        raise NotContact("θ ^ (dθ)^n vanishes identically")
    W = _form_matrix(exterior_derivative(theta))
    th = [theta[(i,)] for i in range(n)]
    rows = [th] + [[W[j][i] for j in range(n)] for i in range(n)]
    rhs = [sp.Integer(1)] + [sp.Integer(0)] * n
    try:
        E = linalg.solve(rows, rhs)
    except InputError as exc:
        raise NotContact(f"no Reeb field: {exc}") from exc
    pairs = list(combinations(range(n), 2))
    # unknown Λ^{ab}, a<b; entry (i, j): -Σ_k Λ^{ik} W_{kj} = δ_ij - E^i θ_j
    eq_rows, eq_rhs = [], []
    for i in range(n):
        for j in range(n):
            row = []
            for a, b in pairs:
                c = 0
                if a == i:
                    c += -W[b][j]
                if b == i:
                    c += W[a][j]
                row.append(c)
            eq_rows.append(row)
            eq_rhs.append(sp.Integer(int(i == j)) - E[i] * th[j])
    sol = linalg.solve(eq_rows, eq_rhs) if pairs else []
    L = MultiVector(chart, 2, {p: v for p, v in zip(pairs, sol)})
    return ContactFormData(chart, theta, MultiVector.vector(chart, E), L)


def jacobi_to_contact(S: JacobiStructure) -> DiffForm:
    """The contact form θ with ι(θ)Λ = 0 and θ(E) = 1."""
    chart = S.chart
    n = chart.dim
    if n % 2 == 0:
        raise NotContactType("contact type needs odd dimension")
    top = wedge_all([S.bivector] * (n // 2) + [S.vector], chart, MultiVector)
    if top.is_canonical_zero:
        raise NotContactType("Λ^n ^ E vanishes identically")
    Lm = _bivector_matrix(S.bivector)
    E = S.vector.components()
    rows = [[Lm[i][j] for i in range(n)] for j in range(n)] + [E]
    rhs = [sp.Integer(0)] * n + [sp.Integer(1)]
    th = linalg.solve(rows, rhs)
    return DiffForm(chart, 1, {(i,): v for i, v in enumerate(th)})


@dataclass(frozen=True, eq=False)
class LcsData:
    chart: Chart
    Omega: DiffForm
    omega: DiffForm

    def to_json(self):
        return {"chart": self.chart.name, "Omega": self.Omega.to_json(), "omega": self.omega.to_json()}


def jacobi_to_lcs(S: JacobiStructure) -> LcsData:
    """Ω with ♭Ω = -(♯Λ)^{-1} and ω = ι(E)Ω."""
    chart = S.chart
    n = chart.dim
    if n % 2:
        raise NotLcsType("l.c.s. type needs even dimension")
    if n:
        top = wedge_all([S.bivector] * (n // 2))
        if top.is_canonical_zero:
            raise NotLcsType("Λ^n vanishes identically")
        inv = linalg.inverse(_bivector_matrix(S.bivector))
        Om = _form_from_matrix(chart, [[-x for x in r] for r in inv])
    else:
        Om = DiffForm.zero(chart, 2)
    return LcsData(chart, Om, interior_product(S.vector, Om) if n else DiffForm.zero(chart, 1))


def lcs_to_jacobi(data: LcsData) -> JacobiStructure:
    chart = data.chart
    n = chart.dim
    if n == 0:
        return JacobiStructure(chart, MultiVector.zero(chart, 2), MultiVector.zero(chart, 1))
    W = _form_matrix(data.Omega)
    try:
        inv = linalg.inverse(W)
    except InputError as exc:
        raise NotLcsType("Ω is degenerate") from exc
    L = _bivector_from_matrix(chart, [[-x for x in r] for r in inv])
    rows = [[W[i][j] for i in range(n)] for j in range(n)]
    E = linalg.solve(rows, [data.omega[(j,)] for j in range(n)])
    return JacobiStructure(chart, L, MultiVector.vector(chart, E))


def verify_lcs(data: LcsData, cfg=None) -> Verdict:
    """dω = 0, dΩ = ω ^ Ω and Ω nondegenerate."""
    n = data.chart.dim
    parts = [("d omega", check_zero(exterior_derivative(data.omega), cfg)),
             ("d Omega - omega^Omega",
              check_zero(exterior_derivative(data.Omega) - wedge(data.omega, data.Omega), cfg))]
    if n % 2:
        parts.append(("nondegenerate", Verdict(Status.FALSIFIED, "dimension",
                                               {"reason": f"odd dimension {n}"})))
    elif n:
        top = wedge_all([data.Omega] * (n // 2))
        if top.is_canonical_zero:
            parts.append(("nondegenerate", Verdict(Status.FALSIFIED, "canonical",
                                                   {"reason": "Omega^n is canonically zero"})))
        else:
            parts.append(("nondegenerate", Verdict(Status.VERIFIED, "canonical-nonzero")))
    return combine(parts)


def verify_jacobi_map(phi: SmoothMap, S1: JacobiStructure, S2: JacobiStructure, cfg=None) -> Verdict:
    """φ_*Λ1 = Λ2 and φ_*E1 = E2."""
    if phi.source != S1.chart or phi.target != S2.chart:
        raise InputError("Jacobi map: structures live on other charts")
    return combine([("bivector", relatedness(phi, S1.bivector, S2.bivector, cfg)),
                    ("vector", relatedness(phi, S1.vector, S2.vector, cfg))])


def verify_conformal_jacobi_map(phi, u, S1, S2, cfg=None) -> Verdict:
    """φ is a u-conformal Jacobi map: a Jacobi map after conformal change by u."""
    return verify_jacobi_map(phi, conformal_change(S1, u), S2, cfg)


@dataclass(frozen=True)
class StructureConstants:
    """Lie algebra structure constants: [e_i, e_j] = Σ_l c[(i, j)][l] e_l, i < j."""

    dim: int
    constants: dict

    def bracket(self, i, j):
        if i == j:
            return {}
        if i < j:
            return dict(self.constants.get((i, j), {}))
        return {l: -c for l, c in self.constants.get((j, i), {}).items()}

    def check_jacobi(self) -> bool:
        def br(a: dict, b: dict):
            out: dict = {}
            for i, x in a.items():
                for j, y in b.items():
                    for l, c in self.bracket(i, j).items():
                        out[l] = out.get(l, 0) + x * y * c
            return {k: v for k, v in out.items() if v != 0}

        for i, j, k in combinations(range(self.dim), 3):
            ei, ej, ek = {i: 1}, {j: 1}, {k: 1}
            tot: dict = {}
            for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
                for l, v in br(a, br(b, c)).items():
                    tot[l] = tot.get(l, 0) + v
            if any(v != 0 for v in tot.values()):
                return False
        return True

    @classmethod
    def from_matrices(cls, basis):
        """Structure constants of a matrix Lie algebra from commutators."""
        mats = [sp.Matrix(b) for b in basis]
        k = len(mats)
        flat = [[m[r, c] for m in mats] for r in range(mats[0].rows) for c in range(mats[0].cols)]
        consts = {}
        for i, j in combinations(range(k), 2):
            comm = mats[i] * mats[j] - mats[j] * mats[i]
            rhs = [comm[r, c] for r in range(comm.rows) for c in range(comm.cols)]
            sol = linalg.solve(flat, rhs)
            row = {l: Fraction(str(v)) for l, v in enumerate(sol) if v != 0}
            if row:
                consts[(i, j)] = row
        return cls(k, consts)


def lie_poisson(C: StructureConstants, chart: Chart | None = None) -> JacobiStructure:
    """Linear Poisson structure Λ^{ij} = Σ_l c_ij^l μ_l on the dual."""
    if not C.check_jacobi():
        raise InputError("structure constants violate the Jacobi identity")
    chart = chart or Chart.make("dual", [f"mu{i + 1}" for i in range(C.dim)])
    if chart.dim != C.dim:
        raise InputError("chart dimension differs from the Lie algebra dimension")
    mu = chart.coords
    coeffs = {}
    for (i, j), row in C.constants.items():
        coeffs[(i, j)] = sum(sp.Rational(c.numerator, c.denominator) * mu[l] for l, c in row.items())
    return JacobiStructure.poisson(chart, MultiVector(chart, 2, coeffs))


def _point_bindings(chart, point):
    if isinstance(point, dict):
        vals = [point[c.name] if c.name in point else point[c] for c in chart.coords]
    else:
        vals = list(point)
    if len(vals) != chart.dim:
        raise InputError(f"point has {len(vals)} entries, chart {chart.name} has {chart.dim}")
    return {c: sp.Rational(str(v)) if isinstance(v, (Fraction, str)) else sp.sympify(v)
            for c, v in zip(chart.coords, vals)}


def at_point(chart, e, point):
    return substitute(e, _point_bindings(chart, point), strict=False)


def leaf_type(S: JacobiStructure, point) -> str:
    """'lcs' if E(x) lies in the image of ♯Λ(x), else 'contact'."""
    n = S.chart.dim
    rows = [[at_point(S.chart, S.bivector[(i, j)], point) for j in range(n)] for i in range(n)]
    E = [at_point(S.chart, e, point) for e in S.vector.components()]
    return "lcs" if linalg.in_span(rows, E) else "contact"
