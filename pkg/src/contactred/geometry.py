"""Charts, differential forms, multivector fields and smooth maps.

Tensors are alternating and stored sparsely over increasing index tuples with
canonical coefficients; a missing index means a canonically zero coefficient.

Sign conventions (fixed once, used everywhere):

* ``pairing(P, a1 ^ ... ^ ak)`` sums ``P^I (a1 ^ ... ^ ak)_I`` over increasing
  ``I``, so ``(dx ^ dy)(∂x, ∂y) = 1`` and ``Λ(α, β) = Σ Λ^{ij} α_i β_j``;
* ``sharp(Λ, α) = Λ(α, ·)``, i.e. ``(♯α)^j = Σ_i α_i Λ^{ij}``;
* interior products insert into the first slot;
* the Schouten bracket is, with right derivatives in the odd variables ζ,
  ``[P, Q] = Σ_i ε (P ∂⃖ζ_i)(∂_i Q) - (Q ∂⃖ζ_i)(∂_i P)``, ``ε = (-1)^{(p-1)(q-1)}``.
  It is graded antisymmetric, satisfies the graded Jacobi identity, gives the
  usual Lie bracket on vector fields and ``[X, Q] = L_X Q``, and makes the
  standard contact structure satisfy ``[Λ, Λ] = 2 E ^ Λ``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import sympy as sp

from .errors import InputError
from .symexpr import (DEFAULT_SAMPLING, Status, Verdict, combine, differentiate,
                      is_zero, normalize, parse, substitute, to_text)

_RESERVED_NAMES = {"exp", "sqrt", "D", "pi"}


@dataclass(frozen=True)
class Chart:
    """A coordinate domain: ordered coordinates plus positivity / nonvanishing
    constraints that restrict sample points."""

    name: str
    coords: tuple
    positive: tuple = ()
    nonzero: tuple = ()

    def __post_init__(self):
        names = [c.name for c in self.coords]
        if len(set(names)) != len(names):
            raise InputError(f"chart {self.name}: duplicate coordinates {names}")
        for n in names:
            if not n.isidentifier() or n.startswith("_") or n in _RESERVED_NAMES:
                raise InputError(f"chart {self.name}: invalid coordinate name {n!r}")

    @classmethod
    def make(cls, name: str, coords, positive=(), nonzero=()):
        if isinstance(coords, str):
            coords = coords.split()
        syms = tuple(sp.Symbol(c) if isinstance(c, str) else c for c in coords)
        conv = lambda xs: tuple(parse(x) if isinstance(x, str) else sp.sympify(x) for x in xs)
        return cls(name, syms, conv(positive), conv(nonzero))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, c) -> int:
        if isinstance(c, int):
            return c
        name = c if isinstance(c, str) else c.name
        for i, s in enumerate(self.coords):
            if s.name == name:
                return i
        raise InputError(f"{name!r} is not a coordinate of chart {self.name}")

    def __getitem__(self, c):
        return self.coords[self.index(c)]

    def d(self, c) -> "DiffForm":
        return DiffForm(self, 1, {(self.index(c),): 1})

    def partial(self, c) -> "MultiVector":
        return MultiVector(self, 1, {(self.index(c),): 1})

    def constraints(self):
        return [(p, "positive") for p in self.positive] + [(p, "nonzero") for p in self.nonzero]

    def check_expr(self, e):
        """Raise unless every free coordinate of ``e`` belongs to this chart."""
        extra = {s for s in sp.sympify(e).free_symbols if s not in self.coords}
        if extra:
            raise InputError(f"{sorted(map(str, extra))} are not coordinates of chart {self.name}")
        return e

    def to_json(self) -> dict:
        out = {"coords": [c.name for c in self.coords]}
        if self.positive:
            out["positive"] = [to_text(p) for p in self.positive]
        if self.nonzero:
            out["nonzero"] = [to_text(p) for p in self.nonzero]
        return out


def _sort_index(idx):
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class _Alternating:
    kind = ""

    def __init__(self, chart: Chart, degree: int, coeffs=None):
        if degree < 0:
            raise InputError(f"negative degree {degree}")
        self.chart = chart
        self.degree = degree
        acc: dict = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(chart.index(i) for i in idx)
            if len(idx) != degree:
                raise InputError(f"index {idx} has wrong length for degree {degree}")
            sign, key = _sort_index(idx)
            if not sign:
                continue
            c = parse(c) if isinstance(c, str) else sp.sympify(c)
            chart.check_expr(c)
            acc[key] = acc.get(key, 0) + sign * c
        self.coeffs = {}
        for k in sorted(acc):
            v = normalize(acc[k])
            if v != 0:
                self.coeffs[k] = v

    def _new(self, coeffs, degree=None):
        return type(self)(self.chart, self.degree if degree is None else degree, coeffs)

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {})

    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        idx = tuple(self.chart.index(i) for i in idx)
        sign, key = _sort_index(idx)
        if not sign:
            return sp.Integer(0)
        return sign * self.coeffs.get(key, sp.Integer(0))

    def items(self):
        return self.coeffs.items()

    def _check(self, other):
        if type(other) is not type(self) or other.chart != self.chart or other.degree != self.degree:
            raise InputError(f"incompatible tensors: {self!r} and {other!r}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return self._new(out)

    def __neg__(self):
        return self._new({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, _Alternating):
            return NotImplemented
        scalar = parse(scalar) if isinstance(scalar, str) else sp.sympify(scalar)
        return self._new({k: scalar * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (type(other) is type(self) and other.chart == self.chart
                and other.degree == self.degree and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.kind, self.chart.name, self.degree, tuple(self.coeffs.items())))

    @property
    def is_canonical_zero(self) -> bool:
        return not self.coeffs

    def map(self, fn):
        return self._new({k: fn(v) for k, v in self.coeffs.items()})

    def _basis_text(self, idx):
        raise NotImplementedError

    def __repr__(self):
        if not self.coeffs:
            return f"0 [{self.kind} deg {self.degree} on {self.chart.name}]"
        return " + ".join(f"({to_text(v, False)})*{self._basis_text(k)}" for k, v in self.coeffs.items())

    def to_json(self) -> dict:
        return {"chart": self.chart.name, "degree": self.degree,
                "terms": [[[self.chart.coords[i].name for i in k], to_text(v, False)]
                          for k, v in sorted(self.coeffs.items())]}

    @classmethod
    def from_json(cls, data: dict, charts: dict):
        try:
            chart = charts[data["chart"]]
        except KeyError as exc:
            raise InputError(f"unknown chart {data.get('chart')!r}") from exc
        terms = {}
        for idx, text in data.get("terms", []):
            key = tuple(chart.index(i) for i in idx)
            terms[key] = terms.get(key, 0) + parse(text, chart.coords)
        return cls(chart, int(data["degree"]), terms)


class DiffForm(_Alternating):
    """Differential form with coefficients over a chart."""

    kind = "form"

    @classmethod
    def function(cls, chart, f):
        return cls(chart, 0, {(): f})

    def _basis_text(self, idx):
        return "^".join(f"d{self.chart.coords[i].name}" for i in idx) or "1"

    def value(self):
        """The coefficient of a 0-form."""
        if self.degree != 0:
            raise InputError("not a function")
        return self.coeffs.get((), sp.Integer(0))


class MultiVector(_Alternating):
    """Multivector field (skew contravariant tensor) over a chart."""

    kind = "multivector"

    @classmethod
    def vector(cls, chart, components):
        return cls(chart, 1, {(i,): c for i, c in enumerate(components)})

    def components(self):
        if self.degree != 1:
            raise InputError("not a vector field")
        return [self[(i,)] for i in range(self.chart.dim)]

    def _basis_text(self, idx):
        return "^".join(f"∂{self.chart.coords[i].name}" for i in idx) or "1"


def wedge(a, b):
    """Exterior product of two forms or two multivectors on the same chart."""
    if type(a) is not type(b) or a.chart != b.chart:
        raise InputError("wedge needs two tensors of one kind on one chart")
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            sign, key = _sort_index(i + j)
            if sign:
                out[key] = out.get(key, 0) + sign * x * y
    return type(a)(a.chart, a.degree + b.degree, out)


def wedge_all(items, chart=None, cls=None):
    items = list(items)
    if not items:
        return cls(chart, 0, {(): 1})
    out = items[0]
    for t in items[1:]:
        out = wedge(out, t)
    return out


def exterior_derivative(w: DiffForm) -> DiffForm:
    if not isinstance(w, DiffForm):
        raise InputError("exterior derivative needs a form")
    out: dict = {}
    for idx, c in w.items():
        for j, x in enumerate(w.chart.coords):
            dc = differentiate(c, x)
            if dc != 0:
                sign, key = _sort_index((j,) + idx)
                if sign:
                    out[key] = out.get(key, 0) + sign * dc
    return DiffForm(w.chart, w.degree + 1, out)


d = exterior_derivative


def _insert_first(vec_coeffs, t):
    out: dict = {}
    for idx, c in t.items():
        for pos, i in enumerate(idx):
            xi = vec_coeffs.get((i,))
            if xi is None:
                continue
            rest = idx[:pos] + idx[pos + 1:]
            out[rest] = out.get(rest, 0) + (-1) ** pos * xi * c
    return out


def interior_product(X: MultiVector, w: DiffForm) -> DiffForm:
    """ι_X w with X a vector field, inserted in the first slot."""
    if not (isinstance(X, MultiVector) and X.degree == 1 and isinstance(w, DiffForm)):
        raise InputError("interior_product needs a vector field and a form")
    if X.chart != w.chart:
        raise InputError("interior_product: chart mismatch")
    if w.degree == 0:
        return DiffForm.zero(w.chart, 0)
    return DiffForm(w.chart, w.degree - 1, _insert_first(X.coeffs, w))


def contract(a: DiffForm, P: MultiVector) -> MultiVector:
    """ι(a)P for a 1-form a: contract into the first slot of P."""
    if not (isinstance(a, DiffForm) and a.degree == 1 and isinstance(P, MultiVector)):
        raise InputError("contract needs a 1-form and a multivector")
    if a.chart != P.chart:
        raise InputError("contract: chart mismatch")
    if P.degree == 0:
        return MultiVector.zero(P.chart, 0)
    return MultiVector(P.chart, P.degree - 1, _insert_first(a.coeffs, P))


def sharp(L: MultiVector, a: DiffForm) -> MultiVector:
    """♯Λ(α) = Λ(α, ·)."""
    if L.degree != 2:
        raise InputError("sharp needs a bivector")
    return contract(a, L)


def pairing(P: MultiVector, w: DiffForm):
    """Full contraction of a k-vector with a k-form."""
    if P.degree != w.degree or P.chart != w.chart:
        raise InputError("pairing needs equal degrees on one chart")
    return normalize(sum((c * w.coeffs[k] for k, c in P.items() if k in w.coeffs), sp.Integer(0)))


def apply_vector(X: MultiVector, f):
    """X(f) for a vector field X and function f."""
    if X.degree != 1:
        raise InputError("apply_vector needs a vector field")
    return normalize(sum((c * differentiate(f, X.chart.coords[k[0]]) for k, c in X.items()),
                         sp.Integer(0)))


def differential(chart: Chart, f) -> DiffForm:
    return exterior_derivative(DiffForm.function(chart, f))


def _right_odd_derivative(P: MultiVector, i: int) -> dict:
    out = {}
    for idx, c in P.items():
        if i in idx:
            pos = idx.index(i)
            sign = (-1) ** (len(idx) - 1 - pos)
            out[idx[:pos] + idx[pos + 1:]] = sign * c
    return out


def _coeff_derivative(P: MultiVector, x) -> dict:
    out = {}
    for idx, c in P.items():
        dc = differentiate(c, x)
        if dc != 0:
            out[idx] = dc
    return out


def _wedge_dicts(a: dict, b: dict, acc: dict, factor=1):
    for i, x in a.items():
        for j, y in b.items():
            sign, key = _sort_index(i + j)
            if sign:
                acc[key] = acc.get(key, 0) + factor * sign * x * y


def schouten_bracket(P: MultiVector, Q: MultiVector) -> MultiVector:
    """Schouten-Nijenhuis bracket of multivector fields."""
    if not (isinstance(P, MultiVector) and isinstance(Q, MultiVector)) or P.chart != Q.chart:
        raise InputError("schouten_bracket needs multivectors on one chart")
    p, q = P.degree, Q.degree
    if p == 0 or q == 0:
        raise InputError("schouten_bracket with functions is not supported; use apply_vector")
    sgn = (-1) ** ((p - 1) * (q - 1))
    acc: dict = {}
    for i, x in enumerate(P.chart.coords):
        _wedge_dicts(_right_odd_derivative(P, i), _coeff_derivative(Q, x), acc, sgn)
        _wedge_dicts(_right_odd_derivative(Q, i), _coeff_derivative(P, x), acc, -1)
    return MultiVector(P.chart, p + q - 1, acc)


def lie_derivative(X: MultiVector, T):
    """L_X of a form (Cartan formula) or a multivector (bracket with X)."""
    if isinstance(T, DiffForm):
        if T.degree == 0:
            return DiffForm.function(T.chart, apply_vector(X, T.value()))
        return exterior_derivative(interior_product(X, T)) + interior_product(X, exterior_derivative(T))
    return schouten_bracket(X, T)


@dataclass(frozen=True)
class SmoothMap:
    """A map between charts given by one expression per target coordinate."""

    source: Chart
    target: Chart
    exprs: tuple
    name: str = ""

    def __post_init__(self):
        if len(self.exprs) != self.target.dim:
            raise InputError(f"map {self.name}: {len(self.exprs)} expressions for "
                             f"{self.target.dim}-dimensional target")
        vals = []
        for e in self.exprs:
            e = parse(e, self.source.coords) if isinstance(e, str) else sp.sympify(e)
            self.source.check_expr(e)
            vals.append(normalize(e))
        object.__setattr__(self, "exprs", tuple(vals))

    @classmethod
    def identity(cls, chart, name="id"):
        return cls(chart, chart, chart.coords, name)

    def bindings(self) -> dict:
        return dict(zip(self.target.coords, self.exprs))

    def pull(self, f):
        """f ∘ φ for a function f on the target."""
        f = parse(f, self.target.coords) if isinstance(f, str) else sp.sympify(f)
        self.target.check_expr(f)
        return substitute(f, self.bindings(), strict=False)

    def compose(self, inner: "SmoothMap", name="") -> "SmoothMap":
        """self ∘ inner."""
        if inner.target != self.source:
            raise InputError(f"cannot compose {self.name} after {inner.name}: chart mismatch")
        return SmoothMap(inner.source, self.target, tuple(inner.pull(e) for e in self.exprs),
                         name or f"{self.name}∘{inner.name}")

    def jacobian(self):
        return [[differentiate(e, x) for x in self.source.coords] for e in self.exprs]

    def push(self, X: MultiVector):
        """Components of dφ(X) along φ, as functions on the source."""
        if X.chart != self.source or X.degree != 1:
            raise InputError("push needs a vector field on the source")
        return [apply_vector(X, e) for e in self.exprs]

    def to_json(self) -> dict:
        return {"source": self.source.name, "target": self.target.name,
                "exprs": [to_text(e, False) for e in self.exprs]}


def pullback(phi: SmoothMap, w: DiffForm) -> DiffForm:
    if w.chart != phi.target:
        raise InputError(f"pullback along {phi.name}: form lives on {w.chart.name}")
    if w.degree == 0:
        return DiffForm.function(phi.source, phi.pull(w.value()))
    dphi = [differential(phi.source, e) for e in phi.exprs]
    out = DiffForm.zero(phi.source, w.degree)
    for idx, c in w.items():
        term = wedge_all([dphi[i] for i in idx])
        out = out + phi.pull(c) * term
    return out


def push_multivector(phi: SmoothMap, P: MultiVector, idx):
    """P(dφ^{i1}, ..., dφ^{ik}) as a function on the source."""
    forms = [differential(phi.source, phi.exprs[i]) for i in idx]
    return pairing(P, wedge_all(forms, phi.source, DiffForm))


def check_zero(T, cfg=None, label="") -> Verdict:
    """Tri-state zero test of a tensor or expression."""
    cfg = cfg or DEFAULT_SAMPLING
    if isinstance(T, _Alternating):
        if T.is_canonical_zero:
            return Verdict(Status.VERIFIED, "canonical", note=label)
        parts = []
        for idx, c in T.items():
            v = is_zero(c, cfg, T.chart.constraints())
            parts.append((T._basis_text(idx), v))
            if v.falsified:
                break
        out = combine(parts, label)
        return Verdict(out.status, out.method, out.witness, out.residual, label, out.parts)
    v = is_zero(T, cfg)
    return Verdict(v.status, v.method, v.witness, v.residual, label)


def check_equal(a, b, cfg=None, label="", chart=None) -> Verdict:
    if isinstance(a, _Alternating):
        return check_zero(a - b, cfg, label)
    cfg = cfg or DEFAULT_SAMPLING
    v = is_zero(sp.sympify(a) - sp.sympify(b), cfg, chart.constraints() if chart else ())
    return Verdict(v.status, v.method, v.witness, v.residual, label)


def check_expr_zero(e, chart: Chart | None = None, cfg=None, label="") -> Verdict:
    cfg = cfg or DEFAULT_SAMPLING
    v = is_zero(e, cfg, chart.constraints() if chart else ())
    return Verdict(v.status, v.method, v.witness, v.residual, label)


def relatedness(phi: SmoothMap, P: MultiVector, Q: MultiVector, cfg=None) -> Verdict:
    """Decide φ_*P = Q (P on the source, Q on the target)."""
    if P.chart != phi.source or Q.chart != phi.target or P.degree != Q.degree:
        raise InputError("relatedness: charts or degrees do not match the map")
    parts = []
    for idx in combinations(range(phi.target.dim), P.degree):
        lhs = push_multivector(phi, P, idx)
        rhs = phi.pull(Q[idx])
        name = "^".join(phi.target.coords[i].name for i in idx) or "scalar"
        parts.append((name, check_expr_zero(lhs - rhs, phi.source, cfg, name)))
    return combine(parts)
