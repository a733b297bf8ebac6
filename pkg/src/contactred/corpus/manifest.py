"""JSON manifests: named charts, maps, tensors, structures, groupoids,
actions, reductions and a task list.  Expressions are strings in the text
grammar of ``contactred.symexpr``; tensors are lists of
``[[coordinate, ...], expression]`` terms.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import sympy as sp

from ..action import (ActionChart, HamiltonianData, ReductionInput, albert_action,
                      hamiltonian_to_action, right_multiplication_action)
from ..errors import ContactRedError, InputError
from ..geometry import Chart, DiffForm, MultiVector, SmoothMap, exterior_derivative, pullback
from ..groupoid import FiberProduct, GroupoidChart, conformal_rescale_groupoid, convention_switch
from ..jacobi import (JacobiStructure, LcsData, StructureConstants, conformal_change,
                      contact_to_jacobi, lcs_to_jacobi, lie_poisson)
from ..symexpr import parse

VERSION = "contactred-manifest/1"

SECTIONS = ("charts", "maps", "forms", "multivectors", "structures", "fiber_products",
            "groupoids", "actions", "reductions")


@dataclass(frozen=True)
class Task:
    name: str
    op: str
    args: dict
    expect_status: str | None = None
    expect_error: str | None = None


@dataclass
class Manifest:
    name: str
    raw: dict
    objects: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    lcs: dict = field(default_factory=dict)

    def get(self, section, name):
        try:
            return self.objects[section][name]
        except KeyError:
            raise InputError(f"unknown {section[:-1]} {name!r}") from None

    def count(self, section) -> int:
        return len(self.objects.get(section, {}))

    def task(self, name) -> Task:
        for t in self.tasks:
            if t.name == name:
                return t
        raise InputError(f"no task named {name!r}")


def _line_of(text: str | None, name: str):
    if not text:
        return None
    m = re.search(r'"' + re.escape(name) + r'"', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


class _Builder:
    def __init__(self, raw: dict, text: str | None):
        self.raw = raw
        self.text = text
        self.done: dict = {s: {} for s in SECTIONS}
        self.lcs: dict = {}
        self.active: set = set()

    def fail(self, where: str, msg: str):
        line = _line_of(self.text, where.split(".")[-1])
        at = f" (line {line})" if line else ""
        raise InputError(f"{where}{at}: {msg}")

    def ref(self, section: str, name, where: str):
        if not isinstance(name, str):
            self.fail(where, f"expected a {section[:-1]} name, got {name!r}")
        if name in self.done[section]:
            return self.done[section][name]
        spec = self.raw.get(section, {}).get(name)
        if spec is None:
            self.fail(where, f"unknown {section[:-1]} reference {name!r}")
        key = (section, name)
        if key in self.active:
            self.fail(where, f"cyclic reference through {name!r}")
        self.active.add(key)
        try:
            obj = getattr(self, "_" + section)(name, spec, f"{section}.{name}")
        except InputError:
            raise
        except ContactRedError as exc:
            self.fail(f"{section}.{name}", f"{type(exc).__name__}: {exc}")
        except (KeyError, TypeError, ValueError) as exc:
            self.fail(f"{section}.{name}", f"malformed entry ({type(exc).__name__}: {exc})")
        finally:
            self.active.discard(key)
        self.done[section][name] = obj
        return obj

    def expr(self, chart: Chart, text, where):
        try:
            return parse(str(text) if isinstance(text, (int, float)) else text, chart.coords)
        except InputError as exc:
            self.fail(where, str(exc))

    def _charts(self, name, spec, where):
        coords = spec["coords"]
        return Chart.make(name, coords if isinstance(coords, (list, str)) else list(coords),
                          spec.get("positive", ()), spec.get("nonzero", ()))

    def _maps(self, name, spec, where):
        src = self.ref("charts", spec["source"], where)
        tgt = self.ref("charts", spec["target"], where)
        exprs = [self.expr(src, e, where) for e in spec["exprs"]]
        return SmoothMap(src, tgt, tuple(exprs), name)

    def _tensor(self, cls, spec, where):
        chart = self.ref("charts", spec["chart"], where)
        terms: dict = {}
        for idx, text in spec.get("terms", []):
            key = tuple(chart.index(i) for i in ([idx] if isinstance(idx, str) else idx))
            terms[key] = terms.get(key, 0) + self.expr(chart, text, where)
        return cls(chart, int(spec["degree"]), terms)

    def _forms(self, name, spec, where):
        if "pullback" in spec:
            p = spec["pullback"]
            return pullback(self.ref("maps", p["map"], where), self.ref("forms", p["form"], where))
        if "d" in spec:
            return exterior_derivative(self.ref("forms", spec["d"], where))
        if "scale" in spec:
            w = self.ref("forms", spec["scale"]["form"], where)
            return self.expr(w.chart, spec["scale"]["by"], where) * w
        if "sum" in spec:
            items = [self.ref("forms", n, where) for n in spec["sum"]]
            out = items[0]
            for w in items[1:]:
                out = out + w
            return out
        return self._tensor(DiffForm, spec, where)

    def _multivectors(self, name, spec, where):
        return self._tensor(MultiVector, spec, where)

    def _structures(self, name, spec, where):
        if "jacobi" in spec:
            s = spec["jacobi"]
            L = self.ref("multivectors", s["bivector"], where)
            E = self.ref("multivectors", s["vector"], where) if s.get("vector") else MultiVector.zero(L.chart, 1)
            return JacobiStructure(L.chart, L, E, name)
        if "contact_form" in spec:
            return contact_to_jacobi(self.ref("forms", spec["contact_form"], where)).jacobi
        if "lcs" in spec:
            s = spec["lcs"]
            Om = self.ref("forms", s["Omega"], where)
            data = LcsData(Om.chart, Om, self.ref("forms", s["omega"], where))
            self.lcs[name] = data
            return lcs_to_jacobi(data)
        if "lie_algebra" in spec:
            s = spec["lie_algebra"]
            if "matrices" in s:
                mats = [[[sp.Rational(str(v)) for v in row] for row in m] for m in s["matrices"]]
                C = StructureConstants.from_matrices(mats)
            else:
                consts: dict = {}
                for i, j, l, c in s["constants"]:
                    consts.setdefault((int(i), int(j)), {})[int(l)] = Fraction(str(c))
                C = StructureConstants(int(s["dim"]), consts)
            chart = self.ref("charts", s["chart"], where) if s.get("chart") else None
            return lie_poisson(C, chart)
        if "conformal" in spec:
            s = spec["conformal"]
            S = self.ref("structures", s["of"], where)
            return conformal_change(S, self.expr(S.chart, s["u"], where))
        if "groupoid_base" in spec:
            return self.ref("groupoids", spec["groupoid_base"], where).base_jacobi
        self.fail(where, "structure needs one of jacobi, contact_form, lcs, lie_algebra, conformal, groupoid_base")

    def _fiber_products(self, name, spec, where):
        chart = self.ref("charts", spec["chart"], where)
        sel = tuple((int(f), c) for f, c in spec["selection"])
        return FiberProduct(chart, self.ref("maps", spec["pr1"], where),
                            self.ref("maps", spec["pr2"], where), sel)

    def _groupoids(self, name, spec, where):
        if "convention_switch" in spec:
            return convention_switch(self.ref("groupoids", spec["convention_switch"], where))
        if "conformal_rescale" in spec:
            s = spec["conformal_rescale"]
            G = self.ref("groupoids", s["of"], where)
            return conformal_rescale_groupoid(G, self.expr(G.base, s["u"], where))
        if "variant" in spec:
            s = spec["variant"]
            G = self.ref("groupoids", s["of"], where)
            changes = {"name": name, "base_structure": None}
            if "f" in s:
                changes["f"] = self.expr(G.gamma, s["f"], where)
            if "theta" in s:
                changes["theta"] = self.ref("forms", s["theta"], where)
            for key in ("source", "target", "mult"):
                if key in s:
                    changes[key] = self.ref("maps", s[key], where)
            return replace(G, **changes)
        gamma = self.ref("charts", spec["gamma"], where)
        base_s = self.ref("structures", spec["base_structure"], where) if spec.get("base_structure") else None
        return GroupoidChart(
            name, gamma, self.ref("charts", spec["base"], where),
            self.ref("maps", spec["source"], where), self.ref("maps", spec["target"], where),
            self.ref("maps", spec["unit"], where), self.ref("maps", spec["inverse"], where),
            self.ref("fiber_products", spec["fiber_product"], where),
            self.ref("maps", spec["mult"], where), self.ref("forms", spec["theta"], where),
            self.expr(gamma, spec.get("f", "1"), where), self.expr(gamma, spec.get("f_left", "1"), where),
            base_s)

    def _actions(self, name, spec, where):
        if "right_multiplication" in spec:
            return right_multiplication_action(self.ref("groupoids", spec["right_multiplication"], where))
        if "hamiltonian" in spec:
            s = spec["hamiltonian"]
            M = self.ref("charts", s["manifold"], where)
            H = HamiltonianData(
                M, self.ref("forms", s["theta"], where), self.ref("charts", s["group"], where),
                self.ref("maps", s["law"], where), tuple(sp.Rational(str(v)) for v in s["identity"]),
                self.ref("maps", s["inverse"], where), tuple(self.ref("forms", n, where) for n in s["mc"]),
                self.ref("maps", s["action"], where), tuple(self.expr(M, e, where) for e in s["moment"]))
            return hamiltonian_to_action(H)
        if "albert" in spec:
            s = spec["albert"]
            M = self.ref("charts", s["manifold"], where)
            return albert_action(M, self.ref("forms", s["theta"], where), self.ref("maps", s["action"], where),
                                 [self.expr(M, e, where) for e in s["moment"]], self.ref("maps", s["flow"], where))
        return ActionChart(name, self.ref("groupoids", spec["groupoid"], where),
                           self.ref("charts", spec["manifold"], where), self.ref("forms", spec["theta"], where),
                           self.ref("maps", spec["moment"], where), self.ref("fiber_products", spec["fiber_product"], where),
                           self.ref("maps", spec["act"], where))

    def _reductions(self, name, spec, where):
        A = self.ref("actions", spec["action"], where)
        kind = spec.get("kind", "contact")
        if kind not in ("contact", "lcs"):
            self.fail(where, f"kind must be contact or lcs, got {kind!r}")
        dirs = spec.get("orbit_directions")
        R = ReductionInput(
            tuple(sp.Rational(str(v)) for v in spec.get("x", [])),
            self.expr(A.manifold, spec["F"], where),
            self.ref("maps", spec["slice"], where),
            self.ref("maps", spec["level_set"], where) if spec.get("level_set") else None,
            tuple(self.ref("multivectors", n, where) for n in dirs) if dirs is not None else None)
        return kind, A, R


# argument name -> section holding the referenced object
_REF_ARGS = {"structure": "structures", "source": "structures", "target": "structures",
             "map": "maps", "form": "forms", "groupoid": "groupoids", "action": "actions",
             "reduction": "reductions"}


def _validate_task(b: _Builder, t: dict, i: int, ops) -> Task:
    where = f"tasks[{i}]"
    if not isinstance(t, dict):
        b.fail(where, "task must be an object")
    name, op = t.get("name"), t.get("op")
    if not isinstance(name, str) or not name:
        b.fail(where, "task needs a name")
    if op not in ops:
        b.fail(f"tasks.{name}", f"unknown operation {op!r}")
    args = {k: v for k, v in t.items() if k not in ("name", "op", "expect_status", "expect_error")}
    for key in ops[op][0]:
        if key not in args:
            b.fail(f"tasks.{name}", f"operation {op} needs argument {key!r}")
    for key, section in _REF_ARGS.items():
        if key in args:
            b.ref(section, args[key], f"tasks.{name}")
    st = t.get("expect_status")
    if st is not None and st not in ("Verified", "Falsified", "Inconclusive"):
        b.fail(f"tasks.{name}", f"bad expect_status {st!r}")
    return Task(name, op, args, st, t.get("expect_error"))


def build_manifest(raw: dict, name: str = "manifest", text: str | None = None) -> Manifest:
    from .tasks import OPS
    if not isinstance(raw, dict):
        raise InputError("manifest must be a JSON object")
    if raw.get("version") != VERSION:
        raise InputError(f"unknown manifest version {raw.get('version')!r}; expected {VERSION!r}")
    unknown = set(raw) - set(SECTIONS) - {"version", "name", "description", "tasks"}
    if unknown:
        raise InputError(f"unknown manifest sections: {sorted(unknown)}")
    b = _Builder(raw, text)
    for section in SECTIONS:
        for key in raw.get(section, {}):
            b.ref(section, key, f"{section}.{key}")
    tasks = [_validate_task(b, t, i, OPS) for i, t in enumerate(raw.get("tasks", []))]
    names = [t.name for t in tasks]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise InputError(f"duplicate task names: {sorted(dup)}")
    return Manifest(raw.get("name", name), raw, b.done, tasks, b.lcs)


def load_manifest(path) -> Manifest:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read manifest {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: JSON error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return build_manifest(raw, path.stem, text)
