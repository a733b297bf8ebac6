"""Zero testing: canonical form first, seeded rational sampling second."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy as sp

from ..errors import InputError
from .canon import Canon, canon
from .jets import JetFunction
from .text import to_text
from .verdict import Status, Verdict


@dataclass(frozen=True)
class SamplingConfig:
    seed: int = 0
    samples: int = 6
    max_draws: int = 400
    tolerance: float = 1e-9
    digits: int = 50
    height: int = 9


DEFAULT = SamplingConfig()


class _Reject(Exception):
    pass


def _nth_root(q: Fraction, n: int):
    if n == 1:
        return q
    a, ea = sp.integer_nthroot(q.numerator, n)
    b, eb = sp.integer_nthroot(q.denominator, n)
    if ea and eb:
        return Fraction(int(a), int(b))
    return mpmath.root(mpmath.mpf(q.numerator) / q.denominator, n)


class SamplePoint:
    """Random rational values for coordinates, jets and exponential atoms."""

    def __init__(self, rng: random.Random, cfg: SamplingConfig, exp_index: dict):
        self.rng = rng
        self.cfg = cfg
        self.exp_index = exp_index
        self.coords: dict = {}
        self.jets: dict = {}
        self.exps: dict = {}

    def _rational(self, positive=False) -> Fraction:
        h = self.cfg.height
        d = self.rng.randint(1, 5)
        n = self.rng.randint(1, h) if positive else self.rng.randint(-h, h)
        return Fraction(n, d)

    def coord(self, s):
        if s not in self.coords:
            self.coords[s] = self._rational()
        return self.coords[s]

    def jet(self, a):
        if a not in self.jets:
            self.jets[a] = self._rational()
        return self.jets[a]

    def exp_value(self, base, index):
        k = self.exp_index.get(base, index)
        if base not in self.exps:
            self.exps[base] = self._rational(positive=True)
        t = self.exps[base]
        return t ** (k // index) if k % index == 0 else _nth_root(t ** k, index)

    def witness(self, residual) -> dict:
        return {
            "coordinates": {str(k): str(v) for k, v in sorted(self.coords.items(), key=lambda kv: str(kv[0]))},
            "jets": {to_text(k, False): str(v) for k, v in sorted(self.jets.items(), key=lambda kv: str(kv[0]))},
            "exp_atoms": {f"exp({to_text(k, False)})": str(v) for k, v in sorted(self.exps.items(), key=lambda kv: str(kv[0]))},
            "residual": str(residual),
        }


def _eval_poly(poly: sp.Poly, values: list):
    total = 0
    inexact = any(not isinstance(v, Fraction) for v in values)
    for monom, coeff in poly.as_dict(native=True).items():
        term = Fraction(int(coeff.numerator), int(coeff.denominator))
        if inexact:
            term = mpmath.mpf(term.numerator) / term.denominator
        for v, k in zip(values, monom):
            if k:
                term = term * v ** k
        total = total + term
    return total


def evaluate(c: Canon, point: SamplePoint):
    """Value of a canonical expression at a sample point (Fraction or mpf)."""
    gens = c.gens
    values: dict = {}

    def value(g, depth=0):
        if g in values:
            return values[g]
        inf = c.info.get(g)
        if inf is None:
            if isinstance(g, JetFunction):
                v = point.jet(g)
            elif g.name.startswith("_G_const"):
                v = Fraction(0)
            else:
                v = point.coord(g)
        elif inf.kind == "exp":
            v = point.exp_value(inf.base, inf.index)
        else:
            if depth > 50:
                raise InputError("cyclic radical relation")
            rel = c.relations[g]
            used = [any(m[j] for m in rel.monoms()) for j in range(len(gens))]
            b = _eval_poly(rel, [value(h, depth + 1) if u else 0 for h, u in zip(gens, used)])
            if b <= 0:
                raise _Reject()
            v = _nth_root(b, inf.index) if isinstance(b, Fraction) else mpmath.root(b, inf.index)
        values[g] = v
        return v

    vals = [value(g) for g in gens]
    den = _eval_poly(c.denom, vals)
    if den == 0:
        raise _Reject()
    num = _eval_poly(c.numer, vals)
    return num / den


def _exp_index(canons) -> dict:
    out: dict = {}
    for c in canons:
        for inf in c.info.values():
            if inf.kind == "exp":
                k = out.get(inf.base, 1)
                out[inf.base] = k * inf.index // math.gcd(k, inf.index)
    return out


def constraint_ok(cons, point):
    for c, kind in cons:
        v = evaluate(c, point)
        if kind == "positive" and not v > 0:
            return False
        if kind == "nonzero" and v == 0:
            return False
    return True


def is_zero(e, cfg: SamplingConfig | None = None, constraints=()) -> Verdict:
    """Decide ``e == 0``.

    Verified only if the canonical form is zero; Falsified only with a sample
    point where the value is nonzero; Inconclusive otherwise.  ``constraints``
    is a sequence of ``(expr, "positive"|"nonzero")`` restricting samples.
    """
    cfg = cfg or DEFAULT
    c = canon(e)
    if c.is_zero:
        return Verdict(Status.VERIFIED, "canonical")
    cons = [(canon(x), kind) for x, kind in constraints]
    idx = _exp_index([c] + [x for x, _ in cons])
    rng = random.Random(cfg.seed)
    good = 0
    draws = 0
    with mpmath.workdps(cfg.digits):
        while good < cfg.samples:
            draws += 1
            if draws > cfg.max_draws:
                if good:
                    break
                raise InputError(f"no admissible sample point for {c.expr}")
            point = SamplePoint(rng, cfg, idx)
            try:
                if not constraint_ok(cons, point):
                    continue
                v = evaluate(c, point)
            except _Reject:
                continue
            except ZeroDivisionError:
                continue
            if isinstance(v, Fraction):
                if v != 0:
                    return Verdict(Status.FALSIFIED, "sampling", point.witness(v), to_text(c.expr, False))
            elif abs(v) > cfg.tolerance:
                return Verdict(Status.FALSIFIED, "sampling-mp", point.witness(mpmath.nstr(v, 20)),
                               to_text(c.expr, False))
            good += 1
    return Verdict(Status.INCONCLUSIVE, "sampling", None, to_text(c.expr, False),
                   note=f"{good} sample points agreed with zero")
