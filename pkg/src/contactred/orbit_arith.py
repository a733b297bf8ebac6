"""Exact torus arithmetic for coadjoint-orbit reduction: integrality, t0,
the canonical reduction function F and the U(2) lens parameter.

Every quantity has the shape q·sqrt(r) with q rational and r a square-free
positive integer, so values are stored as ``QuadSurd``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from .errors import InputError
from .symexpr import parse


def _squarefree(n: int) -> tuple[int, int]:
    """n = s^2 * r with r square-free; returns (s, r)."""
    if n <= 0:
        raise InputError(f"radicand must be positive, got {n}")
    s, r = 1, 1
    for p, e in sp.factorint(n).items():
        s *= p ** (e // 2)
        r *= p ** (e % 2)
    return s, r


@dataclass(frozen=True)
class QuadSurd:
    q: Fraction
    r: int = 1

    def __post_init__(self):
        if self.q == 0 and self.r != 1:
            object.__setattr__(self, "r", 1)

    @classmethod
    def rational(cls, q) -> "QuadSurd":
        return cls(Fraction(q))

    @classmethod
    def sqrt(cls, x) -> "QuadSurd":
        """Square root of a nonnegative rational."""
        x = Fraction(x)
        if x < 0:
            raise InputError("square root of a negative number")
        if x == 0:
            return cls(Fraction(0))
        s, r = _squarefree(x.numerator * x.denominator)
        return cls(Fraction(s, x.denominator), r)

    @classmethod
    def from_expr(cls, e) -> "QuadSurd":
        if isinstance(e, str):
            e = parse(e, ())
        coeff, rest = sp.sympify(e).as_coeff_Mul()
        if not coeff.is_Rational:
            raise InputError(f"not of the form q*sqrt(r): {e}")
        q = Fraction(int(coeff.p), int(coeff.q))
        if rest == 1:
            return cls(q)
        if rest.is_Pow and rest.exp == sp.Rational(1, 2) and rest.base.is_Integer:
            s, r = _squarefree(int(rest.base))
            return cls(q * s, r)
        raise InputError(f"not of the form q*sqrt(r): {e}")

    def __mul__(self, other):
        other = other if isinstance(other, QuadSurd) else QuadSurd(Fraction(other))
        s, r = _squarefree(self.r * other.r)
        return QuadSurd(self.q * other.q * s, r)

    __rmul__ = __mul__

    def inverse(self) -> "QuadSurd":
        if self.q == 0:
            raise InputError("division by zero")
        return QuadSurd(1 / (self.q * self.r), self.r)

    def __truediv__(self, other):
        other = other if isinstance(other, QuadSurd) else QuadSurd(Fraction(other))
        return self * other.inverse()

    def __neg__(self):
        return QuadSurd(-self.q, self.r)

    def square(self) -> Fraction:
        return self.q * self.q * self.r

    def to_sympy(self):
        return sp.Rational(self.q.numerator, self.q.denominator) * sp.sqrt(self.r)

    def __str__(self):
        if self.r == 1:
            return str(self.q)
        sign = "-" if self.q < 0 else ""
        a = abs(self.q) * self.r
        num, den = a.numerator, a.denominator
        # prefer 2/sqrt(5) over 2/5*sqrt(5) when the surd sits in the denominator
        if abs(self.q).denominator != 1 and den == 1:
            return f"{sign}{num}/sqrt({self.r})"
        if num == 1:
            return f"{sign}1/({den}*sqrt({self.r}))"
        head = "" if abs(self.q) == 1 else f"{abs(self.q)}*"
        return f"{sign}{head}sqrt({self.r})"


@dataclass(frozen=True)
class OrbitSpec:
    """A point ξ of the torus part of g*, as exact components."""

    components: tuple

    @classmethod
    def make(cls, comps) -> "OrbitSpec":
        vals = tuple(c if isinstance(c, QuadSurd) else QuadSurd.from_expr(c) for c in comps)
        if not vals:
            raise InputError("empty orbit vector")
        return cls(vals)

    @classmethod
    def parse(cls, text: str) -> "OrbitSpec":
        """'(2,1)/sqrt(5)', '(3,4)/5', '1,0' or '(1, sqrt(2))'."""
        m = re.fullmatch(r"\s*\(((?:[^()]|\([^()]*\))*)\)\s*(?:([*/])\s*(.+?))?\s*", text)
        body, op, scale = (m.group(1), m.group(2), m.group(3)) if m else (text, None, None)
        comps = [QuadSurd.from_expr(p) for p in body.split(",") if p.strip()]
        if op:
            s = QuadSurd.from_expr(scale)
            comps = [c * s if op == "*" else c / s for c in comps]
        return cls.make(comps)

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def norm(self) -> QuadSurd:
        return QuadSurd.sqrt(sum((c.square() for c in self.components), Fraction(0)))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def integrality(spec: OrbitSpec):
    """(True, primitive integer vector) if the ray through ξ meets the lattice."""
    nz = [c for c in spec.components if c.q != 0]
    if not nz:
        raise InputError("ξ = 0 has no ray")
    radicands = {c.r for c in nz}
    if len(radicands) > 1:
        return False, None
    den = math.lcm(*(c.q.denominator for c in nz))
    ints = [int(c.q * den) for c in spec.components]
    g = math.gcd(*ints)
    return True, tuple(i // g for i in ints)


def compute_t0(spec: OrbitSpec):
    """(t0, T, count) with count = Σ n_i^2, T = sqrt(count)/‖ξ‖ and t0 = T/count."""
    ok, n = integrality(spec)
    if not ok:
        raise InputError(f"{spec} is not a multiple of an integer point")
    count = sum(i * i for i in n)
    T = QuadSurd.sqrt(count) / spec.norm
    t0 = (spec.norm * QuadSurd.sqrt(count)).inverse()
    if t0 * count != T:
        raise AssertionError("t0 * count != T")
    return t0, T, count


def u2_lens(m: int, n: int) -> int:
    """Willett reduced space of U(2) at diag(m, n) is L(|m - n|, 1)."""
    m, n = int(m), int(n)
    if math.gcd(m, n) != 1:
        raise InputError(f"gcd({m}, {n}) must be 1")
    if m == n:
        raise InputError("m and n must differ")
    return abs(m - n)


@dataclass(frozen=True)
class PrequantReport:
    d: tuple
    integral: bool
    n: int
    primitive: tuple
    T: QuadSurd
    t0: QuadSurd
    F: QuadSurd
    lens: int | None

    def to_json(self):
        return {"d": list(self.d), "integral": self.integral, "n": self.n,
                "primitive": list(self.primitive), "T": str(self.T), "t0": str(self.t0),
                "F": str(self.F), "lens": self.lens}


def prequant_report(d) -> PrequantReport:
    d = tuple(int(x) for x in d)
    if not any(d):
        raise InputError("d must be nonzero")
    n = math.gcd(*d)
    prim = tuple(x // n for x in d)
    spec = OrbitSpec.make([QuadSurd(Fraction(x)) for x in d])
    t0, T, count = compute_t0(spec)
    root = QuadSurd.sqrt(count)
    if root * n != spec.norm:
        raise AssertionError("n * sqrt(sum n_i^2) != |d|")
    lens = None
    if len(d) == 2 and math.gcd(*d) == 1 and d[0] != d[1]:
        lens = u2_lens(*d)
    return PrequantReport(d, True, n, prim, T, t0, -root.inverse(), lens)
