"""Canonical form of expressions.

An expression is lowered to a rational function in independent generators:

* coordinate symbols and applied opaque jets are generators as they stand;
* ``exp(m)`` for each additive monomial ``m`` of a canonical exponent gets a
  positive generator ``G`` with ``G**L = exp(m)``, where ``L`` is the lcm of
  the denominators of all rational multiples of ``m`` that occur;
* a radicand ``b`` (positive rational content and exponential factors pulled
  out first) gets a positive generator ``G`` with the relation ``G**L = b``.

The rational function is cancelled, powers ``G**k`` with ``k >= L`` of radical
generators are reduced through their relation, monomial radical factors are
cleared from the denominator and the denominator is made monic.  Translating
the generators back gives the canonical expression; two expressions are
canonically equal when these results are structurally equal.

The procedure is sound (a canonical zero is a true zero) but not complete for
identities that hinge on factoring radicands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy as sp

from ..errors import DegenerateDivision, InputError
from .jets import JetFunction


@dataclass(frozen=True)
class GenInfo:
    """Meaning of a lowered generator: ``exp(base/index)`` or ``base**(1/index)``."""

    kind: str
    base: sp.Expr
    index: int

    def atom(self) -> sp.Expr:
        if self.kind == "exp":
            return sp.exp(self.base / self.index)
        return sp.Pow(self.base, sp.Rational(1, self.index))

    @property
    def key(self):
        return (self.kind, self.base)


@dataclass(eq=False)
class Canon:
    expr: sp.Expr
    numer: sp.Poly
    denom: sp.Poly
    info: dict = field(default_factory=dict)        # generator symbol -> GenInfo
    relations: dict = field(default_factory=dict)   # radical generator -> Poly of its radicand

    @property
    def is_zero(self) -> bool:
        return self.numer.is_zero

    @property
    def gens(self):
        return self.numer.gens


def _bad_number(e) -> bool:
    return e in (sp.zoo, sp.nan, sp.oo, -sp.oo)


def _as_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class _Lowering:
    def __init__(self):
        self.holders: dict = {}
        self.keys: dict = {}

    def holder(self, key) -> sp.Symbol:
        h = self.holders.get(key)
        if h is None:
            h = sp.Dummy(positive=True)
            self.holders[key] = h
            self.keys[h] = key
        return h

    def lower(self, e):
        if e.is_Rational:
            return e
        if e.is_Symbol:
            if e.name.startswith("_"):
                raise InputError(f"reserved symbol name {e.name!r}")
            return e
        if _bad_number(e) or e.has(sp.zoo, sp.nan, sp.oo):
            raise DegenerateDivision(f"division by zero in {e}")
        if e is sp.E:
            return self.lower_exp(sp.Integer(1))
        if e.is_Number or e.is_NumberSymbol or e is sp.I:
            raise InputError(f"unsupported constant {e}")
        if isinstance(e, JetFunction):
            return e.func(*[normalize(a) for a in e.args])
        if e.is_Add:
            return sp.Add(*[self.lower(a) for a in e.args])
        if e.is_Mul:
            return sp.Mul(*[self.lower(a) for a in e.args])
        if isinstance(e, sp.exp):
            return self.lower_exp(normalize(e.args[0]))
        if e.is_Pow:
            b, r = e.args
            if not r.is_Rational:
                raise InputError(f"non-rational exponent in {e}")
            if r.is_Integer:
                if r < 0 and canon(b).is_zero:
                    raise DegenerateDivision(f"division by zero: {b}")
                return self.lower(b) ** r
            return self.lower_root(b, r)
        raise InputError(f"unsupported expression {e}")

    def lower_exp(self, m):
        out = []
        for t in sp.Add.make_args(sp.expand(m)):
            c, rest = t.as_coeff_Mul()
            if rest == 1:
                if c == 0:
                    continue
                rest = sp.Integer(1)
            out.append(self.holder(("exp", rest)) ** c)
        return sp.Mul(*out)

    def lower_number(self, q: Fraction, r):
        out = []
        for n, sign in ((q.numerator, 1), (q.denominator, -1)):
            for p, k in sp.factorint(n).items():
                out.append(self.holder(("root", sp.Integer(p))) ** (sign * k * r))
        return sp.Mul(*out)

    def lower_root(self, b, r):
        c = canon(b)
        if c.is_zero:
            if r > 0:
                return sp.Integer(0)
            raise DegenerateDivision(f"division by zero: {b}")
        cn, expo_n, rest_n = _split_positive(c, c.numer)
        cd, expo_d, rest_d = _split_positive(c, c.denom)
        content = cn / cd
        if content < 0:
            content = -content
            rest_n = -rest_n
        out = [self.lower_number(content, r)]
        expo = normalize(r * (expo_n - expo_d))
        if expo != 0:
            out.append(self.lower_exp(expo))
        for rest, sign in ((rest_n, 1), (rest_d, -1)):
            rest = normalize(rest)
            if rest == 1:
                continue
            if rest == -1:
                raise InputError(f"negative radicand in {b}")
            out.append(self.holder(("root", rest)) ** (sign * r))
        return sp.Mul(*out)


def _split_positive(c: Canon, poly: sp.Poly):
    """Split a polynomial into rational content, an exponent for its positive
    monomial factor and the remaining radicand expression."""
    if poly.is_zero:
        raise DegenerateDivision("zero polynomial")
    monom, rest = poly.terms_gcd()
    den_c, rest = rest.clear_denoms(convert=True)
    cont, prim = rest.primitive()
    content = Fraction(int(cont), int(den_c))
    expo = sp.Integer(0)
    keep = sp.Integer(1)
    back = {g: inf.atom() for g, inf in c.info.items()}
    for g, k in zip(poly.gens, monom):
        if k == 0:
            continue
        inf = c.info.get(g)
        if inf is not None and inf.kind == "exp":
            expo += sp.Rational(k, inf.index) * inf.base
        else:
            keep *= g ** k
    rest_expr = (prim.as_expr() * keep).xreplace(back)
    return content, expo, rest_expr


def _lcm(values):
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _gen_sort_key(g, info):
    atom = info[g].atom() if g in info else g
    return sp.default_sort_key(atom)


def _finish(ctx: _Lowering, low) -> Canon:
    # lower every radicand so its generators share the table
    base_low = {}
    pending = [k for k in ctx.holders if k[0] == "root"]
    while pending:
        key = pending.pop()
        if key in base_low:
            continue
        before = set(ctx.holders)
        base_low[key] = ctx.lower(key[1])
        pending.extend(k for k in ctx.holders if k not in before and k[0] == "root")

    denoms: dict = {h: {1} for h in ctx.keys}
    for expr in [low, *base_low.values()]:
        for p in expr.atoms(sp.Pow):
            if p.base in ctx.keys:
                denoms[p.base].add(int(sp.Rational(p.exp).q))
    order = sorted(ctx.keys, key=lambda h: sp.default_sort_key(
        sp.Tuple(sp.Symbol(ctx.keys[h][0]), ctx.keys[h][1])))
    gsym = {}
    info = {}
    sub = {}
    for i, h in enumerate(order):
        kind, base = ctx.keys[h]
        L = _lcm(denoms[h])
        g = sp.Symbol(f"_G{i}", positive=True)
        gsym[h] = g
        info[g] = GenInfo(kind, base, L)
        sub[h] = g ** L
    expr = low.xreplace(sub)
    rel = {gsym[ctx.holders[k]]: v.xreplace(sub) for k, v in base_low.items()}

    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    if rel:
        num, den = _reduce_radicals(num, den, rel, info)
    if den == 0:
        raise DegenerateDivision("zero denominator")

    gens = set()
    for part in (num, den, *rel.values()):
        gens |= part.free_symbols
        gens |= part.atoms(JetFunction)
    # jets whose arguments mention a symbol keep that symbol only inside the jet
    gens = sorted(gens, key=lambda g: _gen_sort_key(g, info))
    if not gens:
        gens = [sp.Symbol("_G_const")]
    P = sp.Poly(num, *gens, domain="QQ")
    Q = sp.Poly(den, *gens, domain="QQ")
    if Q.is_zero:
        raise DegenerateDivision("zero denominator")
    lc = Q.LC()
    if lc != 1:
        P = P.quo_ground(lc)
        Q = Q.quo_ground(lc)
    back = {g: inf.atom() for g, inf in info.items()}
    pe = P.as_expr().xreplace(back)
    qe = Q.as_expr().xreplace(back)
    out = pe if qe == 1 else sp.Mul(pe, sp.Pow(qe, -1))
    relp = {g: sp.Poly(v, *gens, domain="QQ") for g, v in rel.items()}
    return Canon(out, P, Q, info, relp)


def _reduce_radicals(num, den, rel, info):
    for _ in range(12):
        old = (num, den)
        for g, base in rel.items():
            L = info[g].index
            m = g ** L - base
            num = sp.rem(sp.expand(num), m, g) if num.has(g) else num
            den = sp.rem(sp.expand(den), m, g) if den.has(g) else den
            if den.has(g):
                dp = sp.Poly(den, g)
                k = min(mon[0] for mon in dp.monoms())
                if k > 0:
                    j = (-k) % L
                    num = sp.expand(num * g ** j)
                    den = sp.expand(den * g ** j)
                    num = sp.rem(num, m, g)
                    den = sp.rem(den, m, g)
        num, den = sp.fraction(sp.cancel(sp.together(num / den)))
        if (num, den) == old:
            break
    return num, den


@lru_cache(maxsize=200_000)
def _canon_cached(e) -> Canon:
    ctx = _Lowering()
    low = ctx.lower(e)
    return _finish(ctx, low)


def canon(e) -> Canon:
    e = sp.sympify(e, strict=False) if not isinstance(e, sp.Basic) else e
    return _canon_cached(e)


def normalize(e) -> sp.Expr:
    """Return the canonical form of ``e``."""
    return canon(e).expr
