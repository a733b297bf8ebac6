"""Text form of expressions.

Grammar (whitespace insignificant)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" unary)?              exponent must be a rational constant
    atom    := INT | NAME | "(" expr ")"
             | ("exp" | "sqrt") "(" expr ")"
             | NAME "'"* "(" args ")"          opaque function, primes for unary jets
             | "D" "[" INT ("," INT)* "]" NAME "(" args ")"
    args    := expr ("," expr)*

``print`` emits this grammar and ``parse(print(e))`` normalizes to the same
canonical form as ``e``.
"""
from __future__ import annotations

import re

import sympy as sp

from ..errors import InputError
from .canon import normalize
from .jets import JetFunction, jet_class

# names that would read as elementary functions but are outside the algebra
_FOREIGN = frozenset("sin cos tan log ln sinh cosh tanh asin acos atan abs Abs pi".split())

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokens(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot tokenize {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            out.append(("int", m.group(1)))
        elif m.group(2):
            out.append(("name", m.group(2)))
        else:
            out.append(("op", m.group(3)))
    return out


class _Parser:
    def __init__(self, text, symbols):
        self.toks = _tokens(text)
        self.i = 0
        self.text = text
        self.symbols = symbols

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise InputError(f"parse error in {self.text!r} near token {self.i}: expected {value or kind}")
        self.i += 1
        return tok[1]

    def at(self, value):
        return self.peek()[1] == value and self.peek()[0] == "op"

    def parse(self):
        e = self.expr()
        if self.i != len(self.toks):
            raise InputError(f"trailing input in {self.text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self):
        e = self.unary()
        while self.at("*") or self.at("/"):
            op = self.take()
            t = self.unary()
            e = e * t if op == "*" else e / t
        return e

    def unary(self):
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            self.take()
            ex = self.unary()
            if not ex.is_Rational:
                raise InputError(f"exponent must be a rational constant, got {ex}")
            return base ** ex
        return base

    def args(self):
        self.take("op", "(")
        out = [self.expr()]
        while self.at(","):
            self.take()
            out.append(self.expr())
        self.take("op", ")")
        return out

    def atom(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return sp.Integer(int(val))
        if kind == "op" and val == "(":
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        if kind == "name":
            if val == "D" and self.peek(1) == ("op", "["):
                self.take()
                self.take("op", "[")
                order = [int(self.take("int"))]
                while self.at(","):
                    self.take()
                    order.append(int(self.take("int")))
                self.take("op", "]")
                name = self.take("name")
                a = self.args()
                if len(a) != len(order):
                    raise InputError(f"jet order {order} does not match arity of {name}")
                return jet_class(name, tuple(order))(*a)
            name = self.take()
            if name in _FOREIGN:
                raise InputError(f"{name} is not supported; only exp, sqrt and rational powers are")
            primes = 0
            while self.at("'"):
                self.take()
                primes += 1
            if self.at("("):
                a = self.args()
                if name in ("exp", "sqrt") and not primes:
                    if len(a) != 1:
                        raise InputError(f"{name} takes one argument")
                    return sp.exp(a[0]) if name == "exp" else sp.sqrt(a[0])
                if primes and len(a) != 1:
                    raise InputError("primes are only allowed on unary functions")
                order = (primes,) if primes else (0,) * len(a)
                return jet_class(name, order)(*a)
            if primes:
                raise InputError(f"dangling prime after {name}")
            if self.symbols is not None and name not in self.symbols:
                raise InputError(f"unknown coordinate {name!r}")
            return sp.Symbol(name)
        raise InputError(f"unexpected token {val!r} in {self.text!r}")


def parse(text: str, symbols=None) -> sp.Expr:
    """Parse text into an expression; ``symbols`` optionally restricts names."""
    if not isinstance(text, str):
        if isinstance(text, (int,)):
            return sp.Integer(text)
        raise InputError(f"expected expression text, got {type(text).__name__}")
    allowed = None if symbols is None else {str(s) for s in symbols}
    return _Parser(text, allowed).parse()


def _needs_parens(e) -> bool:
    return e.is_Add or (e.is_Rational and not e.is_Integer) or (e.is_Number and e < 0) or e.is_Mul


def _pw(base, ex) -> str:
    b = _p(base)
    if _needs_parens(base) or base.is_Pow:
        b = f"({b})"
    if ex.is_Integer and ex > 0:
        return f"{b}^{ex}"
    return f"{b}^({ex})"


def _factor_text(f) -> str:
    s = _p(f)
    return f"({s})" if f.is_Add else s


def _p(e) -> str:
    if e is sp.E:
        return "exp(1)"
    if e.is_Integer:
        return str(int(e))
    if e.is_Rational:
        return f"{e.p}/{e.q}"
    if e.is_Symbol:
        return e.name
    if isinstance(e, JetFunction):
        args = ", ".join(_p(a) for a in e.args)
        order = e.jet_order
        if all(k == 0 for k in order):
            return f"{e.jet_name}({args})"
        if len(order) == 1:
            return f"{e.jet_name}{chr(39) * order[0]}({args})"
        return f"D[{','.join(map(str, order))}]{e.jet_name}({args})"
    if isinstance(e, sp.exp):
        return f"exp({_p(e.args[0])})"
    if e.is_Add:
        terms = e.as_ordered_terms()
        out = _p(terms[0])
        for t in terms[1:]:
            c, _ = t.as_coeff_Mul()
            if c < 0:
                out += " - " + _p(-t)
            else:
                out += " + " + _p(t)
        return out
    if e.is_Mul:
        c, rest = e.as_coeff_Mul()
        if c < 0:
            inner = _p(-e)
            return "-" + inner
        num, den = [], []
        for f in sp.Mul.make_args(e):
            if f.is_Rational:
                if f.p != 1:
                    num.append(sp.Integer(f.p))
                if f.q != 1:
                    den.append(sp.Integer(f.q))
            elif f.is_Pow and f.exp.is_Rational and f.exp < 0:
                den.append(f.base ** (-f.exp))
            else:
                num.append(f)
        ntext = "*".join(_factor_text(f) for f in num) if num else "1"
        if not den:
            return ntext
        dtext = "*".join(_factor_text(f) for f in den)
        if len(den) > 1:
            dtext = f"({dtext})"
        return f"{ntext}/{dtext}"
    if e.is_Pow:
        b, ex = e.args
        if ex.is_Rational and ex < 0:
            return f"1/{_factor_text(b ** (-ex)) if not (b ** (-ex)).is_Pow else _p(b ** (-ex))}"
        return _pw(b, ex)
    raise InputError(f"cannot print {e!r}")


def to_text(e, canonical: bool = True) -> str:
    """Print an expression in the text grammar (canonicalized by default)."""
    if canonical:
        e = normalize(e)
    return _p(sp.sympify(e))
