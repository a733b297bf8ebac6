"""Symbolic expressions over chart coordinates.

Expressions are sympy objects restricted to rational constants, coordinate
symbols, ``exp``, rational powers and opaque-function jets.  The module adds a
canonical form, tri-state zero testing and a small text grammar.
"""
import sympy as _sp

from .canon import canon, normalize
from .jets import JetFunction, jet_class, opaque
from .sampling import DEFAULT as DEFAULT_SAMPLING, SamplingConfig, evaluate, is_zero
from .text import parse, to_text
from .verdict import VERIFIED, Status, Verdict, combine

Expr = _sp.Expr

from ..errors import InputError as _InputError


def differentiate(e, c) -> Expr:
    """Partial derivative of ``e`` along coordinate ``c``, canonicalized."""
    if not isinstance(c, _sp.Symbol):
        raise _InputError(f"can only differentiate along a coordinate, got {c}")
    return normalize(_sp.diff(e, c))


def substitute(e, bindings: dict, strict: bool = True) -> Expr:
    """Simultaneously replace coordinates by expressions and canonicalize.

    With ``strict`` every coordinate of ``e`` must be bound.
    """
    e = _sp.sympify(e)
    if strict:
        missing = {s for s in e.free_symbols if s not in bindings}
        if missing:
            raise _InputError(f"unbound coordinates {sorted(map(str, missing))}")
    return normalize(e.xreplace({k: _sp.sympify(v) for k, v in bindings.items()}))


def equal(a, b, cfg=None) -> Verdict:
    return is_zero(_sp.sympify(a) - _sp.sympify(b), cfg)


__all__ = [
    "Expr", "canon", "normalize", "differentiate", "substitute", "is_zero", "equal",
    "parse", "to_text", "opaque", "jet_class", "JetFunction", "SamplingConfig",
    "DEFAULT_SAMPLING", "Verdict", "Status", "VERIFIED", "combine", "evaluate",
]
