"""Opaque smooth functions and their derivative jets.

An opaque function ``u`` of arity ``k`` is represented by a family of sympy
function classes, one per derivative multi-index.  Differentiating an applied
jet returns the jet of the next order, so the ordinary sympy chain rule
produces ``u'(z)``, ``D[1,0]u(x, y)`` and so on without ever creating
``sympy.Derivative`` objects.  Mixed partials commute because the class is
keyed on the multi-index only.
"""
from __future__ import annotations

import sympy as sp

from ..errors import InputError

_REGISTRY: dict[tuple[str, tuple[int, ...]], type] = {}


class JetFunction(sp.Function):
    """Base class of every applied opaque-function jet."""

    jet_name: str = ""
    jet_order: tuple[int, ...] = ()

    def fdiff(self, argindex=1):
        order = list(self.jet_order)
        order[argindex - 1] += 1
        return jet_class(self.jet_name, tuple(order))(*self.args)


def jet_class(name: str, order: tuple[int, ...]) -> type:
    if not name.isidentifier() or name.startswith("_"):
        raise InputError(f"invalid opaque function name {name!r}")
    key = (name, tuple(int(k) for k in order))
    cls = _REGISTRY.get(key)
    if cls is None:
        if all(k == 0 for k in key[1]):
            clsname = name
        else:
            clsname = f"{name}__d" + "_".join(str(k) for k in key[1])
        cls = type(clsname, (JetFunction,), {
            "jet_name": name,
            "jet_order": key[1],
            "nargs": len(key[1]),
        })
        _REGISTRY[key] = cls
    return cls


def opaque(name: str, arity: int = 1):
    """Return the undifferentiated opaque function ``name`` of given arity."""
    if arity < 1:
        raise InputError("opaque functions need at least one argument")
    return jet_class(name, (0,) * arity)


def is_jet(e) -> bool:
    return isinstance(e, JetFunction)
