"""Tri-state verdicts for identity checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Status(str, Enum):
    VERIFIED = "Verified"
    FALSIFIED = "Falsified"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Outcome of an identity check.

    ``Verified`` is only ever produced by a canonical zero, ``Falsified`` only
    with a concrete witness.  Composite checks carry their parts.
    """

    status: Status
    method: str = "canonical"
    witness: dict | None = None
    residual: str | None = None
    note: str = ""
    parts: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def falsified(self) -> bool:
        return self.status is Status.FALSIFIED

    def __bool__(self):
        return self.ok

    def failing(self):
        """Name path of the first falsified (else inconclusive) part."""
        for want in (Status.FALSIFIED, Status.INCONCLUSIVE):
            for name, v in self.parts:
                if v.status is want:
                    sub = v.failing()
                    return f"{name}/{sub}" if sub else name
        return None

    def to_json(self) -> dict:
        out = {"status": self.status.value, "method": self.method}
        if self.note:
            out["note"] = self.note
        if self.residual is not None:
            out["residual"] = self.residual
        if self.witness is not None:
            out["witness"] = self.witness
        if self.parts:
            out["parts"] = {name: v.to_json() for name, v in self.parts}
        return out


VERIFIED = Verdict(Status.VERIFIED)


def combine(parts, note: str = "") -> Verdict:
    """Fold named verdicts: any falsified wins, then any inconclusive."""
    parts = tuple(parts)
    statuses = {v.status for _, v in parts}
    if Status.FALSIFIED in statuses:
        st = Status.FALSIFIED
    elif Status.INCONCLUSIVE in statuses:
        st = Status.INCONCLUSIVE
    else:
        st = Status.VERIFIED
    witness = None
    residual = None
    for _, v in parts:
        if v.status is st and st is not Status.VERIFIED:
            witness, residual = v.witness, v.residual
            break
    return Verdict(st, "composite", witness, residual, note, parts)
