"""Three-valued check outcomes.

Every identity the engine tests resolves to one of

* ``Proved`` — the canonical form is literally zero,
* ``NumericallySupported`` — nonzero canonical form, but vanishing at every
  random sample point (exactly for rational values, within tolerance when
  transcendental atoms are involved),
* ``Failed`` — a witness sample point with a nonzero residual exists.

Compound checks aggregate to their weakest member.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional


class VerdictKind(enum.Enum):
    PROVED = "Proved"
    NUMERIC = "NumericallySupported"
    FAILED = "Failed"


# Failed < NumericallySupported < Proved
_STRENGTH = {VerdictKind.FAILED: 0, VerdictKind.NUMERIC: 1, VerdictKind.PROVED: 2}


def _num_str(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, complex):
        return f"{v.real:.12e}{v.imag:+.12e}j"
    if isinstance(v, float):
        return f"{v:.12e}"
    return str(v)


@dataclass(frozen=True)
class Witness:
    """Counterexample data: the sample point and the residual value there."""

    point: tuple[tuple[str, Fraction], ...]
    value: object  # Fraction, complex Fraction pair, or float
    detail: str = ""

    def as_dict(self) -> dict:
        d = {
            "point": {name: _num_str(val) for name, val in self.point},
            "value": _num_str(self.value),
        }
        if self.detail:
            d["detail"] = self.detail
        return d

    def __str__(self) -> str:
        pt = ", ".join(f"{n}={_num_str(v)}" for n, v in self.point)
        s = f"at ({pt}): residual {_num_str(self.value)}"
        if self.detail:
            s += f" [{self.detail}]"
        return s


@dataclass(frozen=True)
class Verdict:
    """Outcome of one identity check, with provenance of what was tested."""

    kind: VerdictKind
    criterion: str = ""
    witness: Optional[Witness] = None

    @staticmethod
    def proved(criterion: str = "") -> "Verdict":
        return Verdict(VerdictKind.PROVED, criterion)

    @staticmethod
    def numeric(criterion: str = "") -> "Verdict":
        return Verdict(VerdictKind.NUMERIC, criterion)

    @staticmethod
    def failed(criterion: str = "", witness: Optional[Witness] = None) -> "Verdict":
        return Verdict(VerdictKind.FAILED, criterion, witness)

    @property
    def ok(self) -> bool:
        return self.kind is not VerdictKind.FAILED

    @property
    def is_proved(self) -> bool:
        return self.kind is VerdictKind.PROVED

    def relabel(self, criterion: str) -> "Verdict":
        return Verdict(self.kind, criterion, self.witness)

    def __and__(self, other: "Verdict") -> "Verdict":
        return combine(self, other)

    def __str__(self) -> str:
        s = self.kind.value
        if self.criterion:
            s = f"{self.criterion}: {s}"
        if self.witness is not None:
            s += f" ({self.witness})"
        return s


def combine(*verdicts: Verdict, criterion: str = "") -> Verdict:
    """Weakest-member aggregation; keeps the first failing witness."""
    if not verdicts:
        return Verdict.proved(criterion)
    worst = min(verdicts, key=lambda v: _STRENGTH[v.kind])
    return Verdict(worst.kind, criterion or worst.criterion, worst.witness)


@dataclass
class CheckResult:
    """Outcome of a compound check: one sub-verdict per identity tested."""

    name: str
    items: list = field(default_factory=list)  # list[tuple[str, Verdict]]
    skipped: Optional[str] = None

    def add(self, label: str, verdict: Verdict) -> Verdict:
        self.items.append((label, verdict.relabel(label)))
        return verdict

    @property
    def verdict(self) -> Verdict:
        if self.skipped is not None:
            return Verdict.proved(self.name)
        return combine(*[v for _, v in self.items], criterion=self.name)

    @property
    def ok(self) -> bool:
        return self.skipped is not None or self.verdict.ok

    def subverdict(self, label: str) -> Verdict:
        for lbl, v in self.items:
            if lbl == label:
                return v
        raise KeyError(label)

    def __str__(self) -> str:
        if self.skipped is not None:
            return f"{self.name}: skipped ({self.skipped})"
        lines = [f"{self.name}: {self.verdict.kind.value}"]
        for label, v in self.items:
            lines.append(f"  {label}: {v.kind.value}" + (f" ({v.witness})" if v.witness else ""))
        return "\n".join(lines)
