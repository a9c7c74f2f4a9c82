"""Exact phases of the form r·π + t·θ.

``r`` is a rational kept in ``[0, 2)`` and ``t`` is an unbounded integer.
θ = 2·arccos(1/φ) with φ the golden ratio. θ is treated as rationally
independent of π, so two phases are equal exactly when both parts agree.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Union

__all__ = [
    "Phase",
    "PhaseClass",
    "ModelConstants",
    "CONSTANTS",
    "phase_add",
    "phase_neg",
    "phase_to_radians",
    "classify",
    "ZERO",
    "PI",
    "HALF_PI",
    "THETA",
]

RationalLike = Union[int, Fraction, str]


@dataclass(frozen=True)
class Phase:
    """An exact angle ``pi·π + theta·θ`` in radians.

    The rational part is reduced modulo 2 on construction, so instances are
    always canonical and can be hashed and compared directly.
    """

    pi: Fraction = field(default=Fraction(0))
    theta: int = 0

    def __post_init__(self) -> None:
        r = Fraction(self.pi)
        if not isinstance(self.theta, int) or isinstance(self.theta, bool):
            raise TypeError(f"theta part must be an int, got {self.theta!r}")
        object.__setattr__(self, "pi", r % 2)

    @classmethod
    def of(cls, num: int = 0, den: int = 1, theta: int = 0) -> Phase:
        return cls(Fraction(num, den), theta)

    @property
    def is_zero(self) -> bool:
        return self.pi == 0 and self.theta == 0

    @property
    def is_pauli(self) -> bool:
        return self.theta == 0 and self.pi.denominator == 1

    def __add__(self, other: Phase) -> Phase:
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.pi + other.pi, self.theta + other.theta)

    def __sub__(self, other: Phase) -> Phase:
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.pi - other.pi, self.theta - other.theta)

    def __neg__(self) -> Phase:
        return Phase(-self.pi, -self.theta)

    def __mul__(self, k: int) -> Phase:
        if not isinstance(k, int):
            return NotImplemented
        return Phase(self.pi * k, self.theta * k)

    __rmul__ = __mul__

    def __truediv__(self, k: int) -> Phase:
        """Divide the canonical representative by ``k``.

        Only defined when the θ part is divisible by ``k``. The result depends
        on the representative, so callers must use it consistently.
        """
        if not isinstance(k, int) or k == 0:
            raise ValueError(f"cannot divide a phase by {k!r}")
        if self.theta % k:
            raise ValueError(f"theta part {self.theta} is not divisible by {k}")
        return Phase(self.pi / k, self.theta // k)

    def to_radians(self, constants: ModelConstants | None = None) -> float:
        c = constants or CONSTANTS
        return float(self.pi) * math.pi + self.theta * c.theta

    def to_json(self) -> dict[str, int]:
        return {"pi_num": self.pi.numerator, "pi_den": self.pi.denominator, "theta": self.theta}

    @classmethod
    def from_json(cls, obj: Any, where: str = "phase") -> Phase:
        if not isinstance(obj, dict):
            raise ValueError(f"{where}: expected an object")
        num = obj.get("pi_num", 0)
        den = obj.get("pi_den", 1)
        theta = obj.get("theta", 0)
        for key, val in (("pi_num", num), ("pi_den", den), ("theta", theta)):
            if not isinstance(val, int) or isinstance(val, bool):
                raise ValueError(f"{where}.{key}: expected an integer, got {val!r}")
        if den == 0:
            raise ValueError(f"{where}.pi_den: must be nonzero")
        return cls(Fraction(num, den), theta)

    def sort_key(self) -> tuple[Fraction, int]:
        return (self.pi, self.theta)

    def __str__(self) -> str:
        parts = []
        if self.pi:
            p = self.pi
            if p == 1:
                parts.append("π")
            elif p.denominator == 1:
                parts.append(f"{p.numerator}·π")
            else:
                parts.append(f"{p.numerator}/{p.denominator}·π")
        if self.theta:
            t = abs(self.theta)
            term = "θ" if t == 1 else f"{t}·θ"
            if parts:
                parts.append(("+ " if self.theta > 0 else "- ") + term)
            else:
                parts.append(term if self.theta > 0 else "-" + term)
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"Phase({self})"

    @classmethod
    def parse(cls, text: str) -> Phase:
        """Parse the printed form, e.g. ``3/10·π - θ``, ``-2θ`` or ``pi/2``.

        ASCII spellings ``pi``, ``theta`` and ``*`` are accepted too.
        """
        s = text.strip().replace("pi", "π").replace("theta", "θ").replace("*", "·")
        s = s.replace(" ", "")
        if not s:
            raise ValueError("empty phase")
        if s == "0":
            return cls()
        terms = re.findall(r"[+-]?[^+-]+", s)
        if "".join(terms) != s:
            raise ValueError(f"cannot parse phase {text!r}")
        pi_part = Fraction(0)
        theta_part = 0
        for term in terms:
            sign = -1 if term.startswith("-") else 1
            body = term.lstrip("+-")
            m = re.fullmatch(r"(\d+)?(?:/(\d+))?·?([πθ])(?:/(\d+))?|(\d+)(?:/(\d+))?", body)
            if not m:
                raise ValueError(f"cannot parse phase term {term!r} in {text!r}")
            if m.group(5) is not None:
                if m.group(5) != "0" or m.group(6):
                    raise ValueError(f"bare number {body!r} in phase {text!r}")
                continue
            num = int(m.group(1)) if m.group(1) else 1
            den = int(m.group(2) or 1) * int(m.group(4) or 1)
            if den == 0:
                raise ValueError(f"zero denominator in phase {text!r}")
            coef = Fraction(sign * num, den)
            if m.group(3) == "π":
                pi_part += coef
            else:
                if coef.denominator != 1:
                    raise ValueError(f"θ coefficient must be an integer in {text!r}")
                theta_part += int(coef)
        return cls(pi_part, theta_part)


class PhaseClass(Enum):
    PAULI = "Pauli"
    CLIFFORD = "Clifford"
    FIB_FRAGMENT = "FibFragment"
    OTHER = "Other"


@dataclass(frozen=True)
class ModelConstants:
    """Numeric constants shared by both anyon models, computed at import."""

    phi: float
    theta: float
    R: Phase
    ising_phase_unit: Phase

    @classmethod
    def compute(cls) -> ModelConstants:
        phi = (1 + math.sqrt(5)) / 2
        return cls(
            phi=phi,
            theta=2 * math.acos(1 / phi),
            R=Phase(Fraction(7, 5)),
            ising_phase_unit=Phase(Fraction(1, 2)),
        )


CONSTANTS = ModelConstants.compute()

ZERO = Phase()
PI = Phase(Fraction(1))
HALF_PI = Phase(Fraction(1, 2))
THETA = Phase(Fraction(0), 1)


def phase_add(a: Phase, b: Phase) -> Phase:
    return a + b


def phase_neg(a: Phase) -> Phase:
    return -a


def phase_to_radians(a: Phase, c: ModelConstants = CONSTANTS) -> float:
    return a.to_radians(c)


def classify(a: Phase) -> PhaseClass:
    """Most specific fragment containing ``a``."""
    den = a.pi.denominator
    if a.theta == 0 and den == 1:
        return PhaseClass.PAULI
    if a.theta == 0 and den <= 2:
        return PhaseClass.CLIFFORD
    if 10 % den == 0:
        return PhaseClass.FIB_FRAGMENT
    return PhaseClass.OTHER
