"""Extended-range arithmetic for exponential-tower magnitudes.

A ``TowerReal`` stores a pair ``(h, x)`` denoting ``exp`` applied ``h`` times
to the float ``x``.  Iterated maximum-modulus sequences like M^n(R) overflow
native floats after a handful of steps; in this representation they stay
comparable at any depth, because the maps the classifiers iterate (exp, log,
fixed powers, multiplication by moderate factors) act on ``(h, x)`` without
ever materialising the denoted value.

Normal form (unique per value):

* ``h == 0``:  ``x <= CAP``  (plain reals, any sign),
* ``h >= 1``:  ``LOG_CAP < x <= CAP``.

``CAP = 700`` sits below the float overflow threshold of ``exp``, so a normal
base can always be exponentiated once in native floats.

Precision contract: multiplying a value at height ``h`` by a factor in
``[exp(-CAP), exp(CAP)]`` shifts the base at height ``h - 1`` additively.  For
``h >= 3`` that shift is below representable base resolution and is absorbed.
Comparisons are reliable only when bases differ by more than
``BASE_RESOLUTION`` at matched height; closer pairs are reported
``INDISTINGUISHABLE`` and callers must treat them conservatively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

CAP = 700.0
LOG_CAP = math.log(CAP)  # 6.5510803350434145
BASE_RESOLUTION = 1e-9

_EXP_OVERFLOW = 709.782712893384  # log of the largest finite float


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    INDISTINGUISHABLE = 2


@dataclass(frozen=True)
class TowerReal:
    """``exp^h(x)`` in normal form.  Construct via :func:`normalize`."""

    h: int
    x: float

    def __post_init__(self) -> None:
        if not isinstance(self.h, int) or self.h < 0:
            raise ValueError(f"height must be a nonnegative integer, got {self.h!r}")
        if not math.isfinite(self.x):
            raise ValueError(f"non-finite base {self.x!r}")
        if self.x > CAP or (self.h >= 1 and self.x <= LOG_CAP):
            raise ValueError(f"({self.h}, {self.x}) is not in normal form; use normalize()")

    # -- conversions ---------------------------------------------------------

    def to_float(self) -> float:
        """Denoted value as a float; ``inf`` if it exceeds the native range."""
        v = self.x
        for _ in range(self.h):
            if v > _EXP_OVERFLOW:
                return math.inf
            v = math.exp(v)
        return v

    def __float__(self) -> float:
        return self.to_float()

    def to_json(self) -> dict:
        return {"h": self.h, "x": self.x}

    @staticmethod
    def from_json(obj: dict) -> "TowerReal":
        return normalize(int(obj["h"]), float(obj["x"]))

    # -- exact total order (lexicographic on normal forms) --------------------

    def _cmp(self, other: "TowerReal") -> int:
        d = _exact_cmp(self, other)
        return d

    def __lt__(self, other: "TowerReal") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "TowerReal") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "TowerReal") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "TowerReal") -> bool:
        return self._cmp(other) >= 0

    def __repr__(self) -> str:
        return f"TowerReal(h={self.h}, x={self.x!r})"


def normalize(h: int, x: float) -> TowerReal:
    """Unique normal form of the value ``exp^h(x)``.

    Raising steps replace ``(h, x)`` by ``(h+1, log x)`` while ``x > CAP``;
    lowering steps replace ``(h, x)`` by ``(h-1, exp x)`` while ``h >= 1`` and
    ``x <= LOG_CAP``.  Both leave the denoted value unchanged.
    """
    if not isinstance(h, int) or h < 0:
        raise ValueError(f"height must be a nonnegative integer, got {h!r}")
    if not math.isfinite(x):
        raise ValueError(f"non-finite base {x!r}")
    while x > CAP:
        x = math.log(x)
        h += 1
    while h >= 1 and x <= LOG_CAP:
        x = math.exp(x)
        h -= 1
    return TowerReal(h, x)


def from_float(v: float) -> TowerReal:
    """Encode a finite float (height raised as needed)."""
    return normalize(0, v)


def _exact_cmp(a: TowerReal, b: TowerReal) -> int:
    """Sign of a - b, ignoring the indistinguishability band."""
    if a.h == b.h:
        return (a.x > b.x) - (a.x < b.x)
    if abs(a.h - b.h) == 1:
        # denormalize the taller one a single step; exp(x) <= exp(CAP) is finite
        if a.h > b.h:
            return (math.exp(a.x) > b.x) - (math.exp(a.x) < b.x)
        return (a.x > math.exp(b.x)) - (a.x < math.exp(b.x))
    return (a.h > b.h) - (a.h < b.h)


def compare(a: TowerReal, b: TowerReal) -> Ordering:
    """Order of the denoted values, with a conservative tie band.

    Bases closer than ``BASE_RESOLUTION`` at matched height are reported
    ``INDISTINGUISHABLE``; classifiers must not issue certificates on them.
    """
    if a.h == b.h:
        d = a.x - b.x
        if d == 0.0:
            return Ordering.EQUAL
        if abs(d) <= BASE_RESOLUTION:
            return Ordering.INDISTINGUISHABLE
        return Ordering.GREATER if d > 0 else Ordering.LESS
    if abs(a.h - b.h) == 1:
        if a.h > b.h:
            xa, xb = math.exp(a.x), b.x
        else:
            xa, xb = a.x, math.exp(b.x)
        d = xa - xb
        if d == 0.0:
            return Ordering.EQUAL
        if abs(d) <= BASE_RESOLUTION:
            return Ordering.INDISTINGUISHABLE
        return Ordering.GREATER if d > 0 else Ordering.LESS
    return Ordering.GREATER if a.h > b.h else Ordering.LESS


def definitely_less(a: TowerReal, b: TowerReal) -> bool:
    return compare(a, b) is Ordering.LESS


def definitely_greater(a: TowerReal, b: TowerReal) -> bool:
    return compare(a, b) is Ordering.GREATER


def at_least(a: TowerReal, b: TowerReal) -> bool:
    """Certified ``a >= b`` (ties do not certify)."""
    return compare(a, b) in (Ordering.GREATER, Ordering.EQUAL)


def apply_exp(a: TowerReal) -> TowerReal:
    return normalize(a.h + 1, a.x)


def apply_log(a: TowerReal) -> TowerReal:
    if a.h >= 1:
        return normalize(a.h - 1, a.x)
    if a.x <= 0.0:
        raise ValueError(f"log of nonpositive value {a.x}")
    return normalize(0, math.log(a.x))


def add_scalar(a: TowerReal, s: float) -> TowerReal:
    """Value plus a moderate float shift ``|s| <= CAP``.

    At height >= 2 the shift is below base resolution and is absorbed; the
    result is exact at heights 0 and 1.
    """
    if not math.isfinite(s):
        raise ValueError(f"non-finite shift {s!r}")
    if abs(s) > CAP:
        raise ValueError(f"shift {s} outside the contract range [-{CAP}, {CAP}]")
    if a.h == 0:
        return normalize(0, a.x + s)
    if a.h == 1:
        v = math.exp(a.x) + s  # exp(x) <= exp(CAP), finite
        if v <= 0.0:
            raise ValueError("shift crosses zero")
        return normalize(0, v)
    return a


def mul_by(a: TowerReal, c: float) -> TowerReal:
    """Value times a factor in the contract range ``[exp(-CAP), exp(CAP)]``."""
    if not (math.isfinite(c) and c > 0.0):
        raise ValueError(f"factor must be positive and finite, got {c!r}")
    lc = math.log(c)
    if abs(lc) > CAP:
        raise ValueError(f"factor {c} outside the contract range")
    if a.h == 0:
        return normalize(0, a.x * c)
    return apply_exp(add_scalar(apply_log(a), lc))


def scale_pow(a: TowerReal, p: float) -> TowerReal:
    """``a ** p`` for a positive value, via exp(p * log a)."""
    if not (math.isfinite(p) and p > 0.0):
        raise ValueError(f"exponent must be positive and finite, got {p!r}")
    if a.h == 0 and a.x <= 0.0:
        raise ValueError(f"power of nonpositive value {a.x}")
    return apply_exp(mul_by(apply_log(a), p))
