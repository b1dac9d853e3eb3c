"""Exact arithmetic over the fixed constant field Q·{1, sqrt2, sqrt3, pi, log2}.

Phase coefficients live in this Q-span so that equality and Q-linear
independence of phases are decidable by exact linear algebra on weight
vectors.  Floats cannot decide independence; Fractions can.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

BASIS = ("one", "sqrt2", "sqrt3", "pi", "log2")

_BASIS_FLOATS = {
    "one": 1.0,
    "sqrt2": math.sqrt(2.0),
    "sqrt3": math.sqrt(3.0),
    "pi": math.pi,
    "log2": math.log(2.0),
}

# Products of basis elements that stay inside the span.  Anything not
# listed here (sqrt2*sqrt3, pi*pi, log2*anything, ...) leaves the field
# and forces a coercion to floats.
_CLOSED_PRODUCTS = {
    ("one", "one"): ("one", Fraction(1)),
    ("one", "sqrt2"): ("sqrt2", Fraction(1)),
    ("one", "sqrt3"): ("sqrt3", Fraction(1)),
    ("one", "pi"): ("pi", Fraction(1)),
    ("one", "log2"): ("log2", Fraction(1)),
    ("sqrt2", "sqrt2"): ("one", Fraction(2)),
    ("sqrt3", "sqrt3"): ("one", Fraction(3)),
}

RationalLike = Union[int, Fraction]


@dataclass(frozen=True)
class ConstantValue:
    """An exact element sum(w_b * b) of the fixed constant field."""

    weights: tuple  # five Fractions, aligned with BASIS

    def __post_init__(self):
        if len(self.weights) != len(BASIS):
            raise ValueError("weight vector must have length %d" % len(BASIS))
        object.__setattr__(
            self, "weights", tuple(Fraction(w) for w in self.weights)
        )

    @staticmethod
    def zero() -> "ConstantValue":
        return ConstantValue((0, 0, 0, 0, 0))

    @staticmethod
    def rational(q: RationalLike) -> "ConstantValue":
        return ConstantValue((Fraction(q), 0, 0, 0, 0))

    @staticmethod
    def named(name: str, weight: RationalLike = 1) -> "ConstantValue":
        if name not in BASIS:
            raise ValueError(f"unknown constant {name!r}")
        w = [Fraction(0)] * len(BASIS)
        w[BASIS.index(name)] = Fraction(weight)
        return ConstantValue(tuple(w))

    def is_zero(self) -> bool:
        return all(w == 0 for w in self.weights)

    def is_rational(self) -> bool:
        return all(w == 0 for w in self.weights[1:])

    def __add__(self, other: "ConstantValue") -> "ConstantValue":
        return ConstantValue(
            tuple(a + b for a, b in zip(self.weights, other.weights))
        )

    def __sub__(self, other: "ConstantValue") -> "ConstantValue":
        return ConstantValue(
            tuple(a - b for a, b in zip(self.weights, other.weights))
        )

    def __neg__(self) -> "ConstantValue":
        return ConstantValue(tuple(-a for a in self.weights))

    def scale(self, q: RationalLike) -> "ConstantValue":
        q = Fraction(q)
        return ConstantValue(tuple(a * q for a in self.weights))

    def try_mul(self, other: "ConstantValue") -> Optional["ConstantValue"]:
        """Exact product, or None when the result leaves the span."""
        acc = [Fraction(0)] * len(BASIS)
        for i, wa in enumerate(self.weights):
            if wa == 0:
                continue
            for j, wb in enumerate(other.weights):
                if wb == 0:
                    continue
                key = tuple(sorted((BASIS[i], BASIS[j])))
                hit = _CLOSED_PRODUCTS.get(key)
                if hit is None:
                    return None
                name, factor = hit
                acc[BASIS.index(name)] += wa * wb * factor
        return ConstantValue(tuple(acc))

    def value(self) -> float:
        return sum(
            float(w) * _BASIS_FLOATS[b] for w, b in zip(self.weights, BASIS)
        )

    def order_key(self):
        return self.weights

    def to_json(self) -> dict:
        return {
            b: str(w) for b, w in zip(BASIS, self.weights) if w != 0
        }

    @staticmethod
    def from_json(obj: dict) -> "ConstantValue":
        w = [Fraction(0)] * len(BASIS)
        for name, val in obj.items():
            if name not in BASIS:
                raise ValueError(f"unknown constant {name!r}")
            w[BASIS.index(name)] = Fraction(val)
        return ConstantValue(tuple(w))

    def to_text(self) -> str:
        """Render as a product-of-factors string usable inside phases."""
        parts = []
        for w, b in zip(self.weights, BASIS):
            if w == 0:
                continue
            if b == "one":
                parts.append(str(w))
            elif w == 1:
                parts.append(b)
            else:
                parts.append(f"{w}*{b}")
        if not parts:
            return "0"
        return " + ".join(parts) if len(parts) > 1 else parts[0]

    def __repr__(self):
        return f"CV({self.to_text()})"


CV_ZERO = ConstantValue.zero()
CV_ONE = ConstantValue.rational(1)
SQRT2 = ConstantValue.named("sqrt2")
SQRT3 = ConstantValue.named("sqrt3")
PI = ConstantValue.named("pi")
LOG2 = ConstantValue.named("log2")
