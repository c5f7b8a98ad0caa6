"""Coefficient rings for the degree-zero part: the integers, the rationals and
prime fields.

Scalars are plain Python objects: ``int`` for the integers and for prime
fields (reduced into ``range(p)``), ``Fraction`` for the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import NotInvertible, ParseError, StructuralError

Scalar = Union[int, Fraction]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "int", "rat" or "fp"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("int", "rat", "fp"):
            raise StructuralError(f"unknown coefficient ring kind {self.kind!r}")
        if self.kind == "fp":
            if self.p is None or not is_prime(self.p):
                raise StructuralError(f"prime field needs a prime modulus, got {self.p}")
        elif self.p is not None:
            raise StructuralError("only prime fields carry a modulus")

    # -- naming ---------------------------------------------------------------
    @property
    def spec(self) -> str:
        return f"fp:{self.p}" if self.kind == "fp" else self.kind

    @classmethod
    def from_spec(cls, text: str) -> "CoefficientRing":
        text = text.strip().lower()
        if text in ("int", "z", "zz"):
            return ZZ
        if text in ("rat", "q", "qq"):
            return QQ
        if text.startswith("fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ParseError(f"bad prime in ring spec {text!r}") from None
            return GF(p)
        raise ParseError(f"unknown ring spec {text!r} (expected int, rat or fp:<p>)")

    def __str__(self):
        return {"int": "ZZ", "rat": "QQ"}.get(self.kind, f"GF({self.p})")

    @property
    def is_field(self) -> bool:
        return self.kind != "int"

    # -- scalars --------------------------------------------------------------
    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.kind == "rat" else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.kind == "rat" else 1

    def coerce(self, value) -> Scalar:
        """Map an int, Fraction or decimal/fraction string into this ring."""
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad coefficient {value!r}") from None
        if isinstance(value, bool):
            value = int(value)
        if self.kind == "rat":
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator == 1:
                value = value.numerator
            elif self.kind == "fp":
                den = value.denominator % self.p
                if den == 0:
                    raise NotInvertible(f"{value} has denominator divisible by {self.p}")
                return value.numerator * pow(den, -1, self.p) % self.p
            else:
                raise StructuralError(f"{value} is not an integer")
        if not isinstance(value, int):
            raise StructuralError(f"cannot coerce {value!r} into {self}")
        return value % self.p if self.kind == "fp" else value

    def reduce(self, c: Scalar) -> Scalar:
        return c % self.p if self.kind == "fp" else c

    def is_unit(self, c: Scalar) -> bool:
        if self.kind == "int":
            return c in (1, -1)
        return self.reduce(c) != 0

    def inv(self, c: Scalar) -> Scalar:
        if not self.is_unit(c):
            raise NotInvertible(f"{c} is not a unit of {self}")
        if self.kind == "int":
            return c
        if self.kind == "rat":
            return 1 / Fraction(c)
        return pow(c, -1, self.p)

    def exact_div(self, a: Scalar, b: Scalar) -> Scalar:
        """a / b inside the ring; raises ArithmeticError when b does not divide a."""
        if self.reduce(b) == 0:
            raise ZeroDivisionError("division by zero")
        if self.kind == "int":
            q, r = divmod(a, b)
            if r:
                raise ArithmeticError(f"{b} does not divide {a} in ZZ")
            return q
        if self.kind == "rat":
            return Fraction(a) / b
        return a * pow(b, -1, self.p) % self.p

    def to_fraction(self, c: Scalar) -> Fraction:
        """Lift to QQ; prime-field elements lift to their representative."""
        return Fraction(c)

    def format(self, c: Scalar) -> str:
        return str(c)


ZZ = CoefficientRing("int")
QQ = CoefficientRing("rat")


def GF(p: int) -> CoefficientRing:
    return CoefficientRing("fp", p)
