"""Exact coefficient fields.

Elements are plain Python values: ``int`` in ``[0, p)`` for a prime field and
``fractions.Fraction`` for the rationals.  Polynomial code does its arithmetic
with the native operators and calls :meth:`FieldSpec.reduce` once at the end,
which keeps the inner loops free of method dispatch.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import DimensionMismatchError

Scalar = Union[int, Fraction]

DEFAULT_PRIME = 32003
MAX_MODULUS = 2**31

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class FieldKind(enum.Enum):
    RATIONALS = "rationals"
    PRIME = "prime"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: FieldKind
    modulus: int | None = None

    def __post_init__(self):
        if self.kind is FieldKind.PRIME:
            if self.modulus is None or not isinstance(self.modulus, int):
                raise ValueError("prime field needs an integer modulus")
            if self.modulus > MAX_MODULUS:
                raise ValueError(f"modulus {self.modulus} exceeds 2^31")
            if not is_prime(self.modulus):
                raise ValueError(f"modulus {self.modulus} is not prime")
        elif self.modulus is not None:
            raise ValueError("the rationals take no modulus")

    @property
    def is_prime(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def characteristic(self) -> int:
        return self.modulus if self.is_prime else 0

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_prime else Fraction(1)

    def reduce(self, x) -> Scalar:
        """Normalize an int/Fraction that is already known to lie in this field."""
        if self.is_prime:
            return x % self.modulus
        return Fraction(x)

    def __call__(self, value) -> Scalar:
        """Coerce ``int``, ``Fraction`` or an ``"a/b"`` string into the field."""
        if isinstance(value, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(value, str):
            m = _RATIONAL_RE.match(value)
            if not m:
                raise ValueError(f"cannot parse scalar {value!r}")
            value = Fraction(int(m.group(1)), int(m.group(2) or 1))
        if isinstance(value, Fraction):
            if self.is_prime:
                den = value.denominator % self.modulus
                if den == 0:
                    raise ZeroDivisionError(f"{value} has no image in GF({self.modulus})")
                return value.numerator * pow(den, -1, self.modulus) % self.modulus
            return value
        if isinstance(value, int):
            return self.reduce(value)
        raise TypeError(f"unsupported scalar type {type(value).__name__}")

    def inv(self, x: Scalar) -> Scalar:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.is_prime:
            return pow(x, -1, self.modulus)
        return 1 / Fraction(x)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.reduce(a * self.inv(b))

    def neg(self, x: Scalar) -> Scalar:
        return self.reduce(-x)

    def random_element(self, rng, bound: int = 9) -> Scalar:
        """Uniform element of GF(p); for the rationals a uniform integer in [-bound, bound]."""
        if self.is_prime:
            return rng.below(self.modulus)
        return Fraction(rng.integer(-bound, bound))

    def random_nonzero(self, rng) -> Scalar:
        while True:
            x = self.random_element(rng)
            if x != 0:
                return x

    def to_json(self):
        if self.is_prime:
            return {"kind": "prime", "modulus": self.modulus}
        return {"kind": "rationals"}

    def format(self, x: Scalar) -> str:
        if self.is_prime:
            return str(x)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __str__(self):
        return f"GF({self.modulus})" if self.is_prime else "QQ"


RATIONALS = FieldSpec(FieldKind.RATIONALS)


def prime_field(p: int = DEFAULT_PRIME) -> FieldSpec:
    return FieldSpec(FieldKind.PRIME, p)


def field_from_json(doc) -> FieldSpec:
    if doc.get("kind") == "rationals":
        return RATIONALS
    return prime_field(int(doc["modulus"]))


def same_field(a: FieldSpec, b: FieldSpec) -> None:
    if a != b:
        raise DimensionMismatchError(f"field mismatch: {a} vs {b}")
