"""Exact scalar arithmetic: rationals by default, optional prime fields.

Every computation in this package runs over a Field object so that equality
of scalars, and hence of all derived data (matrices, defects, homology
ranks), is decidable.
"""

from __future__ import annotations

from fractions import Fraction


class Field:
    """Exact field of scalars: the rationals, or Z/p for a prime p."""

    def __init__(self, p: int | None = None):
        if p is not None:
            if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
                raise ValueError(f"modulus must be prime, got {p}")
        self.p = p

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def of(self, value):
        """Coerce an int, Fraction, or 'p/q' string into a field element."""
        if isinstance(value, str):
            if "/" in value:
                num, den = value.split("/", 1)
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(value))
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
            return (num * pow(den, -1, self.p)) % self.p
        return int(value) % self.p

    def zero(self):
        return self.of(0)

    def one(self):
        return self.of(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0 or (self.p is not None and a % self.p == 0)

    def to_str(self, a) -> str:
        """Serialize as 'p/q' (rationals) or a plain integer string."""
        if self.p is not None:
            return str(a % self.p)
        f = Fraction(a)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Field()


def field_from_spec(spec: str) -> Field:
    """Parse a --field value: 'rational' or 'fp:P'."""
    if spec == "rational":
        return Field()
    if spec.startswith("fp:"):
        return Field(int(spec[3:]))
    raise ValueError(f"unknown field spec {spec!r}")
