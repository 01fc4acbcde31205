"""Scalars, tolerances and seeded sampling.

Two scalar fields are supported and never mixed in one computation:

* ``Field.COMPLEX``: Python ``complex`` (IEEE double real/imaginary parts),
  always finite.
* ``Field.RATIONAL``: ``fractions.Fraction``, always reduced with a positive
  denominator, compared exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

from .errors import NonFiniteError, NotInvertible, VariantMismatch

Scalar = Union[complex, Fraction]

SEED_MAX = 2**64 - 1


class Field(str, Enum):
    COMPLEX = "complex"
    RATIONAL = "rational"

    @property
    def exact(self) -> bool:
        return self is Field.RATIONAL

    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0j

    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1 + 0j

    def coerce(self, value) -> Scalar:
        return coerce(value, self)


@dataclass(frozen=True)
class Tolerance:
    """Relative/absolute thresholds; a comparison passes when
    ``|x - y| <= abs + rel * scale``."""

    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel >= 0 and self.abs >= 0):
            raise ValueError("tolerances must be non-negative")

    @classmethod
    def default(cls, field: Field) -> "Tolerance":
        return EXACT if Field(field).exact else cls()

    def bound(self, scale) -> float:
        return self.abs + self.rel * float(scale)

    def for_field(self, field: Field) -> "Tolerance":
        # Rational comparisons ignore any float thresholds.
        return EXACT if Field(field).exact else self


EXACT = Tolerance(0.0, 0.0)


def field_of(x) -> Field:
    if isinstance(x, Fraction):
        return Field.RATIONAL
    if isinstance(x, complex):
        return Field.COMPLEX
    raise VariantMismatch(f"not a scalar: {x!r}")


def check_finite(z: complex) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteError(f"non-finite value {z!r}")
    return z


def coerce(value, field: Field) -> Scalar:
    """Convert ``value`` to a scalar of ``field``.

    Floats are accepted for the complex field only; a rational scalar must be
    built from integers, Fractions or ``"num/den"`` strings so no rounding is
    silently imported.
    """
    field = Field(field)
    if field.exact:
        if isinstance(value, bool):
            return Fraction(int(value))
        if isinstance(value, (_RationalABC, str)):
            return Fraction(value)
        if isinstance(value, tuple) and len(value) == 2:
            return Fraction(int(value[0]), int(value[1]))
        raise VariantMismatch(f"cannot make an exact rational from {value!r}")
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, (tuple, list)) and len(value) == 2:
        value = complex(float(value[0]), float(value[1]))
    return check_finite(complex(value))


def magnitude(x: Scalar):
    """|x|; ``abs`` on complex uses hypot, so no spurious overflow."""
    return abs(x)


def scalar_inv(x: Scalar, tol: Tolerance | None = None) -> Scalar:
    if isinstance(x, Fraction):
        if x == 0:
            raise NotInvertible("zero has no inverse")
        return 1 / x
    tol = tol or Tolerance()
    if abs(x) <= tol.abs or x == 0:
        raise NotInvertible(f"|{x}| is below the invertibility threshold")
    return check_finite(1 / x)


def approx_eq(x: Scalar, y: Scalar, scale=1.0, tol: Tolerance | None = None) -> bool:
    if scale < 0:
        raise ValueError("scale must be non-negative")
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    if isinstance(x, Fraction) or isinstance(y, Fraction):
        raise VariantMismatch("cannot compare rational with complex")
    tol = tol or Tolerance()
    return abs(x - y) <= tol.bound(scale)


@dataclass(frozen=True)
class ScalarDistribution:
    """Sampling bounds: a box ``[low, high]^2`` in the complex plane, or
    integer ranges (inclusive) for numerator and denominator."""

    low: float = -1.0
    high: float = 1.0
    num_range: tuple[int, int] = (-9, 9)
    den_range: tuple[int, int] = (1, 9)
    real: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high)) or self.low > self.high:
            raise ValueError("complex bounds must be finite with low <= high")
        if self.den_range[0] < 1 or self.den_range[0] > self.den_range[1]:
            raise ValueError("denominator range must lie in [1, inf)")
        if self.num_range[0] > self.num_range[1]:
            raise ValueError("empty numerator range")


DEFAULT_DISTRIBUTION = ScalarDistribution()


def make_rng(seed: int) -> random.Random:
    if not (0 <= int(seed) <= SEED_MAX):
        raise ValueError("seed must be a 64-bit unsigned integer")
    return random.Random(int(seed))


def random_scalar(
    rng: random.Random, field: Field, dist: ScalarDistribution = DEFAULT_DISTRIBUTION
) -> Scalar:
    if Field(field).exact:
        num = rng.randint(*dist.num_range)
        den = rng.randint(*dist.den_range)
        return Fraction(num, den)
    re = rng.uniform(dist.low, dist.high)
    im = 0.0 if dist.real else rng.uniform(dist.low, dist.high)
    return complex(re, im)
