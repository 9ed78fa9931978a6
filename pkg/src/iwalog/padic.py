"""Bounded-precision p-adic scalar arithmetic with explicit valuation bookkeeping.

A scalar is stored as ``p**val * unit`` where ``unit`` is a p-adic unit known
modulo ``p**(precision - val)``.  ``precision`` is the absolute precision: the
value is pinned down modulo ``p**precision`` only, and every arithmetic
operation propagates the weakest honest precision rather than inventing
digits.  A value that is indistinguishable from zero at the working precision
carries ``val = None`` ("valuation at least ``precision``") instead of a fake
finite valuation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_PRECISION = 64


class PrimeMismatch(ValueError):
    """Raised when scalars over different residue primes are combined."""


class PrecisionZeroDivide(ArithmeticError):
    """Division by a value that is zero at the working precision.

    Carries the precision at which the divisor was indistinguishable from
    zero, so callers can report how many digits would have been needed.
    """

    def __init__(self, precision: int):
        self.precision = precision
        super().__init__(
            f"divisor is zero to absolute precision {precision}; "
            f"cannot invert without more digits"
        )


@dataclass(frozen=True)
class Valuation:
    """Exact rational valuation, or a lower bound when precision ran out.

    ``exact=True`` means the valuation is known to equal ``bound``;
    ``exact=False`` means only ``valuation >= bound`` is known.
    """

    bound: Fraction
    exact: bool = True

    def __add__(self, other: "Valuation") -> "Valuation":
        return Valuation(self.bound + other.bound, self.exact and other.exact)

    def __str__(self) -> str:
        body = str(self.bound)
        return body if self.exact else f">={body}"

    def as_fraction(self) -> Fraction:
        if not self.exact:
            raise ValueError(f"valuation only bounded below by {self.bound}")
        return self.bound


def val_p(x: int, p: int) -> int:
    """Exact p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of integer 0 is unbounded")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class PAdicScalar:
    """Element of Q_p known to a fixed absolute precision.

    Immutable.  ``val is None`` encodes "zero at this precision": all that is
    known is that the valuation is at least ``precision``.
    """

    __slots__ = ("prime", "precision", "val", "unit")

    def __init__(self, prime: int, precision: int, val, unit: int):
        self.prime = prime
        self.precision = precision
        self.val = val
        self.unit = unit

    # -- construction ------------------------------------------------------

    @staticmethod
    def _make(prime: int, precision: int, val: int, raw: int) -> "PAdicScalar":
        """Normalise ``p**val * raw`` known modulo ``p**precision``."""
        if precision < 1:
            raise ValueError("absolute precision must be at least 1")
        span = precision - val
        if span <= 0:
            return PAdicScalar(prime, precision, None, 0)
        raw %= prime ** span
        if raw == 0:
            return PAdicScalar(prime, precision, None, 0)
        shift = val_p(raw, prime)
        val += shift
        raw //= prime ** shift
        raw %= prime ** (precision - val)
        return PAdicScalar(prime, precision, val, raw)

    @classmethod
    def from_int(cls, x: int, prime: int, precision: int = DEFAULT_PRECISION) -> "PAdicScalar":
        return cls._make(prime, precision, 0, x)

    @classmethod
    def zero(cls, prime: int, precision: int = DEFAULT_PRECISION) -> "PAdicScalar":
        return cls(prime, precision, None, 0)

    @classmethod
    def one(cls, prime: int, precision: int = DEFAULT_PRECISION) -> "PAdicScalar":
        return cls(prime, precision, 0, 1)

    # -- predicates --------------------------------------------------------

    @property
    def is_zero_at_precision(self) -> bool:
        return self.val is None

    def reported_zero(self, tau: Fraction) -> bool:
        """Zero under the reporting policy: valuation at least ``tau``."""
        return self.valuation().bound >= tau

    def valuation(self) -> Valuation:
        if self.val is None:
            return Valuation(Fraction(self.precision), exact=False)
        return Valuation(Fraction(self.val), exact=True)

    def residue(self) -> int:
        """Value as an integer modulo ``p**precision`` (demands val >= 0)."""
        if self.val is None:
            return 0
        if self.val < 0:
            raise ValueError(f"negative valuation {self.val}: not a p-adic integer")
        return (self.unit * self.prime ** self.val) % (self.prime ** self.precision)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PAdicScalar):
            if other.prime != self.prime:
                raise PrimeMismatch(f"prime {other.prime} != {self.prime}")
            return other
        if isinstance(other, int):
            return PAdicScalar.from_int(other, self.prime, self.precision)
        return NotImplemented

    def at_precision(self, precision: int) -> "PAdicScalar":
        """Truncate (never extend claimed digits beyond what is stored)."""
        if precision >= self.precision:
            if precision > self.precision and self.val is not None:
                raise ValueError("cannot raise absolute precision without new digits")
            if self.val is None:
                return PAdicScalar(self.prime, min(precision, self.precision), None, 0)
            return self
        if self.val is None or self.val >= precision:
            return PAdicScalar(self.prime, precision, None, 0)
        return PAdicScalar._make(self.prime, precision, self.val, self.unit)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.precision, other.precision)
        if self.val is None:
            return other.at_precision(min(n, self.precision))
        if other.val is None:
            return self.at_precision(min(n, other.precision))
        m = min(self.val, other.val)
        p = self.prime
        raw = self.unit * p ** (self.val - m) + other.unit * p ** (other.val - m)
        return PAdicScalar._make(p, n, m, raw)

    __radd__ = __add__

    def __neg__(self) -> "PAdicScalar":
        if self.val is None:
            return self
        return PAdicScalar._make(self.prime, self.precision, self.val, -self.unit)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.val is None or other.val is None:
            # O(p^Na) * (p^vb * unit) = O(p^(Na+vb)); two zeros compound.
            na = self.precision if self.val is None else self.val
            nb = other.precision if other.val is None else other.val
            return PAdicScalar(self.prime, na + nb, None, 0)
        n = min(self.precision + other.val, other.precision + self.val)
        return PAdicScalar._make(
            self.prime, n, self.val + other.val, self.unit * other.unit
        )

    __rmul__ = __mul__

    def invert(self) -> "PAdicScalar":
        if self.val is None:
            raise PrecisionZeroDivide(self.precision)
        span = self.precision - self.val
        inv_unit = pow(self.unit, -1, self.prime ** span)
        return PAdicScalar._make(
            self.prime, self.precision - 2 * self.val, -self.val, inv_unit
        )

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        return self.invert() * other

    def __pow__(self, k: int) -> "PAdicScalar":
        if k < 0:
            return self.invert() ** (-k)
        out = PAdicScalar.one(self.prime, self.precision)
        for _ in range(k):
            out = out * self
        return out

    # -- comparison and display --------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).val is None

    __hash__ = None  # semantic equality is precision-relative

    def __repr__(self) -> str:
        return f"PAdicScalar({self})"

    def __str__(self) -> str:
        if self.val is None:
            return f"O({self.prime}^{self.precision})"
        if self.val == 0:
            return str(self.unit)
        return f"{self.prime}^{self.val}*{self.unit}"

    def unit_digits(self) -> list:
        """Base-p digits of the unit part, little-endian."""
        if self.val is None:
            return []
        digits = []
        u = self.unit
        for _ in range(self.precision - self.val):
            digits.append(u % self.prime)
            u //= self.prime
        return digits

    def to_json_dict(self) -> dict:
        return {
            "precision": self.precision,
            "unit_digits": self.unit_digits(),
            "valuation": f">={self.precision}" if self.val is None else self.val,
        }
