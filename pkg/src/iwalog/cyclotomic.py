"""Arithmetic in Q_p(zeta_{p^r}) at bounded precision.

Elements are coefficient vectors in the power basis 1, zeta, ..., zeta^(phi-1)
of the p^r-th cyclotomic field, with an optional global denominator p^shift so
that division stays inside integer arithmetic.  The compatible system of roots
zeta_{p^n}^p = zeta_{p^(n-1)} is fixed once and for all: embeddings send
zeta_{p^r} to zeta_{p^r'}^(p^(r'-r)).

Valuations are exact rationals.  Rewriting an element in powers of
eps = zeta - 1 gives candidates val_p(b_j) + j/phi whose fractional parts are
pairwise distinct, so the minimum is the true valuation whenever any digit
survives the working precision.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .padic import DEFAULT_PRECISION, PAdicScalar, PrecisionZeroDivide, Valuation, val_p
from .polyint import (
    binom_row,
    padd,
    pdivmod_monic,
    pmul,
    prem_cyclo,
    pscale,
    psub,
    pshift_unit,
    ptrim,
)


class EmbeddingError(ValueError):
    """Raised for level changes that would need a relative trace, not a map."""


def phi(p: int, r: int) -> int:
    """Degree of the p^r-th cyclotomic field over Q_p."""
    if r < 0:
        raise ValueError("negative level")
    return 1 if r == 0 else (p - 1) * p ** (r - 1)


class CycloPolynomial:
    """The p^n-th cyclotomic polynomial, in both x and X = x - 1 variables.

    ``coeffs`` are the exact integer coefficients in x (they are 0/1);
    ``shifted`` expands the polynomial around 1, which is where the
    distinguished-variable substitutions in the log-matrix layer live.
    """

    def __init__(self, p: int, n: int):
        if n < 1:
            raise ValueError("cyclotomic index must be >= 1")
        self.prime = p
        self.n = n
        q = p ** (n - 1)
        coeffs = [0] * ((p - 1) * q + 1)
        for i in range(p):
            coeffs[i * q] = 1
        self.coeffs = tuple(coeffs)
        self._shifted = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def shifted(self) -> tuple:
        """Exact integer coefficients of Phi_{p^n}(1 + X)."""
        if self._shifted is None:
            out = []
            p, n = self.prime, self.n
            q = p ** (n - 1)
            for j in range(self.degree + 1):
                # sum over i of C(i*q, j)
                total = 0
                for i in range(p):
                    if i * q >= j:
                        total += _comb(i * q, j)
                out.append(total)
            self._shifted = tuple(out)
        return self._shifted

    def value_at_one(self) -> int:
        return self.prime

    def shifted_mod(self, modulus: int) -> list:
        return shifted_cyclo_mod(self.prime, self.n, modulus)


def _comb(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def cyclotomic_polynomial(p: int, n: int) -> CycloPolynomial:
    return CycloPolynomial(p, n)


@lru_cache(maxsize=None)
def shifted_cyclo_mod(p: int, n: int, modulus: int) -> tuple:
    """Phi_{p^n}(1 + X) mod ``modulus`` as a dense monic coefficient tuple."""
    q = p ** (n - 1)
    u = binom_row(q, 1, modulus)  # (1+X)^q
    acc = [1]
    out = [1]
    for _ in range(p - 1):
        acc = pmul(acc, u, modulus)
        out = padd(out, acc, modulus)
    out = list(out) + [0] * ((p - 1) * q + 1 - len(out))
    out[-1] = out[-1] % modulus
    return tuple(out)


class CycloElement:
    """Element of Q_p(zeta_{p^level}) with residues mod p^precision.

    ``coeffs[i]`` multiplies zeta^i; the element equals
    p^(-shift) * sum(coeffs[i] * zeta^i).  Instances are treated as immutable.
    """

    __slots__ = ("prime", "level", "precision", "shift", "coeffs", "_eps")

    def __init__(self, prime, level, coeffs, precision=DEFAULT_PRECISION, shift=0):
        self.prime = prime
        self.level = level
        self.precision = precision
        d = phi(prime, level)
        m = prime**precision
        c = [x % m for x in coeffs]
        if len(c) > d:
            raise ValueError("coefficient vector longer than field degree")
        c += [0] * (d - len(c))
        # NOTE: a positive shift is never cancelled against p-divisible
        # residues here; dividing residues known mod p^precision would
        # silently claim digits the representation does not have.
        if shift < 0:
            c = [(x * prime ** (-shift)) % m for x in c]
            shift = 0
        self.shift = shift
        self.coeffs = tuple(c)
        self._eps = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, p, level, precision=DEFAULT_PRECISION):
        return cls(p, level, [], precision)

    @classmethod
    def one(cls, p, level, precision=DEFAULT_PRECISION):
        return cls(p, level, [1], precision)

    @classmethod
    def from_int(cls, x, p, level=0, precision=DEFAULT_PRECISION):
        return cls(p, level, [x], precision)

    @classmethod
    def root_of_unity(cls, p, level, exponent=1, precision=DEFAULT_PRECISION):
        """zeta_{p^level}^exponent."""
        e = exponent % (p**level) if level > 0 else 0
        if level == 0 or e == 0:
            return cls.one(p, level, precision)
        vec = [0] * e + [1]
        vec = prem_cyclo(vec, p, p ** (level - 1), p**precision)
        return cls(p, level, vec, precision)

    @classmethod
    def epsilon(cls, p, level, precision=DEFAULT_PRECISION):
        """The uniformizer zeta_{p^level} - 1."""
        return cls.root_of_unity(p, level, 1, precision) - cls.one(p, level, precision)

    @classmethod
    def from_epsilon_basis(cls, p, level, vec, precision=DEFAULT_PRECISION, shift=0):
        """Element given by coefficients in powers of eps = zeta - 1."""
        m = p**precision
        zeta_vec = pshift_unit([x % m for x in vec], -1, m)
        return cls(p, level, zeta_vec, precision, shift)

    @classmethod
    def from_scalar(cls, s: PAdicScalar, level=0):
        if s.val is None:
            return cls.zero(s.prime, level, s.precision)
        if s.val >= 0:
            return cls(s.prime, level, [s.residue()], s.precision)
        return cls(s.prime, level, [s.unit], s.precision, shift=-s.val)

    # -- basics ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return phi(self.prime, self.level)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other: "CycloElement"):
        if self.prime != other.prime:
            raise ValueError("prime mismatch")
        if self.precision != other.precision:
            raise ValueError("mixed working precisions")

    def _modulus(self) -> int:
        return self.prime**self.precision

    def embed(self, level: int) -> "CycloElement":
        """Push into the p^level-th field along the compatible root system."""
        if level < self.level:
            raise EmbeddingError(
                f"cannot map level {self.level} down to {level}: "
                "no canonical projection between these fields"
            )
        if level == self.level:
            return self
        step = self.prime ** (level - self.level)
        vec = [0] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            vec[i * step] = c
        vec = prem_cyclo(vec, self.prime, self.prime ** (level - 1), self._modulus())
        return CycloElement(self.prime, level, vec, self.precision, self.shift)

    def _align(self, other: "CycloElement"):
        self._check(other)
        lvl = max(self.level, other.level)
        a = self.embed(lvl)
        b = other.embed(lvl)
        sh = max(a.shift, b.shift)
        m = self._modulus()
        ac = a.coeffs if a.shift == sh else pscale(list(a.coeffs), self.prime ** (sh - a.shift), m)
        bc = b.coeffs if b.shift == sh else pscale(list(b.coeffs), self.prime ** (sh - b.shift), m)
        return lvl, sh, list(ac), list(bc)

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = CycloElement.from_int(other, self.prime, 0, self.precision)
        lvl, sh, a, b = self._align(other)
        return CycloElement(self.prime, lvl, padd(a, b, self._modulus()), self.precision, sh)

    __radd__ = __add__

    def __neg__(self):
        m = self._modulus()
        return CycloElement(
            self.prime, self.level, [(m - c) % m for c in self.coeffs], self.precision, self.shift
        )

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycloElement.from_int(other, self.prime, 0, self.precision)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, PAdicScalar):
            return self.scale_scalar(other)
        lvl, sh2 = max(self.level, other.level), self.shift + other.shift
        self._check(other)
        a = self.embed(lvl)
        b = other.embed(lvl)
        m = self._modulus()
        prod = pmul(list(a.coeffs), list(b.coeffs), m)
        if lvl > 0:
            prod = prem_cyclo(prod, self.prime, self.prime ** (lvl - 1), m)
        return CycloElement(self.prime, lvl, prod, self.precision, sh2)

    __rmul__ = __mul__

    def scale(self, c: int) -> "CycloElement":
        m = self._modulus()
        return CycloElement(
            self.prime, self.level, pscale(list(self.coeffs), c, m), self.precision, self.shift
        )

    def scale_scalar(self, s: PAdicScalar) -> "CycloElement":
        if s.prime != self.prime:
            raise ValueError("prime mismatch")
        if s.val is None:
            return CycloElement.zero(self.prime, self.level, self.precision)
        if s.val >= 0:
            return self.scale(s.residue())
        out = self.scale(s.unit)
        return CycloElement(
            self.prime, out.level, out.coeffs, self.precision, out.shift - s.val
        )

    def mul_root_power(self, exponent: int) -> "CycloElement":
        """Multiply by zeta^exponent (cheap: index shift plus sparse reduce)."""
        if self.level == 0:
            return self
        e = exponent % (self.prime**self.level)
        if e == 0:
            return self
        vec = [0] * e + list(self.coeffs)
        vec = prem_cyclo(vec, self.prime, self.prime ** (self.level - 1), self._modulus())
        return CycloElement(self.prime, self.level, vec, self.precision, self.shift)

    def mul_zeta_power_minus_one(self, exponent: int) -> "CycloElement":
        """Multiply by (zeta^exponent - 1) in O(degree) coefficient work."""
        shifted = self.mul_root_power(exponent)
        m = self._modulus()
        vec = psub(list(shifted.coeffs), list(self.coeffs), m)
        return CycloElement(self.prime, self.level, vec, self.precision, self.shift)

    def __pow__(self, k: int) -> "CycloElement":
        if k < 0:
            return self.invert() ** (-k)
        out = CycloElement.one(self.prime, self.level, self.precision)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- Galois action, norm, division ------------------------------------------

    def galois(self, t: int) -> "CycloElement":
        """Apply zeta -> zeta^t for t coprime to p."""
        if self.level == 0:
            return self
        order = self.prime**self.level
        t %= order
        if t % self.prime == 0:
            raise ValueError("Galois exponent must be coprime to p")
        vec = [0] * order
        for i, c in enumerate(self.coeffs):
            if c:
                vec[(i * t) % order] = (vec[(i * t) % order] + c) % self._modulus()
        vec = prem_cyclo(vec, self.prime, self.prime ** (self.level - 1), self._modulus())
        return CycloElement(self.prime, self.level, vec, self.precision, self.shift)

    def norm(self) -> PAdicScalar:
        """Product over all Galois conjugates; lands in Q_p."""
        if self.level == 0:
            return self.as_scalar()
        order = self.prime**self.level
        acc = None
        for t in range(1, order):
            if t % self.prime == 0:
                continue
            conj = self.galois(t)
            acc = conj if acc is None else acc * conj
        return acc.as_scalar()

    def as_scalar(self) -> PAdicScalar:
        """Interpret a constant element as a scalar (errors if not constant)."""
        if any(c != 0 for c in self.coeffs[1:]):
            raise ValueError("element is not rational over Q_p")
        return PAdicScalar._make(
            self.prime, self.precision - self.shift, -self.shift, self.coeffs[0]
        )

    def invert(self) -> "CycloElement":
        if self.is_zero():
            raise PrecisionZeroDivide(self.precision - self.shift)
        if self.level == 0:
            s = self.as_scalar().invert()
            return CycloElement.from_scalar(s, 0)
        order = self.prime**self.level
        integral = CycloElement(self.prime, self.level, self.coeffs, self.precision, 0)
        conj_prod = None
        for t in range(2, order):
            if t % self.prime == 0:
                continue
            g = integral.galois(t)
            conj_prod = g if conj_prod is None else conj_prod * g
        if conj_prod is None:  # degree-1 field cannot occur for level >= 1, p odd
            conj_prod = CycloElement.one(self.prime, self.level, self.precision)
        nm = (integral * conj_prod).as_scalar()
        if nm.val is None:
            raise PrecisionZeroDivide(self.precision)
        m = self._modulus()
        unit_inv = pow(nm.unit, -1, m)
        out = conj_prod.scale(unit_inv)
        # combined shift: divide by p^{val(norm)}, then undo the stored numerator shift
        return CycloElement(
            self.prime, self.level, out.coeffs, self.precision, out.shift + nm.val - self.shift
        )

    def __truediv__(self, other: "CycloElement") -> "CycloElement":
        return self * other.invert()

    # -- valuation ----------------------------------------------------------------

    def epsilon_basis(self) -> tuple:
        """Coefficients in powers of eps = zeta - 1 (cached)."""
        if self._eps is None:
            m = self._modulus()
            e = pshift_unit(list(self.coeffs), 1, m)
            e += [0] * (self.degree - len(e))
            self._eps = tuple(e)
        return self._eps

    def valuation(self) -> Valuation:
        if self.level == 0:
            return self.as_scalar().valuation()
        d = self.degree
        best = None
        for j, b in enumerate(self.epsilon_basis()):
            if b:
                cand = Fraction(val_p(b, self.prime)) + Fraction(j, d)
                if best is None or cand < best:
                    best = cand
        if best is None:
            return Valuation(Fraction(self.precision - self.shift), exact=False)
        return Valuation(best - self.shift, exact=True)

    def reported_zero(self, tau) -> bool:
        return self.valuation().bound >= tau

    # -- comparison and display ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycloElement.from_int(other, self.prime, 0, self.precision)
        if not isinstance(other, CycloElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return (
            f"CycloElement(p={self.prime}, level={self.level}, shift={self.shift}, "
            f"coeffs={list(self.coeffs[:6])}{'...' if self.degree > 6 else ''})"
        )

    def coefficient(self, i: int) -> PAdicScalar:
        return PAdicScalar._make(
            self.prime, self.precision - self.shift, -self.shift, self.coeffs[i]
        )

    def to_json_dict(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "level": self.level,
            "precision": self.precision,
            "prime": self.prime,
            "shift": self.shift,
        }


def phi_value_at_root(p, n, level, exponent=1, precision=DEFAULT_PRECISION) -> CycloElement:
    """Phi_{p^n}(w) for w = zeta_{p^level}^exponent, via the sparse sum form.

    Reduces to exactly 0 when the root has full order p^n, to the integer p
    when the root order is below p^n, and to a ratio of uniformizers above.
    """
    acc = CycloElement.zero(p, level, precision)
    q = p ** (n - 1)
    for i in range(p):
        acc = acc + CycloElement.root_of_unity(p, level, i * q * exponent, precision)
    return acc
