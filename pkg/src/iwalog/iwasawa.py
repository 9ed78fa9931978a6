"""Two-variable polynomial stand-in for the completed group ring.

``IwasawaPoly`` is a sparse polynomial in the distinguished variables
X = gamma_1 - 1 and Y = gamma_2 - 1 with coefficients in Z/p^N.  Characters
of finite order send (X, Y) to (w_1 - 1, w_2 - 1) for roots of unity w_i,
landing in a cyclotomic field; ``evaluate`` is that ring map.

Purely univariate products dispatch to the dense packed multiply; everything
else goes through dictionary convolution, which is plenty for the bivariate
polynomials that actually occur (minors of block-diagonal matrices).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cyclotomic import CycloElement, phi, shifted_cyclo_mod
from .padic import DEFAULT_PRECISION, PAdicScalar
from .polyint import binom_row, pdivmod_monic, pmul, ptrim

_DENSE_CUTOFF = 1024


@dataclass(frozen=True)
class CharacterPoint:
    """A finite-order character, given by root-of-unity images of the two
    topological generators: w_1 = zeta_{p^r}^a and w_2 = zeta_{p^s}^b.

    Order exponent 0 means the coordinate is trivial (the exponent is then
    stored as 0).  Nontrivial exponents must be units modulo p.
    """

    prime: int
    r: int
    s: int
    a: int = 1
    b: int = 1

    def __post_init__(self):
        for name, order, exp in (("a", self.r, self.a), ("b", self.s, self.b)):
            if order < 0:
                raise ValueError("negative order exponent")
            if order == 0:
                # any exponent on a trivial coordinate names the same character
                object.__setattr__(self, name, 0)
            else:
                e = exp % self.prime**order
                if e % self.prime == 0:
                    raise ValueError(
                        f"exponent {name}={exp} is not a unit mod {self.prime}"
                    )
                object.__setattr__(self, name, e)

    @property
    def level(self) -> int:
        return max(self.r, self.s)

    @property
    def conductor_exponents(self) -> tuple:
        """Exponents (r+1, s+1) of the two conductor prime powers."""
        return (self.r + 1, self.s + 1)

    def class_size(self) -> int:
        return phi(self.prime, self.level)

    def w1(self, precision=DEFAULT_PRECISION) -> CycloElement:
        lvl = self.level
        e = self.a * self.prime ** (lvl - self.r) if self.r else 0
        return CycloElement.root_of_unity(self.prime, lvl, e, precision)

    def w2(self, precision=DEFAULT_PRECISION) -> CycloElement:
        lvl = self.level
        e = self.b * self.prime ** (lvl - self.s) if self.s else 0
        return CycloElement.root_of_unity(self.prime, lvl, e, precision)


class IwasawaPoly:
    """Sparse bivariate polynomial over Z/p^N; immutable by convention."""

    __slots__ = ("prime", "precision", "terms", "caps", "truncated")

    def __init__(self, prime, terms=None, precision=DEFAULT_PRECISION, caps=None, truncated=False):
        self.prime = prime
        self.precision = precision
        m = prime**precision
        d = {}
        if terms:
            for (i, j), c in terms.items() if isinstance(terms, dict) else terms:
                c %= m
                if c:
                    d[(i, j)] = c
        self.terms = d
        self.caps = caps
        self.truncated = truncated

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, p, precision=DEFAULT_PRECISION):
        return cls(p, {}, precision)

    @classmethod
    def const(cls, c, p, precision=DEFAULT_PRECISION):
        return cls(p, {(0, 0): c}, precision)

    @classmethod
    def variable(cls, var, p, precision=DEFAULT_PRECISION):
        key = (1, 0) if var == "X" else (0, 1)
        return cls(p, {key: 1}, precision)

    @classmethod
    def from_x_dense(cls, coeffs, p, precision=DEFAULT_PRECISION):
        return cls(p, {(i, 0): c for i, c in enumerate(coeffs) if c}, precision)

    @classmethod
    def from_y_dense(cls, coeffs, p, precision=DEFAULT_PRECISION):
        return cls(p, {(0, j): c for j, c in enumerate(coeffs) if c}, precision)

    # -- structure queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def deg_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def is_univariate(self, var: str) -> bool:
        idx = 1 if var == "X" else 0
        return all(k[idx] == 0 for k in self.terms)

    def to_dense(self, var: str) -> list:
        if not self.is_univariate(var):
            raise ValueError(f"polynomial involves both variables")
        out = [0] * (max(i + j for i, j in self.terms) + 1 if self.terms else 0)
        for (i, j), c in self.terms.items():
            out[i + j] = c
        return out

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def coefficient(self, i: int, j: int) -> PAdicScalar:
        return PAdicScalar.from_int(self.terms.get((i, j), 0), self.prime, self.precision)

    # -- arithmetic ----------------------------------------------------------------

    def _check(self, other):
        if self.prime != other.prime or self.precision != other.precision:
            raise ValueError("operands use different coefficient rings")

    def _wrap(self, terms, other=None):
        caps = self.caps
        if other is not None and other.caps is not None:
            caps = other.caps if caps is None else (
                min(caps[0], other.caps[0]),
                min(caps[1], other.caps[1]),
            )
        truncated = self.truncated or (other.truncated if other is not None else False)
        if caps is not None:
            kept = {k: c for k, c in terms.items() if k[0] <= caps[0] and k[1] <= caps[1]}
            if len(kept) != len(terms):
                truncated = True
            terms = kept
        return IwasawaPoly(self.prime, terms, self.precision, caps, truncated)

    def __add__(self, other):
        if isinstance(other, int):
            other = IwasawaPoly.const(other, self.prime, self.precision)
        self._check(other)
        m = self.prime**self.precision
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = (out.get(k, 0) + c) % m
            if v:
                out[k] = v
            elif k in out:
                del out[k]
        return self._wrap(out, other)

    __radd__ = __add__

    def __neg__(self):
        m = self.prime**self.precision
        return self._wrap({k: (m - c) % m for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = IwasawaPoly.const(other, self.prime, self.precision)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int):
        m = self.prime**self.precision
        c %= m
        return self._wrap({k: (v * c) % m for k, v in self.terms.items() if (v * c) % m})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return self._wrap({}, other)
        m = self.prime**self.precision
        if len(self.terms) == 1 and (0, 0) in self.terms:
            return other._wrap(other.scale(self.terms[(0, 0)]).terms, self)
        if len(other.terms) == 1 and (0, 0) in other.terms:
            return self._wrap(self.scale(other.terms[(0, 0)]).terms, other)
        for var in ("X", "Y"):
            if self.is_univariate(var) and other.is_univariate(var):
                da, db = self.to_dense(var), other.to_dense(var)
                if len(da) * len(db) >= _DENSE_CUTOFF:
                    dense = pmul(da, db, m)
                    mk = (lambda t: (t, 0)) if var == "X" else (lambda t: (0, t))
                    return self._wrap(
                        {mk(t): c for t, c in enumerate(dense) if c}, other
                    )
                break
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                v = (out.get(k, 0) + c1 * c2) % m
                if v:
                    out[k] = v
                elif k in out:
                    del out[k]
        return self._wrap(out, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IwasawaPoly.const(1, self.prime, self.precision)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = IwasawaPoly.const(other, self.prime, self.precision)
        if not isinstance(other, IwasawaPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        items = ", ".join(f"X^{i}Y^{j}:{c}" for (i, j), c in self.sorted_terms()[:6])
        return f"IwasawaPoly(p={self.prime}, {{{items}{'...' if len(self.terms) > 6 else ''}}})"

    # -- evaluation -------------------------------------------------------------------

    def evaluate(self, w: CharacterPoint) -> CycloElement:
        """Image under X -> w_1 - 1, Y -> w_2 - 1 in Q_p(zeta_{p^level})."""
        if w.prime != self.prime:
            raise ValueError("prime mismatch")
        p, n = self.prime, self.precision
        lvl = w.level
        e1 = w.a * p ** (lvl - w.r) if w.r else 0
        e2 = w.b * p ** (lvl - w.s) if w.s else 0
        cols = {}
        for (i, j), c in self.terms.items():
            cols.setdefault(i, {})[j] = c
        zero = CycloElement.zero(p, lvl, n)
        acc = zero
        for i in range(self.deg_x, -1, -1):
            acc = acc.mul_zeta_power_minus_one(e1)
            col = cols.get(i)
            if col:
                inner = zero
                for j in range(max(col), -1, -1):
                    inner = inner.mul_zeta_power_minus_one(e2)
                    c = col.get(j)
                    if c:
                        inner = inner + CycloElement.from_int(c, p, lvl, n)
                acc = acc + inner
        return acc

    def eval_epsilon(self, k: int, var: str = "X") -> list:
        """Value at var = zeta_{p^k} - 1 as coefficients in powers of that
        uniformizer: the remainder modulo Phi_{p^k}(1 + var).

        Only defined for polynomials in one variable; this is the scalable
        route used when the symbolic degree runs into the thousands.
        """
        m = self.prime**self.precision
        g = list(shifted_cyclo_mod(self.prime, k, m))
        _, r = pdivmod_monic(self.to_dense(var), g, m)
        return list(r) + [0] * (len(g) - 1 - len(r))

    def divisible_by_shifted_cyclo(self, k: int, var: str = "X") -> bool:
        """Exact divisibility by Phi_{p^k}(1 + var) at working precision."""
        m = self.prime**self.precision
        g = list(shifted_cyclo_mod(self.prime, k, m))
        _, r = pdivmod_monic(self.to_dense(var), g, m)
        return not ptrim(r)

    def serialize_terms(self) -> list:
        return [[i, j, c] for (i, j), c in self.sorted_terms()]


def omega_poly(p, n, var="X", precision=DEFAULT_PRECISION) -> IwasawaPoly:
    """(1 + var)^(p^n) - 1, the level-n augmentation kernel generator."""
    m = p**precision
    row = binom_row(p**n, 1, m)
    row[0] = 0
    mk = IwasawaPoly.from_x_dense if var == "X" else IwasawaPoly.from_y_dense
    return mk(row, p, precision)


def shifted_cyclo_poly(p, k, var="X", precision=DEFAULT_PRECISION) -> IwasawaPoly:
    """Phi_{p^k}(1 + var) as a polynomial in the distinguished variable."""
    dense = list(shifted_cyclo_mod(p, k, p**precision))
    mk = IwasawaPoly.from_x_dense if var == "X" else IwasawaPoly.from_y_dense
    return mk(dense, p, precision)
