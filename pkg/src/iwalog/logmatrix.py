"""The logarithm-matrix tower.

From a pair of 2g x 2g unit-determinant matrices (one per prime above p)
this module builds the level-r step matrices

    C_{q,r} = blockdiag(I_g, Phi_{p^r}(1 + var_q) I_g) * C_q^{-1},

their ordered products H_{q,r} = C_{q,r} ... C_{q,1}, the 4g x 4g block
diagonal H_{r,s}, and the (I, J)-minors indexed by signed index pairs.

Minor convention: rows I_p u (2g + I_pc) and columns J_p u (2g + J_pc),
both sorted ascending, plain determinant, no complementary sign factor.
Vanishing and valuation statements are sign-independent, and every report
records the convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cyclotomic import CycloElement
from .iwasawa import CharacterPoint, IwasawaPoly, shifted_cyclo_poly
from .padic import DEFAULT_PRECISION, PAdicScalar, Valuation

_ADJUGATE_LIMIT = 8


class InputRejected(ValueError):
    """Input data fails a structural hypothesis (shape, unit determinant)."""


# -- exact integer matrices mod p^N ---------------------------------------------


def mat_identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: list, b: list, m: int) -> list:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(cols):
                    oi[j] = (oi[j] + c * bk[j]) % m
    return out


def det_mod(a: list, m: int) -> int:
    """Determinant by expansion down the rows, memoized on column subsets."""
    n = len(a)
    memo = {(): 1}

    def rec(cols: tuple) -> int:
        if cols in memo:
            return memo[cols]
        r = n - len(cols)
        acc = 0
        for idx, c in enumerate(cols):
            e = a[r][c]
            if e:
                sub = rec(cols[:idx] + cols[idx + 1 :])
                term = e * sub
                acc = (acc - term if idx & 1 else acc + term) % m
        memo[cols] = acc
        return acc

    return rec(tuple(range(n)))


def _inv_adjugate(a: list, m: int) -> list:
    n = len(a)
    d = det_mod(a, m)
    dinv = pow(d, -1, m)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [
                [a[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            cof = det_mod(sub, m) if sub else 1
            if (i + j) & 1:
                cof = -cof
            out[j][i] = (cof * dinv) % m
    return out


def _inv_gauss(a: list, m: int, p: int) -> list:
    """Gauss-Jordan with full pivoting by minimal p-valuation.

    Requires a unit pivot at every step; guaranteed when det is a unit.
    """
    n = len(a)
    work = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    col_perm = list(range(n))
    for step in range(n):
        piv = None
        for i in range(step, n):
            for j in range(step, n):
                if work[i][j] % p:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            raise InputRejected("matrix is singular modulo p")
        pi, pj = piv
        work[step], work[pi] = work[pi], work[step]
        if pj != step:
            for row in work:
                row[step], row[pj] = row[pj], row[step]
            col_perm[step], col_perm[pj] = col_perm[pj], col_perm[step]
        inv = pow(work[step][step], -1, m)
        work[step] = [(x * inv) % m for x in work[step]]
        for i in range(n):
            if i != step and work[i][step]:
                f = work[i][step]
                work[i] = [(x - f * y) % m for x, y in zip(work[i], work[step])]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        out[col_perm[i]] = [work[i][n + j] % m for j in range(n)]
    return out


def inv_mod(a: list, m: int, p: int) -> list:
    """Inverse of a unit-determinant integer matrix mod m = p^N."""
    if det_mod(a, m) % p == 0:
        raise InputRejected("determinant is not a p-adic unit")
    if len(a) <= _ADJUGATE_LIMIT:
        return _inv_adjugate(a, m)
    return _inv_gauss(a, m, p)


# -- scalar matrices (entries PAdicScalar, used where 1/p appears) -----------------


def smat_from_int(a: list, p: int, precision: int) -> list:
    return [[PAdicScalar.from_int(x, p, precision) for x in row] for row in a]


def smat_identity(n: int, p: int, precision: int) -> list:
    one = PAdicScalar.one(p, precision)
    zero = PAdicScalar.zero(p, precision)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def smat_mul(a: list, b: list) -> list:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = a[i][0] * b[0][j]
            for k in range(1, inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def smat_pow(a: list, k: int, p: int, precision: int) -> list:
    out = smat_identity(len(a), p, precision)
    for _ in range(k):
        out = smat_mul(out, a)
    return out


def _sp_add(f: list, g: list, zero: PAdicScalar) -> list:
    n = max(len(f), len(g))
    fa = list(f) + [zero] * (n - len(f))
    ga = list(g) + [zero] * (n - len(g))
    return [x + y for x, y in zip(fa, ga)]


def _sp_mul(f: list, g: list, zero: PAdicScalar) -> list:
    if not f or not g:
        return []
    out = [zero] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return out


def char_poly(a: list, p: int, precision: int) -> list:
    """Characteristic polynomial det(x I - a), coefficients low to high."""
    n = len(a)
    zero = PAdicScalar.zero(p, precision)
    one = PAdicScalar.one(p, precision)
    entries = [
        [[-a[i][j], one] if i == j else [-a[i][j]] for j in range(n)]
        for i in range(n)
    ]
    memo = {(): [one]}

    def rec(cols: tuple) -> list:
        if cols in memo:
            return memo[cols]
        r = n - len(cols)
        acc = []
        for idx, c in enumerate(cols):
            e = entries[r][c]
            sub = rec(cols[:idx] + cols[idx + 1 :])
            term = _sp_mul(e, sub, zero)
            if idx & 1:
                term = [-t for t in term]
            acc = _sp_add(acc, term, zero)
        memo[cols] = acc
        return acc

    out = rec(tuple(range(n)))
    return out + [zero] * (n + 1 - len(out))


# -- Newton polygon --------------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower hull data of coefficient valuations of a polynomial."""

    slopes: tuple  # one Fraction per root, with multiplicity
    vertices: tuple  # hull vertices (index, valuation)
    ambiguous: bool  # a precision-zero coefficient could cut the hull

    @property
    def root_valuations(self) -> tuple:
        return tuple(-s for s in self.slopes)


def newton_polygon(coeffs: list) -> NewtonPolygon:
    """Newton polygon of a polynomial with PAdicScalar coefficients.

    Precision-zero coefficients contribute only a lower bound; the hull is
    built from exactly-known points and flagged if a bound could undercut it.
    """
    exact, bounds = [], []
    for i, c in enumerate(coeffs):
        if c.val is not None:
            exact.append((i, Fraction(c.val)))
        else:
            bounds.append((i, Fraction(c.precision)))
    if len(exact) < 2:
        raise ValueError("too few known coefficients for a polygon")
    hull = []
    for pt in exact:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep the hull lower-convex
            if (y2 - y1) * (pt[0] - x2) >= (pt[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)

    def hull_height(x: int) -> Fraction:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= x <= x2:
                return y1 + (y2 - y1) * Fraction(x - x1, x2 - x1)
        return hull[-1][1]

    ambiguous = any(b <= hull_height(i) for i, b in bounds)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, x2 - x1)
        slopes.extend([s] * (x2 - x1))
    return NewtonPolygon(tuple(slopes), tuple(hull), ambiguous)


# -- signed indices -----------------------------------------------------------------


@dataclass(frozen=True)
class SignedIndex:
    """A pair of subsets of {1, ..., 2g}, one per prime above p.

    Members of the admissible family satisfy |J_p| + |J_pc| = 2g.
    """

    jp: tuple
    jpc: tuple

    def __post_init__(self):
        object.__setattr__(self, "jp", tuple(sorted(self.jp)))
        object.__setattr__(self, "jpc", tuple(sorted(self.jpc)))

    def weight(self) -> int:
        return len(self.jp) + len(self.jpc)

    def rows(self, g: int) -> list:
        """Global 0-based indices into a 4g-row block matrix, ascending."""
        return [j - 1 for j in self.jp] + [2 * g + j - 1 for j in self.jpc]

    def complement(self, g: int) -> "SignedIndex":
        full = set(range(1, 2 * g + 1))
        return SignedIndex(tuple(full - set(self.jp)), tuple(full - set(self.jpc)))

    def label(self, g: int) -> str:
        low = tuple(range(1, g + 1))
        high = tuple(range(g + 1, 2 * g + 1))
        both = tuple(range(1, 2 * g + 1))
        named = {
            (low, low): "I0",
            (high, high): "I1",
            (high, low): "mix10",
            (low, high): "mix01",
            (both, ()): "full_p",
            ((), both): "full_pc",
        }
        return named.get((self.jp, self.jpc), self.key())

    def key(self) -> str:
        fmt = lambda t: "".join(str(j) for j in t) or "-"
        return f"p{fmt(self.jp)}|c{fmt(self.jpc)}"


def index_i0(g: int) -> SignedIndex:
    return SignedIndex(tuple(range(1, g + 1)), tuple(range(1, g + 1)))


def index_i1(g: int) -> SignedIndex:
    return SignedIndex(tuple(range(g + 1, 2 * g + 1)), tuple(range(g + 1, 2 * g + 1)))


def enumerate_signed_indices(g: int) -> list:
    """All signed indices of weight 2g, in deterministic order."""
    out = []
    universe = range(1, 2 * g + 1)
    for k in range(0, 2 * g + 1):
        for jp in combinations(universe, k):
            for jpc in combinations(universe, 2 * g - k):
                out.append(SignedIndex(jp, jpc))
    return out


# -- input data and validation -------------------------------------------------------


def _is_block_anti_diagonal(c: list, g: int) -> bool:
    return all(
        c[i][j] == 0
        for i in range(2 * g)
        for j in range(2 * g)
        if (i < g) == (j < g)
    )


@dataclass(frozen=True)
class FrobeniusCheck:
    """Newton-polygon report for one C_{phi,q} = C_q * diag(I, (1/p)I)."""

    coefficient_valuations: tuple  # str per coefficient
    slopes: tuple
    root_valuations: tuple
    raw_in_interval: bool  # root valuations within [-1, 0)
    negated_in_interval: bool  # negated valuations within (0, 1]
    hull_ambiguous: bool
    eigenvalue_one_to_precision: bool


@dataclass(frozen=True)
class ValidationReport:
    g: int
    prime: int
    precision: int
    det_units: dict
    block_anti_diagonal: dict
    frobenius: dict

    def to_json_dict(self) -> dict:
        return {
            "block_anti_diagonal": dict(self.block_anti_diagonal),
            "det_units": dict(self.det_units),
            "frobenius": {
                q: {
                    "coefficient_valuations": list(f.coefficient_valuations),
                    "eigenvalue_one_to_precision": f.eigenvalue_one_to_precision,
                    "hull_ambiguous": f.hull_ambiguous,
                    "negated_in_interval": f.negated_in_interval,
                    "raw_in_interval": f.raw_in_interval,
                    "root_valuations": [str(v) for v in f.root_valuations],
                    "slopes": [str(s) for s in f.slopes],
                }
                for q, f in self.frobenius.items()
            },
            "g": self.g,
            "precision": self.precision,
            "prime": self.prime,
        }


@dataclass(frozen=True)
class DieudonneInput:
    """Unit-determinant matrix data for both primes above p."""

    prime: int
    g: int
    c_p: tuple
    c_pc: tuple
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        m = self.prime**self.precision
        for name in ("c_p", "c_pc"):
            raw = getattr(self, name)
            n = 2 * self.g
            if len(raw) != n or any(len(row) != n for row in raw):
                raise InputRejected(f"{name} is not {n}x{n}")
            object.__setattr__(
                self, name, tuple(tuple(x % m for x in row) for row in raw)
            )

    def modulus(self) -> int:
        return self.prime**self.precision

    def matrix(self, q: str) -> list:
        if q == "p":
            return [list(r) for r in self.c_p]
        if q == "pc":
            return [list(r) for r in self.c_pc]
        raise ValueError("prime tag must be 'p' or 'pc'")

    def inverse(self, q: str) -> list:
        return inv_mod(self.matrix(q), self.modulus(), self.prime)

    def frobenius_matrix(self, q: str) -> list:
        """C_{phi,q} = C_q * diag(I_g, (1/p) I_g) over PAdicScalar."""
        c = smat_from_int(self.matrix(q), self.prime, self.precision)
        pinv = PAdicScalar.from_int(self.prime, self.prime, self.precision).invert()
        for row in c:
            for j in range(self.g, 2 * self.g):
                row[j] = row[j] * pinv
        return c

    def validate(self) -> ValidationReport:
        """Hypothesis checks; raises InputRejected when det is not a unit."""
        dets, blocks, frobs = {}, {}, {}
        m = self.modulus()
        for q in ("p", "pc"):
            c = self.matrix(q)
            d = det_mod(c, m)
            if d % self.prime == 0:
                raise InputRejected(f"det(C_{q}) is not a p-adic unit")
            dets[q] = True
            blocks[q] = _is_block_anti_diagonal(c, self.g)
            frobs[q] = self._frobenius_check(q)
        return ValidationReport(
            self.g, self.prime, self.precision, dets, blocks, frobs
        )

    def _frobenius_check(self, q: str) -> FrobeniusCheck:
        cphi = self.frobenius_matrix(q)
        coeffs = char_poly(cphi, self.prime, self.precision)
        poly = newton_polygon(coeffs)
        rv = poly.root_valuations
        raw_ok = all(-1 <= v < 0 for v in rv)
        neg_ok = all(0 < -v <= 1 for v in rv)
        n = len(cphi)
        diff = [
            [
                cphi[i][j] - (1 if i == j else 0)
                for j in range(n)
            ]
            for i in range(n)
        ]
        zero = PAdicScalar.zero(self.prime, self.precision)
        one = PAdicScalar.one(self.prime, self.precision)
        memo = {(): one}

        def rec(cols):
            if cols in memo:
                return memo[cols]
            r = n - len(cols)
            acc = zero
            for idx, col in enumerate(cols):
                term = diff[r][col] * rec(cols[:idx] + cols[idx + 1 :])
                acc = acc - term if idx & 1 else acc + term
            memo[cols] = acc
            return acc

        det_diff = rec(tuple(range(n)))
        return FrobeniusCheck(
            coefficient_valuations=tuple(str(c.valuation()) for c in coeffs),
            slopes=poly.slopes,
            root_valuations=rv,
            raw_in_interval=raw_ok,
            negated_in_interval=neg_ok,
            hull_ambiguous=poly.ambiguous,
            eigenvalue_one_to_precision=det_diff.is_zero_at_precision,
        )


# -- polynomial matrices ---------------------------------------------------------------


class LambdaMatrix:
    """Rectangular matrix of IwasawaPoly entries, treated as immutable."""

    __slots__ = ("prime", "precision", "entries", "block_split")

    def __init__(self, prime, entries, precision=DEFAULT_PRECISION, block_split=None):
        self.prime = prime
        self.precision = precision
        self.entries = [list(row) for row in entries]
        self.block_split = block_split  # column/row count of the leading block

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def identity(cls, n, p, precision=DEFAULT_PRECISION):
        one = IwasawaPoly.const(1, p, precision)
        zero = IwasawaPoly.zero(p, precision)
        return cls(p, [[one if i == j else zero for j in range(n)] for i in range(n)], precision)

    @classmethod
    def from_int_matrix(cls, a, p, precision=DEFAULT_PRECISION):
        return cls(
            p,
            [[IwasawaPoly.const(x, p, precision) for x in row] for row in a],
            precision,
        )

    def __matmul__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        zero = IwasawaPoly.zero(self.prime, self.precision)
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    e = self.entries[i][k]
                    f = other.entries[k][j]
                    if not (e.is_zero() or f.is_zero()):
                        acc = acc + e * f
                row.append(acc)
            out.append(row)
        return LambdaMatrix(self.prime, out, self.precision)

    def submatrix(self, rows, cols) -> "LambdaMatrix":
        return LambdaMatrix(
            self.prime,
            [[self.entries[i][j] for j in cols] for i in rows],
            self.precision,
        )

    def det(self) -> IwasawaPoly:
        """Expansion down the rows with zero pruning, memoized on columns."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        one = IwasawaPoly.const(1, self.prime, self.precision)
        zero = IwasawaPoly.zero(self.prime, self.precision)
        memo = {(): one}

        def rec(cols: tuple) -> IwasawaPoly:
            if cols in memo:
                return memo[cols]
            r = n - len(cols)
            acc = zero
            for idx, c in enumerate(cols):
                e = self.entries[r][c]
                if e.is_zero():
                    continue
                sub = rec(cols[:idx] + cols[idx + 1 :])
                if sub.is_zero():
                    continue
                term = e * sub
                acc = acc - term if idx & 1 else acc + term
            memo[cols] = acc
            return acc

        return rec(tuple(range(n)))

    def eval_at(self, w: CharacterPoint) -> list:
        return [[e.evaluate(w) for e in row] for row in self.entries]

    def map(self, fn) -> "LambdaMatrix":
        return LambdaMatrix(
            self.prime,
            [[fn(e) for e in row] for row in self.entries],
            self.precision,
            self.block_split,
        )

    def __eq__(self, other):
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    __hash__ = None


# -- the tower ---------------------------------------------------------------------------


def c_step(d: DieudonneInput, q: str, r: int) -> LambdaMatrix:
    """C_{q,r} = blockdiag(I_g, Phi_{p^r}(1 + var) I_g) * C_q^{-1}."""
    if r < 1:
        raise ValueError("level must be >= 1")
    var = "X" if q == "p" else "Y"
    cinv = d.inverse(q)
    g, p, n = d.g, d.prime, d.precision
    phi_poly = shifted_cyclo_poly(p, r, var, n)
    rows = []
    for i in range(2 * g):
        row = []
        for j in range(2 * g):
            c = IwasawaPoly.const(cinv[i][j], p, n)
            row.append(c if i < g else phi_poly * c)
        rows.append(row)
    return LambdaMatrix(p, rows, n)


def h_matrix(d: DieudonneInput, q: str, r: int) -> LambdaMatrix:
    """Ordered product C_{q,r} C_{q,r-1} ... C_{q,1}."""
    acc = c_step(d, q, 1)
    for i in range(2, r + 1):
        acc = c_step(d, q, i) @ acc
    return acc


def h_matrix_sequence(d: DieudonneInput, q: str, r: int) -> list:
    """All partial products [H_{q,1}, ..., H_{q,r}] in one accumulation."""
    acc = c_step(d, q, 1)
    out = [acc]
    for i in range(2, r + 1):
        acc = c_step(d, q, i) @ acc
        out.append(acc)
    return out


def h_block(hp: LambdaMatrix, hpc: LambdaMatrix) -> LambdaMatrix:
    """4g x 4g block diagonal matrix from the two 2g x 2g halves."""
    if hp.nrows != hp.ncols or hpc.nrows != hpc.ncols or hp.nrows != hpc.nrows:
        raise ValueError("blocks must be square and of equal size")
    if not all(e.is_univariate("X") for row in hp.entries for e in row):
        raise ValueError("first block must be univariate in X")
    if not all(e.is_univariate("Y") for row in hpc.entries for e in row):
        raise ValueError("second block must be univariate in Y")
    n = hp.nrows
    p, prec = hp.prime, hp.precision
    zero = IwasawaPoly.zero(p, prec)
    rows = []
    for i in range(2 * n):
        row = []
        for j in range(2 * n):
            if i < n and j < n:
                row.append(hp.entries[i][j])
            elif i >= n and j >= n:
                row.append(hpc.entries[i - n][j - n])
            else:
                row.append(zero)
        rows.append(row)
    return LambdaMatrix(p, rows, prec, block_split=n)


def minor(h: LambdaMatrix, i: SignedIndex, j: SignedIndex) -> IwasawaPoly:
    """Determinant of the (I, J)-submatrix, ascending order, no sign factor."""
    if h.nrows % 4:
        raise ValueError("minors are defined on 4g x 4g block matrices")
    g = h.nrows // 4
    if i.weight() != 2 * g or j.weight() != 2 * g:
        raise ValueError("signed index weight must equal 2g")
    return h.submatrix(i.rows(g), j.rows(g)).det()


def laplace_det(h: LambdaMatrix, i: SignedIndex) -> IwasawaPoly:
    """det(h) via generalized expansion along the rows selected by i.

    Cross-check for the minor convention: sums sign * minor(i, j) *
    minor(i^c, j^c) over all signed column indices j.
    """
    g = h.nrows // 4
    rows = i.rows(g)
    icomp = i.complement(g)
    acc = IwasawaPoly.zero(h.prime, h.precision)
    row_sign = sum(rows)
    for j in enumerate_signed_indices(g):
        mj = minor(h, i, j)
        if mj.is_zero():
            continue
        mc = minor(h, icomp, j.complement(g))
        if mc.is_zero():
            continue
        sgn = (-1) ** (row_sign + sum(j.rows(g)))
        term = mj * mc
        acc = acc + (term if sgn > 0 else -term)
    return acc


# -- Frobenius-twisted approximants ------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    """Stabilization data for one coefficient degree between consecutive
    approximants: min valuation over matrix entries of the difference."""

    n: int
    degree: int
    bound: Fraction
    bound_is_exact: bool
    exact_zero: bool

    @property
    def min_valuation(self) -> str:
        return str(Valuation(self.bound, self.bound_is_exact))


def _poly_entries(h: LambdaMatrix, q: str) -> list:
    var = "X" if q == "p" else "Y"
    return [[e.to_dense(var) for e in row] for row in h.entries]


def m_approximant(d: DieudonneInput, q: str, n: int) -> list:
    """M_{q,n} = C_{phi,q}^(n+1) * H_{q,n}, entries as PAdicScalar coefficient
    lists (low degree first)."""
    if n < 1:
        raise ValueError("level must be >= 1")
    p, prec = d.prime, d.precision
    power = smat_pow(d.frobenius_matrix(q), n + 1, p, prec)
    hpoly = _poly_entries(h_matrix(d, q, n), q)
    size = 2 * d.g
    zero = PAdicScalar.zero(p, prec)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            deg = max(len(hpoly[k][j]) for k in range(size))
            acc = [zero] * deg
            for k in range(size):
                s = power[i][k]
                for t, c in enumerate(hpoly[k][j]):
                    if c:
                        acc[t] = acc[t] + s * PAdicScalar.from_int(c, p, prec)
            row.append(acc)
        out.append(row)
    return out


def convergence_diagnostic(d: DieudonneInput, q: str, n_max: int) -> list:
    """Per-degree stabilization of the approximant sequence M_{q,1..n_max}."""
    rows = []
    prev = m_approximant(d, q, 1)
    for n in range(1, n_max):
        cur = m_approximant(d, q, n + 1)
        deg = max(len(e) for r in cur for e in r)
        for t in range(deg):
            best = None
            exact_zero = True
            for i in range(len(cur)):
                for j in range(len(cur)):
                    a = cur[i][j][t] if t < len(cur[i][j]) else None
                    b = prev[i][j][t] if t < len(prev[i][j]) else None
                    if a is None and b is None:
                        continue
                    if a is None:
                        diff = -b
                    elif b is None:
                        diff = a
                    else:
                        diff = a - b
                    if not diff.is_zero_at_precision:
                        exact_zero = False
                    v = diff.valuation()
                    if best is None or v.bound < best.bound:
                        best = v
            if best is None:
                best = Valuation(Fraction(d.precision), exact=False)
            rows.append(
                ConvergenceRow(
                    n=n,
                    degree=t,
                    bound=best.bound,
                    bound_is_exact=best.exact,
                    exact_zero=exact_zero,
                )
            )
        prev = cur
    return rows
