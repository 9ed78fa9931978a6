"""Closed-form evaluations for block-anti-diagonal input matrices.

When C_q = [[0, A_1], [A_2, 0]], each step matrix becomes
C_{q,n} = [[0, B_1], [Phi_{p^n}(1 + var) B_2, 0]] with B_1 = A_2^{-1} and
B_2 = A_1^{-1}, and the product H_{q,k} evaluated at zeta_{p^k} - 1 collapses
to a single nonzero g x g block carried by the telescoping constant

    delta_k = (eps_1/eps_2)(eps_3/eps_4) ... ,    eps_j = zeta_{p^j} - 1.

Every ratio eps_j/eps_{j+1} equals a cyclotomic polynomial value at a root
of unity, so delta_k is computed as a division-free product of p-term sums.
The parity of k decides whether the block lands on the left or right half,
which is the source of the four-way vanishing pattern over (r, s).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CycloElement, phi, phi_value_at_root
from .iwasawa import CharacterPoint, IwasawaPoly
from .logmatrix import (
    DieudonneInput,
    InputRejected,
    LambdaMatrix,
    SignedIndex,
    det_mod,
    enumerate_signed_indices,
    h_matrix_sequence,
    index_i0,
    index_i1,
    inv_mod,
    mat_identity,
    mat_mul,
)
from .padic import DEFAULT_PRECISION


# -- delta constants ------------------------------------------------------------


@lru_cache(maxsize=None)
def delta_element(p: int, k: int, precision: int = DEFAULT_PRECISION) -> CycloElement:
    """The telescoping constant delta_k, as an element of Q_p(zeta_{p^k}).

    delta_k = prod of eps_j/eps_{j+1} over odd j with j + 1 <= k; each ratio
    is the value of a cyclotomic polynomial at zeta_{p^k}, a p-term sum of
    roots of unity, so no division is performed.
    """
    if k < 1:
        raise ValueError("index must be >= 1")
    acc = CycloElement.one(p, k, precision)
    for j in range(1, k, 2):
        acc = acc * phi_value_at_root(p, k - j, k, 1, precision)
    return acc


def delta_valuation(p: int, k: int) -> Fraction:
    """Exact valuation of delta_k: sum of 1/phi(p^j) - 1/phi(p^(j+1))."""
    total = Fraction(0)
    for j in range(1, k, 2):
        total += Fraction(1, phi(p, j)) - Fraction(1, phi(p, j + 1))
    return total


# -- block data --------------------------------------------------------------------


@dataclass(frozen=True)
class BlockData:
    """The pair (B_1, B_2) per prime, extracted from anti-diagonal C_q."""

    prime: int
    g: int
    precision: int
    b1: dict  # q -> g x g integer matrix (tuple rows)
    b2: dict
    source: DieudonneInput

    @classmethod
    def from_dieudonne(cls, d: DieudonneInput) -> "BlockData":
        g, m = d.g, d.modulus()
        b1, b2 = {}, {}
        for q in ("p", "pc"):
            c = d.matrix(q)
            for i in range(2 * g):
                for j in range(2 * g):
                    if (i < g) == (j < g) and c[i][j]:
                        raise InputRejected(
                            f"C_{q} is not block anti-diagonal"
                        )
            a1 = [[c[i][j + g] for j in range(g)] for i in range(g)]
            a2 = [[c[i + g][j] for j in range(g)] for i in range(g)]
            b1[q] = tuple(map(tuple, inv_mod(a2, m, d.prime)))
            b2[q] = tuple(map(tuple, inv_mod(a1, m, d.prime)))
        return cls(d.prime, g, d.precision, b1, b2, d)

    def unit_block(self, q: str, k: int) -> list:
        """The integer factor of H_{q,k}(zeta_{p^k}-1): (B1 B2)^(floor(k/2))
        times a trailing B1 when k is odd."""
        m = self.prime**self.precision
        b1 = [list(r) for r in self.b1[q]]
        b2 = [list(r) for r in self.b2[q]]
        prod = mat_mul(b1, b2, m)
        acc = mat_identity(self.g)
        for _ in range((k - 1) // 2 if k % 2 else k // 2):
            acc = mat_mul(acc, prod, m)
        if k % 2:
            acc = mat_mul(acc, b1, m)
        return acc


def closed_form_h(b: BlockData, q: str, k: int) -> list:
    """H_{q,k}(zeta_{p^k} - 1) as a 2g x 2g matrix of CycloElement.

    Odd k puts delta_k * (B1 B2)^((k-1)/2) B1 in the top-right block;
    even k puts delta_k * (B1 B2)^(k/2) in the top-left; all else is zero.
    """
    if k < 1:
        raise ValueError("level must be >= 1")
    g, p, n = b.g, b.prime, b.precision
    delta = delta_element(p, k, n)
    blk = b.unit_block(q, k)
    zero = CycloElement.zero(p, k, n)
    out = [[zero for _ in range(2 * g)] for _ in range(2 * g)]
    col0 = g if k % 2 else 0
    for i in range(g):
        for j in range(g):
            out[i][col0 + j] = delta.scale(blk[i][j])
    return out


def closed_form_h_epsilon(b: BlockData, q: str, k: int) -> list:
    """Same value, but every entry as a coefficient vector in powers of
    eps_k = zeta_{p^k} - 1, for exact large-scale comparison."""
    g, p, n = b.g, b.prime, b.precision
    m = p**n
    d = phi(p, k)
    delta_vec = list(delta_element(p, k, n).epsilon_basis())
    blk = b.unit_block(q, k)
    zero_vec = [0] * d
    out = [[zero_vec for _ in range(2 * g)] for _ in range(2 * g)]
    col0 = g if k % 2 else 0
    for i in range(g):
        for j in range(g):
            c = blk[i][j]
            out[i][col0 + j] = [(x * c) % m for x in delta_vec]
    return out


def direct_h_epsilon(h: LambdaMatrix, k: int, q: str) -> list:
    """Entrywise value of a univariate H_{q,k} at zeta_{p^k} - 1, in the
    eps-power basis, via polynomial remainder (no Galois conjugates)."""
    var = "X" if q == "p" else "Y"
    return [[e.eval_epsilon(k, var) for e in row] for row in h.entries]


# -- parity pattern -------------------------------------------------------------------


def surviving_index(g: int, r: int, s: int) -> SignedIndex:
    """The one column index whose I_0-row minor survives at orders (r, s)."""
    if r < 1 or s < 1:
        raise ValueError("orders must be >= 1")
    low = tuple(range(1, g + 1))
    high = tuple(range(g + 1, 2 * g + 1))
    return SignedIndex(high if r % 2 else low, high if s % 2 else low)


@dataclass(frozen=True)
class MinorVerdict:
    index: SignedIndex
    label: str
    kind: str  # symbolic-zero | precision-zero | nonzero
    valuation: Fraction | None
    is_survivor: bool


@dataclass(frozen=True)
class PatternReport:
    r: int
    s: int
    verdicts: tuple
    passed: bool
    survivor_valuation: Fraction | None

    def failures(self) -> list:
        return [
            v
            for v in self.verdicts
            if (v.kind == "nonzero") != v.is_survivor
        ]


def _block_minor_parts(hp, hpc, g, jp, jpc):
    """Split the I_0-row minor of blockdiag(hp, hpc) into its X and Y
    factor determinants; None when the column split is off balance."""
    if len(jp) != g:
        return None
    ax = hp.submatrix(range(g), [j - 1 for j in jp])
    by = hpc.submatrix(range(g), [j - 1 for j in jpc])
    return ax.det(), by.det()


def verify_vanishing_pattern(
    b: BlockData, r: int, s: int, theta: CharacterPoint | None = None
) -> PatternReport:
    """Check minor(H_{r,s}, I_0, J) at theta for every signed index J.

    Non-survivors must vanish symbolically (degenerate shape or divisibility
    by the relevant cyclotomic polynomial); the survivor must be nonzero,
    and its valuation is reported.  Unit Galois twists do not change any
    verdict, so the default theta uses exponent 1 in both coordinates.
    """
    if theta is None:
        theta = CharacterPoint(b.prime, r, s)
    if theta.r != r or theta.s != s:
        raise ValueError("character orders must match the (r, s) cell")
    g, p, n = b.g, b.prime, b.precision
    hp = h_matrix_sequence(b.source, "p", r)[-1]
    hpc = h_matrix_sequence(b.source, "pc", s)[-1]
    survivor = surviving_index(g, r, s)
    verdicts = []
    survivor_val = None
    for j in enumerate_signed_indices(g):
        parts = _block_minor_parts(hp, hpc, g, j.jp, j.jpc)
        if parts is None:
            verdicts.append(
                MinorVerdict(j, j.label(g), "symbolic-zero", None, j == survivor)
            )
            continue
        detx, dety = parts
        if (
            detx.is_zero()
            or dety.is_zero()
            or detx.divisible_by_shifted_cyclo(r, "X")
            or dety.divisible_by_shifted_cyclo(s, "Y")
        ):
            verdicts.append(
                MinorVerdict(j, j.label(g), "symbolic-zero", None, j == survivor)
            )
            continue
        vx = CycloElement.from_epsilon_basis(p, r, detx.eval_epsilon(r, "X"), n)
        vy = CycloElement.from_epsilon_basis(p, s, dety.eval_epsilon(s, "Y"), n)
        if vx.is_zero() or vy.is_zero():
            verdicts.append(
                MinorVerdict(j, j.label(g), "precision-zero", None, j == survivor)
            )
            continue
        val = vx.valuation().as_fraction() + vy.valuation().as_fraction()
        verdicts.append(MinorVerdict(j, j.label(g), "nonzero", val, j == survivor))
        if j == survivor:
            survivor_val = val
    passed = all((v.kind == "nonzero") == v.is_survivor for v in verdicts)
    return PatternReport(r, s, tuple(verdicts), passed, survivor_val)


# -- basis-change invariance -------------------------------------------------------------


def _is_block_diagonal(mat: list, g: int) -> bool:
    return all(
        mat[i][j] == 0
        for i in range(2 * g)
        for j in range(2 * g)
        if (i < g) != (j < g)
    )


def conjugate_basis(c: list, basis: list, p: int, precision: int = DEFAULT_PRECISION):
    """Return basis * C * basis^{-1} and whether anti-diagonality survived.

    The change of basis must be block diagonal with unit-determinant blocks;
    anything else is rejected as incompatible with the filtration.
    """
    n = len(c)
    if n % 2:
        raise ValueError("even dimension required")
    g = n // 2
    m = p**precision
    if not _is_block_diagonal(basis, g):
        raise InputRejected("change of basis must be block diagonal")
    for blk in (
        [row[:g] for row in basis[:g]],
        [row[g:] for row in basis[g:]],
    ):
        if det_mod(blk, m) % p == 0:
            raise InputRejected("change-of-basis block is not invertible")
    conj = mat_mul(mat_mul(basis, c, m), inv_mod(basis, m, p), m)
    was_anti = all(
        c[i][j] % m == 0 for i in range(n) for j in range(n) if (i < g) == (j < g)
    )
    is_anti = all(
        conj[i][j] == 0 for i in range(n) for j in range(n) if (i < g) == (j < g)
    )
    return conj, {"input_anti_diagonal": was_anti, "output_anti_diagonal": is_anti}


_ROW_SETS = {"top": "upper half", "bottom": "lower half", "full": "all", "empty": "none"}


def kernel_invariance_check(values: list, basis: list, j: str, p: int,
                            precision: int = DEFAULT_PRECISION) -> dict:
    """Vanishing-locus invariance under a block-diagonal change of basis.

    ``values`` is a 2g x m matrix (entries support is_zero, int scaling and
    addition); the locus is the set of columns whose rows selected by ``j``
    are all zero.  Only the four unmixed row selections are covered.
    """
    if j not in _ROW_SETS:
        raise ValueError(
            f"row selection {j!r} not covered: mixed selections are outside "
            "the invariance statement"
        )
    rows = len(values)
    if rows % 2:
        raise ValueError("even row count required")
    g = rows // 2
    m = p**precision
    if not _is_block_diagonal(basis, g):
        raise InputRejected("change of basis must be block diagonal")
    for blk in (
        [row[:g] for row in basis[:g]],
        [row[g:] for row in basis[g:]],
    ):
        if det_mod(blk, m) % p == 0:
            raise InputRejected("change-of-basis block is not invertible")
    sel = {
        "top": range(g),
        "bottom": range(g, 2 * g),
        "full": range(2 * g),
        "empty": range(0),
    }[j]
    ncols = len(values[0]) if rows else 0

    def locus(mat):
        return {
            col
            for col in range(ncols)
            if all(mat[i][col].is_zero() for i in sel)
        }

    transformed = []
    for i in range(rows):
        row = []
        for col in range(ncols):
            acc = values[0][col] * basis[i][0]
            for t in range(1, rows):
                if basis[i][t]:
                    acc = acc + values[t][col] * basis[i][t]
            row.append(acc)
        transformed.append(row)
    before, after = locus(values), locus(transformed)
    return {
        "selection": j,
        "locus_before": sorted(before),
        "locus_after": sorted(after),
        "invariant": before == after,
    }
