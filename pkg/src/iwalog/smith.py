"""Brute-force coinvariant ranks via elimination over Z/p^N.

The quotient ring Z_p[X, Y]/(omega_n(X), omega_n(Y)) is free of rank p^(2n)
over Z_p with monomial basis X^i Y^j, i, j < p^n.  The rank of a cyclic
module presented by f is p^(2n) minus the Q_p-rank of the relation matrix
whose rows are f * X^i Y^j reduced into that basis.

Elimination pivots on the entry of least p-adic valuation.  Every pivot of
valuation v < N certifies a nonzero entry of Q_p, so the computed matrix
rank is a lower bound and the quotient rank an upper bound; pivots at or
beyond the zero threshold set the ambiguity flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .iwasawa import IwasawaPoly
from .padic import val_p
from .polyint import binom_row, pdivmod_monic


@dataclass(frozen=True)
class RankResult:
    rank: int
    pivot_valuations: tuple
    ambiguous: bool


def valuation_pivot_rank(rows: list, p: int, precision: int, tau=None) -> RankResult:
    """Q_p-rank of an integer matrix known modulo p^precision.

    ``tau`` is the reporting threshold: any pivot with valuation in
    [tau, precision) flags the result as precision-sensitive.
    """
    m = p**precision
    work = [[x % m for x in row] for row in rows]
    if tau is None:
        tau = Fraction(precision, 2)
    pivots = []
    ambiguous = False
    cols_live = set(range(len(work[0]))) if work and work[0] else set()
    while work and cols_live:
        best = None
        for i, row in enumerate(work):
            for j in cols_live:
                e = row[j]
                if e:
                    v = val_p(e, p)
                    if best is None or v < best[2]:
                        best = (i, j, v)
            if best is not None and best[2] == 0:
                break
        if best is None:
            break
        bi, bj, bv = best
        if bv >= tau:
            ambiguous = True
        pivots.append(bv)
        unit = work[bi][bj] // p**bv
        inv = pow(unit, -1, m)
        prow = [(x * inv) % m for x in work[bi]]
        step = p**bv
        reduced = []
        for i, row in enumerate(work):
            if i == bi:
                continue
            e = row[bj]
            if e:
                f = e // step
                row = [(x - f * y) % m for x, y in zip(row, prow)]
            reduced.append(row)
        work = reduced
        cols_live.discard(bj)
    return RankResult(len(pivots), tuple(pivots), ambiguous)


def _reduce_bivariate(terms: dict, p: int, n: int, modulus: int) -> dict:
    """Reduce a term dict modulo (omega_n(X), omega_n(Y)) to degrees < p^n."""
    q = p**n
    # omega_n as a dense monic polynomial of degree q: (1+T)^q - 1
    wdense = binom_row(q, 1, modulus)
    wdense[0] = 0
    # X-direction: group by Y-degree
    by_y = {}
    for (i, j), c in terms.items():
        col = by_y.setdefault(j, {})
        col[i] = (col.get(i, 0) + c) % modulus
    out = {}
    for j, col in by_y.items():
        dense = [0] * (max(col) + 1)
        for i, c in col.items():
            dense[i] = c
        _, r = pdivmod_monic(dense, wdense, modulus)
        for i, c in enumerate(r):
            if c:
                out[(i, j)] = (out.get((i, j), 0) + c) % modulus
    # Y-direction
    by_x = {}
    for (i, j), c in out.items():
        col = by_x.setdefault(i, {})
        col[j] = c
    final = {}
    for i, col in by_x.items():
        dense = [0] * (max(col) + 1)
        for j, c in col.items():
            dense[j] = c
        _, r = pdivmod_monic(dense, wdense, modulus)
        for j, c in enumerate(r):
            if c:
                final[(i, j)] = c
    return final


def coinvariant_rank_smith(f: IwasawaPoly, n: int, tau=None) -> RankResult:
    """Z_p-rank of Lambda/(f, omega_n(X), omega_n(Y)) by direct elimination.

    Returns the rank together with the pivot valuations of the relation
    matrix; rank = p^(2n) - matrix rank.
    """
    p = f.prime
    modulus = p**f.precision
    q = p**n
    dim = q * q
    rows = []
    for a in range(q):
        for b in range(q):
            shifted = {(i + a, j + b): c for (i, j), c in f.terms.items()}
            red = _reduce_bivariate(shifted, p, n, modulus)
            row = [0] * dim
            for (i, j), c in red.items():
                row[i * q + j] = c
            rows.append(row)
    res = valuation_pivot_rank(rows, p, f.precision, tau)
    return RankResult(dim - res.rank, res.pivot_valuations, res.ambiguous)
