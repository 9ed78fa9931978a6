"""Elimination-rank oracle tests."""

import random
from fractions import Fraction

from iwalog.iwasawa import IwasawaPoly
from iwalog.smith import RankResult, coinvariant_rank_smith, valuation_pivot_rank


def frac_rank(rows):
    """Exact rank over Q by fraction-free Gaussian elimination."""
    work = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    row_at = 0
    for j in range(cols):
        piv = None
        for i in range(row_at, len(work)):
            if work[i][j] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[row_at], work[piv] = work[piv], work[row_at]
        pr = work[row_at]
        for i in range(row_at + 1, len(work)):
            if work[i][j] != 0:
                f = work[i][j] / pr[j]
                work[i] = [a - f * b for a, b in zip(work[i], pr)]
        row_at += 1
        rank += 1
    return rank


def test_identity_full_rank():
    rows = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    res = valuation_pivot_rank(rows, 3, 16)
    assert res == RankResult(4, (0, 0, 0, 0), False)


def test_scalar_p_matrix_counts_positive_valuation_pivots():
    rows = [[3, 0], [0, 9]]
    res = valuation_pivot_rank(rows, 3, 16)
    assert res.rank == 2
    assert sorted(res.pivot_valuations) == [1, 2]
    assert not res.ambiguous


def test_dependent_rows_drop_rank():
    rows = [[1, 2], [2, 4]]
    res = valuation_pivot_rank(rows, 3, 16)
    assert res.rank == 1


def test_zero_matrix_rank_zero():
    res = valuation_pivot_rank([[0, 0], [0, 0]], 3, 16)
    assert res.rank == 0
    assert res.pivot_valuations == ()


def test_high_valuation_pivot_flags_ambiguity():
    n = 16
    rows = [[3 ** (n - 1), 0], [0, 1]]
    res = valuation_pivot_rank(rows, 3, n)
    assert res.rank == 2
    assert res.ambiguous
    # an explicit low threshold keeps small pivots unanimous
    res2 = valuation_pivot_rank([[3, 0], [0, 1]], 3, n, tau=4)
    assert not res2.ambiguous
    res3 = valuation_pivot_rank([[81, 0], [0, 1]], 3, n, tau=4)
    assert res3.ambiguous


def test_rank_matches_exact_fraction_rank_seeded():
    rng = random.Random(20260815)
    for _ in range(25):
        rows = [[rng.randrange(-9, 10) for _ in range(5)] for _ in range(4)]
        expect = frac_rank(rows)
        got = valuation_pivot_rank(rows, 3, 40)
        assert got.rank == expect
        got5 = valuation_pivot_rank(rows, 5, 40)
        assert got5.rank == expect


def test_rank_invariant_under_row_scaling_by_p():
    rng = random.Random(7)
    rows = [[rng.randrange(-4, 5) for _ in range(4)] for _ in range(4)]
    scaled = [[9 * x for x in row] for row in rows]
    a = valuation_pivot_rank(rows, 3, 40)
    b = valuation_pivot_rank(scaled, 3, 40)
    assert a.rank == b.rank


def test_quotient_by_variable_gives_column_count():
    # Lambda/(X) at level n: X^a Y^b relations leave the p^n monomials Y^b
    f = IwasawaPoly.variable("X", 3, 16)
    for n in (0, 1):
        res = coinvariant_rank_smith(f, n)
        assert res.rank == 3**n
        assert not res.ambiguous


def test_quotient_by_cyclotomic_matches_degree_count():
    p = 3
    f = IwasawaPoly.from_x_dense([3, 3, 1], p, 16)
    res = coinvariant_rank_smith(f, 1)
    assert res.rank == 6


def test_quotient_by_omega_relation_is_everything():
    # omega_1(X) already lies in the level-1 relation ideal
    p = 3
    f = IwasawaPoly.from_x_dense([0, 3, 3, 1], p, 16)
    res = coinvariant_rank_smith(f, 1)
    assert res.rank == 9


def test_quotient_by_unit_is_trivial():
    f = IwasawaPoly.const(1, 3, 16)
    assert coinvariant_rank_smith(f, 1).rank == 0


def test_quotient_by_p_is_torsion_rank_zero():
    f = IwasawaPoly.const(3, 3, 16)
    res = coinvariant_rank_smith(f, 1)
    assert res.rank == 0
    assert all(v == 1 for v in res.pivot_valuations)
