import random
from fractions import Fraction

import pytest

from iwalog.cyclotomic import CycloElement
from iwalog.iwasawa import CharacterPoint, IwasawaPoly, shifted_cyclo_poly
from iwalog.logmatrix import (
    ConvergenceRow,
    DieudonneInput,
    InputRejected,
    LambdaMatrix,
    SignedIndex,
    _inv_gauss,
    c_step,
    char_poly,
    convergence_diagnostic,
    det_mod,
    enumerate_signed_indices,
    h_block,
    h_matrix,
    index_i0,
    index_i1,
    inv_mod,
    laplace_det,
    m_approximant,
    mat_identity,
    mat_mul,
    minor,
    newton_polygon,
)
from iwalog.padic import PAdicScalar

ELLIPTIC = [[0, -1], [1, 0]]


def elliptic_input(p=3, N=16):
    return DieudonneInput(p, 1, tuple(map(tuple, ELLIPTIC)), tuple(map(tuple, ELLIPTIC)), N)


def random_unit_matrix(rng, n, p, N):
    m = p**N
    while True:
        a = [[rng.randrange(m) for _ in range(n)] for _ in range(n)]
        if det_mod(a, m) % p:
            return a


# -- integer matrix layer ------------------------------------------------------


def test_det_and_inverse_small():
    m = 3**10
    a = [[2, 1], [1, 1]]
    assert det_mod(a, m) == 1
    inv = inv_mod(a, m, 3)
    assert mat_mul(a, inv, m) == mat_identity(2)


def test_inverse_seeded_and_gauss_agrees():
    rng = random.Random(41)
    for p, n in ((3, 2), (3, 4), (5, 3)):
        N = 12
        m = p**N
        a = random_unit_matrix(rng, n, p, N)
        inv = inv_mod(a, m, p)
        assert mat_mul(a, inv, m) == mat_identity(n)
        assert _inv_gauss(a, m, p) == inv


def test_non_unit_determinant_rejected():
    with pytest.raises(InputRejected):
        inv_mod([[3, 0], [0, 1]], 3**8, 3)


# -- validation -----------------------------------------------------------------


def test_validate_elliptic():
    d = elliptic_input()
    rep = d.validate()
    assert rep.det_units == {"p": True, "pc": True}
    assert rep.block_anti_diagonal == {"p": True, "pc": True}
    f = rep.frobenius["p"]
    assert f.root_valuations == (Fraction(-1, 2), Fraction(-1, 2))
    assert f.raw_in_interval and f.negated_in_interval
    assert not f.eigenvalue_one_to_precision
    assert not f.hull_ambiguous


def test_validate_rejects_non_unit():
    d = DieudonneInput(3, 1, ((3, 0), (0, 1)), ((0, 1), (1, 0)), 8)
    with pytest.raises(InputRejected):
        d.validate()


def test_validate_identity_warns_eigenvalue_one():
    ident = tuple(tuple(row) for row in mat_identity(4))
    d = DieudonneInput(3, 2, ident, ident, 12)
    rep = d.validate()
    f = rep.frobenius["p"]
    assert f.eigenvalue_one_to_precision
    assert not rep.block_anti_diagonal["p"]
    assert not f.raw_in_interval and not f.negated_in_interval


def test_input_shape_rejected():
    with pytest.raises(InputRejected):
        DieudonneInput(3, 1, ((1, 0, 0), (0, 1, 0)), ((1, 0), (0, 1)), 8)


def test_char_poly_elliptic():
    d = elliptic_input()
    coeffs = char_poly(d.frobenius_matrix("p"), 3, 16)
    # x^2 + 1/3
    assert coeffs[0].val == -1 and coeffs[0].unit == 1
    assert coeffs[1].is_zero_at_precision
    assert coeffs[2].val == 0 and coeffs[2].unit == 1


def test_newton_polygon_identity_frobenius():
    d = DieudonneInput(3, 1, ((1, 0), (0, 1)), ((1, 0), (0, 1)), 16)
    f = d.validate().frobenius["p"]
    assert sorted(f.root_valuations) == [Fraction(-1), Fraction(0)]


# -- tower construction ------------------------------------------------------------


def test_c_step_elliptic_frozen():
    d = elliptic_input()
    c = c_step(d, "p", 1)
    m = 3**16
    assert c.entries[0][0].is_zero()
    assert c.entries[0][1] == IwasawaPoly.const(1, 3, 16)
    assert c.entries[1][1].is_zero()
    # -(X^2 + 3X + 3)
    expect = IwasawaPoly.from_x_dense([m - 3, m - 3, m - 1], 3, 16)
    assert c.entries[1][0] == expect


def test_c_step_trivial_character_is_diag_p_times_inverse():
    rng = random.Random(7)
    p, N, g = 3, 12, 2
    mat = random_unit_matrix(rng, 2 * g, p, N)
    d = DieudonneInput(p, g, tuple(map(tuple, mat)), tuple(map(tuple, mat)), N)
    c = c_step(d, "p", 2)
    triv = CharacterPoint(p, 0, 0)
    got = [[e.evaluate(triv).as_scalar().residue() for e in row] for row in c.entries]
    cinv = d.inverse("p")
    diag = [[(p if i >= g else 1) if i == j else 0 for j in range(2 * g)] for i in range(2 * g)]
    assert got == mat_mul(diag, cinv, p**N)


def test_h_matrix_elliptic_level_two_frozen():
    d = elliptic_input()
    h = h_matrix(d, "p", 2)
    phi1 = shifted_cyclo_poly(3, 1, "X", 16)
    phi2 = shifted_cyclo_poly(3, 2, "X", 16)
    assert h.entries[0][0] == -phi1
    assert h.entries[1][1] == -phi2
    assert h.entries[0][1].is_zero() and h.entries[1][0].is_zero()


def test_h_matrix_level_one_is_c_step():
    d = elliptic_input()
    assert h_matrix(d, "p", 1) == c_step(d, "p", 1)


def test_h_matrix_degree_bound():
    d = elliptic_input(3, 12)
    h = h_matrix(d, "p", 3)
    bound = sum((3 - 1) * 3 ** (i - 1) for i in range(1, 4))
    assert max(e.deg_x for row in h.entries for e in row) <= bound


def test_lower_half_vanishing_seeded():
    rng = random.Random(1913)
    p, N = 3, 12
    for g in (1, 2):
        for _ in range(3):
            mat = random_unit_matrix(rng, 2 * g, p, N)
            d = DieudonneInput(p, g, tuple(map(tuple, mat)), tuple(map(tuple, mat)), N)
            for r in (1, 2):
                h = h_matrix(d, "p", r)
                # construction-level divisibility of the bottom rows
                for i in range(g, 2 * g):
                    for e in h.entries[i]:
                        assert e.divisible_by_shifted_cyclo(r)
                # and exact vanishing at a character of exact order p^r
                w = CharacterPoint(p, r, 0, a=rng.choice([1, 2]))
                vals = h.eval_at(w)
                for i in range(g, 2 * g):
                    assert all(v.is_zero() for v in vals[i])


def test_eval_h_level_one_at_zeta3():
    d = elliptic_input()
    h = h_matrix(d, "p", 1)
    vals = h.eval_at(CharacterPoint(3, 1, 0))
    assert vals[0][0].is_zero() and vals[1][0].is_zero() and vals[1][1].is_zero()
    assert vals[0][1] == CycloElement.one(3, 1, 16)


def test_eval_h_level_two_at_zeta9():
    d = elliptic_input()
    h = h_matrix(d, "p", 2)
    vals = h.eval_at(CharacterPoint(3, 2, 0))
    # top-left entry is -phi_3(zeta_9) = -eps_1/eps_2, valuation 1/3
    assert vals[0][0].valuation().as_fraction() == Fraction(1, 3)
    eps1 = CycloElement.epsilon(3, 1, 16).embed(2)
    eps2 = CycloElement.epsilon(3, 2, 16)
    assert (-vals[0][0]) * eps2 == eps1
    assert vals[0][1].is_zero() and vals[1][0].is_zero() and vals[1][1].is_zero()


# -- signed indices and minors -------------------------------------------------------


def test_enumerate_counts():
    assert len(enumerate_signed_indices(1)) == 6
    assert len(enumerate_signed_indices(2)) == 70
    assert len(enumerate_signed_indices(3)) == 924


def test_distinguished_labels():
    idx = enumerate_signed_indices(1)
    labels = {i.label(1) for i in idx}
    assert {"I0", "I1", "mix01", "mix10", "full_p", "full_pc"} <= labels
    assert index_i0(2).label(2) == "I0"
    assert index_i1(2).label(2) == "I1"
    assert SignedIndex((3, 4), (1, 2)).label(2) == "mix10"


def test_index_rows_and_complement():
    i = SignedIndex((1,), (2,))
    assert i.rows(1) == [0, 3]
    assert i.complement(1) == SignedIndex((2,), (1,))


def test_minor_identity_matrix():
    h = LambdaMatrix.identity(4, 3, 10)
    for i in enumerate_signed_indices(1):
        for j in enumerate_signed_indices(1):
            expect = 1 if i == j else 0
            assert minor(h, i, j) == expect


def test_minor_elliptic_level_one_frozen():
    d = elliptic_input()
    h = h_block(h_matrix(d, "p", 1), h_matrix(d, "pc", 1))
    i0, i1 = index_i0(1), index_i1(1)
    assert minor(h, i0, i1) == 1
    assert minor(h, i0, i0).is_zero()


def test_minor_eval_commutes():
    rng = random.Random(55)
    p, N, g = 3, 12, 1
    mat = random_unit_matrix(rng, 2, p, N)
    mat2 = random_unit_matrix(rng, 2, p, N)
    d = DieudonneInput(p, g, tuple(map(tuple, mat)), tuple(map(tuple, mat2)), N)
    h = h_block(h_matrix(d, "p", 1), h_matrix(d, "pc", 2))
    w = CharacterPoint(p, 1, 2)
    for i in (index_i0(1), index_i1(1)):
        for j in enumerate_signed_indices(1):
            lhs = minor(h, i, j).evaluate(w)
            sub = h.submatrix(i.rows(g), j.rows(g))
            e = sub.eval_at(w)
            rhs = e[0][0] * e[1][1] - e[0][1] * e[1][0]
            assert lhs == rhs


def test_laplace_expansion_matches_brute_force_det():
    rng = random.Random(99)
    p, N = 3, 10
    mat = random_unit_matrix(rng, 2, p, N)
    mat2 = random_unit_matrix(rng, 2, p, N)
    d = DieudonneInput(p, 1, tuple(map(tuple, mat)), tuple(map(tuple, mat2)), N)
    h = h_block(h_matrix(d, "p", 2), h_matrix(d, "pc", 1))
    full = h.det()
    assert laplace_det(h, index_i0(1)) == full
    assert laplace_det(h, SignedIndex((1, 2), ())) == full


def test_h_block_shape_checks():
    d = elliptic_input()
    hp = h_matrix(d, "p", 1)
    hpc = h_matrix(d, "pc", 1)
    hb = h_block(hp, hpc)
    assert hb.nrows == 4 and hb.block_split == 2
    zero = IwasawaPoly.zero(3, 16)
    assert hb.entries[0][2] == zero and hb.entries[3][1] == zero
    with pytest.raises(ValueError):
        h_block(hp, hp)  # second block is in the wrong variable
    ident = LambdaMatrix.identity(2, 3, 16)
    assert h_block(ident, ident).entries[2][2] == IwasawaPoly.const(1, 3, 16)


# -- approximants ---------------------------------------------------------------------


def test_m_approximant_level_one_is_direct_product():
    d = elliptic_input(3, 20)
    m1 = m_approximant(d, "p", 1)
    # C_phi^2 = [[-1/3, 0], [0, -1/3]] for the elliptic matrix
    cphi = d.frobenius_matrix("p")
    sq = [[cphi[0][0] * cphi[0][0] + cphi[0][1] * cphi[1][0], None], [None, None]]
    assert sq[0][0].val == -1
    # entry (0,0) of M_1: C_phi^2 row 0 times column 0 of C_{p,1}
    c1 = c_step(d, "p", 1)
    col00 = c1.entries[0][0].to_dense("X")
    assert col00 == []
    # frozen check: M_1[0][0] = (-1/3) * 0 + 0 * (-(X^2+3X+3)) has degree 0 terms only
    entry = m1[0][1]
    assert entry[0].val == -1  # (-1/3) * 1 at degree 0


def test_m_approximant_degree_zero_stabilizes_exactly():
    d = elliptic_input(3, 20)
    rows = convergence_diagnostic(d, "p", 3)
    deg0 = [r for r in rows if r.degree == 0]
    assert deg0 and all(r.exact_zero for r in deg0)


def test_convergence_valuations_trend_upward_elliptic():
    # The anti-diagonal structure alternates which entry carries the
    # difference, so valuations sawtooth with period 2; each parity class
    # is nondecreasing and the sequence drifts upward overall.
    d = elliptic_input(3, 32)
    rows = convergence_diagnostic(d, "p", 6)
    by_degree = {}
    for r in rows:
        if r.bound_is_exact:
            by_degree.setdefault(r.degree, []).append((r.n, r.bound))
    assert by_degree, "expected some exactly-known difference valuations"
    for degree, pairs in by_degree.items():
        for parity in (0, 1):
            bounds = [b for n, b in sorted(pairs) if n % 2 == parity]
            assert bounds == sorted(bounds), f"degree {degree} regressed"
    first = min(b for n, b in by_degree[1] if n == 1)
    last = min(b for n, b in by_degree[1] if n == 5)
    assert last > first


def test_convergence_row_formats_valuation():
    row = ConvergenceRow(1, 0, Fraction(20), False, True)
    assert row.min_valuation == ">=20"
