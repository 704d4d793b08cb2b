import random

import pytest

from linkq.poly import Poly, parse
from linkq.primefield import Fp, PrimeField
from linkq.ringmat import (
    RingMatrix,
    block_matrix,
    classical_adjoint,
    det,
    last_three_pfaffian_identity,
    maximal_order_pfaffians,
    pfaffian,
    pfaffian_adjoint,
    pfaffian_ell,
)

F101 = PrimeField(101)
F5 = PrimeField(5)


# -- independent oracles -------------------------------------------------------


def pf_matchings(mat):
    """Pfaffian as the signed sum over perfect matchings; independent of the
    cofactor expansion used by the module."""
    n = mat.rows
    if n == 0:
        return mat.one_elem
    if n % 2:
        return mat.zero_elem

    def rec(indices):
        if not indices:
            return mat.one_elem
        i = indices[0]
        total = mat.zero_elem
        for pos in range(1, len(indices)):
            j = indices[pos]
            entry = mat[i, j]
            if entry:
                rest = indices[1:pos] + indices[pos + 1 :]
                term = entry * rec(rest)
                # crossing sign: (-1)^(pos-1) for pairing i with the pos-th
                total = total + term if (pos - 1) % 2 == 0 else total - term
        return total

    return rec(tuple(range(n)))


def gauss_det_mod(grid, p):
    """Plain Gaussian elimination determinant over GF(p)."""
    m = [[int(v) % p for v in row] for row in grid]
    n = len(m)
    sign = 1
    detv = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        detv = detv * m[k][k] % p
        inv = pow(m[k][k], p - 2, p)
        for r in range(k + 1, n):
            factor = m[r][k] * inv % p
            if factor:
                m[r] = [(a - factor * b) % p for a, b in zip(m[r], m[k])]
    return detv * sign % p


def pf_along_col(mat, j):
    """Single fixed-column cofactor expansion (positions, not heuristics)."""
    n = mat.rows
    if n == 0:
        return mat.one_elem
    if n % 2:
        return mat.zero_elem
    total = mat.zero_elem
    for i in range(n):
        if i == j or not mat[i, j]:
            continue
        sub = mat.submatrix(drop_rows=tuple(sorted((i + 1, j + 1))), drop_cols=tuple(sorted((i + 1, j + 1))))
        heaviside = 1 if (j - i) >= 0 else 0
        sign = 1 if ((i + 1) + (j + 1) + heaviside) % 2 == 0 else -1
        term = mat[i, j] * pf_along_col(sub, 0)
        total = total + term if sign == 1 else total - term
    return total


def pf_along_row(mat, i):
    n = mat.rows
    if n == 0:
        return mat.one_elem
    if n % 2:
        return mat.zero_elem
    total = mat.zero_elem
    for j in range(n):
        if i == j or not mat[i, j]:
            continue
        sub = mat.submatrix(drop_rows=tuple(sorted((i + 1, j + 1))), drop_cols=tuple(sorted((i + 1, j + 1))))
        heaviside = 1 if (j - i) >= 0 else 0
        sign = 1 if ((i + 1) + (j + 1) + heaviside) % 2 == 0 else -1
        term = mat[i, j] * pf_along_row(sub, 0)
        total = total + term if sign == 1 else total - term
    return total


def random_fp_matrix(rng, field, rows, cols):
    return RingMatrix.over_field(field, [[rng.randrange(field.p) for _ in range(cols)] for _ in range(rows)])


def random_skew(rng, field, n):
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randrange(field.p)
            grid[i][j] = v
            grid[j][i] = (-v) % field.p
    return RingMatrix.over_field(field, grid)


def random_poly_entry(rng, field):
    # homogeneous-ish sparse entries of degree <= 2 in three variables
    terms = {}
    for _ in range(rng.randrange(3)):
        exps = [0, 0, 0]
        for _ in range(rng.randrange(3)):
            exps[rng.randrange(3)] += 1
        terms[tuple(exps)] = rng.randrange(field.p)
    return Poly(field, 3, terms)


def random_poly_skew(rng, field, n):
    zero = Poly.zero(field, 3)
    grid = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            e = random_poly_entry(rng, field)
            grid[i][j] = e
            grid[j][i] = -e
    return RingMatrix.over_polys(field, grid)


# -- submatrix ------------------------------------------------------------------


class TestSubmatrix:
    def test_drop_nothing(self):
        rng = random.Random(0)
        a = random_fp_matrix(rng, F101, 3, 4)
        assert a.submatrix() == a

    def test_three_by_three_corners(self):
        a = RingMatrix.over_field(F101, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        sub = a.submatrix(drop_rows=(2,), drop_cols=(2,))
        assert sub.grid() == [[F101(1), F101(3)], [F101(7), F101(9)]]

    def test_double_deletion_composes(self):
        rng = random.Random(1)
        a = random_fp_matrix(rng, F101, 5, 5)
        joint = a.submatrix(drop_rows=(2, 4), drop_cols=(2, 4))
        steps = a.submatrix(drop_rows=(4,), drop_cols=(4,)).submatrix(drop_rows=(2,), drop_cols=(2,))
        assert joint == steps

    def test_bad_indices(self):
        a = RingMatrix.over_field(F101, [[1, 2], [3, 4]])
        with pytest.raises(ValueError):
            a.submatrix(drop_rows=(0,))
        with pytest.raises(ValueError):
            a.submatrix(drop_cols=(3,))
        with pytest.raises(ValueError):
            a.submatrix(drop_rows=(2, 1))


# -- determinants -----------------------------------------------------------------


class TestDet:
    def test_identity(self):
        eye = RingMatrix.identity(4, RingMatrix.over_field(F101, [[0]]))
        assert det(eye) == F101(1)

    def test_empty(self):
        a = RingMatrix.over_field(F101, [])
        assert det(RingMatrix(0, 0, [], F101(0), F101(1))) == F101(1)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            det(RingMatrix.over_field(F101, [[1, 2, 3], [4, 5, 6]]))

    def test_random_vs_gauss_oracle(self):
        rng = random.Random(42)
        for _ in range(50):
            grid = [[rng.randrange(101) for _ in range(6)] for _ in range(6)]
            a = RingMatrix.over_field(F101, grid)
            assert int(det(a)) == gauss_det_mod(grid, 101)

    def test_singular(self):
        a = RingMatrix.over_field(F101, [[1, 2], [2, 4]])
        assert det(a) == F101(0)

    def test_poly_det_homogeneous_degree(self):
        # degree-1 entries => det homogeneous of degree n
        rng = random.Random(9)
        for n in (2, 3, 4):
            grid = []
            for i in range(n):
                row = []
                for j in range(n):
                    terms = {(1, 0, 0): rng.randrange(5), (0, 1, 0): rng.randrange(5), (0, 0, 1): rng.randrange(5)}
                    row.append(Poly(F5, 3, terms))
                grid.append(row)
            d = det(RingMatrix.over_polys(F5, grid))
            if d:
                assert d.homogeneous_degree() == n

    def test_poly_vs_field_det_on_constants(self):
        rng = random.Random(10)
        for _ in range(20):
            grid = [[rng.randrange(5) for _ in range(5)] for _ in range(5)]
            a_field = RingMatrix.over_field(F5, grid)
            a_poly = RingMatrix.over_polys(F5, grid)
            assert int(det(a_field)) == det(a_poly).coefficient((0, 0, 0)) % 5


# -- pfaffians ----------------------------------------------------------------------


class TestPfaffian:
    def test_empty_is_one(self):
        assert pfaffian(RingMatrix(0, 0, [], F101(0), F101(1))) == F101(1)

    def test_two_by_two(self):
        a = RingMatrix.over_field(F101, [[0, 17], [-17, 0]])
        assert pfaffian(a) == F101(17)

    def test_odd_size_is_zero(self):
        rng = random.Random(2)
        assert pfaffian(random_skew(rng, F101, 5)) == F101(0)

    def test_rejects_non_skew(self):
        with pytest.raises(ValueError):
            pfaffian(RingMatrix.over_field(F101, [[1, 2], [2, 1]]))
        with pytest.raises(ValueError):
            pfaffian(RingMatrix.over_field(F101, [[1, 2], [-2, 0]]))  # nonzero diagonal

    def test_matches_matching_oracle(self):
        rng = random.Random(3)
        for n in (2, 4, 6, 8):
            for _ in range(10):
                a = random_skew(rng, F101, n)
                assert pfaffian(a) == pf_matchings(a)

    def test_poly_entries_match_oracle(self):
        rng = random.Random(4)
        for n in (2, 4, 6):
            a = random_poly_skew(rng, F5, n)
            assert pfaffian(a) == pf_matchings(a)

    def test_pf_squared_is_det(self):
        rng = random.Random(5)
        for n in range(2, 9):
            for _ in range(10):
                a = random_skew(rng, F101, n)
                value = pfaffian(a)
                assert value * value == det(a)

    def test_row_and_column_expansions_agree(self):
        rng = random.Random(6)
        for n in (2, 4, 6):
            a = random_skew(rng, F101, n)
            expected = pfaffian(a)
            for k in range(n):
                assert pf_along_col(a, k) == expected
                assert pf_along_row(a, k) == expected

    def test_block_square(self):
        rng = random.Random(7)
        for n in range(1, 6):
            m = random_fp_matrix(rng, F101, n, n)
            zero = RingMatrix.zeros(n, n, m)
            blocked = block_matrix([[zero, m], [-m.transpose(), zero]])
            expected = det(m)
            if (n * (n - 1) // 2) % 2:
                expected = -expected
            assert pfaffian(blocked) == expected

    def test_block_non_square_is_zero(self):
        rng = random.Random(8)
        for rows, cols in ((2, 3), (3, 2), (1, 4), (4, 2)):
            m = random_fp_matrix(rng, F101, rows, cols)
            ztl = RingMatrix.zeros(rows, rows, m)
            zbr = RingMatrix.zeros(cols, cols, m)
            blocked = block_matrix([[ztl, m], [-m.transpose(), zbr]])
            assert pfaffian(blocked) == F101(0)

    def test_block_identities_poly_entries(self):
        rng = random.Random(21)
        for n in (2, 3):
            m = RingMatrix.over_polys(
                F5, [[random_poly_entry(rng, F5) for _ in range(n)] for _ in range(n)]
            )
            zero = RingMatrix.zeros(n, n, m)
            blocked = block_matrix([[zero, m], [-m.transpose(), zero]])
            expected = det(m)
            if (n * (n - 1) // 2) % 2:
                expected = -expected
            assert pfaffian(blocked) == expected
        wide = RingMatrix.over_polys(
            F5, [[random_poly_entry(rng, F5) for _ in range(3)] for _ in range(2)]
        )
        blocked = block_matrix(
            [[RingMatrix.zeros(2, 2, wide), wide], [-wide.transpose(), RingMatrix.zeros(3, 3, wide)]]
        )
        assert not pfaffian(blocked)


class TestPfaffianEll:
    def test_one_by_one(self):
        a = RingMatrix.over_field(F101, [[0]])
        assert pfaffian_ell(a, 1) == F101(1)

    def test_three_by_three_hand_values(self):
        # [[0,a,b],[-a,0,c],[-b,-c,0]]: Pf_1 = c, Pf_2 = -b, Pf_3 = a
        a, b, c = 3, 7, 11
        m = RingMatrix.over_field(F101, [[0, a, b], [-a, 0, c], [-b, -c, 0]])
        assert pfaffian_ell(m, 1) == F101(c)
        assert pfaffian_ell(m, 2) == F101(-b)
        assert pfaffian_ell(m, 3) == F101(a)

    def test_even_size_rejected(self):
        with pytest.raises(ValueError):
            pfaffian_ell(RingMatrix.over_field(F101, [[0, 1], [-1, 0]]), 1)

    def test_sweep_matches_single_calls(self):
        rng = random.Random(9)
        a = random_skew(rng, F101, 7)
        sweep = maximal_order_pfaffians(a)
        assert sweep == [pfaffian_ell(a, ell) for ell in range(1, 8)]


# -- adjoints --------------------------------------------------------------------------


class TestClassicalAdjoint:
    def test_one_by_one(self):
        a = RingMatrix.over_field(F101, [[42]])
        assert classical_adjoint(a).grid() == [[F101(1)]]

    def test_two_by_two_textbook(self):
        a = RingMatrix.over_field(F101, [[1, 2], [3, 4]])
        assert classical_adjoint(a).grid() == [[F101(4), F101(-2)], [F101(-3), F101(1)]]

    def test_defining_identity_random(self):
        rng = random.Random(11)
        for _ in range(20):
            a = random_fp_matrix(rng, F101, 4, 4)
            adj = classical_adjoint(a)
            d = det(a)
            expected = RingMatrix.identity(4, a).scale(d)
            assert a * adj == expected
            assert adj * a == expected

    def test_poly_entries(self):
        x, y, z = (Poly.variable(F5, i) for i in range(3))
        a = RingMatrix.over_polys(F5, [[x, y], [z, x]])
        adj = classical_adjoint(a)
        assert adj.grid() == [[x, -y], [-z, x]]


class TestPfaffianAdjoint:
    def test_two_by_two(self):
        a = RingMatrix.over_field(F101, [[0, 5], [-5, 0]])
        adj = pfaffian_adjoint(a)
        expected = RingMatrix.identity(2, a).scale(pfaffian(a))
        assert a * adj == expected
        assert adj * a == expected

    def test_defining_identity_random(self):
        rng = random.Random(12)
        for n in (2, 4, 6):
            for _ in range(10):
                a = random_skew(rng, F101, n)
                adj = pfaffian_adjoint(a)
                expected = RingMatrix.identity(n, a).scale(pfaffian(a))
                assert a * adj == expected
                assert adj * a == expected

    def test_block_adjoint_lemma(self):
        # [[0,M],[-M^T,0]] has Pfaffian adjoint (-1)^(n(n-1)/2) [[0,-adj(M)^T],[adj(M),0]]
        rng = random.Random(13)
        for n in (2, 3, 4):
            m = random_fp_matrix(rng, F101, n, n)
            zero = RingMatrix.zeros(n, n, m)
            blocked = block_matrix([[zero, m], [-m.transpose(), zero]])
            adj = classical_adjoint(m)
            expected = block_matrix([[zero, -adj.transpose()], [adj, zero]])
            if (n * (n - 1) // 2) % 2:
                expected = -expected
            assert pfaffian_adjoint(blocked) == expected

    def test_odd_size_rejected(self):
        with pytest.raises(ValueError):
            pfaffian_adjoint(RingMatrix.over_field(F101, [[0]]))

    def test_poly_entries(self):
        rng = random.Random(14)
        a = random_poly_skew(rng, F5, 4)
        adj = pfaffian_adjoint(a)
        expected = RingMatrix.identity(4, a).scale(pfaffian(a))
        assert a * adj == expected


class TestLastThreeIdentity:
    def test_random_m2(self):
        rng = random.Random(15)
        for _ in range(10):
            varphi = random_skew(rng, F101, 2)
            psi = random_fp_matrix(rng, F101, 2, 3)
            Phi = random_skew(rng, F101, 3)
            assert last_three_pfaffian_identity(varphi, psi, Phi)

    def test_zero_borders(self):
        varphi = random_skew(random.Random(16), F101, 4)
        psi = RingMatrix.zeros(4, 3, varphi)
        Phi = RingMatrix.zeros(3, 3, varphi)
        assert last_three_pfaffian_identity(varphi, psi, Phi)

    def test_random_m4_and_m6(self):
        rng = random.Random(17)
        for m in (4, 6):
            for _ in range(5):
                varphi = random_skew(rng, F101, m)
                psi = random_fp_matrix(rng, F101, m, 3)
                Phi = random_skew(rng, F101, 3)
                assert last_three_pfaffian_identity(varphi, psi, Phi)

    def test_poly_instance(self):
        rng = random.Random(18)
        varphi = random_poly_skew(rng, F5, 2)
        zero = Poly.zero(F5, 3)
        psi = RingMatrix.over_polys(
            F5,
            [[random_poly_entry(rng, F5) for _ in range(3)] for _ in range(2)],
        )
        gpoly = parse("x*y + 3*z^2", F5)
        Phi = RingMatrix.over_polys(F5, [[zero, gpoly, zero], [-gpoly, zero, zero], [zero, zero, zero]])
        assert last_three_pfaffian_identity(varphi, psi, Phi)

    def test_dimension_mismatch(self):
        varphi = random_skew(random.Random(19), F101, 3)  # odd m rejected
        psi = RingMatrix.zeros(3, 3, varphi)
        Phi = RingMatrix.zeros(3, 3, varphi)
        with pytest.raises(ValueError):
            last_three_pfaffian_identity(varphi, psi, Phi)
