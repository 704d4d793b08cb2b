import numpy as np
import pytest

from linkq import colon, structural
from linkq.poly import Poly, degree_basis, parse, quadric
from linkq.primefield import FrobeniusPower, PrimeField
from linkq.ringmat import RingMatrix, det, pfaffian, pfaffian_adjoint

F5 = PrimeField(5)
F11 = PrimeField(11)
F101 = PrimeField(101)

CHEAP_GRID = [(3, 3, 1), (5, 5, 1), (5, 5, 2), (7, 7, 2)]


def ctx_of(p, q, D):
    field = PrimeField(p)
    return structural.build_context(field, FrobeniusPower.of(field, q), D)


class TestBuildM:
    def test_d2_entries(self):
        m = structural.build_M(2, F5)
        assert m.grid() == [
            [parse("4*z", F5), parse("x", F5)],
            [parse("4*y", F5), parse("z", F5)],
        ]  # -z = 4z, -y = 4y mod 5

    def test_d4_row_two(self):
        m = structural.build_M(4, F101)
        row = m.row(1)
        assert row[0] == parse("98*y", F101)  # -3y
        assert row[1] == parse("100*z", F101)  # -z
        assert row[2] == parse("2*x", F101)
        assert not row[3]

    def test_entries_homogeneous_degree_one(self):
        for d in (2, 4, 6):
            m = structural.build_M(d, F101)
            for e in m.entries:
                if e:
                    assert e.homogeneous_degree() == 1

    def test_rejects_odd_or_small(self):
        with pytest.raises(ValueError):
            structural.build_M(3, F5)
        with pytest.raises(ValueError):
            structural.build_M(0, F5)

    def test_leading_minor_relation(self):
        m = structural.build_M(6, F101)
        ln = structural.build_L(4, 6, F101)
        assert m.submatrix(drop_rows=(5, 6), drop_cols=(5, 6)) == ln


class TestClosedFormA:
    def test_initial_values(self):
        for d in (2, 4, 6, 7):
            assert structural.A_closed_form(0, d, F101) == Poly.one(F101)
            assert structural.A_closed_form(1, d, F101) == parse("z", F101) * (-(d - 1))

    @pytest.mark.parametrize("p", [11, 101])
    @pytest.mark.parametrize("d", [2, 4, 6])
    def test_matches_determinants(self, p, d):
        field = PrimeField(p)
        for n in range(d + 1):
            assert structural.A_closed_form(n, d, field) == det(structural.build_L(n, d, field)), (n, d, p)

    def test_recurrence(self):
        assert structural.verify_L_recurrence(2, 2, F5)
        assert structural.verify_L_recurrence(6, 6, F101)
        assert structural.verify_L_recurrence(5, 5, F101)  # holds for odd d too

    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_det_vanishes_for_odd_d(self, d):
        assert not det(structural.build_L(d, d, F101))
        assert not structural.A_closed_form(d, d, F101)


class TestMinors:
    def test_d2_closed_forms(self):
        values = structural.minors_of_M(2, F5)
        assert values.det_full == quadric(F5)
        assert values.drop_first_row_first_col == parse("z", F5)  # 1! * z * g with g = 1
        assert values.drop_last_row_last_col == -parse("z", F5)
        assert values.drop_last_row_first_col == parse("x", F5)
        assert values.drop_first_row_last_col == -parse("y", F5)

    def test_d4_det_is_9_f_squared(self):
        values = structural.minors_of_M(4, F101)
        assert values.det_full == 9 * quadric(F101) ** 2

    def test_d6_consistency(self):
        structural.minors_of_M(6, F101)  # raises on any closed-form mismatch

    def test_characteristic_guard(self):
        with pytest.raises(ValueError):
            structural.minors_of_M(6, F5)  # needs p > d-1 = 5


class TestContext:
    def test_d1_p5_shapes(self):
        ctx = ctx_of(5, 5, 1)
        assert ctx.psi.rows == 4 and ctx.psi.cols == 3
        assert sum(1 for e in ctx.psi.entries if e) == 4
        p2 = structural.build_partial2(ctx)
        assert p2.rows == p2.cols == 7
        assert p2.is_skew_symmetric()

    def test_psi_entry_degrees(self):
        for p, q, D in CHEAP_GRID:
            ctx = ctx_of(p, q, D)
            expected = (q - 2 * D + 1) // 2
            for e in ctx.psi.entries:
                if e:
                    assert e.homogeneous_degree() == expected

    def test_Phi_entry_degrees(self):
        ctx = ctx_of(7, 7, 2)
        degree = 1 + 2 * (ctx.pi - ctx.D)
        for e in ctx.Phi.entries:
            if e:
                assert e.homogeneous_degree() == degree == ctx.q - ctx.d

    @pytest.mark.parametrize("p,q,D", CHEAP_GRID + [(11, 11, 5), (5, 25, 1), (3, 9, 1)])
    def test_pfaffian_of_phi(self, p, q, D):
        ctx = ctx_of(p, q, D)  # build_context asserts Pf(phi) = u f
        assert pfaffian(ctx.phi) == ctx.f * int(ctx.u)

    def test_hypothesis_guards(self):
        field = PrimeField(3)
        with pytest.raises(ValueError, match="characteristic too small"):
            structural.build_context(field, FrobeniusPower.of(field, 9), 2)
        with pytest.raises(ValueError):
            structural.build_context(F5, FrobeniusPower.of(PrimeField(7), 7), 1)


class TestBorderedLemmaOnRealBlocks:
    @pytest.mark.parametrize("p,q,D", [(5, 5, 1), (7, 7, 2)])
    def test_last_three_lemma_on_construction_blocks(self, p, q, D):
        from linkq.ringmat import last_three_pfaffian_identity

        ctx = ctx_of(p, q, D)
        assert last_three_pfaffian_identity(ctx.phi, ctx.psi, ctx.Phi)


class TestKeyIdentity:
    @pytest.mark.parametrize("p,q,D", CHEAP_GRID + [(11, 11, 5), (5, 25, 1)])
    def test_expand(self, p, q, D):
        res = structural.verify_key_identity(ctx_of(p, q, D))
        assert res.ok and res.mode == "expand"

    def test_diagonal_entries_zero(self):
        ctx = ctx_of(5, 5, 1)
        lhs = ctx.psi.transpose() * pfaffian_adjoint(ctx.phi) * ctx.psi + ctx.Phi.scale(ctx.f * int(ctx.u))
        for k in range(3):
            assert not lhs[k, k]

    def test_evaluate_mode(self):
        res = structural.verify_key_identity(ctx_of(7, 7, 2), mode="evaluate", seed=1)
        assert res.ok and res.mode == "evaluate"

    def test_evaluate_mode_d10(self):
        # spot-check path for the largest d the suite covers
        res = structural.verify_key_identity(ctx_of(11, 11, 5), mode="evaluate", seed=2)
        assert res.ok and res.mode == "evaluate"

    def test_evaluate_mode_detects_corruption(self):
        ctx = ctx_of(5, 5, 1)
        bad_psi = RingMatrix(
            ctx.psi.rows, ctx.psi.cols, list(ctx.psi.entries), ctx.psi.zero_elem, ctx.psi.one_elem
        )
        bad_psi.entries[0] = bad_psi.entries[0] * 2
        broken = structural.StructuralContext(
            field=ctx.field, fp=ctx.fp, D=ctx.D, d=ctx.d, s=ctx.s, b=ctx.b,
            f=ctx.f, g=ctx.g, G=ctx.G, u=ctx.u, M=ctx.M,
            phi=ctx.phi, psi=bad_psi, Phi=ctx.Phi, X=ctx.X,
        )
        assert not structural.verify_key_identity(broken, mode="evaluate", seed=3).ok
        assert not structural.verify_key_identity(broken, mode="expand").ok


class TestMaximalPfaffians:
    def test_last_three_and_degrees_on_grid(self):
        for p, q, D in CHEAP_GRID:
            sweep = structural.maximal_pfaffians(ctx_of(p, q, D))  # asserts internally
            assert len(sweep) == 4 * D + 3

    def test_first_value_frozen_d1_p5(self):
        # (-1)^D (d-1)! y^(pi+D) z G = -y^3 z G = x y^4 z + y^3 z^3 mod 5
        sweep = structural.maximal_pfaffians(ctx_of(5, 5, 1))
        assert sweep[0] == parse("x*y^4*z + y^3*z^3", F5)

    def test_exactly_2d_nonzero(self):
        for p, q, D in CHEAP_GRID:
            ctx = ctx_of(p, q, D)
            sweep = structural.maximal_pfaffians(ctx)
            assert sum(1 for v in sweep[: 2 * ctx.d] if v) == 2 * ctx.d

    def test_pfaffians_lie_in_colon_ideal(self):
        # every maximal-order Pfaffian is an element of m^[q] : f
        ctx = ctx_of(5, 5, 1)
        half_plus_one = ctx.s // 2 + 1
        piece = colon.colon_piece(ctx.f, ctx.q, half_plus_one)
        reduced, pivots = colon.rref(piece, F5)
        basis = degree_basis(half_plus_one, 3)
        for value in structural.maximal_pfaffians(ctx)[: 2 * ctx.d]:
            vec = np.array(value.graded_component(half_plus_one), dtype=np.int64)
            assert colon.in_rowspace(vec, reduced, pivots, F5)

    def test_pfaffians_generate_with_frobenius_powers(self):
        # multiplication closure of (Pfaffians + x^q,y^q,z^q) from degree
        # s/2+1 recovers every graded piece of the colon ideal up to s+1
        ctx = ctx_of(5, 5, 1)
        field, q = ctx.field, ctx.q
        start = ctx.s // 2 + 1
        gens = [v for v in structural.maximal_pfaffians(ctx) if v]
        span_rows = []
        basis = degree_basis(start, 3)
        idx = {m: k for k, m in enumerate(basis)}
        vectors = []
        for gpoly in gens:
            if gpoly.homogeneous_degree() == start:
                vectors.append(gpoly.graded_component(start))
        for m in basis:
            if max(m) >= q:
                row = [0] * len(basis)
                row[idx[m]] = 1
                vectors.append(row)
        current = np.array(vectors, dtype=np.int64)
        for i in range(start, ctx.s + 2):
            expected = colon.colon_piece(ctx.f, q, i).shape[0]
            assert colon.rank(current, field) == expected, i
            # push one degree up through multiplication by x, y, z
            nxt = degree_basis(i + 1, 3)
            stacked = []
            for v in (Poly.variable(field, k, 3) for k in range(3)):
                vm = colon.multiplication_map(v, degree_basis(i, 3), nxt)
                stacked.append(current @ vm)
            for m in nxt:
                if max(m) >= q:
                    row = np.zeros(len(nxt), dtype=np.int64)
                    row[list(nxt).index(m)] = 1
                    stacked.append(row.reshape(1, -1))
            current = np.vstack(stacked) % field.p


class TestResolutions:
    @pytest.mark.parametrize("p,q,D", CHEAP_GRID)
    def test_full_battery(self, p, q, D):
        resolution_p, resolution_r = structural.build_resolutions(ctx_of(p, q, D))
        d = 2 * D
        assert resolution_p.d1.cols == 4
        assert resolution_p.d2.rows == 4 and resolution_p.d2.cols == 2 * d + 3
        assert resolution_p.d3.rows == 2 * d + 3 and resolution_p.d3.cols == 2 * d
        assert resolution_r.phi.rows == 2 * d

    def test_euler_characteristic_matches_hilbert_q5(self):
        ctx = ctx_of(5, 5, 1)
        resolution_p, _ = structural.build_resolutions(ctx)
        hilbert = colon.quotient_hilbert(ctx.f, 5)
        for i in range(13):
            assert structural._euler_characteristic(resolution_p.shifts, i) == hilbert[i]

    def test_matrix_factorization(self):
        ctx = ctx_of(7, 7, 2)
        _, resolution_r = structural.build_resolutions(ctx)
        uf_ident = RingMatrix.identity(2 * ctx.d, ctx.M).scale(ctx.f * int(ctx.u))
        assert resolution_r.phi * resolution_r.phi_adj == uf_ident
        assert resolution_r.phi_adj * resolution_r.phi == uf_ident

    def test_r_resolution_compositions_mod_f(self):
        ctx = ctx_of(5, 5, 1)
        _, rr = structural.build_resolutions(ctx)
        for entry in (rr.xbar * rr.bridge).entries:
            assert not entry or entry.divisible_by(ctx.f)
        for entry in (rr.bridge * rr.phi).entries:
            assert not entry or entry.divisible_by(ctx.f)

    def test_tail_independence(self):
        ctx5 = ctx_of(5, 5, 1)
        ctx25 = ctx_of(5, 25, 1)
        assert structural.tails_match(ctx5, ctx25)
        assert ctx25.b - ctx5.b == 3 * (25 - 5) // 2

    def test_tails_require_same_parameters(self):
        with pytest.raises(ValueError):
            structural.tails_match(ctx_of(5, 5, 1), ctx_of(5, 5, 2))


class TestOffGridPower:
    def test_q81_structural_apparatus(self):
        # far beyond the expansion threshold: the auto mode switches to
        # point evaluation, the Pfaffian sweep and tail comparison stay exact
        ctx81 = ctx_of(3, 81, 1)
        res = structural.verify_key_identity(ctx81)
        assert res.ok and res.mode == "evaluate"
        structural.maximal_pfaffians(ctx81)  # exact degree + last-three checks
        ctx9 = ctx_of(3, 9, 1)
        assert structural.tails_match(ctx9, ctx81)
        assert ctx81.b - ctx9.b == 3 * (81 - 9) // 2

    def test_size_envelope_error(self):
        field = PrimeField(13)
        ctx = structural.build_context(field, FrobeniusPower.of(field, 13), 6)
        with pytest.raises(ValueError, match="limited to size 24"):
            structural.maximal_pfaffians(ctx)  # 2d+3 = 27 exceeds the cache bound
