import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelrec.budget import BudgetExceeded
from hankelrec.gf import field_new
from hankelrec.homopoly import HomoPoly, SeqVec, annihilates, enumerate_monic, poly_mul
from hankelrec.recurrence import (
    all_sequences,
    batch_hankel_rank,
    chi_decomposition,
    enumerate_Hm,
    hankel,
    ideal_slice,
    in_Hm,
    kernel_intersection_check,
    kernel_set,
    matrix_rank,
    minimal_recursion,
    rank,
    rank_equals_minimal_degree_check,
    seq_from_index,
    seq_index,
)

from oracles import all_points, hankel_rank_brute_gf2, in_Hm_brute

F2 = field_new(2)
F3 = field_new(3)
F4 = field_new(2, 2)
GRIDS = [(F2, 5), (F3, 3), (F4, 2)]


def S(*v, ctx=F2):
    return SeqVec.of(ctx, v)


def H(*c, ctx=F2):
    return HomoPoly.of(ctx, c)


class TestHankel:
    def test_shape_and_entries(self):
        M = hankel(S(1, 0, 1, 1, 0), 2)
        assert (M.rows, M.cols) == (3, 3)
        assert M.as_lists() == [[1, 0, 1], [0, 1, 1], [1, 1, 0]]

    def test_toeplitz_reverses_rows(self):
        M = hankel(S(1, 0, 1, 1, 0), 2)
        assert M.toeplitz() == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]

    def test_alternating_sequence(self):
        assert rank(hankel(S(1, 0, 1, 0, 1), 2)) == 2

    def test_constant_sequence(self):
        assert rank(hankel(S(1, 1, 1, 1, 1), 2)) == 1

    def test_isolated_ends(self):
        # [[1,0,0],[0,0,0],[0,0,1]]
        assert rank(hankel(S(1, 0, 0, 0, 1), 2)) == 2

    def test_anti_identity(self):
        assert rank(hankel(S(0, 0, 1, 0, 0), 2)) == 3

    def test_full_rank_gf3(self):
        assert rank(hankel(S(1, 2, 0, 1, 1, ctx=F3), 2)) == 3

    def test_empty_matrix(self):
        assert rank(hankel(S(1, 1), 2)) == 0

    @pytest.mark.parametrize("n", range(1, 7))
    def test_rank_matches_span_count(self, n):
        for x in all_points(2, n):
            for m in range(n + 1):
                assert rank(hankel(SeqVec(F2, x), m)) == hankel_rank_brute_gf2(x, m)

    @pytest.mark.parametrize("ctx,n", GRIDS, ids=["q2", "q3", "q4"])
    def test_toeplitz_has_same_rank(self, ctx, n):
        for x in all_sequences(ctx, n):
            for m in range(n + 1):
                M = hankel(x, m)
                assert matrix_rank(ctx, M.toeplitz()) == rank(M)

    @pytest.mark.parametrize("ctx,n", GRIDS, ids=["q2", "q3", "q4"])
    def test_rank_is_symmetric_under_transpose(self, ctx, n):
        for x in all_sequences(ctx, n):
            for m in range(n + 1):
                rows = hankel(x, m).as_lists()
                assert matrix_rank(ctx, [list(c) for c in zip(*rows)]) == rank(hankel(x, m))


class TestIdealSlice:
    def test_constant_sequence(self):
        x = S(1, 1, 1, 1, 1)
        sl = ideal_slice(x, 1)
        assert sl.dim == 1 and sl.basis[0] == H(1, 1)
        assert ideal_slice(x, 2).dim == 2

    def test_zero_sequence_everything_annihilates(self):
        x = S(0, 0, 0, 0)
        for m in range(5):
            assert ideal_slice(x, m).dim == m + 1

    def test_basis_elements_annihilate(self):
        for x in all_sequences(F3, 4):
            for m in range(6):
                for Q in ideal_slice(x, m).basis:
                    assert annihilates(Q, x)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            ideal_slice(S(1, 1), 3)

    @pytest.mark.parametrize("ctx,n", GRIDS, ids=["q2", "q3", "q4"])
    def test_dimension_counts_annihilators(self, ctx, n):
        for x in all_sequences(ctx, n):
            for m in range(n + 2):
                count = sum(1 for Q in enumerate_monic(ctx, m) if annihilates(Q, x))
                dim = ideal_slice(x, m).dim
                assert count == (ctx.q ** dim - 1) // (ctx.q - 1)

    @pytest.mark.parametrize("ctx,n", GRIDS, ids=["q2", "q3", "q4"])
    def test_ideal_is_closed_under_multiplication(self, ctx, n):
        for x in all_sequences(ctx, n):
            for m in range(n + 1):
                for Q in ideal_slice(x, m).basis:
                    for Y in (H(0, 1, ctx=ctx), H(1, 0, ctx=ctx)):
                        assert annihilates(poly_mul(Q, Y), x)


class TestMinimalRecursion:
    def test_constant(self):
        assert minimal_recursion(S(1, 1, 1, 1, 1)) == (1, H(1, 1))

    def test_alternating(self):
        m0, Q0 = minimal_recursion(S(1, 0, 1, 0, 1))
        assert m0 == 2 and Q0 == H(1, 0, 1)

    def test_isolated_ends(self):
        assert minimal_recursion(S(1, 0, 0, 0, 1)) == (2, H(0, 1, 0))

    def test_none_below_threshold(self):
        assert minimal_recursion(S(0, 0, 1, 0, 0)) is None

    def test_zero_sequence(self):
        assert minimal_recursion(S(0, 0, 0)) == (0, H(1))

    @pytest.mark.parametrize("ctx,n", GRIDS, ids=["q2", "q3", "q4"])
    def test_dimension_ladder(self, ctx, n):
        # for m0 <= m <= n+1-m0 the recursions of degree m are exactly Q0 * V_(m-m0)
        for x in all_sequences(ctx, n):
            found = minimal_recursion(x)
            if found is None:
                continue
            m0, Q0 = found
            for m in range(m0, n + 2 - m0):
                assert ideal_slice(x, m).dim == m - m0 + 1
            for m in range(m0):
                assert ideal_slice(x, m).dim == 0


class TestMembership:
    @pytest.mark.parametrize("ctx,n", GRIDS + [(F2, 6)], ids=["q2", "q3", "q4", "q2n6"])
    def test_routes_agree_with_brute_force(self, ctx, n):
        for x in all_sequences(ctx, n):
            for m in range((n + 1) // 2 + 1):
                brute = in_Hm_brute(ctx, x.entries, m)
                assert in_Hm(x, m, "rank") == brute
                assert in_Hm(x, m, "kernel") == brute

    def test_examples(self):
        assert in_Hm(S(1, 0, 0, 0, 1), 2)
        assert not in_Hm(S(0, 0, 1, 0, 0), 2)
        assert in_Hm(S(1, 1, 1, 1, 1), 1)

    def test_w_minus_one(self):
        # n = -1, m = 0: the empty sequence belongs to H_0
        x = SeqVec.of(F2, ())
        assert in_Hm(x, 0) and in_Hm(x, 0, "kernel")

    def test_range_and_route_errors(self):
        with pytest.raises(ValueError):
            in_Hm(S(1, 0, 1), 3)
        with pytest.raises(ValueError):
            in_Hm(S(1, 0, 1), 1, route="magic")

    @pytest.mark.parametrize("ctx,nmax", [(F2, 7), (F3, 5), (F4, 4)], ids=["q2", "q3", "q4"])
    def test_cardinality(self, ctx, nmax):
        for n in range(nmax + 1):
            for m in range((n + 1) // 2 + 1):
                assert sum(1 for _ in enumerate_Hm(ctx, n, m)) == ctx.q ** (2 * m)

    @pytest.mark.parametrize("ctx,n", GRIDS, ids=["q2", "q3", "q4"])
    def test_signed_decomposition(self, ctx, n):
        for x in all_sequences(ctx, n):
            for m in range((n + 1) // 2 + 1):
                assert chi_decomposition(x, m) == int(in_Hm(x, m))

    @pytest.mark.parametrize("ctx,n", GRIDS, ids=["q2", "q3", "q4"])
    def test_rank_equals_minimal_degree(self, ctx, n):
        for x in all_sequences(ctx, n):
            for m in range((n + 1) // 2 + 1):
                if in_Hm(x, m):
                    assert rank_equals_minimal_degree_check(x, m)

    def test_rank_check_rejects_nonmembers(self):
        with pytest.raises(ValueError):
            rank_equals_minimal_degree_check(S(0, 0, 1, 0, 0), 2)


class TestIndexing:
    def test_round_trip(self):
        for i in range(81):
            assert seq_index(seq_from_index(F3, 3, i)) == i

    def test_all_sequences_in_index_order(self):
        assert [x.entries for x in all_sequences(F3, 2)] == all_points(3, 2)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            list(all_sequences(F2, 20, budget=1000))


class TestKernels:
    def test_kernel_size(self):
        assert len(kernel_set(H(1, 1, 0), 4)) == 4

    def test_coprime_linear_forms(self):
        # ker Y & ker Z at n=1 is {0}
        assert kernel_set(H(0, 1), 1) & kernel_set(H(1, 0), 1) == frozenset({0})
        assert kernel_intersection_check(H(0, 1), H(1, 0), 1)

    def test_squares_at_n2(self):
        # Y^2, Z^2 coprime but 2 + 2 > n + 1 = 3, so the intersection is bigger than {0}
        both = kernel_set(H(0, 0, 1), 2) & kernel_set(H(1, 0, 0), 2)
        assert len(both) == 2
        assert kernel_intersection_check(H(0, 0, 1), H(1, 0, 0), 2)

    @pytest.mark.parametrize("n", range(2, 6))
    def test_all_monic_pairs_gf2(self, n):
        polys = [P for d in (1, 2) for P in enumerate_monic(F2, d)]
        for Q1, Q2 in itertools.product(polys, repeat=2):
            assert kernel_intersection_check(Q1, Q2, n)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            kernel_intersection_check(HomoPoly.zero(F2, 1), H(1, 1), 3)


class TestBatchRank:
    @pytest.mark.parametrize("ctx", [F2, F3, F4, field_new(5)], ids=repr)
    def test_matches_scalar(self, ctx):
        rng = np.random.default_rng(7)
        for n in (3, 6, 9):
            X = rng.integers(0, ctx.q, size=(200, n + 1))
            X[:20] = 0
            X[20:40, : n // 2] = 0
            for m in range(n + 2):
                got = batch_hankel_rank(ctx, X, m)
                want = [rank(hankel(SeqVec(ctx, tuple(r)), m)) for r in X.tolist()]
                assert got.tolist() == want

    def test_wide_gf2_matrix(self):
        rng = np.random.default_rng(3)
        X = rng.integers(0, 2, size=(30, 140))
        got = batch_hankel_rank(F2, X, 10)
        want = [rank(hankel(SeqVec(F2, tuple(r)), 10)) for r in X.tolist()]
        assert got.tolist() == want

    def test_empty_columns(self):
        X = np.ones((4, 3), dtype=np.int64)
        assert batch_hankel_rank(F2, X, 3).tolist() == [0, 0, 0, 0]


@given(st.lists(st.integers(0, 2), min_size=1, max_size=9))
@settings(max_examples=150, deadline=None)
def test_membership_monotone_in_m(v):
    x = SeqVec.of(F3, v)
    members = [in_Hm(x, m) for m in range((x.n + 1) // 2 + 1)]
    assert members == sorted(members)
    if 2 * ((x.n + 1) // 2) == x.n + 1:
        assert members[-1]  # H_m = W_n when n = 2m - 1
