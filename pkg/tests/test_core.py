"""Sign-vector enumeration, span membership, and the subspace counting cap."""

from fractions import Fraction

import numpy as np
import pytest

from qlcomp.core import (
    BudgetError,
    SignVector,
    SparseCombination,
    combine_columns,
    count_pm1_in_span,
    enumerate_sign_vectors,
    is_integral,
    matrix_from_text,
    matrix_to_text,
    span_contains,
)
from qlcomp.construct import BLOCK_5X6


class TestSignVector:
    def test_negation_involution(self):
        w = SignVector.from_string("+-+--")
        assert (-(-w)) == w
        assert (-w).to_string() == "-+-++"

    def test_string_roundtrip_and_unicode_minus(self):
        s = "+--+"
        assert SignVector.from_string(s).to_string() == s
        assert SignVector.from_string("+−−+") == SignVector.from_string(s)

    def test_entries(self):
        w = SignVector.from_entries([1, -1, -1, 1])
        assert w.bits == 0b1001
        assert [w.entry(i) for i in range(4)] == [1, -1, -1, 1]
        assert np.array_equal(w.to_array(), [1.0, -1.0, -1.0, 1.0])

    def test_invalid(self):
        with pytest.raises(ValueError):
            SignVector(0, 0)
        with pytest.raises(ValueError):
            SignVector(3, 0b1000)
        with pytest.raises(ValueError):
            SignVector.from_entries([1, 0])

    def test_hamming(self):
        a = SignVector.from_string("++--")
        b = SignVector.from_string("+-+-")
        assert a.hamming_distance(b) == 2


class TestEnumeration:
    def test_k1_full_set(self):
        vs = list(enumerate_sign_vectors(1))
        assert [v.to_string() for v in vs] == ["-", "+"]

    def test_k2_bitmask_order(self):
        vs = [v.to_string() for v in enumerate_sign_vectors(2)]
        assert vs == ["--", "+-", "-+", "++"]

    def test_k5_cardinality(self):
        vs = list(enumerate_sign_vectors(5))
        assert len(vs) == 32
        assert len({v.bits for v in vs}) == 32

    @pytest.mark.parametrize("k", [0, 31])
    def test_budget(self, k):
        with pytest.raises(BudgetError):
            list(enumerate_sign_vectors(k))


class TestMatrixText:
    def test_roundtrip(self):
        m = np.array([[1.0, -3.0], [0.5, 2.0]])
        assert np.array_equal(matrix_from_text(matrix_to_text(m)), m)

    def test_integral_flag(self):
        assert is_integral(np.array([[1.0, -3.0]]))
        assert not is_integral(np.array([[1.0, 0.5]]))

    def test_bad_header(self):
        with pytest.raises(ValueError):
            matrix_from_text("2 2\n1 2\n")


class TestSparseCombination:
    def test_invariants(self):
        with pytest.raises(ValueError):
            SparseCombination((1, 1), (1, 2))
        with pytest.raises(ValueError):
            SparseCombination((0,), (0,))
        with pytest.raises(ValueError):
            SparseCombination((2, 1), (1, 1))

    def test_vector(self):
        c = SparseCombination((0, 3), (2, -1))
        assert np.array_equal(c.vector(4), [2.0, 0.0, 0.0, -1.0])

    def test_combine_exact_vs_float(self):
        m = np.array([[1.0, 2.0], [3.0, 4.0]])
        comb = SparseCombination((0, 1), (Fraction(1, 2), 1))
        exact = combine_columns(m, comb)
        assert exact == [Fraction(5, 2), Fraction(11, 2)]
        floaty = combine_columns(m, SparseCombination((0, 1), (0.5, 1.0)))
        assert np.allclose(floaty, [2.5, 5.5])


class TestSpanContains:
    def test_ones_column(self):
        col = np.ones((5, 1))
        w = SignVector.from_string("+++++")
        assert span_contains(col, w) == [Fraction(1)]

    def test_identity_basis(self):
        w = SignVector.from_string("+-")
        assert span_contains(np.eye(2), w) == [Fraction(1), Fraction(-1)]

    def test_block_5x6_pair_columns(self):
        # independent oracle: dense least squares on the same column pair
        cols = BLOCK_5X6[:, [1, 2]]
        w = SignVector.from_string("--+++")
        coeffs = span_contains(cols, w)
        assert coeffs == [Fraction(1, 2), Fraction(1, 2)]
        ls, *_ = np.linalg.lstsq(cols, w.to_array(), rcond=None)
        assert np.max(np.abs(cols @ ls - w.to_array())) < 1e-9
        assert np.allclose([float(c) for c in coeffs], ls)

    def test_absent(self):
        col = np.array([[1.0], [0.0], [0.0]])
        assert span_contains(col, SignVector.from_string("+++")) is None

    def test_float_path_on_noninteger_matrix(self):
        cols = np.array([[0.5, 0.25], [0.5, -0.25], [0.5, 0.25], [0.5, -0.25]])
        w = SignVector.from_string("+-+-")
        coeffs = span_contains(cols, w)
        assert coeffs is not None
        assert np.allclose(cols @ np.array(coeffs), w.to_array(), atol=1e-9)
        assert span_contains(cols, SignVector.from_string("++--")) is None

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            span_contains(np.eye(2), SignVector.from_string("+++"))

    def test_negation_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            k, j = rng.integers(2, 7), rng.integers(1, 5)
            m = rng.integers(-3, 4, size=(k, j)).astype(float)
            w = SignVector(int(k), int(rng.integers(0, 1 << k)))
            a = span_contains(m, w)
            b = span_contains(m, -w)
            assert (a is None) == (b is None)
            if a is not None:
                assert [x + y for x, y in zip(a, b)] == [0] * len(a)

    def test_exact_and_float_paths_agree(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            k = int(rng.integers(2, 13))
            j = int(rng.integers(1, min(k, 6) + 1))
            m = rng.integers(-3, 4, size=(k, j)).astype(float)
            w = SignVector(k, int(rng.integers(0, 1 << k)))
            exact = span_contains(m, w, exact=True)
            floaty = span_contains(m, w, tol=1e-9, exact=False)
            assert (exact is None) == (floaty is None)


class TestCountInSpan:
    def test_whole_plane(self):
        assert count_pm1_in_span(np.eye(2), 2) == 4

    def test_unit_vector_misses(self):
        # a +-1 vector of length 3 has no zero entries
        assert count_pm1_in_span(np.array([[1.0], [0.0], [0.0]]), 3) == 0

    def test_matches_naive_membership(self):
        rng = np.random.default_rng(8)
        m = rng.integers(-3, 4, size=(8, 3)).astype(float)
        count = count_pm1_in_span(m, 8)
        naive = sum(1 for w in enumerate_sign_vectors(8) if span_contains(m, w) is not None)
        assert count == naive
        assert count <= 2**3

    def test_sign_columns_counted(self):
        cols = np.column_stack(
            [SignVector.from_string("+++-").to_array(), SignVector.from_string("+-+-").to_array()]
        )
        naive = sum(1 for w in enumerate_sign_vectors(4) if span_contains(cols, w) is not None)
        assert count_pm1_in_span(cols, 4) == naive >= 4  # at least the +-columns

    def test_subspace_cap_small_grid(self):
        # at most 2^l sign vectors in the span of l independent columns
        rng = np.random.default_rng(17)
        for _ in range(40):
            k = int(rng.integers(2, 13))
            ell = int(rng.integers(1, min(k, 5) + 1))
            m = rng.integers(-3, 4, size=(k, ell)).astype(float)
            assert count_pm1_in_span(m, k) <= 2**ell

    def test_huge_entries_use_exact_big_integer_path(self):
        # null-space entries of 2^51 exceed the float64-exact budget
        # (biggest * k >= 2^52) and force the pure-integer branch
        big = float(2**51)
        cols = np.array([[1.0, 1.0], [0.0, big], [1.0, 0.0]])
        assert count_pm1_in_span(cols, 3) == 0
        naive = sum(1 for w in enumerate_sign_vectors(3) if span_contains(cols, w) is not None)
        assert naive == 0

    def test_budget(self):
        with pytest.raises(BudgetError):
            count_pm1_in_span(np.ones((21, 1)), 21)
