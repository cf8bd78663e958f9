"""Exhaustive verification, minimal access search, and the subspace audit."""

import itertools

import numpy as np
import pytest

from qlcomp.core import (
    BudgetError,
    Protocol,
    enumerate_sign_vectors,
    span_contains,
)
from qlcomp.construct import BLOCK_5X6, block_5x6_spec, expand_blocks, trivial_protocol
from qlcomp.verify import min_access_for_M, subspace_cap_audit, verify_protocol


def _min_support_naive(matrix, w):
    """Independent oracle: smallest spanning subset by brute force."""
    n = matrix.shape[1]
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            if span_contains(matrix[:, subset], w) is not None:
                return size
    return None


class TestVerifyProtocol:
    def test_trivial_k4(self):
        rep = verify_protocol(trivial_protocol(4))
        assert rep.ok and rep.checked == 16
        assert rep.max_access == 3

    def test_block_5x6_exact(self):
        rep = verify_protocol(expand_blocks(block_5x6_spec(), 1))
        assert rep.ok
        assert rep.max_access == 2
        assert rep.max_residual == 0.0

    def test_ell_lowered_fails_with_witness(self):
        good = expand_blocks(block_5x6_spec(), 1)
        tight = Protocol(
            k=good.k, n=good.n, ell=good.ell - 1, encoder=good.encoder, decoder=good.decoder
        )
        rep = verify_protocol(tight)
        assert not rep.ok
        assert rep.witness is not None
        assert good.decode(rep.witness).access > tight.ell

    def test_wrong_coefficient_detected(self):
        spec = block_5x6_spec()
        base = expand_blocks(spec, 1)

        def bad_decoder(w):
            comb = spec.decode(w)
            coeffs = tuple(float(c) + (1e-3 if i == 0 else 0.0) for i, c in enumerate(comb.coeffs))
            return type(comb)(comb.support, coeffs)

        rep = verify_protocol(
            Protocol(k=base.k, n=base.n, ell=base.ell, encoder=base.encoder, decoder=bad_decoder)
        )
        assert not rep.ok
        assert rep.max_residual > 1e-9

    def test_budget(self):
        with pytest.raises(BudgetError):
            verify_protocol(expand_blocks(block_5x6_spec(), 5))  # k = 25

    def test_report_dict(self):
        rep = verify_protocol(trivial_protocol(3))
        d = rep.to_dict()
        assert d["ok"] and d["checked"] == 8 and d["witness"] is None


class TestMinAccess:
    def test_block_5x6(self):
        assert min_access_for_M(BLOCK_5X6) == 2

    def test_identity_needs_full_support(self):
        assert min_access_for_M(np.eye(5)) == 5

    def test_identity_plus_parity(self):
        m = np.hstack([np.eye(3), np.ones((3, 1))])
        assert min_access_for_M(m) == 2
        # independent exhaustive oracle over all 8 vectors
        worst = max(_min_support_naive(m, w) for w in enumerate_sign_vectors(3))
        assert worst == 2

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            k0 = int(rng.integers(2, 5))
            extra = rng.integers(-2, 3, size=(k0, 2)).astype(float)
            m = np.hstack([np.eye(k0), extra])
            naive = max(_min_support_naive(m, w) for w in enumerate_sign_vectors(k0))
            assert min_access_for_M(m) == naive

    def test_monotone_under_appended_columns(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            k0 = int(rng.integers(2, 5))
            m = np.hstack([np.eye(k0), rng.integers(-2, 3, size=(k0, 1)).astype(float)])
            wider = np.hstack([m, rng.integers(-2, 3, size=(k0, 2)).astype(float)])
            assert min_access_for_M(wider) <= min_access_for_M(m)

    def test_uncoverable(self):
        with pytest.raises(ValueError):
            min_access_for_M(np.array([[1.0], [0.0]]))

    def test_custom_block_agreement(self):
        # custom_block(M, l0) succeeds exactly when min_access_for_M(M) <= l0
        from qlcomp.construct import BlockConstructionError, custom_block

        rng = np.random.default_rng(21)
        for _ in range(6):
            k0 = int(rng.integers(2, 5))
            m = np.hstack([np.eye(k0), rng.integers(-2, 3, size=(k0, 2)).astype(float)])
            need = min_access_for_M(m)
            assert custom_block(m, need).ell0 == need
            if need > 1:
                with pytest.raises(BlockConstructionError):
                    custom_block(m, need - 1)


class TestSubspaceCapAudit:
    def test_full_rank_square_hits_cap(self):
        from qlcomp.core import count_pm1_in_span

        assert count_pm1_in_span(np.eye(3), 3) == 8  # the whole space

    def test_single_column_at_most_two(self):
        rep = subspace_cap_audit(8, 1, trials=50, seed=2)
        assert rep.ok and rep.max_count <= 2

    def test_k10_ell4(self):
        rep = subspace_cap_audit(10, 4, trials=200, seed=1)
        assert rep.ok
        assert rep.max_count <= 16

    def test_never_violates_across_grid(self):
        for k, ell in [(4, 2), (6, 3), (8, 4), (10, 5)]:
            rep = subspace_cap_audit(k, ell, trials=30, seed=7)
            assert rep.ok, (k, ell, rep)

    def test_budget(self):
        with pytest.raises(BudgetError):
            subspace_cap_audit(13, 2, trials=1, seed=0)
