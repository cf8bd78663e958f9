"""Protocol constructions, rate points, expansion, and protocol files."""

import math

import numpy as np
import pytest

from qlcomp.core import SignVector, SparseCombination, enumerate_sign_vectors
from qlcomp.construct import (
    BlockConstructionError,
    RatePoint,
    block_5x6_spec,
    covering_code_block,
    custom_block,
    expand_blocks,
    load_protocol,
    nonsystematic_block,
    protocol_from_json_dict,
    protocol_to_json_dict,
    rate_point,
    save_protocol,
    trivial_protocol,
)
from qlcomp.covering import full_cube, repetition_pair
from qlcomp.verify import verify_protocol


class TestTrivialProtocol:
    def test_parity_only_when_all_plus(self):
        p = trivial_protocol(2)
        comb = p.decode(SignVector.from_string("++"))
        assert comb == SparseCombination((2,), (1,))

    def test_one_correction(self):
        p = trivial_protocol(3)
        comb = p.decode(SignVector.from_string("++-"))
        assert comb == SparseCombination((2, 3), (-2, 1))

    def test_worst_case_access_k5(self):
        p = trivial_protocol(5)
        worst = max(p.decode(w).access for w in enumerate_sign_vectors(5))
        assert worst == 3  # floor(5/2) + 1

    @pytest.mark.parametrize("k", range(3, 11))
    def test_exhaustive(self, k):
        rep = verify_protocol(trivial_protocol(k))
        assert rep.ok
        assert rep.max_access == k // 2 + 1
        assert rep.max_residual == 0.0

    def test_rate_point(self):
        rp = rate_point(trivial_protocol(9))
        assert rp == RatePoint(10 / 9, 5 / 9)


class TestNonsystematic:
    @pytest.mark.parametrize("k0", [2, 3, 4, 5])
    def test_rate_and_access(self, k0):
        spec = nonsystematic_block(k0)
        assert rate_point(spec) == RatePoint(2 ** (k0 - 1) / k0, 1 / k0)
        rep = verify_protocol(expand_blocks(spec, 1))
        assert rep.ok and rep.max_access == 1 and rep.max_residual == 0.0

    def test_k0_2_decoder_is_signed_column(self):
        spec = nonsystematic_block(2)
        for w in enumerate_sign_vectors(2):
            comb = spec.decode(w)
            assert comb.access == 1
            col = spec.matrix[:, comb.support[0]] * float(comb.coeffs[0])
            assert np.array_equal(col, w.to_array())


class TestCoveringBlock:
    def test_full_cube_access_one(self):
        spec = covering_code_block(full_cube(3))
        assert spec.ell0 == 1
        assert all(spec.table[b].access == 1 for b in range(8))

    def test_repetition_k5(self):
        spec = covering_code_block(repetition_pair(5))
        assert rate_point(spec) == RatePoint(6 / 5, 3 / 5)
        rep = verify_protocol(expand_blocks(spec, 1))
        assert rep.ok and rep.max_access == 3 and rep.max_residual == 0.0

    def test_repetition_k5_bound_tight(self):
        # some w needs the full r+1 = 3 accesses
        spec = covering_code_block(repetition_pair(5))
        assert max(spec.table[b].access for b in range(32)) == 3

    def test_repetition_k3_rate(self):
        assert rate_point(covering_code_block(repetition_pair(3))) == RatePoint(4 / 3, 2 / 3)


class TestCustomBlock:
    def test_block_5x6(self):
        spec = block_5x6_spec()
        assert rate_point(spec) == RatePoint(1.2, 0.4)
        rep = verify_protocol(expand_blocks(spec, 1))
        assert rep.ok and rep.max_access == 2 and rep.max_residual == 0.0

    def test_identity_full_support(self):
        spec = custom_block(np.eye(3), 3)
        for w in enumerate_sign_vectors(3):
            comb = spec.decode(w)
            assert comb.access == 3
            assert list(comb.coeffs) == [w.entry(i) for i in range(3)]

    def test_identity_fails_below_k(self):
        with pytest.raises(BlockConstructionError) as err:
            custom_block(np.eye(3), 2)
        assert err.value.witness is not None
        assert err.value.witness.length == 3

    def test_smallest_support_wins(self):
        # all-ones is a single column of the 5x6 matrix
        spec = block_5x6_spec()
        comb = spec.decode(SignVector.from_string("+++++"))
        assert comb == SparseCombination((0,), (1,))


class TestGreedyCodeBlocks:
    def test_greedy_codes_verify_and_hit_rate_formula(self):
        from qlcomp.covering import antipodal_half, greedy_covering_code

        for k0, r in [(4, 1), (5, 1), (6, 2)]:
            code = greedy_covering_code(k0, r)
            spec = covering_code_block(code)
            half = antipodal_half(code)
            assert rate_point(spec) == RatePoint(
                (k0 + half.size) / k0, (code.radius + 1) / k0
            )
            rep = verify_protocol(expand_blocks(spec, 1))
            assert rep.ok and rep.max_residual == 0.0

    def test_custom_block_reproduces_nonsystematic(self):
        # searching the antipodal-class matrix at ell0 = 1 recovers access 1
        spec = nonsystematic_block(3)
        searched = custom_block(spec.matrix, 1)
        assert searched.table == spec.table


class TestExpandBlocks:
    def test_m1_identity(self):
        spec = block_5x6_spec()
        p = expand_blocks(spec, 1)
        assert np.array_equal(p.encoder, spec.matrix)
        for w in enumerate_sign_vectors(5):
            assert p.decode(w) == spec.decode(w)

    def test_nonsystematic_k0_2_m3(self):
        p = expand_blocks(nonsystematic_block(2), 3)
        assert (p.k, p.n, p.ell) == (6, 6, 3)
        rep = verify_protocol(p)
        assert rep.ok and rep.max_residual == 0.0

    def test_block_5x6_m2(self):
        p = expand_blocks(block_5x6_spec(), 2)
        assert (p.k, p.n, p.ell) == (10, 12, 4)
        rep = verify_protocol(p)
        assert rep.ok and rep.checked == 1024 and rep.max_residual == 0.0

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_rate_preserved(self, m):
        spec = nonsystematic_block(3)
        assert rate_point(expand_blocks(spec, m)) == rate_point(spec)

    def test_largest_shipped_configuration(self):
        # k = 14 is the largest exhaustively verified shipped size
        p = expand_blocks(nonsystematic_block(7), 2)
        assert p.k == 14
        rep = verify_protocol(p)
        assert rep.ok and rep.max_access == 2 and rep.max_residual == 0.0

    def test_kron_structure(self):
        spec = nonsystematic_block(2)
        p = expand_blocks(spec, 2)
        assert np.array_equal(p.encoder, np.kron(np.eye(2), spec.matrix))


class TestProtocolFiles:
    def test_roundtrip(self, tmp_path):
        p = expand_blocks(block_5x6_spec(), 1)
        path = tmp_path / "p.json"
        save_protocol(p, path)
        loaded = load_protocol(path)
        assert (loaded.k, loaded.n, loaded.ell) == (p.k, p.n, p.ell)
        assert np.array_equal(loaded.encoder, p.encoder)
        for w in enumerate_sign_vectors(p.k):
            a, b = p.decode(w), loaded.decode(w)
            assert a.support == b.support
            assert np.allclose([float(c) for c in a.coeffs], [float(c) for c in b.coeffs])
        assert verify_protocol(loaded).ok

    def test_export_is_deterministic(self, tmp_path):
        p = trivial_protocol(4)
        one, two = tmp_path / "a.json", tmp_path / "b.json"
        save_protocol(p, one)
        save_protocol(p, two)
        assert one.read_bytes() == two.read_bytes()

    def test_missing_table_rejected(self):
        data = protocol_to_json_dict(trivial_protocol(3), include_table=False)
        assert "decoder" not in data
        with pytest.raises(ValueError):
            protocol_from_json_dict(data)

    def test_table_size_checked(self):
        data = protocol_to_json_dict(trivial_protocol(3))
        data["decoder"] = data["decoder"][:-1]
        with pytest.raises(ValueError):
            protocol_from_json_dict(data)


class TestRatePoint:
    def test_positive_finite(self):
        with pytest.raises(ValueError):
            RatePoint(0.0, 0.5)
        with pytest.raises(ValueError):
            RatePoint(1.0, math.inf)

    def test_block_5x6_value(self):
        assert rate_point(block_5x6_spec()) == RatePoint(1.2, 0.4)

    def test_unknown_type(self):
        with pytest.raises(TypeError):
            rate_point("protocol")
