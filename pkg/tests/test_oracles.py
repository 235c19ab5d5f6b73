import numpy as np
import pytest

from nupolar.codec import encode
from nupolar.construction import build_mother_code, build_shortened_code
from nupolar.oracles import (
    dense_encode,
    exact_bec_channels,
    kronecker_generator,
    ml_decode,
    ml_codeword_scores,
)


class TestDenseEncode:
    def test_base_matrix(self):
        gen = kronecker_generator(2)
        assert gen.tolist() == [[1, 0], [1, 1]]

    def test_fourth_row_all_ones(self):
        assert kronecker_generator(4)[3].tolist() == [1, 1, 1, 1]

    def test_cross_checks_butterfly(self):
        rng = np.random.default_rng(0)
        for spec in (build_mother_code(16, 9), build_shortened_code(32, 24, 10, "RQUP")):
            msgs = rng.integers(0, 2, (25, spec.payload_len), dtype=np.uint8)
            np.testing.assert_array_equal(dense_encode(spec, msgs), encode(spec, msgs))

    def test_size_cap(self):
        with pytest.raises(ValueError):
            kronecker_generator(2048)


class TestMlDecode:
    def test_noiseless(self):
        rng = np.random.default_rng(1)
        spec = build_mother_code(8, 4)
        msg = rng.integers(0, 2, 4, dtype=np.uint8)
        llr = 10.0 * (1.0 - 2.0 * encode(spec, msg))
        np.testing.assert_array_equal(ml_decode(spec, llr), msg)

    def test_single_bit_is_a_sign_test(self):
        spec = build_mother_code(4, 1)
        rng = np.random.default_rng(2)
        cw1 = dense_encode(spec, np.array([1], np.uint8))
        for _ in range(100):
            llr = rng.normal(0, 2, 4)
            # the aggregated LLR over the positions where the two candidate
            # codewords differ decides the bit
            stat = llr[cw1.astype(bool)].sum()
            expect = 0 if stat >= 0 else 1
            assert ml_decode(spec, llr)[0] == expect

    def test_scores_are_exhaustive(self):
        spec = build_mother_code(8, 3)
        msgs, cws, scores = ml_codeword_scores(spec, np.zeros(8))
        assert msgs.shape == (8, 3)
        assert cws.shape == (8, 8)
        assert scores.shape == (8,)

    def test_budget(self):
        spec = build_mother_code(2048 // 2, 20)
        with pytest.raises(ValueError):
            ml_decode(spec, np.zeros(1024))


class TestExactBec:
    def test_uniform_pair(self):
        np.testing.assert_allclose(exact_bec_channels(np.array([0.5, 0.5])), [0.75, 0.25])

    def test_perfect_channels_stay_perfect(self):
        np.testing.assert_array_equal(exact_bec_channels(np.zeros(16)), np.zeros(16))

    def test_capacity_sum_conserved(self):
        rng = np.random.default_rng(3)
        eps = rng.uniform(0, 1, 128)
        out = exact_bec_channels(eps)
        assert np.sum(1 - out) == pytest.approx(np.sum(1 - eps), abs=1e-9)

    def test_polarizes_to_extremes(self):
        out = exact_bec_channels(np.full(1024, 0.5))
        frac_extreme = np.mean((out < 0.01) | (out > 0.99))
        assert frac_extreme > 0.6
