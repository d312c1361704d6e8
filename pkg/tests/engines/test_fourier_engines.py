"""
Black-box tests for the character sum engines: charsum, fft_enumerator,
evaluate_W_at and the radix-2 FFT kernel.
"""

import cmath
import math

import numpy
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.latqd.config import THREADS_ENV_VAR, EngineConfig
from src.latqd.engines import fourier_engines
from src.latqd.engines.abstract_engines import get_engine
from src.latqd.engines.exact_engines import brute_force
from src.latqd.engines.fourier_engines import (
    PerNodeFactor,
    charsum,
    evaluate_W_at,
    fft_enumerator,
    fft_sample_points,
    radix2_fft,
)
from src.latqd.lattice.enumerator import FloatEnumerator, default_tolerance, eval_poly
from src.latqd.lattice.errors import BudgetExceeded
from src.latqd.lattice.rule import LatticeRule


@st.composite
def small_instances(draw):
    N = draw(st.integers(min_value=2, max_value=50))
    s = draw(st.integers(min_value=1, max_value=3))
    d = draw(st.integers(min_value=1, max_value=4))
    g = draw(st.lists(st.integers(min_value=1, max_value=N - 1), min_size=s, max_size=s))
    return LatticeRule(N, g), d


# ─── Radix-2 kernel ───────────────────────────────────────────────────────────


class TestRadix2FFT:
    @pytest.mark.parametrize("length", [1, 2, 8, 64, 256])
    def test_forward_matches_numpy(self, length):
        rng = numpy.random.default_rng(length)
        values = rng.normal(size=length) + 1j * rng.normal(size=length)
        assert numpy.allclose(radix2_fft(values), numpy.fft.fft(values))

    @pytest.mark.parametrize("length", [1, 4, 32])
    def test_inverse_matches_numpy(self, length):
        rng = numpy.random.default_rng(length + 1)
        values = rng.normal(size=length) + 1j * rng.normal(size=length)
        assert numpy.allclose(radix2_fft(values, inverse=True), numpy.fft.ifft(values))

    def test_inverse_undoes_forward(self):
        values = numpy.arange(16, dtype=float)
        assert numpy.allclose(radix2_fft(radix2_fft(values), inverse=True), values)

    @pytest.mark.parametrize("length", [0, 3, 12])
    def test_non_power_of_two_rejected(self, length):
        with pytest.raises(ValueError):
            radix2_fft(numpy.ones(length))


class TestSamplePoints:
    def test_length_covers_degree(self):
        length, zs = fft_sample_points(4)
        assert length == 8
        assert zs.shape == (5,)
        assert zs[0] == pytest.approx(1.0)
        assert zs[4] == pytest.approx(-1.0)

    def test_exact_power_of_two_degree_plus_one(self):
        length, _ = fft_sample_points(7)
        assert length == 8


# ─── Per-node factors ─────────────────────────────────────────────────────────


class TestPerNodeFactor:
    def test_factor_is_cosine_series(self):
        factor = PerNodeFactor.for_node(LatticeRule(5, [1, 2]), 2, n=1, j=1)
        expected = [1.0, 2 * math.cos(2 * math.pi * 2 / 5), 2 * math.cos(2 * math.pi * 4 / 5)]
        assert factor.factor_coeffs.tolist() == pytest.approx(expected)

    def test_node_zero_factor_is_flat(self):
        factor = PerNodeFactor.for_node(LatticeRule(7, [3]), 3, n=0, j=0)
        assert factor.factor_coeffs.tolist() == pytest.approx([1.0, 2.0, 2.0, 2.0])

    def test_node_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            PerNodeFactor.for_node(LatticeRule(7, [3]), 3, n=7, j=0)


# ─── Engines ──────────────────────────────────────────────────────────────────


class TestCharSum:
    def test_returns_unrounded_coefficients(self):
        fe = charsum(LatticeRule(5, [1, 2]), 2)
        assert isinstance(fe, FloatEnumerator)
        assert fe.coeffs.tolist() == pytest.approx([1, 0, 0, 4, 0], abs=1e-9)
        assert fe.max_residual < 1e-9

    @pytest.mark.parametrize(
        "N, g, d, expected",
        [
            (2, (1, 1), 1, (1, 0, 4)),
            (3, (1, 2), 1, (1, 0, 2)),
            (4, (1,), 4, (1, 0, 0, 0, 2)),
            (5, (1, 2), 2, (1, 0, 0, 4, 0)),
        ],
    )
    def test_rounded_hand_cases(self, N, g, d, expected):
        assert get_engine("charsum").apply_engine(LatticeRule(N, g), d).coeffs == expected

    def test_rounded_result_records_residual(self):
        W = get_engine("charsum").apply_engine(LatticeRule(13, [1, 5]), 3)
        assert W.residual is not None
        assert W.residual <= default_tolerance(W.rule, 3)

    def test_modulus_beyond_phase_arithmetic_rejected(self):
        with pytest.raises(BudgetExceeded):
            charsum(LatticeRule(2**31 + 1, [1]), 1)

    def test_thread_count_does_not_change_bits(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        rule = LatticeRule(1009, [1, 3, 9])
        serial = charsum(rule, 4, EngineConfig(threads=1, chunk_rows=64))
        parallel = charsum(rule, 4, EngineConfig(threads=4, chunk_rows=64))
        assert numpy.array_equal(serial.coeffs, parallel.coeffs)

    def test_repeated_runs_are_identical(self):
        rule = LatticeRule(211, [1, 17, 40])
        assert numpy.array_equal(charsum(rule, 3).coeffs, charsum(rule, 3).coeffs)

    def test_node_rows_are_built_one_chunk_at_a_time(self, monkeypatch):
        built = []
        original = fourier_engines._product_rows

        def recording(rule, d, start, stop):
            built.append(stop - start)
            return original(rule, d, start, stop)

        monkeypatch.setattr(fourier_engines, "_product_rows", recording)
        charsum(LatticeRule(10007, [1, 3, 9]), 2, EngineConfig(threads=1, chunk_rows=256))
        assert max(built) == 256
        assert sum(built) == 10007


class TestFFTEnumerator:
    def test_padding_bins_are_reported(self):
        fe = fft_enumerator(LatticeRule(4, [1]), 4)
        assert fe.coeffs.tolist() == pytest.approx([1, 0, 0, 0, 2], abs=1e-9)
        assert fe.padding.shape == (3,)
        assert fe.padding_residual < 1e-9

    def test_padding_count_is_length_minus_degree(self):
        fe = fft_enumerator(LatticeRule(5, [1, 2]), 2)
        assert fe.padding.shape == (3,)
        fe = fft_enumerator(LatticeRule(2, [1]), 1)
        assert fe.padding.shape == (0,)

    def test_rounded_matches_oracle(self):
        W = get_engine("fft").apply_engine(LatticeRule(5, [1, 2]), 2)
        assert W.coeffs == (1, 0, 0, 4, 0)

    def test_thread_count_does_not_change_bits(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        rule = LatticeRule(2003, [1, 5, 25])
        serial = fft_enumerator(rule, 4, EngineConfig(threads=1, chunk_rows=128))
        parallel = fft_enumerator(rule, 4, EngineConfig(threads=3, chunk_rows=128))
        assert numpy.array_equal(serial.coeffs, parallel.coeffs)
        assert numpy.array_equal(serial.padding, parallel.padding)


class TestEvaluateAt:
    def test_zero_gives_constant_term(self):
        assert evaluate_W_at(LatticeRule(13, [1, 5]), 3, 0.0) == pytest.approx(1.0)

    def test_one_gives_dual_count(self):
        rule = LatticeRule(13, [1, 5])
        assert evaluate_W_at(rule, 3, 1.0) == pytest.approx(brute_force(rule, 3).total)

    def test_real_point(self):
        rule = LatticeRule(5, [1, 2])
        assert evaluate_W_at(rule, 2, 0.5) == pytest.approx(1 + 4 * 0.5**3)


# ─── Oracle equivalence ───────────────────────────────────────────────────────


class TestOracleEquivalence:
    @settings(max_examples=100, deadline=None)
    @given(small_instances())
    def test_rounded_engines_match_brute_force(self, instance):
        rule, d = instance
        expected = brute_force(rule, d).coeffs
        assert get_engine("charsum").apply_engine(rule, d).coeffs == expected
        assert get_engine("fft").apply_engine(rule, d).coeffs == expected

    @settings(max_examples=100, deadline=None)
    @given(small_instances())
    def test_fft_padding_within_tolerance(self, instance):
        rule, d = instance
        assert fft_enumerator(rule, d).padding_residual <= default_tolerance(rule, d)

    @settings(max_examples=100, deadline=None)
    @given(small_instances(), st.floats(min_value=0.0, max_value=1.0))
    def test_point_evaluation_matches_polynomial(self, instance, turn):
        rule, d = instance
        z = cmath.exp(2j * math.pi * turn)
        W = brute_force(rule, d)
        difference = abs(evaluate_W_at(rule, d, z) - eval_poly(W, z))
        assert difference <= 1e-8 * eval_poly(W, 1)
