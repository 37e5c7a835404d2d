"""Unit tests for the shared linear-algebra helpers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qps_casimir.linalg import (
    MetricSignature,
    OffDiagonalResidual,
    SPACETIME,
    ToleranceConfig,
    anticommutator,
    commutator,
    dagger,
    diagonal_spectrum,
    expm_action,
    kron,
    kron_chain,
    matrix_exponential,
    max_abs_diff,
)


def _small_matrix(seed, n=3):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestMetricSignature:
    def test_spacetime_diag(self):
        assert list(SPACETIME.diag) == [1, -1, -1, -1, -1]
        assert SPACETIME.dim == 5

    def test_matrix_is_diagonal(self):
        m = MetricSignature(2, 3).matrix()
        assert np.array_equal(np.diag(np.diag(m)), m)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            MetricSignature(0, 0)


class TestToleranceConfig:
    def test_defaults_ordered(self):
        t = ToleranceConfig()
        assert t.exact_tol <= t.num_tol <= t.approx_tol

    def test_rejects_disorder(self):
        with pytest.raises(ValueError):
            ToleranceConfig(exact_tol=1e-6, num_tol=1e-10)


class TestBrackets:
    def test_commutator_antisymmetric(self):
        a, b = _small_matrix(0), _small_matrix(1)
        assert max_abs_diff(commutator(a, b), -commutator(b, a)) == 0.0

    def test_anticommutator_symmetric(self):
        a, b = _small_matrix(2), _small_matrix(3)
        assert max_abs_diff(anticommutator(a, b), anticommutator(b, a)) == 0.0

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            commutator(np.eye(2), np.eye(3))


@given(st.integers(0, 1000), st.integers(0, 1000), st.integers(0, 1000))
@settings(max_examples=25, deadline=None)
def test_kron_associative(s1, s2, s3):
    a, b, c = (_small_matrix(s, 2) for s in (s1, s2, s3))
    lhs = kron(kron(a, b), c)
    rhs = kron(a, kron(b, c))
    # the two groupings multiply scalars in different orders, so allow
    # one rounding step
    assert max_abs_diff(lhs, rhs) < 1e-13
    assert max_abs_diff(lhs, kron_chain([a, b, c])) == 0.0


@given(st.integers(0, 1000))
@settings(max_examples=25, deadline=None)
def test_dagger_involution(seed):
    a = _small_matrix(seed)
    assert max_abs_diff(dagger(dagger(a)), a) == 0.0


def test_kron_guard():
    with pytest.raises(ValueError):
        kron(np.eye(2048), np.eye(2048))


class TestMatrixExponential:
    def test_zero(self):
        assert max_abs_diff(matrix_exponential(np.zeros((4, 4))), np.eye(4)) == 0.0

    def test_diagonal(self):
        d = np.diag([1.0, -2.0, 0.5])
        expect = np.diag(np.exp([1.0, -2.0, 0.5]))
        assert max_abs_diff(matrix_exponential(d), expect) < 1e-14

    @given(st.integers(0, 1000))
    @settings(max_examples=20, deadline=None)
    def test_inverse(self, seed):
        a = 0.5 * _small_matrix(seed)
        prod = matrix_exponential(a) @ matrix_exponential(-a)
        assert max_abs_diff(prod, np.eye(3)) < 1e-12

    def test_large_norm_via_squaring(self):
        a = np.diag([30.0, -30.0])
        expect = np.diag(np.exp([30.0, -30.0]))
        assert max_abs_diff(matrix_exponential(a), expect) / np.exp(30.0) < 1e-12

    def test_action_matches_dense(self):
        a = 0.3 * _small_matrix(17)
        v = _small_matrix(18)[:, :2]
        assert max_abs_diff(expm_action(a, v), matrix_exponential(a) @ v) < 1e-13


class TestDiagonalSpectrum:
    def test_extracts_labels(self):
        m = np.diag([2.0, 1.0, 1.0])
        spec = diagonal_spectrum(m, ["a", "b", "c"], 1e-12)
        assert spec == [("a", 2.0), ("b", 1.0), ("c", 1.0)]

    def test_raises_on_off_diagonal(self):
        m = np.array([[1.0, 0.5], [0.0, 2.0]])
        with pytest.raises(OffDiagonalResidual) as exc:
            diagonal_spectrum(m, [0, 1], 1e-12)
        assert exc.value.value == 0.5

    def test_label_count_mismatch(self):
        with pytest.raises(ValueError):
            diagonal_spectrum(np.eye(2), [0], 1e-12)
