"""Tests for the 32-dimensional fermionic sector."""

import numpy as np
import pytest

from qps_casimir import fermion as fer
from qps_casimir.linalg import max_abs, max_abs_diff


class TestOccupations:
    def test_index_roundtrip(self):
        for i in range(fer.DIM):
            assert fer.FermionOccupation.from_index(i).index == i

    def test_index_weights(self):
        assert fer.FermionOccupation((1, 0, 0, 0, 0)).index == 1
        assert fer.FermionOccupation((0, 0, 0, 0, 1)).index == 16

    def test_rejects_bad_bits(self):
        with pytest.raises(ValueError):
            fer.FermionOccupation((2, 0, 0, 0, 0))


class TestLadders:
    def test_anticommutation_both_forms(self, frep):
        assert fer.ladder_anticommutation_residual(frep, "delta") == 0.0
        assert fer.ladder_anticommutation_residual(frep, "eta") == 0.0

    def test_nilpotency(self, frep):
        for mu in range(5):
            assert max_abs(frep.zeta[mu] @ frep.zeta[mu]) == 0.0

    def test_string_sign(self, frep):
        # raising mode 1 over an occupied mode 0 flips the sign
        start = fer.basis_state(fer.FermionOccupation((1, 0, 0, 0, 0)))
        target = fer.basis_state(fer.FermionOccupation((1, 1, 0, 0, 0)))
        assert max_abs(frep.zeta_dagger[1] @ start + target) == 0.0

    def test_vacuum_annihilation(self, frep):
        assert fer.annihilation_below_vacuum_residual(frep) == 0.0

    def test_state_construction(self, frep):
        assert fer.state_construction_residual(frep) == 0.0


class TestClifford:
    def test_relations(self, frep):
        assert fer.clifford_residual(frep) == 0.0

    def test_alpha_squares_to_metric(self, frep):
        eta = frep.metric.diag
        eye = np.eye(fer.DIM)
        for mu in range(5):
            assert max_abs_diff(frep.alpha[mu] @ frep.alpha[mu], eta[mu] * eye) == 0.0


class TestGenerators:
    def test_structure_constants(self, xi):
        assert fer.check_xi_structure(xi) <= 1e-12

    def test_xi_sigma_relation(self, frep, xi, sigma):
        eta = frep.metric.diag
        eye = np.eye(fer.DIM, dtype=complex)
        for mu in range(5):
            for nu in range(5):
                off = 0.5 * eta[mu] * eye if mu == nu else 0.0 * eye
                assert max_abs_diff(xi[mu, nu], eta[mu] * sigma[mu, nu] - off) == 0.0

    def test_split(self, xi):
        s = fer.u1_su14_split(xi)
        assert len(s.traceless) == 24
        assert s.centrality_residual <= 1e-12
        assert s.trace_residual <= 1e-12
        assert s.closure_residual <= 1e-12


class TestCasimirs:
    def test_linear_spectrum(self, xi):
        c1 = fer.casimir_f(xi, 1)
        assert max_abs(c1 - np.diag(np.diag(c1))) == 0.0
        counts = {}
        for f in fer.all_occupations():
            val = np.real(c1[f.index, f.index])
            assert val == pytest.approx(f.total - 2.5, abs=1e-14)
            counts[f.total] = counts.get(f.total, 0) + 1
        assert counts == {0: 1, 1: 5, 2: 10, 3: 10, 4: 5, 5: 1}

    def test_quadratic_constant(self, xi):
        c2 = fer.casimir_f(xi, 2)
        assert max_abs_diff(c2, 1.25 * np.eye(fer.DIM)) <= 1e-12

    def test_quadratic_centrality(self, xi):
        c2 = fer.casimir_f(xi, 2)
        assert fer.casimir_centrality_residual(c2, xi) <= 1e-12

    def test_transposed_pairing_not_constant(self, xi):
        # the alternative index pairing is diagonal but state-dependent
        c2t = fer.casimir_f(xi, 2, "transposed")
        one = fer.FermionOccupation((1, 0, 0, 0, 0)).index
        assert np.real(c2t[one, one]) == pytest.approx(1 * 4 + 1.25, abs=1e-12)
        assert max_abs_diff(c2t, 1.25 * np.eye(fer.DIM)) > 1.0


class TestCharges:
    def test_sterile_states(self):
        rows = fer.classify_states()
        sterile = sorted(r.occupation.f for r in rows if r.sterile)
        assert sterile == [(0, 0, 0, 0, 1), (1, 1, 1, 1, 0)]

    def test_example_row(self):
        c = fer.charges(fer.FermionOccupation((1, 1, 0, 0, 1)))
        assert (c.i3_sixths, c.yw_sixths, c.q_sixths) == (3, 2, 4)

    def test_total_charge_balances(self):
        rows = fer.classify_states()
        assert sum(r.charge.q_sixths for r in rows) == 0
        assert sum(r.charge.i3_sixths for r in rows) == 0
        assert sum(r.charge.yw_sixths for r in rows) == 0

    def test_charge_relation_enforced(self):
        with pytest.raises(ValueError):
            fer.ChargeAssignment(i3_sixths=3, yw_sixths=2, q_sixths=0)
