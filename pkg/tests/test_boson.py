"""Tests for the truncated bosonic Fock sector."""

import numpy as np
import pytest

from qps_casimir import boson as bos
from qps_casimir.families import quadratic_contraction_apply, structure_constant_residual
from qps_casimir.linalg import max_abs


class TestSpace:
    def test_dimensions(self):
        assert bos.TruncatedFockSpace(3, 2).dim == 1024
        assert bos.TruncatedFockSpace(2, 2).dim == 243

    def test_index_roundtrip(self):
        space = bos.TruncatedFockSpace(3, 2)
        for i in range(space.dim):
            assert space.index(space.occupation(i)) == i

    def test_safe_indices(self):
        space = bos.TruncatedFockSpace(3, 2)
        safe = space.safe_indices()
        assert len(safe) == 32
        assert all(max(space.occupation(i).n) <= 1 for i in safe)

    def test_rejects_margin_exceeding_cutoff(self):
        with pytest.raises(ValueError):
            bos.TruncatedFockSpace(2, 3)


class TestLadders:
    def test_commutators(self, brep3):
        res = bos.ladder_commutation_residuals(brep3, probes=16)
        assert res["vanishing"] <= 1e-12
        assert res["delta_form"] <= 1e-12
        assert res["eta_form"] <= 1e-12

    def test_reduced_operators(self, brep3):
        res = bos.reduced_px_residuals(brep3)
        assert res["reconstruction"] <= 1e-12
        assert res["adjointness"] <= 1e-12

    def test_state_construction(self, brep3):
        bos.bosonic_state(brep3, bos.BosonOccupation((0, 1, 0, 1, 0)))

    def test_boundary_column_is_wrong(self, brep3):
        # the commutator identity must fail at the truncation boundary;
        # that is the reason the safe subspace exists
        space = brep3.space
        top = space.index(bos.BosonOccupation((3, 0, 0, 0, 0)))
        v = np.zeros(space.dim)
        v[top] = 1.0
        comm = brep3.z[0] @ (brep3.z_dagger[0] @ v) - brep3.z_dagger[0] @ (brep3.z[0] @ v)
        assert max_abs(comm - v) > 1.0


class TestGenerators:
    def test_structure_constants_on_safe_block(self, brep3, upsilon3):
        v = brep3.space.basis_block(brep3.space.safe_indices())
        assert structure_constant_residual(upsilon3, v) <= 1e-12

    def test_apply_matches_family(self, brep3, upsilon3):
        v = brep3.space.basis_block(brep3.space.safe_indices()[:4])
        for mu, nu in [(0, 0), (1, 3), (4, 2)]:
            direct = upsilon3[mu, nu] @ v
            assert max_abs(bos.apply_upsilon(brep3, mu, nu, v) - direct) == 0.0


class TestCasimirs:
    def test_linear_spectrum(self, brep3):
        space = brep3.space
        safe = space.safe_indices()
        v = space.basis_block(safe)
        n = np.array([space.occupation(i).total for i in safe])
        applied = bos.casimir_b_apply(brep3, 1, v)
        assert max_abs(applied - v * (n + 2.5)) <= 1e-10

    def test_quadratic_spectrum(self, brep3):
        space = brep3.space
        safe = space.safe_indices()
        v = space.basis_block(safe)
        n = np.array([space.occupation(i).total for i in safe])
        applied = bos.casimir_b_apply(brep3, 2, v)
        assert max_abs(applied - v * (n ** 2 + 5.0 * n + 1.25)) <= 1e-10

    def test_number_operator_identity(self, brep3):
        space = brep3.space
        v = space.basis_block(space.safe_indices())

        def n_apply(x):
            return sum(brep3.z_dagger[mu] @ (brep3.z[mu] @ x) for mu in range(5))

        lhs = bos.casimir_b_apply(brep3, 2, v)
        rhs = n_apply(n_apply(v)) + 5.0 * n_apply(v) + 1.25 * v
        assert max_abs(lhs - rhs) <= 1e-10

    def test_matrix_contract_agrees(self, brep3, upsilon3):
        c2 = bos.casimir_b(upsilon3, 2)
        space = brep3.space
        v = space.basis_block(space.safe_indices())
        assert max_abs(c2 @ v - bos.casimir_b_apply(brep3, 2, v)) <= 1e-10

    def test_literal_diagnostic(self, brep3, upsilon3):
        report = bos.casimir_b2_literal_report(brep3, upsilon3)
        assert report["diagonal_by_total"][0] == pytest.approx(1.25, abs=1e-12)
        assert report["diagonal_by_total"][1] == pytest.approx(3.25, abs=1e-12)
        assert report["max_off_diagonal"] > 0.1
        assert report["max_generator_commutator"] > 0.1

    def test_brute_force_oracle(self, brep3, upsilon3):
        space = brep3.space
        v = space.basis_block(space.safe_indices())
        for pairing in ("literal", "transposed"):
            brute = quadratic_contraction_apply(upsilon3, pairing, v)
            collapsed = bos.casimir_b_apply(brep3, 2, v, pairing=pairing)
            assert max_abs(brute - collapsed) <= 1e-10

    def test_truncation_robustness(self):
        diags = {}
        for cutoff in (3, 4):
            rep = bos.build_bosonic_ladders(cutoff, 2)
            idx = rep.space.indices_with_max_occupation(1)
            block = rep.space.basis_block(idx)
            applied = bos.casimir_b_apply(rep, 2, block)
            diags[cutoff] = np.einsum("ij,ij->j", block, applied)
        assert max_abs(diags[3] - diags[4]) <= 1e-10
