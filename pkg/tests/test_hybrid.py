"""Tests for the boson (x) fermion tensor-product layer."""

from fractions import Fraction

import numpy as np
import pytest

from qps_casimir import boson as bos
from qps_casimir import fermion as fer
from qps_casimir import hybrid as hyb
from qps_casimir.families import ConventionRecord, DEFAULT_CONVENTION
from qps_casimir.linalg import max_abs


@pytest.fixture(scope="module")
def hybrid_z(brep3, frep):
    return hyb.build_hybrid_z(brep3, frep, route="reduced")


class TestKronPairSum:
    def test_apply_matches_columns(self, hybrid_z, brep3):
        pairs = [(0, 0), (1, 5), (4, 17)]
        cols = hybrid_z.columns(pairs)
        basis = np.zeros((hybrid_z.dim, len(pairs)), dtype=complex)
        for k, (b, f) in enumerate(pairs):
            basis[b * fer.DIM + f, k] = 1.0
        assert max_abs(hybrid_z.apply(basis) - cols) == 0.0

    def test_frobenius_distance_to_self_is_zero(self, hybrid_z):
        assert hybrid_z.frobenius_distance(hybrid_z) == 0.0

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            hyb.KronPairSum(4, 2, [(1.0, np.eye(3), np.eye(2))])


class TestMixingOperator:
    def test_route_equivalence(self, brep3, frep):
        assert hyb.route_equivalence_residual(brep3, frep) <= 1e-10

    def test_convention_mismatch_rejected(self, brep3):
        other = fer.build_fermion_rep(ConventionRecord(zeta_star_sign=(-1, 1, 1, 1, 1)))
        with pytest.raises(ValueError):
            hyb.build_hybrid_z(brep3, other)

    def test_lifted_sectors_commute(self, brep3, frep):
        assert hyb.lifted_sector_commutation_residual(brep3, frep) <= 1e-12

    def test_square_decomposition(self, hybrid_z, brep3):
        assert hyb.check_z_squared(hybrid_z, brep3) <= 1e-10

    def test_square_decomposition_small_cutoff(self, frep):
        b2 = bos.build_boson_rep(2, 2)
        z2 = hyb.build_hybrid_z(b2, frep)
        assert hyb.check_z_squared(z2, b2) <= 1e-10


@pytest.fixture(scope="module")
def casimirs(brep3, xi, upsilon3):
    return {order: hyb.HybridCasimir(order, brep3, xi, upsilon=upsilon3)
            for order in (1, 2)}


class TestHybridCasimirs:
    def test_eigenvalues(self, casimirs):
        assert hyb.hybrid_eigenvalue_residual(casimirs[1]) <= 1e-10
        assert hyb.hybrid_eigenvalue_residual(casimirs[2]) <= 1e-10

    def test_eigenvalue_formulas(self, casimirs):
        assert casimirs[1].eigenvalue(1, 1) == Fraction(2)
        assert casimirs[2].eigenvalue(1, 1) == Fraction(17, 2)
        assert casimirs[2].eigenvalue(0, 3) == Fraction(5, 2)

    def test_centrality(self, casimirs, upsilon3, xi):
        for order in (1, 2):
            assert hyb.hybrid_centrality_residual(
                casimirs[order], upsilon3, xi) <= 1e-10

    def test_apply_matches_columns(self, casimirs, brep3):
        space = hyb.HybridSpace(brep3.space)
        b, f = int(brep3.space.safe_indices()[3]), 9
        v = np.zeros((space.dim, 1))
        v[space.index(b, f), 0] = 1.0
        applied = casimirs[2].apply(v)
        n = brep3.space.occupation(b).total
        ft = fer.FermionOccupation.from_index(f).total
        lam = float(casimirs[2].eigenvalue(n, ft))
        assert max_abs(applied - lam * v) <= 1e-10


class TestSpectrumTable:
    def test_rows(self, brep3):
        rows = {(r.n_total, r.f_total): r
                for r in hyb.hybrid_spectrum_table(brep3.space, 2)}
        r = rows[(1, 1)]
        assert (r.c1, r.c2, r.degeneracy) == (Fraction(2), Fraction(17, 2), 25)
        assert rows[(0, 0)].degeneracy == 1
        assert rows[(2, 0)].degeneracy == 10
        assert rows[(0, 2)].degeneracy == 10

    def test_degeneracies_match_enumeration(self, brep3):
        space = brep3.space
        counted = {}
        for b in space.safe_indices():
            for f in range(fer.DIM):
                key = (space.occupation(b).total,
                       fer.FermionOccupation.from_index(f).total)
                counted[key] = counted.get(key, 0) + 1
        for r in hyb.hybrid_spectrum_table(space, 2):
            assert counted[(r.n_total, r.f_total)] == r.degeneracy


class TestConventionSweep:
    def test_selected_is_default_and_unique(self, convention_report):
        counts = convention_report.passed_counts()
        assert convention_report.combos[convention_report.selected] == DEFAULT_CONVENTION
        assert counts[convention_report.selected] == len(hyb.BATTERY)
        assert counts.count(max(counts)) == 1

    def test_every_other_combination_fails(self, convention_report):
        for i, row in enumerate(convention_report.battery):
            if i != convention_report.selected:
                assert not all(row.values())

    def test_deviation_list(self, convention_report):
        assert len(convention_report.deviations) == 5

    def test_flipped_boson_star_fails_spectrum(self, convention_report):
        # combinations differing only in the bosonic star sign must fail
        # the bosonic battery items
        for combo, row in zip(convention_report.combos, convention_report.battery):
            if (combo.zeta_star_sign == DEFAULT_CONVENTION.zeta_star_sign
                    and combo.z_star_sign != DEFAULT_CONVENTION.z_star_sign):
                assert not row["boson_casimir_spectra"]
