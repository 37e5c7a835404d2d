"""Acceptance gate: thirteen numbered criteria, one test (and one
printed pass/fail line) per criterion."""

import time
from fractions import Fraction

import numpy as np
import pytest

from qps_casimir import boson as bos
from qps_casimir import fermion as fer
from qps_casimir import hybrid as hyb
from qps_casimir import lct
from qps_casimir.families import DEFAULT_CONVENTION, quadratic_contraction_apply
from qps_casimir.linalg import max_abs, max_abs_diff, matrix_exponential


def _report(num, label, passed):
    print(f"ACCEPTANCE {num:02d} {label}: {'PASS' if passed else 'FAIL'}")
    assert passed


def test_criterion_01_clifford_relations(frep):
    start = time.perf_counter()
    residual = fer.clifford_residual(frep)
    elapsed = time.perf_counter() - start
    _report(1, "clifford_relations", residual <= 1e-12 and elapsed < 1.0)


def test_criterion_02_fermion_linear_spectrum(xi):
    c1 = fer.casimir_f(xi, 1)
    off = max_abs(c1 - np.diag(np.diag(c1)))
    counts = {}
    value_ok = True
    for f in fer.all_occupations():
        val = float(np.real(c1[f.index, f.index]))
        value_ok &= abs(val - (f.total - 2.5)) <= 1e-12
        counts[f.total] = counts.get(f.total, 0) + 1
    mult_ok = counts == {0: 1, 1: 5, 2: 10, 3: 10, 4: 5, 5: 1}
    _report(2, "fermion_linear_spectrum", off <= 1e-12 and value_ok and mult_ok)


def test_criterion_03_fermion_quadratic_casimir(xi):
    c2 = fer.casimir_f(xi, 2)
    constant = max_abs_diff(c2, 1.25 * np.eye(fer.DIM))
    central = fer.casimir_centrality_residual(c2, xi)
    _report(3, "fermion_quadratic_casimir", constant <= 1e-12 and central <= 1e-12)


def test_criterion_04_structure_constants(xi):
    _report(4, "structure_constants", fer.check_xi_structure(xi) <= 1e-12)


def test_criterion_05_bosonic_spectra(brep3):
    space = brep3.space
    safe = space.safe_indices()
    v = space.basis_block(safe)
    n = np.array([space.occupation(i).total for i in safe])
    r1 = max_abs(bos.casimir_b_apply(brep3, 1, v) - v * (n + 2.5))
    r2 = max_abs(bos.casimir_b_apply(brep3, 2, v) - v * (n ** 2 + 5.0 * n + 1.25))

    def n_apply(x):
        return sum(brep3.z_dagger[mu] @ (brep3.z[mu] @ x) for mu in range(5))

    rhs = n_apply(n_apply(v)) + 5.0 * n_apply(v) + 1.25 * v
    r3 = max_abs(bos.casimir_b_apply(brep3, 2, v) - rhs)
    _report(5, "bosonic_spectra", max(r1, r2, r3) <= 1e-10)


def test_criterion_06_literal_contraction_diagnostic(brep3, upsilon3):
    space = brep3.space
    one = [i for i in space.safe_indices() if space.occupation(i).total == 1]
    v = space.basis_block(np.array(one))
    literal = quadratic_contraction_apply(upsilon3, "literal", v)
    shipped = bos.casimir_b_apply(brep3, 2, v)
    diag_literal = np.array([np.real(literal[i, k]) for k, i in enumerate(one)])
    diag_shipped = np.array([np.real(shipped[i, k]) for k, i in enumerate(one)])
    diag_ok = np.allclose(diag_literal, 13.0 / 4.0, atol=1e-10) and \
        np.allclose(diag_shipped, 29.0 / 4.0, atol=1e-10)
    report = bos.casimir_b2_literal_report(brep3, upsilon3)
    _report(6, "literal_contraction_diagnostic",
            diag_ok and report["max_off_diagonal"] > 0.1)


def test_criterion_07_hybrid_decomposition(brep3, frep, xi, upsilon3):
    z = hyb.build_hybrid_z(brep3, frep, route="reduced")
    r_sq = hyb.check_z_squared(z, brep3)
    low = [i for i in brep3.space.safe_indices()
           if brep3.space.occupation(i).total <= 1]
    residual = 0.0
    formulas_ok = True
    for order in (1, 2):
        cas = hyb.HybridCasimir(order, brep3, xi, upsilon=upsilon3)
        residual = max(residual, hyb.hybrid_eigenvalue_residual(cas, boson_indices=low))
        for n in (0, 1):
            for f in range(6):
                expect = Fraction(n + f) if order == 1 \
                    else Fraction(n * (n + 5)) + Fraction(5, 2)
                formulas_ok &= cas.eigenvalue(n, f) == expect
    _report(7, "hybrid_decomposition",
            r_sq <= 1e-10 and residual <= 1e-10 and formulas_ok)


def test_criterion_08_charge_classification():
    rows1 = fer.classify_states()
    rows2 = fer.classify_states()
    sterile = [r.occupation.f for r in rows1 if r.sterile]
    ok = sorted(sterile) == [(0, 0, 0, 0, 1), (1, 1, 1, 1, 0)]
    table1 = [(r.occupation.f, r.charge.i3_sixths, r.charge.yw_sixths,
               r.charge.q_sixths) for r in rows1]
    table2 = [(r.occupation.f, r.charge.i3_sixths, r.charge.yw_sixths,
               r.charge.q_sixths) for r in rows2]
    _report(8, "charge_classification", ok and table1 == table2)


def test_criterion_09_group_layer():
    batch = lct.pseudo_unitarity_batch(100, 1.0)
    hom = lct.embedding_homomorphism_residual(50, 1.0)
    _report(9, "group_layer",
            max(batch["pseudo_unitarity"], batch["symplectic_form"],
                batch["metric_form"], hom) <= 1e-9)


def test_criterion_10_covariance(frep, xi, brep3, upsilon3):
    el = lct.random_algebra_element(42, 0.1)
    fres = lct.fermionic_covariance_check(el, frep, xi)
    bres = lct.bosonic_covariance_check(el, brep3, upsilon3)
    _report(10, "covariance",
            max(fres["algebra"], bres["algebra"]) <= 1e-12
            and max(fres["group"], bres["group"]) <= 1e-6)


def test_criterion_11_double_cover(frep, xi):
    report = lct.double_cover_witness(frep, xi)
    c1 = fer.casimir_f(xi, 1)
    s4 = matrix_exponential(4j * np.pi * c1)
    _report(11, "double_cover",
            max(report.values()) <= 1e-9
            and max_abs_diff(s4, np.eye(fer.DIM)) <= 1e-9)


def test_criterion_12_convention_sweep(convention_report):
    counts = convention_report.passed_counts()
    ok = counts[convention_report.selected] == len(hyb.BATTERY)
    ok &= counts.count(max(counts)) == 1
    ok &= convention_report.combos[convention_report.selected] == DEFAULT_CONVENTION
    ok &= len(convention_report.deviations) == 5
    _report(12, "convention_sweep", bool(ok))


def test_criterion_13_performance_envelope(timed_suite_reports):
    reports, timings = timed_suite_reports
    all_pass = all(r.passed for r in reports.values())
    total = sum(timings.values())
    _report(13, "performance_envelope",
            all_pass and total < 60.0 and timings["fermion"] < 1.0)
