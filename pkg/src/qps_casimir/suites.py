"""Named verification suites over the library modules.

Each suite runs a battery of checks and returns a :class:`SuiteReport`
of per-check records (name, anchor, pass flag, residual, tolerance,
wall time).  Suites are deterministic given a :class:`RunConfig`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import boson as bos
from . import fermion as fer
from . import hybrid as hyb
from . import lct
from .families import ConventionRecord, DEFAULT_CONVENTION, quadratic_contraction_apply
from .linalg import ToleranceConfig, max_abs, max_abs_diff

SUITE_NAMES = ("fermion", "boson", "hybrid", "group")


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by every suite and report."""

    cutoff: int = 3
    safe_margin: int = 2
    seed: int = 42
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    convention: ConventionRecord = DEFAULT_CONVENTION
    format: str = "md"

    def __post_init__(self):
        if self.cutoff < self.safe_margin:
            raise ValueError(
                f"cutoff {self.cutoff} smaller than safe margin {self.safe_margin}")
        if self.format not in ("json", "csv", "md"):
            raise ValueError(f"format must be json, csv or md, not {self.format!r}")


@dataclass(frozen=True)
class CheckRecord:
    name: str
    anchor: str
    passed: bool
    max_residual: float
    tolerance: float
    wall_ms: float


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    convention: ConventionRecord
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


class _Recorder:
    def __init__(self):
        self.records = []

    def run(self, name: str, anchor: str, tolerance: float, fn) -> None:
        start = time.perf_counter()
        residual = float(fn())
        wall = (time.perf_counter() - start) * 1000.0
        if residual < 0:
            raise ArithmeticError(f"check {name} produced negative residual")
        self.records.append(CheckRecord(
            name=name, anchor=anchor, passed=residual <= tolerance,
            max_residual=residual, tolerance=tolerance, wall_ms=wall))

    def report(self, suite: str, convention: ConventionRecord) -> SuiteReport:
        return SuiteReport(suite=suite, convention=convention,
                           checks=tuple(self.records))


def _bool_residual(ok: bool) -> float:
    return 0.0 if ok else 1.0


def run_fermion_suite(cfg: RunConfig) -> SuiteReport:
    tol = cfg.tolerances
    rec = _Recorder()
    rep = fer.build_fermion_rep(cfg.convention)
    xi = fer.build_xi(rep)
    sigma = fer.build_sigma(rep)
    c1 = fer.casimir_f(xi, 1)
    c2 = fer.casimir_f(xi, 2, cfg.convention.fermionic_c2_pairing)

    rec.run("clifford_relations", "clifford-algebra-relations", tol.exact_tol,
            lambda: fer.clifford_residual(rep))
    rec.run("zeta_anticommutation_delta", "ladder-anticommutation-adjoint", tol.exact_tol,
            lambda: fer.ladder_anticommutation_residual(rep, "delta"))
    rec.run("zeta_anticommutation_eta", "ladder-anticommutation-metric", tol.exact_tol,
            lambda: fer.ladder_anticommutation_residual(rep, "eta"))
    rec.run("Xi_structure_constants", "generator-commutation-relations", tol.exact_tol,
            lambda: fer.check_xi_structure(xi))

    def c1_spectrum() -> float:
        residual = max_abs(c1 - np.diag(np.diag(c1)))
        counts = {}
        for f in fer.all_occupations():
            val = float(np.real(c1[f.index, f.index]))
            residual = max(residual, abs(val - (f.total - 2.5)))
            counts[f.total] = counts.get(f.total, 0) + 1
        expected = {0: 1, 1: 5, 2: 10, 3: 10, 4: 5, 5: 1}
        return max(residual, _bool_residual(counts == expected))

    rec.run("C_F1_spectrum", "fermion-linear-casimir-spectrum", tol.exact_tol, c1_spectrum)
    rec.run("C_F2_constant", "fermion-quadratic-casimir-value", tol.exact_tol,
            lambda: max_abs_diff(c2, 1.25 * np.eye(fer.DIM)))
    rec.run("C_F2_centrality", "fermion-quadratic-casimir-centrality", tol.exact_tol,
            lambda: fer.casimir_centrality_residual(c2, xi))

    def sigma_xi_map() -> float:
        eta = rep.metric.diag
        eye = np.eye(fer.DIM, dtype=complex)
        residual = 0.0
        for mu in range(5):
            for nu in range(5):
                off = 0.5 * eta[mu] * eye if mu == nu else 0.0 * eye
                residual = max(residual, max_abs_diff(
                    xi[mu, nu], eta[mu] * sigma[mu, nu] - off))
        return residual

    rec.run("Xi_from_number_operators", "generator-number-operator-map", tol.exact_tol,
            sigma_xi_map)

    def split() -> float:
        s = fer.u1_su14_split(xi)
        return max(s.centrality_residual, s.trace_residual, s.closure_residual)

    rec.run("u1_su14_split", "central-traceless-decomposition", tol.exact_tol, split)

    def classification() -> float:
        rows = fer.classify_states()
        sterile = [r.occupation.f for r in rows if r.sterile]
        ok = sterile == [(0, 0, 0, 0, 1), (1, 1, 1, 1, 0)] or \
            sorted(sterile) == sorted([(0, 0, 0, 0, 1), (1, 1, 1, 1, 0)])
        ok &= sum(r.charge.q_sixths for r in rows) == 0
        ok &= len(rows) == fer.DIM
        return _bool_residual(bool(ok))

    rec.run("charge_classification", "standard-model-charge-table", tol.exact_tol,
            classification)
    rec.run("vacuum_annihilation", "annihilation-below-vacuum", tol.exact_tol,
            lambda: fer.annihilation_below_vacuum_residual(rep))
    rec.run("state_construction", "raising-product-state-construction", tol.exact_tol,
            lambda: fer.state_construction_residual(rep))
    return rec.report("fermion", cfg.convention)


def run_boson_suite(cfg: RunConfig) -> SuiteReport:
    tol = cfg.tolerances
    rec = _Recorder()
    rep = bos.build_boson_rep(cfg.cutoff, cfg.safe_margin, cfg.convention)
    space = rep.space
    upsilon = bos.build_upsilon(rep)
    safe = space.safe_indices()
    v_safe = space.basis_block(safe)
    n_safe = np.array([space.occupation(i).total for i in safe])

    comm = bos.ladder_commutation_residuals(rep, probes=32, seed=cfg.seed)
    rec.run("z_commutation_vanishing", "ladder-commutation-vanishing", tol.exact_tol,
            lambda: comm["vanishing"])
    rec.run("z_commutation_delta", "ladder-commutation-adjoint", tol.exact_tol,
            lambda: comm["delta_form"])
    rec.run("z_star_commutation_eta", "ladder-commutation-metric", tol.exact_tol,
            lambda: comm["eta_form"])

    px = bos.reduced_px_residuals(rep)
    rec.run("reduced_px_reconstruction", "reduced-operator-split", tol.exact_tol,
            lambda: max(px["reconstruction"], px["adjointness"]))

    from .families import structure_constant_residual

    rec.run("Upsilon_structure_constants", "generator-commutation-relations", tol.exact_tol,
            lambda: structure_constant_residual(upsilon, v_safe))

    def c_b1_spectrum() -> float:
        applied = bos.casimir_b_apply(rep, 1, v_safe)
        return max_abs(applied - v_safe * (n_safe + 2.5))

    rec.run("C_B1_spectrum", "boson-linear-casimir-spectrum", tol.num_tol, c_b1_spectrum)

    def c_b2_spectrum() -> float:
        applied = bos.casimir_b_apply(rep, 2, v_safe)
        return max_abs(applied - v_safe * (n_safe ** 2 + 5.0 * n_safe + 1.25))

    rec.run("C_B2_spectrum", "boson-quadratic-casimir-spectrum", tol.num_tol, c_b2_spectrum)

    def number_identity() -> float:
        def n_apply(x):
            return sum(rep.z_dagger[mu] @ (rep.z[mu] @ x) for mu in range(5))

        lhs = bos.casimir_b_apply(rep, 2, v_safe)
        rhs = n_apply(n_apply(v_safe)) + 5.0 * n_apply(v_safe) + 1.25 * v_safe
        return max_abs(lhs - rhs)

    rec.run("C_B2_number_operator_identity", "boson-casimir-number-identity", tol.num_tol,
            number_identity)

    def literal_diagnostic() -> float:
        report = bos.casimir_b2_literal_report(rep, upsilon)
        residual = abs(report["diagonal_by_total"].get(0, np.inf) - 1.25)
        residual = max(residual, abs(report["diagonal_by_total"].get(1, np.inf) - 3.25))
        # the deviation must actually be visible: require genuine
        # off-diagonal mass and non-centrality
        residual = max(residual, _bool_residual(report["max_off_diagonal"] > 0.1))
        residual = max(residual, _bool_residual(report["max_generator_commutator"] > 0.1))
        return residual

    rec.run("C_B2_literal_diagnostic", "literal-contraction-diagnostic", tol.num_tol,
            literal_diagnostic)

    def contraction_oracle() -> float:
        residual = 0.0
        for pairing in ("literal", "transposed"):
            brute = quadratic_contraction_apply(upsilon, pairing, v_safe)
            collapsed = bos.casimir_b_apply(rep, 2, v_safe, pairing=pairing)
            residual = max(residual, max_abs(brute - collapsed))
        return residual

    rec.run("contraction_oracle_agreement", "brute-force-contraction-oracle", tol.num_tol,
            contraction_oracle)

    def robustness() -> float:
        # always compares cutoffs 3 and 4 on their shared safe block;
        # larger pairs would not fit the memory envelope
        reps = {c: bos.build_bosonic_ladders(c, 2, cfg.convention) for c in (3, 4)}
        residual = 0.0
        for order in (1, 2):
            diags = {}
            for c, r in reps.items():
                idx = r.space.indices_with_max_occupation(1)
                block = r.space.basis_block(idx)
                applied = bos.casimir_b_apply(r, order, block)
                diags[c] = np.einsum("ij,ij->j", block, applied)
            residual = max(residual, max_abs(diags[3] - diags[4]))
        return residual

    rec.run("truncation_robustness", "cutoff-robustness", tol.num_tol, robustness)

    def state_construction() -> float:
        probes = [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (0, 0, 1, 0, 0), (0, 1, 0, 0, 1)]
        for n in probes:
            bos.bosonic_state(rep, bos.BosonOccupation(n))  # raises on mismatch
        return 0.0

    rec.run("state_construction", "raising-product-state-construction", tol.exact_tol,
            state_construction)
    return rec.report("boson", cfg.convention)


def run_hybrid_suite(cfg: RunConfig) -> SuiteReport:
    tol = cfg.tolerances
    rec = _Recorder()
    brep = bos.build_boson_rep(cfg.cutoff, cfg.safe_margin, cfg.convention)
    frep = fer.build_fermion_rep(cfg.convention)
    xi = fer.build_xi(frep)
    upsilon = bos.build_upsilon(brep)

    rec.run("route_equivalence", "mixing-operator-route-equivalence", tol.num_tol,
            lambda: hyb.route_equivalence_residual(brep, frep))
    rec.run("lifted_sector_commutation", "lifted-sector-commutation", tol.exact_tol,
            lambda: hyb.lifted_sector_commutation_residual(brep, frep, seed=cfg.seed))

    z = hyb.build_hybrid_z(brep, frep, route="reduced")
    rec.run("Z_squared_decomposition", "mixing-operator-square", tol.num_tol,
            lambda: hyb.check_z_squared(z, brep))

    cas = {order: hyb.HybridCasimir(order, brep, xi, upsilon=upsilon)
           for order in (1, 2)}
    rec.run("hybrid_C1_eigenvalues", "hybrid-linear-casimir-spectrum", tol.num_tol,
            lambda: hyb.hybrid_eigenvalue_residual(cas[1]))
    rec.run("hybrid_C2_eigenvalues", "hybrid-quadratic-casimir-spectrum", tol.num_tol,
            lambda: hyb.hybrid_eigenvalue_residual(cas[2]))
    rec.run("hybrid_casimir_centrality", "hybrid-casimir-centrality", tol.num_tol,
            lambda: max(hyb.hybrid_centrality_residual(cas[1], upsilon, xi),
                        hyb.hybrid_centrality_residual(cas[2], upsilon, xi)))

    def degeneracy_table() -> float:
        rows = hyb.hybrid_spectrum_table(brep.space, max_total=2)
        counted = {}
        for b in brep.space.safe_indices():
            for f in range(fer.DIM):
                key = (brep.space.occupation(b).total,
                       fer.FermionOccupation.from_index(f).total)
                counted[key] = counted.get(key, 0) + 1
        ok = all(counted.get((r.n_total, r.f_total)) == r.degeneracy for r in rows)
        marked = {(r.n_total, r.f_total): (r.c1, r.c2, r.degeneracy) for r in rows}
        from fractions import Fraction

        ok &= marked.get((1, 1)) == (Fraction(2), Fraction(17, 2), 25)
        return _bool_residual(bool(ok))

    rec.run("spectrum_degeneracies", "hybrid-spectrum-degeneracies", tol.exact_tol,
            degeneracy_table)

    def sweep() -> float:
        report = hyb.resolve_conventions(cfg.cutoff, cfg.safe_margin, tol.num_tol)
        counts = report.passed_counts()
        ok = counts[report.selected] == len(hyb.BATTERY)
        ok &= counts.count(max(counts)) == 1
        ok &= report.combos[report.selected] == DEFAULT_CONVENTION
        ok &= len(report.deviations) == 5
        return _bool_residual(bool(ok))

    rec.run("convention_sweep_unique", "convention-sweep-uniqueness", tol.exact_tol, sweep)

    def small_cutoff_spot() -> float:
        b2 = bos.build_boson_rep(2, 2, cfg.convention)
        z2 = hyb.build_hybrid_z(b2, frep, route="reduced")
        residual = hyb.check_z_squared(z2, b2)
        residual = max(residual, hyb.route_equivalence_residual(b2, frep))
        return residual

    rec.run("small_cutoff_spot_check", "mixing-operator-square", tol.num_tol,
            small_cutoff_spot)
    return rec.report("hybrid", cfg.convention)


def run_group_suite(cfg: RunConfig) -> SuiteReport:
    tol = cfg.tolerances
    rec = _Recorder()
    batch_tol = 1e-9

    batch = lct.pseudo_unitarity_batch(100, 1.0, seed=cfg.seed)
    rec.run("pseudo_unitarity_batch", "group-pseudo-unitarity", batch_tol,
            lambda: batch["pseudo_unitarity"])
    rec.run("symplectic_block_invariants", "block-embedding-invariants", batch_tol,
            lambda: max(batch["symplectic_form"], batch["metric_form"]))
    rec.run("embedding_homomorphism", "block-embedding-homomorphism", batch_tol,
            lambda: lct.embedding_homomorphism_residual(50, 1.0, seed=cfg.seed))
    rec.run("algebra_span_dimension", "algebra-dimension-probe", tol.exact_tol,
            lambda: _bool_residual(lct.algebra_span_dimension() == 25))

    def ccr() -> float:
        eye, zero = np.eye(5), np.zeros((5, 5))
        ok1, r1 = lct.ccr_preservation_check(eye, zero, zero, eye)
        ok2, r2 = lct.ccr_preservation_check(zero, -eye, eye, zero)
        ok3, _ = lct.ccr_preservation_check(2 * eye, zero, zero, eye)
        return max(r1, r2, _bool_residual(ok1 and ok2 and not ok3))

    rec.run("ccr_preservation", "commutation-preservation-condition", tol.exact_tol, ccr)

    def factorization() -> float:
        eta = np.diag([1.0, -1, -1, -1, -1])
        fac = lct.covariance_factorization_check(np.eye(5), np.eye(5), np.zeros((5, 5)))
        residual = max(max_abs_diff(fac.p_block, eta), max_abs_diff(fac.x_block, eta),
                       max_abs(fac.rho_block))
        rng = np.random.default_rng(cfg.seed)
        fac2 = lct.covariance_factorization_check(*(rng.standard_normal((5, 5))
                                                    for _ in range(3)))
        return max(residual, fac2.symmetry_residual, fac2.pattern_residual)

    rec.run("covariance_factorization", "factored-quadratic-form", tol.exact_tol,
            factorization)

    frep = fer.build_fermion_rep(cfg.convention)
    xi = fer.build_xi(frep)
    el = lct.random_algebra_element(cfg.seed, 0.1)
    fcov = lct.fermionic_covariance_check(el, frep, xi)
    rec.run("fermionic_covariance_algebra", "fermion-covariance-linearized", tol.exact_tol,
            lambda: fcov["algebra"])
    rec.run("fermionic_covariance_group", "fermion-covariance-conjugation", tol.approx_tol,
            lambda: fcov["group"])

    brep = bos.build_boson_rep(cfg.cutoff, cfg.safe_margin, cfg.convention)
    upsilon = bos.build_upsilon(brep)
    bcov = lct.bosonic_covariance_check(el, brep, upsilon)
    rec.run("bosonic_covariance_algebra", "boson-covariance-linearized", tol.exact_tol,
            lambda: bcov["algebra"])
    rec.run("bosonic_covariance_group", "boson-covariance-conjugation", tol.approx_tol,
            lambda: bcov["group"])

    witness = lct.double_cover_witness(frep, xi)
    rec.run("double_cover_witness", "double-cover-witness", batch_tol,
            lambda: max(witness.values()))
    return rec.report("group", cfg.convention)


_RUNNERS = {
    "fermion": run_fermion_suite,
    "boson": run_boson_suite,
    "hybrid": run_hybrid_suite,
    "group": run_group_suite,
}


def run_suite(cfg: RunConfig, suite: str):
    """Run one named suite, or all of them; returns a list of reports."""
    if suite == "all":
        return [_RUNNERS[name](cfg) for name in SUITE_NAMES]
    if suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    return [_RUNNERS[suite](cfg)]
