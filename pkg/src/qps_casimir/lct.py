"""Group layer: algebra elements, exponentiation, the real block
embedding, and covariance of the Fock representations.

Algebra elements are 5x5 matrices a with a^dag eta + eta a = 0.  Their
exponentials are pseudo-unitary; splitting real and imaginary parts
embeds them as 10x10 real matrices preserving both the symplectic form
and the (2,8) metric.  The conjugation action of the exponentiated
generators on the ladder operators is checked against the linear matrix
action in both sectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import boson as bos
from . import fermion as fer
from .families import GeneratorFamily
from .linalg import (
    SPACETIME,
    MetricSignature,
    expm_action,
    matrix_exponential,
    max_abs,
    max_abs_diff,
)


@dataclass(frozen=True)
class AlgebraElement:
    """Metric-antihermitian 5x5 matrix (a^dag eta + eta a = 0)."""

    a: np.ndarray
    metric: MetricSignature = SPACETIME

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        if a.shape != (5, 5):
            raise ValueError("algebra element must be 5x5")
        eta = np.diag(self.metric.diag)
        if max_abs(a.conj().T @ eta + eta @ a) > 1e-12:
            raise ValueError("matrix is not metric-antihermitian")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class PseudoUnitaryElement:
    """Group element m with m^dag eta m = eta."""

    m: np.ndarray
    metric: MetricSignature = SPACETIME

    def pseudo_unitarity_residual(self) -> float:
        eta = np.diag(self.metric.diag)
        return max_abs(self.m.conj().T @ eta @ self.m - eta)


@dataclass(frozen=True)
class SymplecticBlockElement:
    """Real 10x10 block embedding [[Pi, -Theta], [Theta, Pi]]."""

    s: np.ndarray
    metric: MetricSignature = SPACETIME

    def _forms(self):
        eta = np.diag(self.metric.diag)
        zero = np.zeros((5, 5))
        omega = np.block([[zero, eta], [-eta, zero]])
        g = np.block([[eta, zero], [zero, eta]])
        return omega, g

    def symplectic_residual(self) -> float:
        omega, _ = self._forms()
        return max_abs(self.s.T @ omega @ self.s - omega)

    def metric_residual(self) -> float:
        _, g = self._forms()
        return max_abs(self.s.T @ g @ self.s - g)


def random_algebra_element(seed: int, scale: float,
                           metric: MetricSignature = SPACETIME) -> AlgebraElement:
    """Seeded random algebra element with entries bounded by ``scale``.

    Built as a = i eta h with h Hermitian, which satisfies the membership
    identity exactly by construction.
    """
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    rng = np.random.default_rng(seed)
    r = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    h = (r + r.conj().T) / 2.0
    a = 1j * np.diag(metric.diag).astype(complex) @ h
    top = max_abs(a)
    a = a * (scale / top) if top > 0 else a * 0.0
    return AlgebraElement(a=a, metric=metric)


def algebra_span_dimension(num_seeds: int = 25, scale: float = 1.0) -> int:
    """Real dimension of the span of seeded algebra elements."""
    rows = []
    for seed in range(num_seeds):
        a = random_algebra_element(seed, scale).a.ravel()
        rows.append(np.concatenate([a.real, a.imag]))
    return int(np.linalg.matrix_rank(np.stack(rows), tol=1e-8))


def exponentiate_to_group(el: AlgebraElement) -> PseudoUnitaryElement:
    return PseudoUnitaryElement(m=matrix_exponential(el.a), metric=el.metric)


def to_symplectic_block(el: PseudoUnitaryElement) -> SymplecticBlockElement:
    pi = el.m.real
    theta = -el.m.imag
    s = np.block([[pi, theta], [-theta, pi]])
    return SymplecticBlockElement(s=s, metric=el.metric)


def ccr_preservation_check(a, b, c, d, tol: float = 1e-12,
                           metric: MetricSignature = SPACETIME):
    """Whether the 10x10 matrix [[a, c], [b, d]] preserves the bracket form.

    Preservation of the form encodes invariance of the canonical
    commutation relations under the mixing of momentum and coordinate
    operators; returns (passed, residual).
    """
    eta = np.diag(metric.diag)
    zero = np.zeros((5, 5))
    omega = np.block([[zero, eta], [-eta, zero]])
    m = np.block([[np.asarray(a), np.asarray(c)], [np.asarray(b), np.asarray(d)]])
    residual = max_abs(m.T @ omega @ m - omega)
    return residual <= tol, residual


@dataclass(frozen=True)
class CovarianceFactorization:
    """Blocks of the factored quadratic form F^T diag(eta,eta) F."""

    p_block: np.ndarray
    rho_block: np.ndarray
    x_block: np.ndarray
    symmetry_residual: float
    pattern_residual: float


def covariance_factorization_check(a, b, c,
                                   metric: MetricSignature = SPACETIME) -> CovarianceFactorization:
    """Assemble the quadratic form of the triangular factorization.

    F = [[b, 0], [2acb, a]]; the assembled matrix F^T diag(eta,eta) F is
    returned blockwise and checked for symmetry and the block pattern
    [[P, rho], [rho^T, X]].
    """
    a, b, c = (np.asarray(m, dtype=float) for m in (a, b, c))
    eta = np.diag(metric.diag)
    zero = np.zeros((5, 5))
    lower = 2.0 * a @ c @ b
    f = np.block([[b, zero], [lower, a]])
    g = np.block([[eta, zero], [zero, eta]])
    assembled = f.T @ g @ f
    p_block = assembled[:5, :5]
    rho = assembled[:5, 5:]
    x_block = assembled[5:, 5:]
    pattern = np.block([[p_block, rho], [rho.T, x_block]])
    return CovarianceFactorization(
        p_block=p_block, rho_block=rho, x_block=x_block,
        symmetry_residual=max_abs(assembled - assembled.T),
        pattern_residual=max_abs_diff(assembled, pattern),
    )


def embedding_homomorphism_residual(num_pairs: int = 50, scale: float = 1.0,
                                    seed: int = 7) -> float:
    """The block embedding respects group multiplication on random pairs."""
    residual = 0.0
    for k in range(num_pairs):
        m1 = exponentiate_to_group(random_algebra_element(seed + 2 * k, scale))
        m2 = exponentiate_to_group(random_algebra_element(seed + 2 * k + 1, scale))
        prod = PseudoUnitaryElement(m=m1.m @ m2.m, metric=m1.metric)
        s12 = to_symplectic_block(prod).s
        residual = max(residual, max_abs_diff(
            s12, to_symplectic_block(m1).s @ to_symplectic_block(m2).s))
    return residual


def pseudo_unitarity_batch(num_samples: int = 100, scale: float = 1.0,
                           seed: int = 0) -> dict:
    """Batch residuals for exponentiated random elements and their embeddings."""
    unitarity = 0.0
    symplectic = 0.0
    metric_res = 0.0
    for k in range(num_samples):
        m = exponentiate_to_group(random_algebra_element(seed + k, scale))
        s = to_symplectic_block(m)
        unitarity = max(unitarity, m.pseudo_unitarity_residual())
        symplectic = max(symplectic, s.symplectic_residual())
        metric_res = max(metric_res, s.metric_residual())
    return {"pseudo_unitarity": unitarity, "symplectic_form": symplectic,
            "metric_form": metric_res}


def _theta_coefficients(el: AlgebraElement) -> np.ndarray:
    """Generator coefficients reproducing the matrix action of exp(a).

    With [E_{mu nu}, L_rho] = -eta_{mu rho} L_nu the conjugation
    exp(-G) L_rho exp(G) for G = sum theta_{mu nu} E_{mu nu} carries the
    coefficient matrix exp(eta theta); matching exp(a) requires
    theta = eta a^T.
    """
    return np.diag(el.metric.diag).astype(complex) @ el.a.T


def bosonic_covariance_check(el: AlgebraElement, rep: bos.BosonRep,
                             upsilon: GeneratorFamily) -> dict:
    """Algebra- and group-level covariance of the bosonic ladders."""
    space = rep.space
    eta = rep.metric.diag
    v = space.basis_block(space.safe_indices())

    algebra = 0.0
    for mu in range(5):
        for nu in range(5):
            g = upsilon[mu, nu]
            for rho in range(5):
                lhs = g @ (rep.z[rho] @ v) - rep.z[rho] @ (g @ v)
                rhs = -(eta[mu] if mu == rho else 0.0) * (rep.z[nu] @ v)
                algebra = max(algebra, max_abs(lhs - rhs))

    theta = _theta_coefficients(el)
    g_op = np.zeros((space.dim, space.dim), dtype=complex)
    for mu in range(5):
        for nu in range(5):
            g_op += theta[mu, nu] * upsilon[mu, nu]
    m = matrix_exponential(el.a)
    # the generators preserve total occupation, so starting from totals
    # at most cutoff-1 every intermediate state stays below the
    # truncation boundary and the conjugation identity is exact
    low = np.array([i for i in space.safe_indices()
                    if space.occupation(i).total <= space.cutoff - 1])
    v = space.basis_block(low)
    w = expm_action(g_op, v.astype(complex))
    lowered = np.hstack([rep.z[rho] @ w for rho in range(5)])
    conjugated = expm_action(-g_op, lowered)
    group = 0.0
    k = v.shape[1]
    for rho in range(5):
        target = sum(m[mu, rho] * (rep.z[mu] @ v) for mu in range(5))
        group = max(group, max_abs(conjugated[:, rho * k:(rho + 1) * k] - target))
    return {"algebra": algebra, "group": group}


def fermionic_covariance_check(el: AlgebraElement, rep: fer.FermionRep,
                               xi: GeneratorFamily) -> dict:
    """Algebra- and group-level covariance of the fermionic ladders."""
    eta = rep.metric.diag
    algebra = 0.0
    for mu in range(5):
        for nu in range(5):
            g = xi[mu, nu]
            for rho in range(5):
                lhs = g @ rep.zeta[rho] - rep.zeta[rho] @ g
                rhs = -(eta[mu] if mu == rho else 0.0) * rep.zeta[nu]
                algebra = max(algebra, max_abs(lhs - rhs))

    theta = _theta_coefficients(el)
    g_op = np.zeros((fer.DIM, fer.DIM), dtype=complex)
    for mu in range(5):
        for nu in range(5):
            g_op += theta[mu, nu] * xi[mu, nu]
    m = matrix_exponential(el.a)
    forward = matrix_exponential(g_op)
    backward = matrix_exponential(-g_op)
    group = 0.0
    for rho in range(5):
        lhs = backward @ rep.zeta[rho] @ forward
        rhs = sum(m[mu, rho] * rep.zeta[mu] for mu in range(5))
        group = max(group, max_abs_diff(lhs, rhs))
    return {"algebra": algebra, "group": group}


def double_cover_witness(rep: fer.FermionRep, xi: GeneratorFamily) -> dict:
    """A 2*pi rotation acts trivially on operators but as -I on states.

    The rotation generator is the linear fermionic Casimir; its
    half-integer spectrum forces exp(2 pi i C) = -I while the conjugation
    action on every ladder operator is the identity, and the 4*pi
    rotation returns to +I.
    """
    c1 = fer.casimir_f(xi, 1)
    eye = np.eye(fer.DIM, dtype=complex)
    s2 = matrix_exponential(2j * np.pi * c1)
    s4 = matrix_exponential(4j * np.pi * c1)
    conj = max(max_abs_diff(s2 @ rep.zeta[mu] @ np.linalg.inv(s2), rep.zeta[mu])
               for mu in range(5))
    return {
        "full_turn_is_minus_identity": max_abs_diff(s2, -eye),
        "conjugation_is_trivial": conj,
        "double_turn_is_identity": max_abs_diff(s4, eye),
    }
