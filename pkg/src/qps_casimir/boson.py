"""The truncated five-mode bosonic Fock sector.

Single-mode ladders are lifted to the product space by Kronecker
products (mode 0 least significant, mixed-radix basis index).  Because
truncation breaks ladder identities at the occupation boundary, all
operator identities are checked on the *safe subspace*: basis states
whose per-mode occupation stays ``safe_margin`` below the cutoff.

Operator matrices are real and kept in float64; they promote to complex
transparently wherever a complex combination (e.g. the reduced
coordinate operators) appears.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .families import (
    ConventionRecord,
    DEFAULT_CONVENTION,
    GeneratorFamily,
    family_from_function,
)
from .linalg import SPACETIME, MetricSignature, kron_chain, max_abs


@dataclass(frozen=True)
class BosonOccupation:
    """Occupation numbers of the five bosonic modes."""

    n: tuple

    def __post_init__(self):
        if len(self.n) != 5 or any(k < 0 or k != int(k) for k in self.n):
            raise ValueError("occupation must be five nonnegative integers")

    @property
    def total(self) -> int:
        return sum(self.n)


@dataclass(frozen=True)
class TruncatedFockSpace:
    """Five-mode Fock space truncated at a per-mode occupation cutoff."""

    cutoff: int = 3
    safe_margin: int = 2

    def __post_init__(self):
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")
        if self.safe_margin < 0 or self.safe_margin > self.cutoff:
            raise ValueError("cutoff too small for requested safe margin")

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** 5

    @property
    def safe_occupation(self) -> int:
        return self.cutoff - self.safe_margin

    def index(self, n: BosonOccupation) -> int:
        if any(k > self.cutoff for k in n.n):
            raise ValueError(f"occupation {n.n} exceeds cutoff {self.cutoff}")
        base = self.cutoff + 1
        return sum(k * base ** mu for mu, k in enumerate(n.n))

    def occupation(self, idx: int) -> BosonOccupation:
        base = self.cutoff + 1
        return BosonOccupation(tuple((idx // base ** mu) % base for mu in range(5)))

    def occupations(self):
        return [self.occupation(i) for i in range(self.dim)]

    def safe_indices(self) -> np.ndarray:
        keep = [i for i in range(self.dim)
                if max(self.occupation(i).n) <= self.safe_occupation]
        return np.array(keep, dtype=int)

    def indices_with_max_occupation(self, bound: int) -> np.ndarray:
        keep = [i for i in range(self.dim) if max(self.occupation(i).n) <= bound]
        return np.array(keep, dtype=int)

    def basis_block(self, indices: np.ndarray) -> np.ndarray:
        v = np.zeros((self.dim, len(indices)))
        v[indices, np.arange(len(indices))] = 1.0
        return v


@dataclass(frozen=True)
class BosonRep:
    """Ladder, star and reduced-operator matrices on the truncated space."""

    space: TruncatedFockSpace
    z: tuple
    z_dagger: tuple
    z_star: tuple = None
    p_bar: tuple = None
    x_bar: tuple = None
    metric: MetricSignature = SPACETIME
    convention: ConventionRecord = DEFAULT_CONVENTION

    def star_signs(self) -> np.ndarray:
        return np.array(self.convention.z_star_sign, dtype=float)


def _single_mode_lowering(cutoff: int) -> np.ndarray:
    a = np.zeros((cutoff + 1, cutoff + 1))
    for n in range(1, cutoff + 1):
        a[n - 1, n] = math.sqrt(n)
    return a


def _lift(space: TruncatedFockSpace, factors_by_mode: dict) -> np.ndarray:
    eye = np.eye(space.cutoff + 1)
    # slot order: mode 4 leftmost (slowest), mode 0 rightmost (fastest)
    return kron_chain([factors_by_mode.get(mu, eye) for mu in reversed(range(5))])


def build_bosonic_ladders(cutoff: int = 3, safe_margin: int = 2,
                          convention: ConventionRecord = DEFAULT_CONVENTION) -> BosonRep:
    """Standard ladders on each mode, lifted to the 5-mode product space."""
    space = TruncatedFockSpace(cutoff=cutoff, safe_margin=safe_margin)
    a = _single_mode_lowering(cutoff)
    z = tuple(_lift(space, {mu: a}) for mu in range(5))
    z_dagger = tuple(_lift(space, {mu: a.T}) for mu in range(5))
    return BosonRep(space=space, z=z, z_dagger=z_dagger, convention=convention)


def build_z_star(rep: BosonRep, sign_choice=None) -> BosonRep:
    """Attach the metric-star ladders z*_mu = s_mu z_mu^dagger."""
    signs = tuple(sign_choice) if sign_choice is not None else rep.convention.z_star_sign
    star = tuple(signs[mu] * rep.z_dagger[mu] for mu in range(5))
    return replace(rep, z_star=star, convention=replace(rep.convention, z_star_sign=signs))


def build_reduced_px(rep: BosonRep) -> BosonRep:
    """Reduced momentum/coordinate split of the ladders."""
    if rep.z_star is None:
        raise ValueError("star ladders must be built first")
    p = tuple((rep.z[mu] + rep.z_star[mu]) / math.sqrt(2) for mu in range(5))
    x = tuple((rep.z[mu] - rep.z_star[mu]) / (1j * math.sqrt(2)) for mu in range(5))
    return replace(rep, p_bar=p, x_bar=x)


def build_boson_rep(cutoff: int = 3, safe_margin: int = 2,
                    convention: ConventionRecord = DEFAULT_CONVENTION) -> BosonRep:
    return build_reduced_px(build_z_star(build_bosonic_ladders(cutoff, safe_margin, convention)))


def build_aleph(rep: BosonRep) -> GeneratorFamily:
    """Number-operator family aleph_{mu nu} = z_mu^dagger z_nu.

    Entries are assembled slotwise from single-mode factors, which equals
    the matrix product exactly (distinct modes act on distinct slots).
    """
    a = _single_mode_lowering(rep.space.cutoff)

    def entry(mu, nu):
        if mu == nu:
            return _lift(rep.space, {mu: a.T @ a})
        return _lift(rep.space, {mu: a.T, nu: a})

    return family_from_function(entry, rep.metric, kind="aleph")


def build_upsilon(rep: BosonRep) -> GeneratorFamily:
    """Symmetrized family Upsilon_{mu nu} = (z*_mu z_nu + z_nu z*_mu)/2.

    Off-diagonal entries reduce to s_mu z_mu^dagger z_nu exactly; diagonal
    entries keep the truncated symmetrized product, so the boundary rows
    of the truncation stay honestly wrong and are excluded by the safe
    subspace in every check.
    """
    if rep.z_star is None:
        raise ValueError("star ladders must be built first")
    a = _single_mode_lowering(rep.space.cutoff)
    signs = rep.star_signs()

    def entry(mu, nu):
        if mu == nu:
            sym = 0.5 * (a.T @ a + a @ a.T)
            return signs[mu] * _lift(rep.space, {mu: sym})
        return signs[mu] * _lift(rep.space, {mu: a.T, nu: a})

    return family_from_function(entry, rep.metric, kind="Upsilon")


def apply_upsilon(rep: BosonRep, mu: int, nu: int, v: np.ndarray) -> np.ndarray:
    """Upsilon_{mu nu} @ v computed from the ladder matrices only.

    Lets large-cutoff spectra be evaluated without materializing the
    25-matrix family.
    """
    s = rep.star_signs()[mu]
    if mu == nu:
        return 0.5 * s * (rep.z_dagger[mu] @ (rep.z[mu] @ v) + rep.z[mu] @ (rep.z_dagger[mu] @ v))
    return s * (rep.z_dagger[mu] @ (rep.z[nu] @ v))


def casimir_b_apply(rep: BosonRep, order: int, v: np.ndarray,
                    pairing: str | None = None) -> np.ndarray:
    """Apply the bosonic Casimir of the requested order to a vector block."""
    eta = rep.metric.diag
    v = np.asarray(v)
    if order == 1:
        out = np.zeros(v.shape, dtype=v.dtype)
        for mu in range(5):
            out = out + eta[mu] * apply_upsilon(rep, mu, mu, v)
        return out
    if order == 2:
        pairing = pairing or rep.convention.bosonic_c2_pairing
        out = np.zeros(v.shape, dtype=v.dtype)
        for mu in range(5):
            for nu in range(5):
                inner = apply_upsilon(rep, mu, nu, v) if pairing == "literal" \
                    else apply_upsilon(rep, nu, mu, v)
                out = out + eta[mu] * eta[nu] * apply_upsilon(rep, mu, nu, inner)
        return out
    raise ValueError(f"order must be 1 or 2, got {order}")


def casimir_b(family: GeneratorFamily, order: int, pairing: str = "transposed") -> np.ndarray:
    """Bosonic Casimir as a full matrix (intended for small cutoffs).

    The quadratic form defaults to the trace-of-square pairing, the one
    the convention sweep identifies as central on the safe subspace.
    """
    from .families import linear_casimir, quadratic_casimir

    if order == 1:
        return linear_casimir(family)
    if order == 2:
        return quadratic_casimir(family, pairing)
    raise ValueError(f"order must be 1 or 2, got {order}")


def casimir_b2_literal_report(rep: BosonRep, family: GeneratorFamily) -> dict:
    """Diagnostic for the first-index-paired quadratic contraction.

    Reports the diagonal on total-occupation 0 and 1 safe states, the
    off-diagonal mass over columns with per-mode occupation up to 2, and
    the worst commutator with a generator; the contraction is expected to
    be neither diagonal nor central.
    """
    from .families import quadratic_contraction_apply

    space = rep.space
    low = [i for i in space.safe_indices() if space.occupation(i).total <= 1]
    v_low = space.basis_block(np.array(low))
    applied = quadratic_contraction_apply(family, "literal", v_low)
    diag = {int(space.occupation(i).total): float(np.real(applied[i, k]))
            for k, i in enumerate(low)}

    wide = space.indices_with_max_occupation(min(2, space.cutoff))
    v_wide = space.basis_block(wide)
    applied_wide = quadratic_contraction_apply(family, "literal", v_wide)
    mask = np.ones(applied_wide.shape, dtype=bool)
    mask[wide, np.arange(len(wide))] = False
    off_diag = float(np.max(np.abs(applied_wide[mask])))

    # non-centrality shows on two-quantum columns; one-quantum ones are blind
    probe = np.array([i for i in space.safe_indices()
                      if space.occupation(i).total <= 2])
    v_probe = space.basis_block(probe)
    c2_probe = quadratic_contraction_apply(family, "literal", v_probe)
    cent = 0.0
    for mu in range(5):
        for nu in range(5):
            g = family[mu, nu]
            lhs = quadratic_contraction_apply(family, "literal", g @ v_probe)
            cent = max(cent, max_abs(lhs - g @ c2_probe))
    return {"diagonal_by_total": diag, "max_off_diagonal": off_diag,
            "max_generator_commutator": cent}


def bosonic_state(rep: BosonRep, n: BosonOccupation) -> np.ndarray:
    """Normalized basis vector, verified against the raising-product route."""
    idx = rep.space.index(n)
    direct = np.zeros(rep.space.dim, dtype=complex)
    direct[idx] = 1.0
    built = np.zeros(rep.space.dim, dtype=complex)
    built[0] = 1.0
    for mu in range(5):
        for _ in range(n.n[mu]):
            built = rep.z_dagger[mu] @ built
        built = built / math.sqrt(math.factorial(n.n[mu]))
    if float(np.max(np.abs(built - direct))) > 1e-12:
        raise AssertionError("raising-product construction disagrees with basis vector")
    return direct


def ladder_commutation_residuals(rep: BosonRep, probes: int = 64, seed: int = 0) -> dict:
    """Ladder commutator residuals.

    The vanishing commutators ([z, z] and [z^dag, z^dag]) hold on the whole
    truncated space; they are evaluated on every basis vector plus a block
    of seeded random probe vectors instead of through full matrix products,
    which keeps the sweep linear in the dimension.  The delta- and eta-form
    commutators are evaluated on the safe block only.
    """
    space = rep.space
    v_safe = space.basis_block(space.safe_indices())
    rng = np.random.default_rng(seed)
    v_all = np.hstack([np.eye(space.dim), rng.standard_normal((space.dim, probes))]) \
        if space.dim <= 256 else \
        np.hstack([v_safe, rng.standard_normal((space.dim, probes))])
    res_zero = 0.0
    res_delta = 0.0
    res_eta = 0.0
    for mu in range(5):
        for nu in range(mu, 5):
            res_zero = max(res_zero, max_abs(
                rep.z[mu] @ (rep.z[nu] @ v_all) - rep.z[nu] @ (rep.z[mu] @ v_all)))
            res_zero = max(res_zero, max_abs(
                rep.z_dagger[mu] @ (rep.z_dagger[nu] @ v_all)
                - rep.z_dagger[nu] @ (rep.z_dagger[mu] @ v_all)))
    for mu in range(5):
        for nu in range(5):
            comm = rep.z[mu] @ (rep.z_dagger[nu] @ v_safe) - rep.z_dagger[nu] @ (rep.z[mu] @ v_safe)
            res_delta = max(res_delta, max_abs(comm - (v_safe if mu == nu else 0.0 * v_safe)))
            if rep.z_star is not None:
                comm = rep.z_star[mu] @ (rep.z[nu] @ v_safe) - rep.z[nu] @ (rep.z_star[mu] @ v_safe)
                target = -rep.metric.diag[mu] * v_safe if mu == nu else 0.0 * v_safe
                res_eta = max(res_eta, max_abs(comm - target))
    return {"vanishing": res_zero, "delta_form": res_delta, "eta_form": res_eta}


def reduced_px_residuals(rep: BosonRep) -> dict:
    """Reconstruction and adjointness properties of the reduced operators."""
    if rep.p_bar is None:
        raise ValueError("reduced operators not built")
    recon = max(max_abs((rep.p_bar[mu] + 1j * rep.x_bar[mu]) / math.sqrt(2) - rep.z[mu])
                for mu in range(5))
    eta = rep.metric.diag
    herm = 0.0
    for mu in range(5):
        # with z*_mu = eta_mumu z_mu^dagger: p_bar is self-adjoint on the +
        # direction and x_bar anti-self-adjoint on the - directions
        p, x = rep.p_bar[mu], rep.x_bar[mu]
        if eta[mu] > 0:
            herm = max(herm, max_abs(p - p.conj().T), max_abs(x - x.conj().T))
        else:
            herm = max(herm, max_abs(p + p.conj().T), max_abs(x + x.conj().T))
    return {"reconstruction": recon, "adjointness": herm}
