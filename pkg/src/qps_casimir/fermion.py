"""The 32-dimensional fermionic (spin) sector.

Five anticommuting ladder pairs are realized by a Jordan-Wigner
construction; from them the Clifford generators, the number-operator and
Lie-generator families, the two fermionic Casimir operators and the
Standard Model charge table are built.

Basis convention: basis index of the occupation ``(f0..f4)`` is
``sum_mu f_mu * 2**mu`` with mode 0 least significant, and kets are
created by applying the raising operators in increasing mode order to
the vacuum (all resulting phases are +1 under the string choice below).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .families import (
    ConventionRecord,
    DEFAULT_CONVENTION,
    GeneratorFamily,
    family_from_function,
    linear_casimir,
    quadratic_casimir,
)
from .linalg import SPACETIME, MetricSignature, commutator, kron_chain, max_abs, max_abs_diff

DIM = 32

_ID2 = np.eye(2, dtype=complex)
_SIGMA_RAISE = np.array([[0, 0], [1, 0]], dtype=complex)  # maps bit 0 -> 1
_STRING_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class FermionOccupation:
    """Occupation bits of the five fermionic modes."""

    f: tuple

    def __post_init__(self):
        if len(self.f) != 5 or any(b not in (0, 1) for b in self.f):
            raise ValueError("occupation must be five bits")

    @property
    def total(self) -> int:
        return sum(self.f)

    @property
    def index(self) -> int:
        return sum(b << mu for mu, b in enumerate(self.f))

    @classmethod
    def from_index(cls, idx: int) -> "FermionOccupation":
        if not 0 <= idx < DIM:
            raise ValueError(f"basis index {idx} out of range")
        return cls(tuple((idx >> mu) & 1 for mu in range(5)))


def all_occupations():
    return [FermionOccupation.from_index(i) for i in range(DIM)]


@dataclass(frozen=True)
class FermionRep:
    """Ladder, star and Clifford matrices of the fermionic sector."""

    zeta: tuple
    zeta_dagger: tuple
    zeta_star: tuple = None
    alpha: tuple = None
    beta: tuple = None
    metric: MetricSignature = SPACETIME
    convention: ConventionRecord = DEFAULT_CONVENTION


def build_fermionic_ladders(convention: ConventionRecord = DEFAULT_CONVENTION) -> FermionRep:
    """Jordan-Wigner ladders with the sign string on modes below the target."""
    raises = []
    for mu in range(5):
        factors = [_ID2] * (4 - mu) + [_SIGMA_RAISE] + [_STRING_Z] * mu
        raises.append(kron_chain(factors))
    zeta_dagger = tuple(raises)
    zeta = tuple(m.conj().T for m in raises)
    return FermionRep(zeta=zeta, zeta_dagger=zeta_dagger, convention=convention)


def build_zeta_star(rep: FermionRep, sign_choice=None) -> FermionRep:
    """Attach the metric-star ladders zeta*_mu = s_mu zeta_mu^dagger."""
    signs = tuple(sign_choice) if sign_choice is not None else rep.convention.zeta_star_sign
    star = tuple(signs[mu] * rep.zeta_dagger[mu] for mu in range(5))
    return replace(rep, zeta_star=star, convention=replace(rep.convention, zeta_star_sign=signs))


def build_alpha_beta(rep: FermionRep) -> FermionRep:
    """Clifford generators recovered from the ladder split."""
    if rep.zeta_star is None:
        raise ValueError("star ladders must be built first")
    alpha = tuple(rep.zeta[mu] + rep.zeta_star[mu] for mu in range(5))
    beta = tuple(-1j * (rep.zeta[mu] - rep.zeta_star[mu]) for mu in range(5))
    return replace(rep, alpha=alpha, beta=beta)


def build_fermion_rep(convention: ConventionRecord = DEFAULT_CONVENTION) -> FermionRep:
    return build_alpha_beta(build_zeta_star(build_fermionic_ladders(convention)))


def vacuum() -> np.ndarray:
    v = np.zeros(DIM, dtype=complex)
    v[0] = 1.0
    return v


def basis_state(f: FermionOccupation) -> np.ndarray:
    v = np.zeros(DIM, dtype=complex)
    v[f.index] = 1.0
    return v


def clifford_residual(rep: FermionRep) -> float:
    """Max residual of {g_a, g_b} = 2 G_ab over all 100 generator pairs.

    The ten generators (five of each kind) anticommute pairwise with the
    doubled metric diag(eta, eta) on the diagonal.
    """
    gens = list(rep.alpha) + list(rep.beta)
    eta = rep.metric.diag
    gram = np.concatenate([eta, eta])
    eye = np.eye(DIM, dtype=complex)
    residual = 0.0
    for a in range(10):
        for b in range(10):
            target = 2.0 * gram[a] * eye if a % 5 == b % 5 and (a // 5 == b // 5) else 0.0 * eye
            residual = max(residual, max_abs(gens[a] @ gens[b] + gens[b] @ gens[a] - target))
    return residual


def ladder_anticommutation_residual(rep: FermionRep, form: str) -> float:
    """Residual of the ladder anticommutation relations over all 75 index pairs.

    ``delta`` checks the adjoint form ({zeta_mu^dag, zeta_nu} = delta),
    ``eta`` the metric-star form ({zeta_mu^*, zeta_nu} = eta^{mu nu}).
    """
    if form == "delta":
        upper = rep.zeta_dagger
        gram = np.ones(5)
    elif form == "eta":
        if rep.zeta_star is None:
            raise ValueError("star ladders not built")
        upper = rep.zeta_star
        gram = rep.metric.diag
    else:
        raise ValueError(f"unknown form {form!r}")
    eye = np.eye(DIM, dtype=complex)
    residual = 0.0
    for mu in range(5):
        for nu in range(5):
            residual = max(residual, max_abs(
                rep.zeta[mu] @ rep.zeta[nu] + rep.zeta[nu] @ rep.zeta[mu]))
            residual = max(residual, max_abs(
                upper[mu] @ upper[nu] + upper[nu] @ upper[mu]))
            target = (gram[mu] * eye) if mu == nu else np.zeros_like(eye)
            residual = max(residual, max_abs(
                upper[mu] @ rep.zeta[nu] + rep.zeta[nu] @ upper[mu] - target))
    return residual


def build_sigma(rep: FermionRep) -> GeneratorFamily:
    """Number-operator family: Sigma^{mu nu} = zeta_mu^dag zeta_nu."""
    return family_from_function(
        lambda mu, nu: rep.zeta_dagger[mu] @ rep.zeta[nu], rep.metric, kind="Sigma")


def build_xi(rep: FermionRep) -> GeneratorFamily:
    """Lie-generator family: Xi^{mu nu} = zeta_mu^* zeta_nu - eta^{mu nu}/2."""
    if rep.zeta_star is None:
        raise ValueError("star ladders not built")
    eta = rep.metric.diag
    eye = np.eye(DIM, dtype=complex)

    def entry(mu, nu):
        off = 0.5 * eta[mu] * eye if mu == nu else 0.0 * eye
        return rep.zeta_star[mu] @ rep.zeta[nu] - off

    return family_from_function(entry, rep.metric, kind="Xi")


def check_xi_structure(family: GeneratorFamily) -> float:
    from .families import structure_constant_residual

    return structure_constant_residual(family)


def casimir_f(family: GeneratorFamily, order: int, pairing: str | None = None) -> np.ndarray:
    """Fermionic Casimir of the requested order.

    The quadratic contraction defaults to the first-index pairing, which
    is the choice the convention sweep singles out as central here.
    """
    if order == 1:
        return linear_casimir(family)
    if order == 2:
        return quadratic_casimir(family, pairing or "literal")
    raise ValueError(f"order must be 1 or 2, got {order}")


@dataclass(frozen=True)
class ChargeAssignment:
    """Weak isospin, weak hypercharge and electric charge, stored in sixths."""

    i3_sixths: int
    yw_sixths: int
    q_sixths: int

    def __post_init__(self):
        if self.yw_sixths % 2 != 0:
            raise ValueError("hypercharge must be a multiple of 1/3")
        if self.q_sixths != self.i3_sixths + self.yw_sixths // 2:
            raise ValueError("charge relation Q = I3 + Y_W/2 violated")

    @property
    def i3(self) -> Fraction:
        return Fraction(self.i3_sixths, 6)

    @property
    def yw(self) -> Fraction:
        return Fraction(self.yw_sixths, 6)

    @property
    def q(self) -> Fraction:
        return Fraction(self.q_sixths, 6)

    @property
    def sterile(self) -> bool:
        return self.i3_sixths == 0 and self.yw_sixths == 0 and self.q_sixths == 0


def charges(f: FermionOccupation) -> ChargeAssignment:
    """Exact charge triple of one basis state."""
    f0, f1, f2, f3, f4 = f.f
    i3 = 3 * (f0 + f4) - 3
    yw = 6 * f0 - 4 * (f1 + f2 + f3) - 6 * f4 + 6
    return ChargeAssignment(i3_sixths=i3, yw_sixths=yw, q_sixths=i3 + yw // 2)


@dataclass(frozen=True)
class ClassificationRow:
    occupation: FermionOccupation
    total: int
    c1_eigenvalue: Fraction
    charge: ChargeAssignment

    @property
    def sterile(self) -> bool:
        return self.charge.sterile


def classify_states():
    """Charge classification of all 32 basis states, ordered by basis index."""
    rows = []
    for f in all_occupations():
        rows.append(ClassificationRow(
            occupation=f,
            total=f.total,
            c1_eigenvalue=Fraction(2 * f.total - 5, 2),
            charge=charges(f),
        ))
    return rows


@dataclass(frozen=True)
class SplitResult:
    """Decomposition of the 25 generators into a center and a traceless part."""

    central: np.ndarray
    traceless: tuple
    centrality_residual: float
    trace_residual: float
    closure_residual: float


def u1_su14_split(family: GeneratorFamily) -> SplitResult:
    """Split the generator family into its central line and 24 traceless members.

    The traceless combinations are Xi^{mu nu} - (1/5) eta^{mu nu} C with C
    the linear Casimir; the (4,4) member is dropped as the dependent one.
    Closure of the traceless span under commutation is checked by
    least-squares projection.
    """
    eta = family.metric.diag
    central = linear_casimir(family)
    members = []
    for mu in range(5):
        for nu in range(5):
            if (mu, nu) == (4, 4):
                continue
            m = family[mu, nu].copy()
            if mu == nu:
                m = m - (eta[mu] / 5.0) * central
            members.append(m)
    members = tuple(members)

    centrality = max(max_abs(commutator(central, family[mu, nu]))
                     for mu in range(5) for nu in range(5))

    # Frobenius projection onto the central line plays the role of the
    # metric trace: it vanishes identically on the traceless family.
    c_norm = float(np.real(np.vdot(central, central)))
    trace_res = max(abs(complex(np.vdot(central, m))) / c_norm for m in members)

    basis = np.stack([m.ravel() for m in members], axis=1)
    closure = 0.0
    for i, a in enumerate(members):
        for b in members[i:]:
            target = commutator(a, b).ravel()
            coeff, *_ = np.linalg.lstsq(basis, target, rcond=None)
            closure = max(closure, float(np.max(np.abs(basis @ coeff - target))))
    return SplitResult(central, members, centrality, trace_res, closure)


def casimir_centrality_residual(c: np.ndarray, family: GeneratorFamily) -> float:
    return max(max_abs(commutator(c, family[mu, nu])) for mu in range(5) for nu in range(5))


def annihilation_below_vacuum_residual(rep: FermionRep) -> float:
    """zeta_mu on a state with empty mode mu must give the zero vector."""
    residual = 0.0
    for f in all_occupations():
        v = basis_state(f)
        for mu in range(5):
            if f.f[mu] == 0:
                residual = max(residual, float(np.max(np.abs(rep.zeta[mu] @ v))))
    return residual


def state_construction_residual(rep: FermionRep) -> float:
    """Kets built by mode-ascending raising products match the basis vectors."""
    residual = 0.0
    for f in all_occupations():
        v = vacuum()
        for mu in reversed(range(5)):  # rightmost factor acts first
            if f.f[mu]:
                v = rep.zeta_dagger[mu] @ v
        residual = max(residual, float(np.max(np.abs(v - basis_state(f)))))
    return residual
