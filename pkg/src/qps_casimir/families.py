"""Indexed generator families and the convention record they carry.

A :class:`GeneratorFamily` is a 5x5 array of operator matrices (one per
index pair) together with the metric used to raise and lower those
indices.  The same container serves the fermionic, bosonic and
number-operator families; the quadratic contraction helpers below are
shared by both sectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import MetricSignature, SPACETIME


@dataclass(frozen=True)
class ConventionRecord:
    """Resolved sign and contraction choices.

    ``zeta_star_sign`` / ``z_star_sign`` give the per-index sign relating
    the metric-star operators to the true adjoints.  The pairing tags
    select which index pairing the quadratic Casimir contraction uses:
    ``literal`` pairs first index with first index, ``transposed`` pairs
    first with last (trace of the squared family).
    """

    zeta_star_sign: tuple = (1, -1, -1, -1, -1)
    z_star_sign: tuple = (1, -1, -1, -1, -1)
    fermionic_c2_pairing: str = "literal"
    bosonic_c2_pairing: str = "transposed"

    def __post_init__(self):
        for signs in (self.zeta_star_sign, self.z_star_sign):
            if len(signs) != 5 or any(s not in (1, -1) for s in signs):
                raise ValueError("star signs must be five entries of +-1")
        for p in (self.fermionic_c2_pairing, self.bosonic_c2_pairing):
            if p not in ("literal", "transposed"):
                raise ValueError(f"unknown pairing {p!r}")

    def as_dict(self) -> dict:
        return {
            "zeta_star_sign": list(self.zeta_star_sign),
            "z_star_sign": list(self.z_star_sign),
            "fermionic_c2_pairing": self.fermionic_c2_pairing,
            "bosonic_c2_pairing": self.bosonic_c2_pairing,
        }


DEFAULT_CONVENTION = ConventionRecord()


@dataclass(frozen=True)
class GeneratorFamily:
    """5x5 family of square operator matrices with a common dimension."""

    entries: tuple  # 5-tuple of 5-tuples of ndarrays
    metric: MetricSignature = SPACETIME
    kind: str = ""

    def __post_init__(self):
        dim = self.dim
        for row in self.entries:
            for m in row:
                if m.shape != (dim, dim):
                    raise ValueError("family entries must share one square dimension")

    @property
    def dim(self) -> int:
        return self.entries[0][0].shape[0]

    def __getitem__(self, idx):
        mu, nu = idx
        return self.entries[mu][nu]


def family_from_function(build, metric: MetricSignature = SPACETIME, kind: str = "") -> GeneratorFamily:
    entries = tuple(tuple(build(mu, nu) for nu in range(5)) for mu in range(5))
    return GeneratorFamily(entries=entries, metric=metric, kind=kind)


def linear_casimir(family: GeneratorFamily) -> np.ndarray:
    """Metric contraction of the family diagonal: sum_mu eta_mumu E[mu,mu]."""
    eta = family.metric.diag
    dim = family.dim
    out = np.zeros((dim, dim), dtype=complex)
    for mu in range(5):
        out += eta[mu] * family[mu, mu]
    return out


def quadratic_casimir(family: GeneratorFamily, pairing: str) -> np.ndarray:
    """Metric-weighted quadratic contraction of the family.

    ``literal``    : sum eta_mumu eta_nunu E[mu,nu] E[mu,nu]
    ``transposed`` : sum eta_mumu eta_nunu E[mu,nu] E[nu,mu]

    Both are the diagonal-metric collapse of the corresponding
    four-index sums; :func:`quadratic_contraction_apply` evaluates the
    full 625-term sum as an independent cross-check.
    """
    eta = family.metric.diag
    dim = family.dim
    out = np.zeros((dim, dim), dtype=complex)
    for mu in range(5):
        for nu in range(5):
            right = family[mu, nu] if pairing == "literal" else family[nu, mu]
            out += eta[mu] * eta[nu] * (family[mu, nu] @ right)
    return out


def quadratic_casimir_apply(family: GeneratorFamily, pairing: str, v: np.ndarray) -> np.ndarray:
    """Apply the quadratic contraction to a vector block without forming it."""
    eta = family.metric.diag
    out = np.zeros_like(np.asarray(v, dtype=complex))
    for mu in range(5):
        for nu in range(5):
            right = family[mu, nu] if pairing == "literal" else family[nu, mu]
            out += eta[mu] * eta[nu] * (family[mu, nu] @ (right @ v))
    return out


def quadratic_contraction_apply(family: GeneratorFamily, pairing: str, v: np.ndarray) -> np.ndarray:
    """Brute-force four-index quadratic contraction applied to a vector block.

    Runs over all 625 index quadruples with explicit metric factors; used
    as the independent oracle for the collapsed forms above and for the
    literal-pairing diagnostic.
    """
    eta = family.metric.diag
    out = np.zeros_like(np.asarray(v, dtype=complex))
    for mu in range(5):
        for nu in range(5):
            for rho in range(5):
                for sigma in range(5):
                    if pairing == "literal":
                        # weight eta^{mu rho} eta^{nu sigma}
                        w = (eta[mu] if mu == rho else 0.0) * (eta[nu] if nu == sigma else 0.0)
                    else:
                        # weight eta^{mu sigma} eta^{nu rho}
                        w = (eta[mu] if mu == sigma else 0.0) * (eta[nu] if nu == rho else 0.0)
                    if w != 0.0:
                        out += w * (family[mu, nu] @ (family[rho, sigma] @ v))
    return out


def structure_constant_residual(family: GeneratorFamily, v: np.ndarray | None = None) -> float:
    """Residual of [E^{mu nu}, E^{rho sigma}] = eta^{nu rho} E^{mu sigma} - eta^{mu sigma} E^{rho nu}.

    With ``v`` given, both sides are evaluated on that vector block
    (restriction to a subspace); otherwise full matrices are compared.
    The reduction over all 625 quadruples is a commutative max.
    """
    eta = family.metric.diag
    residual = 0.0
    if v is None:
        for mu in range(5):
            for nu in range(5):
                a = family[mu, nu]
                for rho in range(5):
                    for sigma in range(5):
                        b = family[rho, sigma]
                        lhs = a @ b - b @ a
                        rhs = np.zeros_like(lhs)
                        if nu == rho:
                            rhs = rhs + eta[nu] * family[mu, sigma]
                        if mu == sigma:
                            rhs = rhs - eta[mu] * family[rho, nu]
                        residual = max(residual, float(np.max(np.abs(lhs - rhs))))
        return residual
    v = np.asarray(v)
    k = v.shape[1]
    pairs = [(mu, nu) for mu in range(5) for nu in range(5)]
    applied = np.hstack([family[p] @ v for p in pairs])  # columns grouped by pair
    slot = {p: slice(i * k, (i + 1) * k) for i, p in enumerate(pairs)}
    products = {p: family[p] @ applied for p in pairs}  # E_p E_q v for all q at once
    for mu, nu in pairs:
        for rho, sigma in pairs:
            lhs = products[(mu, nu)][:, slot[(rho, sigma)]] \
                - products[(rho, sigma)][:, slot[(mu, nu)]]
            rhs = np.zeros_like(lhs)
            if nu == rho:
                rhs = rhs + eta[nu] * applied[:, slot[(mu, sigma)]]
            if mu == sigma:
                rhs = rhs - eta[mu] * applied[:, slot[(rho, nu)]]
            residual = max(residual, float(np.max(np.abs(lhs - rhs))))
    return residual
