"""Shared dense linear algebra: brackets, Kronecker products, matrix
exponential and diagonal-spectrum extraction.

Every operator in this package is a dense square ``numpy`` array of
``complex128`` entries.  The helpers here are deliberately small: no
sparse formats and no general eigensolver are used anywhere.  All
spectra handled downstream are diagonal in an occupation basis by
construction, and :func:`diagonal_spectrum` asserts (rather than
assumes) that fact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Refuse Kronecker products beyond this dimension (guards against a
#: mistyped cutoff exhausting memory).
MAX_KRON_DIM = 1 << 20


class OffDiagonalResidual(Exception):
    """A matrix expected to be diagonal in the given basis is not.

    Carries the offending residual so callers can report it; the
    literal-contraction diagnostic triggers this deliberately.
    """

    def __init__(self, value: float):
        self.value = float(value)
        super().__init__(f"off-diagonal residual {value:.3e} exceeds tolerance")


@dataclass(frozen=True)
class MetricSignature:
    """Diagonal metric with ``n_plus`` entries +1 followed by ``n_minus`` -1."""

    n_plus: int
    n_minus: int

    def __post_init__(self):
        if self.n_plus < 0 or self.n_minus < 0 or self.n_plus + self.n_minus == 0:
            raise ValueError("signature counts must be nonnegative and not both zero")

    @property
    def dim(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def diag(self) -> np.ndarray:
        d = np.ones(self.dim)
        d[self.n_plus:] = -1.0
        return d

    def matrix(self) -> np.ndarray:
        return np.diag(self.diag).astype(complex)


#: Spacetime metric for the (1,4) framework.
SPACETIME = MetricSignature(1, 4)
#: Metric of the doubled (momentum, coordinate) phase space.
PHASE_SPACE = MetricSignature(2, 8)


@dataclass(frozen=True)
class ToleranceConfig:
    """Three-level tolerance policy.

    ``exact_tol`` is for identities that are exact in exact arithmetic,
    ``num_tol`` for results of series evaluation (exponentials), and
    ``approx_tol`` for finite-conjugation checks polluted by Fock-space
    truncation.
    """

    exact_tol: float = 1e-12
    num_tol: float = 1e-10
    approx_tol: float = 1e-6

    def __post_init__(self):
        if not (0.0 <= self.exact_tol <= self.num_tol <= self.approx_tol):
            raise ValueError("tolerances must satisfy 0 <= exact <= num <= approx")


def _require_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")


def _require_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """ab - ba for square matrices of equal dimension."""
    _require_square(a)
    _require_same_shape(a, b)
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """ab + ba for square matrices of equal dimension."""
    _require_square(a)
    _require_same_shape(a, b)
    return a @ b + b @ a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; the left factor carries the slower-varying index."""
    if a.shape[0] * b.shape[0] > MAX_KRON_DIM or a.shape[1] * b.shape[1] > MAX_KRON_DIM:
        raise ValueError(
            f"kron result {a.shape[0] * b.shape[0]} exceeds MAX_KRON_DIM={MAX_KRON_DIM}"
        )
    return np.kron(a, b)


def kron_chain(factors) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence of matrices."""
    out = None
    for f in factors:
        out = np.asarray(f) if out is None else kron(out, np.asarray(f))
    if out is None:
        raise ValueError("empty factor list")
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Max-norm of the entrywise difference; zero iff the matrices agree."""
    _require_same_shape(np.asarray(a), np.asarray(b))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.asarray(a).size else 0.0


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


_EXPM_MAX_TERMS = 64
_EXPM_SCALE_THRESHOLD = 0.5


def matrix_exponential(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring on a truncated series.

    The argument is halved until its 1-norm is at most 0.5, the series is
    summed to machine-precision stagnation and the result squared back.
    Raises if the series has not converged after the configured number of
    terms, which signals a pathological input norm.
    """
    a = np.asarray(a, dtype=complex)
    _require_square(a)
    norm1 = float(np.max(np.sum(np.abs(a), axis=0))) if a.size else 0.0
    squarings = 0
    if norm1 > _EXPM_SCALE_THRESHOLD:
        squarings = int(np.ceil(np.log2(norm1 / _EXPM_SCALE_THRESHOLD)))
        a = a / (2.0 ** squarings)
    n = a.shape[0]
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, _EXPM_MAX_TERMS + 1):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < 1e-20 * max(1.0, np.max(np.abs(result))):
            break
    else:
        raise ArithmeticError(
            f"matrix exponential series did not converge in {_EXPM_MAX_TERMS} terms"
        )
    for _ in range(squarings):
        result = result @ result
    return result


def expm_action(a: np.ndarray, v: np.ndarray, max_terms: int = 128) -> np.ndarray:
    """exp(a) @ v without forming exp(a).

    Plain Taylor iteration on the vector block; adequate for the moderate
    norms produced by small-parameter conjugation checks.
    """
    a = np.asarray(a, dtype=complex)
    _require_square(a)
    out = np.array(v, dtype=complex)
    term = np.array(v, dtype=complex)
    for k in range(1, max_terms + 1):
        term = a @ term / k
        out = out + term
        if np.max(np.abs(term)) < 1e-20 * max(1.0, np.max(np.abs(out))):
            return out
    raise ArithmeticError(f"exp action series did not converge in {max_terms} terms")


def diagonal_spectrum(a: np.ndarray, basis_labels, tol: float):
    """Extract (label, eigenvalue) pairs from a matrix diagonal in the given basis.

    Requires the off-diagonal mass and the imaginary parts of the diagonal
    to sit below ``tol``; otherwise raises :class:`OffDiagonalResidual`.
    Values are returned unrounded.
    """
    a = np.asarray(a)
    _require_square(a)
    labels = list(basis_labels)
    if len(labels) != a.shape[0]:
        raise ValueError(f"{len(labels)} labels for dimension {a.shape[0]}")
    off = a - np.diag(np.diag(a))
    off_res = max_abs(off)
    imag_res = float(np.max(np.abs(np.diag(a).imag)))
    if off_res > tol or imag_res > tol:
        raise OffDiagonalResidual(max(off_res, imag_res))
    return [(label, float(np.real(a[i, i]))) for i, label in enumerate(labels)]
