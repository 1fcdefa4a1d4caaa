"""Hermitian linear algebra built on explicit eigendecompositions.

Every matrix function here goes through a spectral decomposition:
eigendecompose, map the eigenvalues, reassemble. For the matrix sizes
this package targets (total dimension up to 64) that route is accurate,
fast, and hands the solver the eigenbasis it needs anyway for gradients
and projections.

Scalars are complex128 throughout; non-finite entries are rejected at
matrix construction so NaN/Inf can never enter a computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, EigensolverError, InputError, ShapeError

# Default absolute tolerance on eigenvalues for positivity decisions.
PSD_TOL = 1e-9

# SpectralDecomposition quality gates.
UNITARITY_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-9

# Relative eigenvalue gap below which divided differences switch to the
# analytic limit, avoiding catastrophic cancellation near degeneracies.
DEGENERACY_RTOL = 1e-12


class HermitianMatrix:
    """Complex square matrix stored in explicitly Hermitian form.

    The constructor symmetrizes its input as (M + M')/2 rather than
    rejecting near-Hermitian arrays: iterative solvers accumulate
    round-off, and rejection would turn that into spurious failures.
    The stored array is read-only.
    """

    __slots__ = ("mat",)

    def __init__(self, entries) -> None:
        arr = np.array(entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ShapeError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise InputError("matrix entries must be finite")
        sym = (arr + arr.conj().T) / 2.0
        sym.flags.writeable = False
        self.mat = sym

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def max_abs(self) -> float:
        """Max-norm of the entries."""
        return float(np.max(np.abs(self.mat)))

    def trace(self) -> float:
        """Trace; real because the matrix is Hermitian."""
        return float(np.real(np.trace(self.mat)))

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return HermitianMatrix(self.mat + other.mat)

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return HermitianMatrix(self.mat - other.mat)

    def __mul__(self, scalar) -> "HermitianMatrix":
        return HermitianMatrix(self.mat * float(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


def identity(dim: int) -> HermitianMatrix:
    return HermitianMatrix(np.eye(dim))


def from_diag(values) -> HermitianMatrix:
    return HermitianMatrix(np.diag(np.asarray(values, dtype=np.complex128)))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> HermitianMatrix:
        u = self.eigenvectors
        return HermitianMatrix((u * self.eigenvalues) @ u.conj().T)


@dataclass(frozen=True)
class ScalarFunction:
    """Real scalar function lifted to Hermitian operators eigenvalue-wise.

    ``evaluate`` must be total on (domain_lower, inf) and accept numpy
    arrays. ``domain_lower`` marks the open lower edge of the domain;
    eigenvalues at or below it are rejected by matrix_function.
    """

    name: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    domain_lower: float = -math.inf


LOG = ScalarFunction("log", np.log, 0.0)
SQRT = ScalarFunction("sqrt", np.sqrt, 0.0)
EXP = ScalarFunction("exp", np.exp)
IDENTITY_FN = ScalarFunction("identity", lambda x: np.asarray(x, dtype=float))
SQUARE = ScalarFunction("square", np.square)


def _eigh(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """np.linalg.eigh with failure surfaced as EigensolverError."""
    try:
        return np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed on a {mat.shape[0]}x{mat.shape[0]} matrix: {exc}") from exc


def eig_hermitian(h: HermitianMatrix) -> SpectralDecomposition:
    """Full eigendecomposition with explicit quality checks.

    The orthonormality and reconstruction residuals are verified so a
    silently broken decomposition cannot propagate; both gates are far
    looser than what LAPACK delivers on these dimensions.
    """
    w, u = _eigh(h.mat)
    gram_err = np.max(np.abs(u.conj().T @ u - np.eye(h.dim)))
    if gram_err > UNITARITY_TOL:
        raise EigensolverError(f"eigenvector basis not orthonormal (residual {gram_err:.3e})")
    recon_err = np.max(np.abs((u * w) @ u.conj().T - h.mat))
    if recon_err > RECONSTRUCTION_TOL * max(1.0, h.max_abs()):
        raise EigensolverError(f"spectral reconstruction residual {recon_err:.3e} too large")
    w.flags.writeable = False
    u.flags.writeable = False
    return SpectralDecomposition(eigenvalues=w, eigenvectors=u)


def matrix_function(h: HermitianMatrix, f: ScalarFunction) -> HermitianMatrix:
    """Apply a scalar function to a Hermitian matrix spectrally.

    Raises DomainError, carrying the offending eigenvalue, if any
    eigenvalue falls at or below f.domain_lower. Behavior exactly at the
    domain edge (e.g. log at 0) is deliberately an error here; any
    regularization is the caller's decision.
    """
    dec = eig_hermitian(h)
    w = dec.eigenvalues
    if w[0] <= f.domain_lower:
        raise DomainError(
            f"eigenvalue {w[0]:.6g} outside the domain of '{f.name}' (requires > {f.domain_lower:g})",
            eigenvalue=float(w[0]),
        )
    fw = np.asarray(f.evaluate(w), dtype=float)
    u = dec.eigenvectors
    return HermitianMatrix((u * fw) @ u.conj().T)


def matrix_log(h: HermitianMatrix, psd_tol: float = PSD_TOL) -> HermitianMatrix:
    """Natural-log matrix function; base conversion is the caller's concern.

    Requires a positive definite input: min eigenvalue must exceed
    psd_tol, otherwise DomainError.
    """
    dec = eig_hermitian(h)
    w = dec.eigenvalues
    if w[0] <= psd_tol:
        raise DomainError(
            f"matrix log needs a positive definite input; min eigenvalue {w[0]:.6g}",
            eigenvalue=float(w[0]),
        )
    u = dec.eigenvectors
    return HermitianMatrix((u * np.log(w)) @ u.conj().T)


def is_psd(h: HermitianMatrix, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Positive semidefiniteness at absolute tolerance tol.

    Returns (verdict, witness) where the witness is the minimum
    eigenvalue, reported for passing and failing inputs alike.
    """
    if tol < 0:
        raise InputError("tol must be nonnegative")
    w = _eigh(h.mat)[0]
    wmin = float(w[0])
    return wmin >= -tol, wmin


def loewner_geq(a: HermitianMatrix, b: HermitianMatrix, tol: float = PSD_TOL) -> bool:
    """Order comparison A >= B, i.e. A - B is PSD at tolerance tol."""
    if a.dim != b.dim:
        raise ShapeError(f"dimension mismatch: {a.dim} vs {b.dim}")
    verdict, _ = is_psd(a - b, tol)
    return verdict


def _log_divided_differences(w: np.ndarray) -> np.ndarray:
    """First divided differences of ln on a positive grid.

    L[i,j] = (ln w_i - ln w_j)/(w_i - w_j), with the analytic limit 1/w_i
    substituted whenever |w_i - w_j| < 1e-12 * max(w_i, w_j).
    """
    wi = w[:, None]
    wj = w[None, :]
    diff = wi - wj
    near = np.abs(diff) < DEGENERACY_RTOL * np.maximum(wi, wj)
    lw = np.log(w)
    table = (lw[:, None] - lw[None, :]) / np.where(near, 1.0, diff)
    return np.where(near, 1.0 / wi, table)


def frechet_log_adjoint(rho: SpectralDecomposition, sigma: HermitianMatrix) -> HermitianMatrix:
    """Adjoint of the Frechet derivative of the matrix log at rho, applied to sigma.

    In rho's eigenbasis this is the Hadamard product with the first
    divided differences of ln: U (L o (U' sigma U)) U'. It is the
    gradient of the map rho -> tr{sigma ln rho}, which is what the REE
    solver differentiates.
    """
    w = rho.eigenvalues
    if w[0] <= 0:
        raise DomainError(
            f"divided differences of log need a positive definite base point; min eigenvalue {w[0]:.6g}",
            eigenvalue=float(w[0]),
        )
    if sigma.dim != rho.dim:
        raise ShapeError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    u = rho.eigenvectors
    m = u.conj().T @ sigma.mat @ u
    return HermitianMatrix(u @ (_log_divided_differences(w) * m) @ u.conj().T)


def hs_inner(a: HermitianMatrix, b: HermitianMatrix) -> float:
    """Hilbert-Schmidt inner product Re tr(A'B)."""
    if a.dim != b.dim:
        raise ShapeError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(np.real(np.vdot(a.mat, b.mat)))
