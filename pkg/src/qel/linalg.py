"""Dense Hermitian linear algebra.

Operators are plain complex ``numpy`` arrays.  The functions here validate
their inputs (Hermiticity, positivity, unit trace) and compute matrix
functions through the Hermitian eigendecomposition, which is the only route
used anywhere in the package.

The single zero threshold of the package lives in :func:`support_mask`:
an eigenvalue counts as part of the support when it exceeds
``cutoff * lambda_max`` with ``cutoff = dim * 1e-12`` by default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    DefectiveMatrix,
    DomainError,
    NoConvergence,
    NonHermitian,
    NotDensity,
    ShapeMismatch,
    SingularState,
)

HERMIT_TOL = 1e-12
EIG_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
POS_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12  # per unit of dimension, relative to lambda_max

KernelPolicy = Union[str, float]


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-D complex array."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got array of shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ShapeMismatch("matrix has non-finite entries")
    return M


def as_square(M) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {M.shape}")
    return M


def dagger(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def fro(M) -> float:
    return float(np.linalg.norm(M))


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


def hermiticity_defect(M: np.ndarray) -> float:
    """Relative Frobenius distance between ``M`` and ``M^dagger``."""
    scale = fro(M)
    if scale == 0.0:
        return 0.0
    return fro(M - dagger(M)) / scale


def is_hermitian(M, tol: float = HERMIT_TOL) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return hermiticity_defect(M) <= tol


def hermitian(M, tol: float = HERMIT_TOL) -> np.ndarray:
    """Validate ``M`` as Hermitian and return its exactly symmetrized copy."""
    M = as_square(M)
    defect = hermiticity_defect(M)
    if defect > tol:
        raise NonHermitian(
            f"|M - M^dagger|_F / |M|_F = {defect:.3e} exceeds {tol:.1e}"
        )
    return 0.5 * (M + dagger(M))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order and the unitary whose columns are the
    matching eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self, values=None) -> np.ndarray:
        """``U diag(values) U^dagger``; defaults to the eigenvalues."""
        w = self.eigenvalues if values is None else np.asarray(values)
        U = self.eigenvectors
        return (U * w) @ dagger(U)


def eig_hermitian(M, tol: float = HERMIT_TOL) -> Spectrum:
    H = hermitian(M, tol)
    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    return Spectrum(w, U)


def eigvals_hermitian(M, tol: float = HERMIT_TOL) -> np.ndarray:
    H = hermitian(M, tol)
    try:
        return np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc


def support_mask(eigenvalues, cutoff: float | None = None) -> np.ndarray:
    """Boolean mask of eigenvalues belonging to the support.

    ``cutoff`` is relative to the largest eigenvalue; the default is
    ``dim * 1e-12``.
    """
    w = np.asarray(eigenvalues, dtype=float)
    if w.size == 0:
        return np.zeros(0, dtype=bool)
    if cutoff is None:
        cutoff = w.size * SUPPORT_CUTOFF
    top = w.max()
    if top <= 0.0:
        return np.zeros(w.shape, dtype=bool)
    return w > cutoff * top


def support_projection(M, cutoff: float | None = None) -> np.ndarray:
    """Orthogonal projection onto the support of a PSD operator."""
    spec = eig_hermitian(M)
    if spec.dim and spec.eigenvalues[0] < -PSD_TOL:
        raise DomainError(
            f"operator is not PSD: min eigenvalue {spec.eigenvalues[0]:.3e}"
        )
    mask = support_mask(spec.eigenvalues, cutoff)
    V = spec.eigenvectors[:, mask]
    return V @ dagger(V)


def rank(M, cutoff: float | None = None) -> int:
    return int(support_mask(eigvals_hermitian(M), cutoff).sum())


def apply_to_spectrum(
    spec: Spectrum,
    f: Callable[[np.ndarray], np.ndarray],
    kernel: KernelPolicy = "error",
    cutoff: float | None = None,
) -> np.ndarray:
    """Evaluate ``f`` on a precomputed spectrum, see :func:`matrix_function`."""
    w = spec.eigenvalues
    if kernel == "error":
        retained = np.ones(w.shape, dtype=bool)
        fill = 0.0
    else:
        fill = 0.0 if kernel == "zero" else float(kernel)
        # eigenvalues in [-psd_tol, cutoff] are treated as exact zeros
        retained = support_mask(w, cutoff) | (w < -PSD_TOL)
    values = np.full(w.shape, fill, dtype=complex)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w[retained]))
    if not np.all(np.isfinite(fw)):
        bad = w[retained][~np.isfinite(fw)]
        raise DomainError(f"function not finite on eigenvalue(s) {bad}")
    values[retained] = fw
    if np.all(values.imag == 0):
        values = values.real
    return spec.reconstruct(values)


def matrix_function(
    M,
    f: Callable[[np.ndarray], np.ndarray],
    kernel: KernelPolicy = "error",
    cutoff: float | None = None,
) -> np.ndarray:
    """Return ``U f(Lambda) U^dagger`` for Hermitian ``M``.

    Parameters
    ----------
    f : callable
        Vectorised scalar function applied to the eigenvalues.
    kernel : {"error", "zero"} or float
        ``"error"`` applies ``f`` to every eigenvalue and raises
        :class:`DomainError` if a value is not finite.  ``"zero"`` maps
        eigenvalues outside the support (see :func:`support_mask`) to 0
        instead of evaluating ``f`` there, which realises ``0 log 0 = 0``.
        A float maps them to that value.
    """
    return apply_to_spectrum(eig_hermitian(M), f, kernel, cutoff)


def logm(M, kernel: KernelPolicy = "zero") -> np.ndarray:
    return matrix_function(M, np.log, kernel)


def logm_strict(M, pos_tol: float = POS_TOL) -> np.ndarray:
    """Logarithm of a strictly positive operator."""
    spec = eig_hermitian(M)
    require_positive(spec, pos_tol)
    return apply_to_spectrum(spec, np.log)


def expm(M) -> np.ndarray:
    return matrix_function(M, np.exp)


def sqrtm(M) -> np.ndarray:
    return matrix_function(M, np.sqrt, "zero")


def powm(M, s: float) -> np.ndarray:
    """``M**s`` for PSD ``M`` with kernel mapped to zero."""
    return matrix_function(M, lambda w: w**s, "zero")


def require_positive(spec: Spectrum, pos_tol: float = POS_TOL) -> None:
    if spec.dim and spec.eigenvalues[0] <= pos_tol:
        raise SingularState(
            f"operator must be strictly positive; min eigenvalue "
            f"{spec.eigenvalues[0]:.3e} <= {pos_tol:.1e}"
        )


def imaginary_power(rho, t: float, pos_tol: float = POS_TOL) -> np.ndarray:
    """``rho**(i t)`` for a strictly positive ``rho``; the result is unitary."""
    spec = eig_hermitian(rho)
    require_positive(spec, pos_tol)
    return spec.reconstruct(np.exp(1j * t * np.log(spec.eigenvalues)))


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt inner product ``Tr A^dagger B``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return complex(np.vdot(A, B))


def is_density(rho, psd_tol: float = PSD_TOL, trace_tol: float = TRACE_TOL) -> bool:
    try:
        density(rho, psd_tol, trace_tol)
    except (NotDensity, NonHermitian, ShapeMismatch):
        return False
    return True


def density(rho, psd_tol: float = PSD_TOL, trace_tol: float = TRACE_TOL) -> np.ndarray:
    """Validate a density operator (Hermitian, PSD, unit trace)."""
    H = hermitian(rho)
    tr = np.trace(H).real
    if abs(tr - 1.0) > trace_tol:
        raise NotDensity(f"trace is {tr!r}, expected 1 within {trace_tol:.1e}")
    w = np.linalg.eigvalsh(H)
    if w[0] < -psd_tol:
        raise NotDensity(f"min eigenvalue {w[0]:.3e} below -{psd_tol:.1e}")
    return H


def log_divided_difference(x, y) -> np.ndarray:
    """``(log x - log y) / (x - y)`` elementwise, with the limit ``1/x`` on
    the diagonal ``x == y``.  Equal to ``int_0^inf du / ((x+u)(y+u))``."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    d = (x - y) / y
    with np.errstate(divide="ignore", invalid="ignore"):
        # log1p is accurate for close arguments; far apart, 1 + d = x / y
        # is better served by the plain difference of logs
        near = np.where(np.abs(d) < 1e-8, 1.0 - d / 2.0 + d * d / 3.0, np.log1p(d) / d) / y
        far = (np.log(x) - np.log(y)) / (x - y)
    return np.where(np.abs(d) < 0.5, near, far)


def log_frechet(S, T) -> np.ndarray:
    """First-order change of ``log`` at ``S > 0`` in direction ``T``
    (Daleckii-Krein formula with the log divided-difference kernel)."""
    spec = eig_hermitian(S)
    require_positive(spec)
    s = spec.eigenvalues
    U = spec.eigenvectors
    kernel = log_divided_difference(s[:, None], s[None, :])
    return U @ (kernel * (dagger(U) @ hermitian(T) @ U)) @ dagger(U)


def funm_nonhermitian(M, f: Callable, cond_max: float = 1e8) -> np.ndarray:
    """``W f(Lambda) W^{-1}`` for a diagonalizable complex matrix.

    Raises :class:`DefectiveMatrix` when the eigenvector matrix has condition
    number above ``cond_max``.
    """
    M = as_square(M)
    w, W = np.linalg.eig(M)
    cond = np.linalg.cond(W)
    if not np.isfinite(cond) or cond > cond_max:
        raise DefectiveMatrix(f"eigenvector condition number {cond:.3e}")
    return (W * f(w)) @ np.linalg.inv(W)
