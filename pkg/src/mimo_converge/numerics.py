"""Dense complex linear-algebra kernels shared by the whole simulator.

All routines take and return plain numpy arrays (complex128 or float64).
Hermitian outputs are exactly Hermitian: entry (i, j) equals the conjugate
of entry (j, i) bit for bit, and the diagonal is real.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy.linalg import get_lapack_funcs

# Relative eigenvalue threshold below which a matrix is treated as singular.
# Double precision leaves ample headroom: well-posed samples (M > K) sit many
# orders of magnitude above this.
SINGULAR_RTOL = 1e-12


class SingularMatrixError(np.linalg.LinAlgError):
    """Matrix is numerically singular (e.g. a degenerate channel sample)."""


class NotPSDError(np.linalg.LinAlgError):
    """Matrix has an eigenvalue below tolerance; no PSD square root exists."""


def _as_matrix(A: np.ndarray, name: str = "A") -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"{name} must be 2-d with nonzero dimensions, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise ValueError(f"{name} contains non-finite entries")
    return A


def _as_square(W: np.ndarray, name: str = "W") -> np.ndarray:
    W = _as_matrix(W, name)
    if W.shape[0] != W.shape[1]:
        raise ValueError(f"{name} must be square, got shape {W.shape}")
    return W


def _mirror_hermitian(B: np.ndarray) -> np.ndarray:
    """Rebuild B from its lower triangle so Hermitian symmetry is exact."""
    low = np.tril(B, -1)
    return low + low.conj().T + np.diag(B.diagonal().real)


def gram_normalized(A: np.ndarray, scale: float) -> np.ndarray:
    """Scaled Hermitian Gram matrix conj(A).T @ A / scale.

    The result is exactly Hermitian PSD with a real nonnegative diagonal;
    its dimension is the column count of A.
    """
    A = _as_matrix(A)
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return _mirror_hermitian((A.conj().T @ A) / scale)


def hermitian_eigenvalues(W: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, real and sorted ascending."""
    W = _as_square(W)
    return np.linalg.eigvalsh(W)


def psd_sqrt(R: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in [-tol, 0) with tol = SINGULAR_RTOL * max eigenvalue are
    clamped to zero; anything below -tol raises NotPSDError.
    """
    R = _as_square(R, "R")
    w, V = np.linalg.eigh(R)
    tol = SINGULAR_RTOL * max(float(w[-1]), 0.0)
    if w[0] < -tol:
        raise NotPSDError(
            f"matrix has eigenvalue {w[0]:.3e} below tolerance -{tol:.3e}"
        )
    w = np.maximum(w, 0.0)
    return _mirror_hermitian((V * np.sqrt(w)) @ V.conj().T)


def inverse_trace(W: np.ndarray) -> float:
    """Trace of the inverse of a Hermitian positive definite matrix.

    Cholesky based: for W = L L^H, tr(W^{-1}) equals the squared Frobenius
    norm of L^{-1}. A LAPACK reciprocal-condition estimate on the factor
    rejects numerically singular input (the 1-norm estimate tracks the
    eigenvalue ratio to within a factor of the dimension).
    """
    W = _as_square(W)
    try:
        L = scipy.linalg.cholesky(W, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"matrix is not positive definite: {exc}") from exc
    (pocon,) = get_lapack_funcs(("pocon",), (L,))
    rcond, info = pocon(L, np.linalg.norm(W, 1), uplo="L")
    if info != 0 or rcond < SINGULAR_RTOL:
        raise SingularMatrixError(
            f"matrix is numerically singular (rcond={rcond:.3e})"
        )
    L_inv = scipy.linalg.solve_triangular(L, np.eye(W.shape[0]), lower=True)
    return float(np.sum(np.abs(L_inv) ** 2))
