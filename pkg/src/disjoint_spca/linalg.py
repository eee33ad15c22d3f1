"""Dense symmetric linear algebra used by the solver.

Covariance construction, a deterministic symmetric eigensolver (cyclic
Jacobi for small matrices, LAPACK above ``JACOBI_MAX_DIM``), the trace
objective and principal-submatrix spectra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, ZeroMatrixError

JACOBI_MAX_DIM = 64
DEFAULT_REL_TOL = 1e-12
ABS_FLOOR = 1e-14
_SIGN_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class EigFactor:
    """Truncated eigendecomposition ``A ~= U diag(eigvals) U^T``.

    Attributes
    ----------
    eigvecs : ndarray, shape (d, r)
        Column-orthonormal eigenvectors.
    eigvals : ndarray, shape (r,)
        Positive eigenvalues in nonincreasing order.
    source_trace : float
        Trace of the decomposed matrix, kept for reporting.
    """

    eigvecs: np.ndarray
    eigvals: np.ndarray
    source_trace: float

    @property
    def dim(self) -> int:
        return self.eigvecs.shape[0]

    @property
    def rank(self) -> int:
        return self.eigvals.shape[0]

    def sqrt_factor(self) -> np.ndarray:
        """Return ``U diag(sqrt(eigvals))``, the d x r square-root factor."""
        return self.eigvecs * np.sqrt(self.eigvals)[None, :]

    def reconstruct(self) -> np.ndarray:
        V = self.sqrt_factor()
        return symmetrize(V @ V.T)


def symmetrize(A):
    return 0.5 * (A + A.T)


def as_square(A, name="A") -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InvalidInput(f"{name} must be a nonempty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput(f"{name} has non-finite entries")
    return A


def check_psd(A, name="A") -> np.ndarray:
    """Validate a numerically symmetric PSD matrix and return it as float array.

    Symmetry must hold to ``1e-12 * max|A|`` and every eigenvalue must be at
    least ``-1e-9 * lambda_1``.
    """
    A = as_square(A, name)
    scale = np.max(np.abs(A))
    if np.max(np.abs(A - A.T)) > 1e-12 * scale:
        raise InvalidInput(f"{name} is not symmetric")
    if scale == 0:
        return A
    w, _ = sym_eig(symmetrize(A))
    if w[-1] < -1e-9 * max(w[0], 0.0) or w[0] < 0:
        raise InvalidInput(f"{name} is not positive semidefinite (min eigenvalue {w[-1]:.3g})")
    return A


def gram_from_data(S, center=False, normalize=True) -> np.ndarray:
    """Covariance ``(1/n) S^T S`` of an n x d data matrix.

    With ``normalize=False`` the raw Gram ``S^T S`` is returned. Columns are
    centered first when ``center`` is set. The result is exactly symmetric.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.size == 0:
        raise InvalidInput(f"data matrix must be a nonempty 2-d array, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise InvalidInput("data matrix has non-finite entries")
    if center:
        S = S - S.mean(axis=0, keepdims=True)
    G = S.T @ S
    if normalize:
        G = G / S.shape[0]
    return symmetrize(G)


def _jacobi(A, max_sweeps=64):
    a = np.array(A, dtype=float)
    n = a.shape[0]
    V = np.eye(n)
    fro = np.linalg.norm(a)
    if fro == 0:
        return np.zeros(n), V
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= 1e-16 * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                app = a[p, p]
                aqq = a[q, q]
                if abs(apq) <= 1e-20 * (abs(app) + abs(aqq)) or abs(apq) < 1e-300:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    return np.diag(a).copy(), V


def fix_signs(U):
    """Flip columns so each one's largest-magnitude entry is positive.

    Entries within a relative 1e-9 of the column maximum count as tied; the
    lowest such index decides.
    """
    U = np.array(U, dtype=float, copy=True)
    if U.ndim == 1:
        return fix_signs(U[:, None])[:, 0]
    for j in range(U.shape[1]):
        col = np.abs(U[:, j])
        m = col.max()
        if m == 0:
            continue
        i = int(np.flatnonzero(col >= m * (1 - _SIGN_TIE_RTOL))[0])
        if U[i, j] < 0:
            U[:, j] = -U[:, j]
    return U


def sym_eig(A):
    """Full eigendecomposition, eigenvalues descending, signs canonicalized.

    Cyclic Jacobi is used up to ``JACOBI_MAX_DIM``; larger inputs go through
    LAPACK ``syevd`` via numpy.
    """
    A = symmetrize(np.asarray(A, dtype=float))
    if A.shape[0] <= JACOBI_MAX_DIM:
        w, V = _jacobi(A)
    else:
        w, V = np.linalg.eigh(A)
    order = np.argsort(-w, kind="stable")
    return w[order], fix_signs(V[:, order])


def sym_eig_truncated(A, rank_cap=None, rel_tol=DEFAULT_REL_TOL, abs_floor=ABS_FLOOR) -> EigFactor:
    """Truncated eigendecomposition of a PSD matrix.

    Keeps eigenpairs with ``lambda_i > max(rel_tol * lambda_1, abs_floor)``,
    at most ``rank_cap`` of them.

    Raises
    ------
    ZeroMatrixError
        If no eigenvalue clears the threshold.
    """
    if not 0 < rel_tol < 1:
        raise InvalidInput("rel_tol must lie in (0, 1)")
    if rank_cap is not None and rank_cap < 1:
        raise InvalidInput("rank_cap must be >= 1")
    A = as_square(A)
    w, V = sym_eig(A)
    if w[0] <= abs_floor:
        raise ZeroMatrixError("matrix has no positive eigenvalues; nothing to extract")
    keep = w > max(rel_tol * w[0], abs_floor)
    r = int(np.count_nonzero(keep))
    if rank_cap is not None:
        r = min(r, int(rank_cap))
    return EigFactor(eigvecs=V[:, :r].copy(), eigvals=w[:r].copy(), source_trace=float(np.trace(A)))


def _dense_components(X):
    if hasattr(X, "to_dense"):
        return X.to_dense()
    X = np.asarray(X, dtype=float)
    return X[:, None] if X.ndim == 1 else X


def column_variances(A, X) -> np.ndarray:
    """Per-column variances ``X_j^T A X_j``."""
    A = as_square(A)
    Xd = _dense_components(X)
    if Xd.shape[0] != A.shape[0]:
        raise InvalidInput(f"dimension mismatch: A is {A.shape[0]}, X has {Xd.shape[0]} rows")
    return np.einsum("ij,ik,kj->j", Xd, A, Xd)


def explained_variance(A, X) -> float:
    """Trace objective ``Tr(X^T A X)``."""
    return float(np.sum(column_variances(A, X)))


def principal_submatrix_lambda_max(A, index):
    """Largest eigenvalue of ``A[I, I]`` and its eigenvector embedded in R^d."""
    A = as_square(A)
    idx = np.asarray(list(index), dtype=int)
    if idx.size == 0:
        raise InvalidInput("index set must be nonempty")
    if np.any(idx < 0) or np.any(idx >= A.shape[0]):
        raise InvalidInput(f"index out of range for dimension {A.shape[0]}")
    if np.unique(idx).size != idx.size:
        raise InvalidInput("index set has duplicates")
    w, V = sym_eig(A[np.ix_(idx, idx)])
    x = np.zeros(A.shape[0])
    x[idx] = V[:, 0]
    return float(w[0]), fix_signs(x)
