"""Low-rank surrogates of a covariance matrix.

Two sketches are provided: the rank-r truncated eigendecomposition and a
Gaussian random projection ``A_bar = V R R^T V^T`` with ``A = V V^T`` and
``R`` having i.i.d. N(0, 1/r) entries. Each result carries
``lambda_1(A - A_bar)``, the computable stand-in for the sparse eigenvalue
of the residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, ZeroMatrixError
from .linalg import (
    ABS_FLOOR,
    DEFAULT_REL_TOL,
    EigFactor,
    as_square,
    gram_from_data,
    sym_eig,
    sym_eig_truncated,
    symmetrize,
)

SVD = "svd"
GAUSSIAN = "gauss"
GAUSSIAN_SAMPLER = "numpy.random.default_rng(seed).standard_normal (ziggurat)"


@dataclass(frozen=True)
class SketchSpec:
    method: str
    rank: int
    seed: int = 0

    def __post_init__(self):
        if self.method not in (SVD, GAUSSIAN):
            raise InvalidInput(f"unknown sketch method {self.method!r}")
        if self.rank < 1:
            raise InvalidInput("sketch rank must be >= 1")


@dataclass(frozen=True)
class SketchResult:
    A_bar: np.ndarray
    method: str
    rank: int
    seed: int | None
    error_lambda1: float
    factor: EigFactor | None = None


def _lambda1(M) -> float:
    return float(sym_eig(symmetrize(M))[0][0])


def svd_sketch(A=None, r: int = 4, S=None, center=False) -> SketchResult:
    """Rank-r truncated eigendecomposition sketch.

    Pass either the covariance ``A`` or a data matrix ``S`` (turned into
    ``(1/n) S^T S``). ``error_lambda1`` is ``lambda_{r+1}(A)``, zero when
    ``r >= d``.
    """
    if r < 1:
        raise InvalidInput("r must be >= 1")
    if (A is None) == (S is None):
        raise InvalidInput("pass exactly one of A or S")
    if A is None:
        A = gram_from_data(S, center=center)
    A = as_square(A)
    d = A.shape[0]
    w, U = sym_eig(A)
    floor = max(DEFAULT_REL_TOL * max(w[0], 0.0), ABS_FLOOR)
    if r >= d:
        keep = w > floor
        factor = EigFactor(U[:, keep], w[keep], float(np.trace(A)))
        return SketchResult(A.copy(), SVD, r, None, 0.0, factor)
    lam = np.clip(w[:r], 0.0, None)
    pos = lam > floor
    factor = EigFactor(U[:, :r][:, pos], lam[pos], float(np.trace(A)))
    A_bar = symmetrize((U[:, :r] * lam) @ U[:, :r].T)
    return SketchResult(A_bar, SVD, r, None, max(float(w[r]), 0.0), factor)


def sqrt_factor(A) -> np.ndarray:
    """Symmetric-eigendecomposition square root ``V = U diag(sqrt(lambda))`` with ``A = V V^T``."""
    w, U = sym_eig(as_square(A))
    return U * np.sqrt(np.clip(w, 0.0, None))[None, :]


def gaussian_sketch(V, r: int, seed: int = 0, A=None) -> SketchResult:
    """Random-projection sketch ``A_bar = (V R)(V R)^T``.

    ``R`` is m x r with i.i.d. N(0, 1/r) entries drawn from
    ``numpy.random.default_rng(seed)``; a fixed seed gives bit-identical
    output. If ``A`` is given it must equal ``V V^T`` to 1e-9 (relative to
    its largest entry).
    """
    if r < 1:
        raise InvalidInput("r must be >= 1")
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or not np.all(np.isfinite(V)):
        raise InvalidInput("V must be a finite 2-d array")
    A_full = symmetrize(V @ V.T)
    if A is not None:
        A = as_square(A)
        if A.shape != A_full.shape or np.max(np.abs(A - A_full)) > 1e-9 * max(1.0, np.max(np.abs(A))):
            raise InvalidInput("V V^T does not reproduce A")
    rng = np.random.default_rng(seed)
    R = rng.standard_normal((V.shape[1], r)) / math.sqrt(r)
    VR = V @ R
    A_bar = symmetrize(VR @ VR.T)
    err = _lambda1(A_full - A_bar) if np.any(A_full) or np.any(A_bar) else 0.0
    return SketchResult(A_bar, GAUSSIAN, r, seed, err)


def sketch_factor(sk: SketchResult, rank_cap=None) -> EigFactor:
    """Eigen-factor of the sketched matrix, for feeding the solver."""
    if sk.factor is not None and rank_cap is None:
        if sk.factor.rank == 0:
            raise ZeroMatrixError("sketch has no positive eigenvalues")
        return sk.factor
    cap = sk.rank if rank_cap is None else min(sk.rank, rank_cap)
    return sym_eig_truncated(sk.A_bar, rank_cap=cap)


def apply_sketch(A, spec: SketchSpec) -> SketchResult:
    if spec.method == SVD:
        return svd_sketch(A, spec.rank)
    return gaussian_sketch(sqrt_factor(A), spec.rank, spec.seed, A=None)


def sketch_error_term(sk: SketchResult, k: int) -> float:
    """Upper bound ``2 k max(lambda_1(A - A_bar), 0)`` on the sketching penalty."""
    return 2.0 * k * max(sk.error_lambda1, 0.0)
