"""Joint extraction of k disjoint sparse components.

For every candidate basis C drawn from the k-th power of a sphere net the
weight matrix ``W = U diag(sqrt(lambda)) C`` is formed, the best feasible X
for that W is found by matching, and the candidate with the largest
``Tr(X^T A X)`` on the evaluation matrix wins.

The scan is split into fixed-size chunks of the global stream. Chunk
boundaries do not depend on the worker count, so every candidate is scored
by exactly the same floating-point operations whatever the parallelism.
"""

from __future__ import annotations

import os
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .components import ComponentSet
from .errors import InfeasibleSparsity, InvalidInput
from .linalg import EigFactor, as_square, column_variances, principal_submatrix_lambda_max
from .matching import batch_assign, gen_bigraph, max_weight_perfect_matching, supports_from_matching
from .net import ANGULAR_GRID, antipodal_reduce, build_sphere_net, decode_indices, stream_size

COMPLETE = "Complete"
TIME_BUDGET = "TimeBudget"
CHUNK_SIZE = 2048


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SPCA_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SolverConfig:
    eps: float
    k: int
    s: int
    rank_cap: int | None = None
    time_budget: float | None = None  # seconds
    polish: bool = False
    antipodal_reduce: bool = True
    net_construction: str = ANGULAR_GRID
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise InvalidInput("eps must lie in (0, 1)")
        if self.k < 1 or self.s < 1:
            raise InvalidInput("k and s must be positive")
        if self.workers < 1:
            raise InvalidInput("workers must be >= 1")
        if self.time_budget is not None and self.time_budget < 0:
            raise InvalidInput("time_budget must be nonnegative")


@dataclass
class SolveReport:
    best: ComponentSet
    objective: float
    per_component: np.ndarray
    net_points_total: int
    net_points_examined: int
    guarantee_factor: float
    elapsed: float
    termination: str
    net_size: int = 0
    raw_objective: float = field(default=float("nan"))


def local_objective(X, W) -> float:
    """``sum_j <X^j, W^j>^2``."""
    Xd = X.to_dense() if hasattr(X, "to_dense") else np.asarray(X, dtype=float)
    return float(np.sum(np.sum(Xd * np.asarray(W, dtype=float), axis=0) ** 2))


def _unit_values(vals):
    # normalize along the last axis; vanished columns become e_0 on their support
    norms = np.linalg.norm(vals, axis=-1, keepdims=True)
    fallback = np.zeros_like(vals)
    fallback[..., 0] = 1.0
    safe = np.where(norms > 0, norms, 1.0)
    return np.where(norms > 0, vals / safe, fallback)


def candidate_solution(W, s: int) -> ComponentSet:
    """Best X in the feasible set for ``max sum_j <X^j, W^j>^2``.

    Supports come from the max-weight matching on ``gen_bigraph(W, s)``;
    each column is ``W^j`` restricted to its support and normalized. A
    column whose restricted weights vanish gets ``e_{min(I_j)}``.
    """
    G = gen_bigraph(W, s)
    M = max_weight_perfect_matching(G)
    sups = supports_from_matching(M, G.k, s)
    W = np.asarray(W, dtype=float)
    vals = np.array([W[list(I), j] for j, I in enumerate(sups)])
    return ComponentSet(G.d, sups, _unit_values(vals))


def polish(A, supports) -> ComponentSet:
    """Replace each column by the leading eigenvector of ``A`` on its support."""
    A = as_square(A)
    vals = []
    sups = []
    for I in supports:
        I = tuple(sorted(int(i) for i in I))
        _, x = principal_submatrix_lambda_max(A, I)
        sups.append(I)
        vals.append(x[list(I)])
    return ComponentSet(A.shape[0], tuple(sups), np.array(vals))


@dataclass(frozen=True)
class _ScanContext:
    Y: np.ndarray  # d x N, one weight column per net point
    A: np.ndarray
    n_points: int
    k: int
    s: int


def _batch_supports(W, s):
    B, d, k = W.shape
    a = batch_assign(W * W, s)
    # exactly s labels per group, so a stable sort groups the indices
    order = np.argsort(np.where(a >= 0, a, k), axis=1, kind="stable")[:, : s * k]
    return order.reshape(B, k, s)


def _score_chunk(ctx: _ScanContext, start: int, stop: int):
    idx = decode_indices(np.arange(start, stop), ctx.n_points, ctx.k)
    W = np.transpose(ctx.Y[:, idx], (1, 0, 2))  # B x d x k
    sup = _batch_supports(W, ctx.s)
    B = W.shape[0]
    vals = W[np.arange(B)[:, None, None], sup, np.arange(ctx.k)[None, :, None]]
    vals = _unit_values(vals)
    sub = ctx.A[sup[..., :, None], sup[..., None, :]]
    q = np.einsum("bks,bkst,bkt->b", vals, sub, vals)
    best = int(np.argmax(q))
    return float(q[best]), start + best, sup[best], vals[best]


_WORKER_CTX = None


def _init_worker(ctx):
    global _WORKER_CTX
    _WORKER_CTX = ctx


def _worker_chunk(args):
    start, stop, deadline = args
    if deadline is not None and time.time() > deadline:
        return None
    return _score_chunk(_WORKER_CTX, start, stop)


def _chunks(total, size=CHUNK_SIZE):
    for a in range(0, total, size):
        yield a, min(a + size, total)


def _better(res, best):
    # max objective, earliest stream position on ties
    return best is None or (-res[0], res[1]) < (-best[0], best[1])


def _scan(ctx, total, workers, deadline):
    best = None
    examined = 0
    if workers == 1:
        for a, b in _chunks(total):
            if deadline is not None and time.time() > deadline:
                break
            res = _score_chunk(ctx, a, b)
            examined += b - a
            if _better(res, best):
                best = res
        return best, examined
    window = 4 * workers
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(ctx,)) as ex:
        pending = deque()
        chunks = _chunks(total)
        for a, b in chunks:
            pending.append((b - a, ex.submit(_worker_chunk, (a, b, deadline))))
            if len(pending) < window:
                continue
            n, fut = pending.popleft()
            res = fut.result()
            if res is None:
                break
            examined += n
            if _better(res, best):
                best = res
        for n, fut in pending:
            res = fut.result()
            if res is not None:
                examined += n
                if _better(res, best):
                    best = res
    return best, examined


def solve_multi_spca(F: EigFactor, A_eval, cfg: SolverConfig) -> SolveReport:
    """Scan the net power, return the best candidate scored on ``A_eval``.

    A complete scan certifies ``objective >= (1 - eps) * OPT`` for the
    matrix ``F`` came from. With a time budget the scan stops between
    chunks and the report carries ``guarantee_factor = 0``.
    """
    t0 = time.perf_counter()
    A = as_square(A_eval, "A_eval")
    d = A.shape[0]
    if F.dim != d:
        raise InvalidInput(f"factor dimension {F.dim} does not match A_eval dimension {d}")
    if cfg.s * cfg.k > d:
        raise InfeasibleSparsity(f"s*k = {cfg.s * cfg.k} exceeds d = {d}")
    r = F.rank if cfg.rank_cap is None else min(F.rank, cfg.rank_cap)
    V = F.eigvecs[:, :r] * np.sqrt(F.eigvals[:r])[None, :]
    net = build_sphere_net(r, cfg.eps, cfg.net_construction, cfg.seed)
    if cfg.antipodal_reduce:
        net = antipodal_reduce(net)
    total = stream_size(net, cfg.k)
    ctx = _ScanContext(np.ascontiguousarray(V @ net.points.T), A, len(net), cfg.k, cfg.s)
    deadline = None if cfg.time_budget is None else time.time() + cfg.time_budget

    best, examined = _scan(ctx, total, cfg.workers, deadline)
    complete = examined == total

    if best is None:
        # budget expired before any chunk: fall back to the first candidate
        best = _score_chunk(ctx, 0, 1)
        examined = 1
        complete = total == 1
    raw, _, sup, vals = best
    best = ComponentSet(d, tuple(tuple(int(i) for i in row) for row in sup), vals)
    if cfg.polish:
        polished = polish(A, best.supports)
        if np.sum(column_variances(A, polished)) >= np.sum(column_variances(A, best)):
            best = polished
    per = column_variances(A, best)
    return SolveReport(
        best=best,
        objective=float(np.sum(per)),
        per_component=per,
        net_points_total=total,
        net_points_examined=examined,
        guarantee_factor=(1.0 - cfg.eps) if complete else 0.0,
        elapsed=time.perf_counter() - t0,
        termination=COMPLETE if complete else TIME_BUDGET,
        net_size=len(net),
        raw_objective=raw,
    )
