"""Baselines for comparison and an exhaustive oracle for small instances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .components import ComponentSet
from .errors import CapacityExceeded, InfeasibleSparsity, InvalidInput
from .linalg import as_square, principal_submatrix_lambda_max

ORACLE_BUDGET = 10**7


@dataclass(frozen=True)
class OracleResult:
    opt_value: float
    opt_supports: tuple
    instances_enumerated: int

    def components(self, A) -> ComponentSet:
        """Leading eigenvector of ``A`` on each optimal support."""
        from .solver import polish

        return polish(A, self.opt_supports)


def count_support_tuples(d: int, k: int, s: int) -> int:
    """Number of unordered k-tuples of pairwise disjoint s-subsets of ``range(d)``."""
    if s * k > d:
        return 0
    n = 1
    for j in range(k):
        n *= math.comb(d - j * s, s)
    return n // math.factorial(k)


def brute_force_opt(A, k: int, s: int, budget: int = ORACLE_BUDGET) -> OracleResult:
    """Exact optimum by enumerating every disjoint support tuple.

    Each tuple scores ``sum_j lambda_max(A[I_j, I_j])``; ties go to the
    lexicographically smallest tuple (sets ordered by their smallest index).
    """
    A = as_square(A)
    d = A.shape[0]
    if k < 1 or s < 1:
        raise InvalidInput("k and s must be positive")
    if s * k > d:
        raise InfeasibleSparsity(f"s*k = {s * k} exceeds d = {d}")
    total = count_support_tuples(d, k, s)
    if total > budget:
        raise CapacityExceeded(f"{total} support tuples exceed the oracle budget of {budget}", count=total)

    subsets = np.array(list(combinations(range(d), s)), dtype=np.int64)
    sub = A[subsets[:, :, None], subsets[:, None, :]]
    lam = np.linalg.eigvalsh(sub)[:, -1]
    member = np.zeros((len(subsets), d), dtype=bool)
    member[np.arange(len(subsets))[:, None], subsets] = True
    mins = subsets[:, 0]

    best_val = -np.inf
    best = None

    def extend(chosen, used, value, last_min):
        nonlocal best_val, best
        ok = (mins > last_min) & ~member[:, used].any(axis=1) if used else (mins > last_min)
        if len(chosen) == k - 1:
            cand = np.flatnonzero(ok)
            if cand.size == 0:
                return
            i = cand[int(np.argmax(lam[cand]))]
            v = value + lam[i]
            if v > best_val:
                best_val, best = v, chosen + [i]
            return
        for i in np.flatnonzero(ok):
            extend(chosen + [i], used + list(subsets[i]), value + lam[i], mins[i])

    extend([], [], 0.0, -1)
    sups = tuple(tuple(int(v) for v in subsets[i]) for i in best)
    return OracleResult(float(best_val), sups, total)


def _truncate(y, s):
    idx = np.sort(np.argsort(-np.abs(y), kind="stable")[:s])
    x = np.zeros_like(y)
    x[idx] = y[idx]
    return x, idx


def tpower_run(A, s: int, x0, iters: int = 200, tol: float = 1e-10):
    """One truncated power iteration run from ``x0``.

    Returns ``(x, history)`` where ``history`` holds ``x^T A x`` after every
    truncate-and-normalize step.
    """
    A = as_square(A)
    x = np.asarray(x0, dtype=float)
    history = []
    prev_idx = None
    for _ in range(iters):
        y = A @ x
        x_new, idx = _truncate(y, s)
        norm = np.linalg.norm(x_new)
        if norm == 0:
            # A x vanished: restart from the heaviest diagonal entries
            idx = np.sort(np.argsort(-np.diag(A), kind="stable")[:s])
            x_new = np.zeros(A.shape[0])
            x_new[idx] = 1.0
            norm = math.sqrt(s)
        x = x_new / norm
        history.append(float(x @ A @ x))
        if prev_idx is not None and np.array_equal(idx, prev_idx) and abs(history[-1] - history[-2]) < tol:
            break
        prev_idx = idx
    return x, history


def tpower_single(A, s: int, iters: int = 200, restarts: int = 20, seed: int = 0) -> np.ndarray:
    """Best s-sparse unit vector found by TPower over seeded random restarts.

    Heuristic, no optimality guarantee.
    """
    A = as_square(A)
    if not 1 <= s <= A.shape[0]:
        raise InvalidInput("need 1 <= s <= d")
    if iters < 1 or restarts < 1:
        raise InvalidInput("iters and restarts must be >= 1")
    rng = np.random.default_rng(seed)
    best_x, best_val = None, -np.inf
    for _ in range(restarts):
        x0 = rng.standard_normal(A.shape[0])
        x0 /= np.linalg.norm(x0)
        x, hist = tpower_run(A, s, x0, iters)
        if hist[-1] > best_val:
            best_x, best_val = x, hist[-1]
    return best_x


def _exact_single(A, s):
    res = brute_force_opt(A, 1, s)
    _, x = principal_submatrix_lambda_max(A, res.opt_supports[0])
    return x


def deflate_greedy(A, k: int, s: int, single="exact", **single_kwargs) -> ComponentSet:
    """Extract k components one at a time, removing used variables in between.

    ``single`` is ``"exact"`` (exhaustive single-component optimum),
    ``"tpower"``, or a callable ``f(A_sub, s) -> vector``.
    """
    A = as_square(A)
    d = A.shape[0]
    if s * k > d:
        raise InfeasibleSparsity(f"s*k = {s * k} exceeds d = {d}")
    if single == "exact":
        solve = _exact_single
    elif single == "tpower":
        def solve(B, s):
            return tpower_single(B, s, **single_kwargs)
    elif callable(single):
        solve = single
    else:
        raise InvalidInput(f"unknown single-component solver {single!r}")

    alive = np.arange(d)
    sups, vals = [], []
    for _ in range(k):
        x = np.asarray(solve(A[np.ix_(alive, alive)], s), dtype=float)
        local = np.sort(np.argsort(-np.abs(x), kind="stable")[:s])
        v = x[local]
        nv = np.linalg.norm(v)
        if nv == 0:
            v = np.zeros(s)
            v[0] = 1.0
        else:
            v = v / nv
        sups.append(tuple(int(i) for i in alive[local]))
        vals.append(v)
        alive = np.delete(alive, local)
    return ComponentSet(d, tuple(sups), np.array(vals))


def appendix_example(eps: float, delta: float) -> np.ndarray:
    """4 x 4 PSD matrix on which greedy deflation captures ``1 + eps + delta`` against an optimum of 2."""
    if not (eps > 0 and delta > 0 and eps + delta < 1):
        raise InvalidInput("need eps > 0, delta > 0 and eps + delta < 1")
    return np.array([
        [1.0, 0.0, 0.0, eps],
        [0.0, delta, 0.0, 0.0],
        [0.0, 0.0, delta, 0.0],
        [eps, 0.0, 0.0, 1.0],
    ])
