"""Support selection as maximum-weight bipartite matching.

Left vertices are ``s`` interchangeable placeholders per component, right
vertices are the ``d`` variables, and every placeholder of component ``j``
sees variable ``i`` with weight ``W[i, j]**2``. The graph is stored as the
k x d weight table; placeholders are only expanded inside the solver.

Tie-breaking is part of the contract. Read a matching as the assignment
vector ``a`` with ``a[i]`` the group of variable ``i`` (unassigned ranks
after every group). Among maximum-weight matchings the one with the
lexicographically smallest ``a`` is returned. It is computed exactly:
weights are converted to integers (floats are dyadic rationals) and the
tie-break is folded into the cost as a base-(k+1) number, so the integer
Hungarian optimum is unique.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleSparsity, InternalInvariantViolation, InvalidInput


@dataclass(frozen=True)
class WeightedBipartiteGraph:
    """Placeholder graph for one weight matrix.

    ``weights[j, i]`` is the weight shared by all ``s`` placeholders of group
    ``j`` towards variable ``i``.
    """

    weights: np.ndarray
    s: int

    @property
    def k(self) -> int:
        return self.weights.shape[0]

    @property
    def d(self) -> int:
        return self.weights.shape[1]

    def weight(self, j: int, i: int) -> float:
        return float(self.weights[j, i])


@dataclass(frozen=True)
class Matching:
    """``assignment[i]`` is the group of variable ``i``, or -1 if unmatched."""

    assignment: np.ndarray
    total_weight: float


def gen_bigraph(W, s: int) -> WeightedBipartiteGraph:
    """Build the placeholder graph with edge weights ``W[i, j]**2``."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2:
        raise InvalidInput("W must be a d x k matrix")
    if not np.all(np.isfinite(W)):
        raise InvalidInput("W has non-finite entries")
    d, k = W.shape
    if s < 1 or k < 1:
        raise InvalidInput("s and k must be positive")
    if s * k > d:
        raise InfeasibleSparsity(f"s*k = {s * k} exceeds d = {d}")
    return WeightedBipartiteGraph(np.ascontiguousarray((W * W).T), int(s))


def stable_top_s(weights, s):
    """Indices of the s largest entries along axis -2, ties to the lower index.

    ``weights`` has shape (..., d, k); the result has shape (..., s, k).
    """
    order = np.argsort(-weights, axis=-2, kind="stable")
    return order[..., :s, :]


def _lexicographic_hungarian(weights, s):
    k, d = weights.shape
    # exact integer weights over a common power-of-two denominator
    ratios = [[float(w).as_integer_ratio() for w in row] for row in weights]
    den = max(q for row in ratios for _, q in row)
    base = k + 1
    scale = base**d
    pows = [base ** (d - 1 - i) for i in range(d)]
    cost = []
    for j in range(k):
        row = [-(num * (den // q) * scale + (k - j) * pows[i]) for i, (num, q) in enumerate(ratios[j])]
        cost.extend([row] * s)
    n, m = len(cost), d
    INF = float("inf")
    u = [0] * (n + 1)
    v = [0] * (m + 1)
    p = [0] * (m + 1)
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            crow = cost[i0 - 1]
            ui0 = u[i0]
            delta = INF
            j1 = 0
            for j in range(1, m + 1):
                if not used[j]:
                    cur = crow[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assignment = np.full(d, -1, dtype=np.int64)
    for j in range(1, m + 1):
        if p[j]:
            assignment[j - 1] = (p[j] - 1) // s
    return assignment


def _batch_hungarian(cost):
    """Lockstep shortest-augmenting-path Hungarian over a batch.

    ``cost`` has shape (B, n, m) with n <= m. Returns the column-to-row map
    ``p`` (1-based rows, 0 = free) and the dual potentials ``u``, ``v``.
    """
    B, n, m = cost.shape
    rows = np.arange(B)
    u = np.zeros((B, n + 1))
    v = np.zeros((B, m + 1))
    p = np.zeros((B, m + 1), dtype=np.int64)
    way = np.zeros((B, m + 1), dtype=np.int64)
    for i in range(1, n + 1):
        p[:, 0] = i
        j0 = np.zeros(B, dtype=np.int64)
        minv = np.full((B, m + 1), np.inf)
        used = np.zeros((B, m + 1), dtype=bool)
        active = np.ones(B, dtype=bool)
        for _ in range(i):
            used[rows[active], j0[active]] = True
            i0 = p[rows, j0]
            cur = cost[rows, np.maximum(i0, 1) - 1, :] - u[rows, i0][:, None] - v[:, 1:]
            free = ~used[:, 1:] & active[:, None]
            upd = free & (cur < minv[:, 1:])
            minv[:, 1:] = np.where(upd, cur, minv[:, 1:])
            way[:, 1:] = np.where(upd, j0[:, None], way[:, 1:])
            masked = np.where(free, minv[:, 1:], np.inf)
            j1 = np.argmin(masked, axis=1) + 1
            delta = np.where(active, masked[rows, j1 - 1], 0.0)
            bu, ju = np.nonzero(used & active[:, None])
            u[bu, p[bu, ju]] += delta[bu]
            v[bu, ju] -= delta[bu]
            minv[:, 1:] -= np.where(free, delta[:, None], 0.0)
            j0 = np.where(active, j1, j0)
            active &= p[rows, j0] != 0
            if not active.any():
                break
        pending = np.ones(B, dtype=bool)
        for _ in range(i + 1):
            b = rows[pending]
            j1 = way[b, j0[pending]]
            p[b, j0[pending]] = p[b, j1]
            j0[pending] = j1
            pending &= j0 != 0
            if not pending.any():
                break
    return p, u, v


def batch_assign(weights, s):
    """Lexicographically smallest max-weight assignment for a batch of graphs.

    ``weights`` has shape (B, d, k), entry ``[b, i, j]`` being the weight of
    variable ``i`` for group ``j``. Returns int array (B, d) of group labels,
    -1 for unmatched variables.

    Three tiers: disjoint stable top-s sets are already optimal; otherwise a
    float Hungarian runs and its answer is accepted when every edge outside
    the assignment has dual slack above a rounding margin (the optimum is
    then unique); remaining near-ties go to the exact integer solver.
    """
    w = np.asarray(weights, dtype=float)
    B, d, k = w.shape
    out = np.full((B, d), -1, dtype=np.int64)
    top = stable_top_s(w, s)
    flat = np.sort(top.reshape(B, s * k), axis=1)
    clash = np.any(flat[:, 1:] == flat[:, :-1], axis=1)
    ok = np.flatnonzero(~clash)
    for j in range(k):
        out[ok[:, None], top[ok, :, j]] = j
    hard = np.flatnonzero(clash)
    if hard.size == 0:
        return out
    wh = w[hard]
    cost = -np.repeat(np.transpose(wh, (0, 2, 1)), s, axis=1)  # Bh x (s*k) x d
    p, u, v = _batch_hungarian(cost)
    assign = np.where(p[:, 1:] > 0, (p[:, 1:] - 1) // s, -1)
    ug = u[:, 1:].reshape(len(hard), k, s).max(axis=2)  # Bh x k
    slack = -np.transpose(wh, (0, 2, 1)) - ug[:, :, None] - v[:, None, 1:]
    off = assign[:, None, :] != np.arange(k)[None, :, None]
    tau = 1e-9 * (1.0 + wh.max(axis=(1, 2))) * s * k
    certified = np.all(np.where(off, slack, np.inf) > tau[:, None, None], axis=(1, 2))
    out[hard[certified]] = assign[certified]
    for b in hard[~certified]:
        out[b] = _lexicographic_hungarian(np.ascontiguousarray(w[b].T), s)
    return out


def max_weight_perfect_matching(G: WeightedBipartiteGraph) -> Matching:
    """Maximum-weight matching covering every placeholder, ties broken lexicographically."""
    assignment = batch_assign(G.weights.T[None, :, :], G.s)[0]
    matched = np.flatnonzero(assignment >= 0)
    total = float(np.sum(G.weights[assignment[matched], matched]))
    return Matching(assignment, total)


def supports_from_matching(M: Matching, k: int, s: int) -> tuple:
    """Turn a perfect matching into k disjoint, ascending index tuples."""
    a = np.asarray(M.assignment)
    sups = []
    for j in range(k):
        I = tuple(int(i) for i in np.flatnonzero(a == j))
        if len(I) != s:
            raise InternalInvariantViolation(f"group {j} matched {len(I)} variables, expected {s}")
        sups.append(I)
    if np.any((a >= k) | (a < -1)):
        raise InternalInvariantViolation("assignment refers to a nonexistent group")
    return tuple(sups)
