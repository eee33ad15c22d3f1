"""Finite nets of the unit sphere and their Cartesian powers.

The default construction is a recursive angular grid. A point of S^{m-1}
is written ``(cos a, sin a * y)`` with ``y`` on S^{m-2}; for two such points

    |x - g|^2 = (2 sin(|a - b| / 2))^2 + sin(a) sin(b) |y - z|^2,

so the squared chord error splits exactly into one term per angle. Each
level gets the same share ``c^2`` of the budget, and inner grids are
coarsened where ``sin`` of the outer angle is small. The grid is built to
be exactly symmetric under negation, so antipodal reduction pairs points
bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import CapacityExceeded, InvalidInput

ANGULAR_GRID = "angular"
GREEDY_COVER = "greedy"
MAX_STREAM = 2**63 - 1
MAX_NET_POINTS = 2_000_000


@dataclass(frozen=True)
class SphereNet:
    """A finite set of unit vectors covering S^{dim-1} at chord radius ``radius``.

    ``construction_constant`` is ``len(points) / (4/eps)^dim``.
    """

    dim: int
    radius: float
    points: np.ndarray
    construction: str
    antipodal_reduced: bool = False
    seed: int | None = None
    construction_constant: float = field(default=float("nan"))

    def __len__(self):
        return self.points.shape[0]

    @property
    def eps(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True)
class CandidateBasis:
    """One element of the k-th Cartesian power: an r x k matrix of net points."""

    indices: tuple
    columns: np.ndarray

    @property
    def k(self) -> int:
        return self.columns.shape[1]


def angular_step(eps: float) -> float:
    """Largest grid step whose cells have chord diameter at most eps/2."""
    return 2.0 * math.asin(eps / 4.0)


def _angle_step(c, sigma):
    # largest angle whose scaled chord stays within c
    return 4.0 * math.asin(min(1.0, c / (2.0 * sigma)))


def _circle(c, sigma):
    # points (cos t, sin t) with sigma * chord <= c; even count, exact negation pairs
    phi = _angle_step(c, sigma)
    M = max(2, math.ceil(2.0 * math.pi / phi - 1e-12))
    M += M % 2
    t = 2.0 * math.pi * np.arange(M // 2) / M
    half = np.column_stack([np.cos(t), np.sin(t)])
    return np.vstack([half, -half])


def _grid_count(m, c, sigma, limit=math.inf):
    # cardinality of _grid(m, c, sigma) without building it; stops once above limit
    phi = _angle_step(c, sigma)
    if m == 2:
        M = max(2, math.ceil(2.0 * math.pi / phi - 1e-12))
        return M + M % 2
    P = max(2, math.ceil(math.pi / phi - 1e-12))
    P += P % 2
    total = 0
    for i in range(P + 1):
        mirror = min(i, P - i)
        if mirror == 0:
            total += 1
            continue
        sb = math.sin(mirror * math.pi / P)
        total += _grid_count(m - 1, c, sigma * math.sqrt(sb * min(1.0, sb + phi / 2.0)), limit - total)
        if total > limit:
            break
    return total


def _grid(m, c, sigma):
    if m == 2:
        return _circle(c, sigma)
    phi = _angle_step(c, sigma)
    P = max(2, math.ceil(math.pi / phi - 1e-12))
    P += P % 2
    blocks = []
    for i in range(P + 1):
        mirror = min(i, P - i)
        b = mirror * math.pi / P
        sb = math.sin(b) if mirror else 0.0
        if 2 * i == P:
            cb = 0.0
        else:
            cb = math.cos(b) if i <= P - i else -math.cos(b)
        if sb == 0.0:
            blocks.append(np.concatenate([[cb], np.zeros(m - 1)])[None, :])
            continue
        sub = _grid(m - 1, c, sigma * math.sqrt(sb * min(1.0, sb + phi / 2.0)))
        if i > P - i:
            # mirror rows of the partner block so that negation is exact
            sub = -sub
        blocks.append(np.column_stack([np.full(sub.shape[0], cb), sb * sub]))
    return np.vstack(blocks)


def _constant(n, r, eps):
    return n / (4.0 / eps) ** r


def build_sphere_net(r: int, eps: float, construction: str = ANGULAR_GRID, seed: int = 0) -> SphereNet:
    """Return an eps/2-net of the unit sphere in ``r`` dimensions.

    Every unit vector lies within chord distance ``eps/2`` of some net point.
    ``r == 1`` always gives ``{+1, -1}``. ``eps = 1`` is accepted here even
    though the solver needs ``eps < 1``.
    """
    if not isinstance(r, (int, np.integer)) or r < 1:
        raise InvalidInput("r must be a positive integer")
    if not 0.0 < eps <= 1.0:
        raise InvalidInput("eps must lie in (0, 1]")
    r = int(r)
    if r == 1:
        pts = np.array([[1.0], [-1.0]])
        return SphereNet(1, eps / 2, pts, ANGULAR_GRID, construction_constant=_constant(2, 1, eps))
    if construction == ANGULAR_GRID:
        step = angular_step(eps)
        c = min(2.0 * math.sin(step / 4.0), (eps / 2.0) / math.sqrt(r - 1))
        n = _grid_count(r, c, 1.0, MAX_NET_POINTS)
        if n > MAX_NET_POINTS:
            raise CapacityExceeded(f"net for r={r}, eps={eps} exceeds {MAX_NET_POINTS} points", count=n)
        pts = _grid(r, c, 1.0)
        return SphereNet(r, eps / 2, pts, ANGULAR_GRID, construction_constant=_constant(len(pts), r, eps))
    if construction == GREEDY_COVER:
        pts = _greedy_cover(r, eps, seed)
        return SphereNet(r, eps / 2, pts, GREEDY_COVER, seed=seed,
                         construction_constant=_constant(len(pts), r, eps))
    raise InvalidInput(f"unknown net construction {construction!r}")


def _greedy_cover(r, eps, seed, pool_size=None):
    # farthest-point cover of a seeded sample pool, shrunk radius for slack
    rng = np.random.default_rng(seed)
    if pool_size is None:
        pool_size = int(min(200_000, max(20_000, 20 * (4.0 / eps) ** r)))
    pool = rng.standard_normal((pool_size, r))
    pool /= np.linalg.norm(pool, axis=1, keepdims=True)
    target = 0.8 * eps / 2.0
    chosen = [pool[0], -pool[0]]
    best = np.maximum(pool @ pool[0], -(pool @ pool[0]))
    while True:
        gap = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * best))
        far = int(np.argmax(gap))
        if gap[far] <= target:
            break
        p = pool[far]
        chosen.extend([p, -p])
        ip = pool @ p
        best = np.maximum(best, np.abs(ip))
    return np.array(chosen)


def antipodal_reduce(net: SphereNet) -> SphereNet:
    """Keep one point of each ``{p, -p}`` pair: the one whose first nonzero entry is positive.

    Column signs never change the squared inner products the solver uses,
    so the reduced net yields the same solver output at half the size.
    """
    if net.antipodal_reduced:
        return net
    P = net.points
    nz = P != 0
    first = np.argmax(nz, axis=1)
    keep = P[np.arange(len(P)), first] > 0
    return SphereNet(net.dim, net.radius, P[keep].copy(), net.construction, True, net.seed,
                     net.construction_constant)


def stream_size(net: SphereNet, k: int) -> int:
    if k < 1:
        raise InvalidInput("k must be >= 1")
    total = len(net) ** k
    if total > MAX_STREAM:
        raise CapacityExceeded(f"net power has {total} elements, more than the index type holds", count=total)
    return total


def decode_indices(flat, n_points: int, k: int) -> np.ndarray:
    """Map flat stream positions to k-tuples of point indices (first column most significant)."""
    flat = np.asarray(flat, dtype=np.int64)
    out = np.empty(flat.shape + (k,), dtype=np.int64)
    rest = flat.copy()
    for j in range(k - 1, -1, -1):
        out[..., j] = rest % n_points
        rest //= n_points
    return out


def cartesian_power_stream(net: SphereNet, k: int, start: int = 0, stop: int | None = None) -> Iterator[CandidateBasis]:
    """Enumerate ``net^k`` in lexicographic order of point indices.

    ``start``/``stop`` select a contiguous slice of the ``len(net)**k``
    positions, so disjoint slices can be consumed independently.
    """
    total = stream_size(net, k)
    stop = total if stop is None else min(stop, total)
    if start < 0 or start > stop:
        raise InvalidInput("invalid stream range")
    n = len(net)
    for pos in range(start, stop):
        idx = tuple(int(v) for v in decode_indices(pos, n, k))
        yield CandidateBasis(idx, net.points[list(idx)].T.copy())


def nearest_gaps(net: SphereNet, X: np.ndarray) -> np.ndarray:
    """Chord distance from each row of X to the nearest net point (or its negation, if reduced)."""
    ip = X @ net.points.T
    if net.antipodal_reduced:
        ip = np.abs(ip)
    best = ip.max(axis=1)
    return np.sqrt(np.maximum(0.0, 2.0 - 2.0 * best))


def covering_check(net: SphereNet, eps: float, trials: int = 100_000, seed: int = 0, batch: int = 4096) -> dict:
    """Monte-Carlo check of the covering property.

    Samples ``trials`` uniform unit vectors (normalized Gaussians) and
    returns ``{"violations", "max_gap", "trials"}`` where a violation is a
    sample farther than ``eps/2 + 1e-12`` from the net.
    """
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    rng = np.random.default_rng(seed)
    violations = 0
    max_gap = 0.0
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        X = rng.standard_normal((m, net.dim))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        gaps = nearest_gaps(net, X)
        violations += int(np.count_nonzero(gaps > eps / 2 + 1e-12))
        max_gap = max(max_gap, float(gaps.max()))
        done += m
    return {"violations": violations, "max_gap": max_gap, "trials": trials}


def save_net(net: SphereNet, path) -> None:
    """Write one point per line, space-separated, 17 significant digits."""
    np.savetxt(path, net.points, fmt="%.17g", delimiter=" ")


def load_net(path, eps: float, construction: str = "file") -> SphereNet:
    pts = np.loadtxt(path, dtype=float, ndmin=2)
    r = pts.shape[1]
    return SphereNet(r, eps / 2, pts, construction, construction_constant=_constant(len(pts), r, eps))
