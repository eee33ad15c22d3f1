"""Shared fixtures and independent brute-force oracles."""

from itertools import combinations, permutations

import numpy as np
import pytest


def random_psd(rng, d, rank):
    B = rng.standard_normal((d, rank))
    return B @ B.T


def disjoint_support_tuples(d, k, s):
    """All ordered k-tuples of pairwise disjoint s-subsets of range(d)."""
    def rec(avail, depth):
        if depth == 0:
            yield ()
            return
        for I in combinations(sorted(avail), s):
            for rest in rec(avail - set(I), depth - 1):
                yield (I,) + rest
    yield from rec(set(range(d)), k)


def local_brute_force(W, s):
    """max over ordered disjoint supports of sum_j sum_{i in I_j} W_ij^2."""
    W = np.asarray(W, dtype=float)
    d, k = W.shape
    best = -np.inf
    for sup in disjoint_support_tuples(d, k, s):
        val = sum(float(np.sum(W[list(I), j] ** 2)) for j, I in enumerate(sup))
        best = max(best, val)
    return best


def trace_brute_force(A, k, s):
    """Exact OPT via loops over ordered tuples and scipy eigvalsh (independent of the package)."""
    from scipy.linalg import eigvalsh

    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    cache = {}
    best = -np.inf
    for sup in disjoint_support_tuples(d, k, s):
        val = 0.0
        for I in sup:
            if I not in cache:
                cache[I] = eigvalsh(A[np.ix_(I, I)])[-1]
            val += cache[I]
        best = max(best, val)
    return best


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[num])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
