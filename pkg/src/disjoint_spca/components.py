from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalInvariantViolation


@dataclass(frozen=True)
class ComponentSet:
    """k unit-norm, s-sparse columns with pairwise disjoint supports.

    Stored sparsely: ``supports[j]`` lists the s row indices of column j in
    ascending order and ``values[j]`` the matching entries.
    """

    dim: int
    supports: tuple
    values: np.ndarray

    def __post_init__(self):
        sup = tuple(tuple(int(i) for i in I) for I in self.supports)
        vals = np.asarray(self.values, dtype=float).reshape(len(sup), -1) if sup else np.zeros((0, 0))
        object.__setattr__(self, "supports", sup)
        object.__setattr__(self, "values", vals)
        self.validate()

    @property
    def k(self) -> int:
        return len(self.supports)

    @property
    def s(self) -> int:
        return len(self.supports[0]) if self.supports else 0

    def validate(self, tol=1e-9):
        seen = set()
        for j, I in enumerate(self.supports):
            if len(I) != self.s:
                raise InternalInvariantViolation(f"column {j} has {len(I)} indices, expected {self.s}")
            if list(I) != sorted(set(I)):
                raise InternalInvariantViolation(f"column {j} support not strictly ascending")
            if I and (I[0] < 0 or I[-1] >= self.dim):
                raise InternalInvariantViolation(f"column {j} support out of range")
            if seen.intersection(I):
                raise InternalInvariantViolation("supports overlap")
            seen.update(I)
            norm = np.linalg.norm(self.values[j])
            if abs(norm - 1.0) > tol:
                raise InternalInvariantViolation(f"column {j} has norm {norm}")

    def to_dense(self) -> np.ndarray:
        X = np.zeros((self.dim, self.k))
        for j, I in enumerate(self.supports):
            X[list(I), j] = self.values[j]
        return X

    @classmethod
    def from_dense(cls, X, s):
        """Build from a d x k array whose columns have exactly s stored entries.

        Zero entries inside a support are allowed; the support is read as the
        s largest-magnitude positions of each column.
        """
        X = np.asarray(X, dtype=float)
        sups, vals = [], []
        for j in range(X.shape[1]):
            order = np.argsort(-np.abs(X[:, j]), kind="stable")[:s]
            I = np.sort(order)
            sups.append(tuple(I))
            vals.append(X[I, j])
        return cls(X.shape[0], tuple(sups), np.array(vals))
