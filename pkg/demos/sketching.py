"""Solving on a low-rank sketch and paying an additive price.

Run: python demos/sketching.py
"""

import numpy as np

from disjoint_spca import brute_force_opt
from disjoint_spca.sketch import gaussian_sketch, sketch_error_term, sketch_factor, sqrt_factor, svd_sketch
from disjoint_spca.solver import SolverConfig, solve_multi_spca

rng = np.random.default_rng(1)
B = rng.standard_normal((8, 8)) * np.array([3, 2.5, 1, .5, .3, .2, .1, .1])
A = B @ B.T
opt = brute_force_opt(A, k=2, s=2).opt_value
print(f"exact optimum {opt:.3f}")

for r in [1, 2, 3]:
    sk = svd_sketch(A, r)
    rep = solve_multi_spca(sketch_factor(sk), A, SolverConfig(eps=0.3, k=2, s=2))
    floor = 0.7 * opt - sketch_error_term(sk, 2)
    print(f"svd rank {r}: objective {rep.objective:.3f}  guaranteed >= {floor:.3f}  "
          f"(lambda_1 of residual {sk.error_lambda1:.3f})")

sk = gaussian_sketch(sqrt_factor(A), 3, seed=0)
rep = solve_multi_spca(sketch_factor(sk), A, SolverConfig(eps=0.3, k=2, s=2))
print(f"gaussian rank 3: objective {rep.objective:.3f}, residual lambda_1 {sk.error_lambda1:.3f}")
