"""The two building blocks: sphere nets and support selection by matching.

Run: python demos/nets_and_matching.py
"""

import numpy as np

from disjoint_spca import build_sphere_net, candidate_solution, covering_check, gen_bigraph
from disjoint_spca.net import antipodal_reduce
from disjoint_spca.solver import local_objective

# Nets: every unit vector lies within eps/2 of a net point.
for r, eps in [(2, 0.6), (3, 0.8), (4, 0.9)]:
    net = build_sphere_net(r, eps)
    chk = covering_check(net, eps, trials=20_000)
    print(f"r={r} eps={eps}: {len(net)} points ({len(antipodal_reduce(net))} after dropping antipodes), "
          f"max gap {chk['max_gap']:.3f} <= {eps / 2}")

# Matching: given a d x k weight matrix W, choose disjoint s-supports maximizing
# sum_j sum_{i in I_j} W_ij^2, then set each column proportional to W on its support.
rng = np.random.default_rng(0)
W = rng.standard_normal((7, 2))
print("\nsquared weights (variables x groups):\n", np.round(W**2, 2))
X = candidate_solution(W, s=2)
print("chosen supports", X.supports)
print("objective", local_objective(X, W), "= matching weight", np.sum(gen_bigraph(W, 2).weights[[0, 0, 1, 1],
      [i for I in X.supports for i in I]]))
