"""
Reducing and solving a subproblem
=================================

Given a partial assignment, ``reduce`` releases the ``t1`` most profitable
fixings and returns what is left to decide.  ``solve`` is a depth-first
branch-and-bound that starts from a greedy completion and can be stopped at
any point by a time or node budget.
"""

import numpy as np

from fepss import Budget, Instance, PartialAssignment, greedy_complete, reduce, solve
from fepss.subsolver import subproblem

inst = Instance([6, 10, 12, 13], [[2, 4, 6, 7], [1, 1, 1, 1]], [11, 3])
pa = PartialAssignment.from_dict({1: 1, 3: 1})
sub = reduce(inst, pa, t1=1)
print("kept:", sub.fixed.as_dict(), "residual:", sub.residual, "free:", sub.free)
print("greedy:", greedy_complete(sub).objective)
res = solve(sub, Budget.unlimited())
print("exact:", res.solution.objective, "proved optimal:", res.optimal, "nodes:", res.nodes)

###############################################################################
# On a larger instance a small node budget returns the best found so far.

rng = np.random.default_rng(3)
n, m = 100, 5
r = rng.integers(0, 1001, size=(m, n)).astype(float)
p = np.floor(r.sum(axis=0) / m + 500 * rng.random(n)) + 1
big = Instance(p, r, np.floor(0.25 * r.sum(axis=1)))
sub = subproblem(big, PartialAssignment.empty())
for k in (1, 1_000, 100_000):
    res = solve(sub, Budget.nodes(k))
    print(f"{k:>7} nodes: {res.solution.objective:g} optimal={res.optimal}")
