"""
Random construction and tabu refinement
=======================================

Pool members start as random feasible solutions: items are added in random
order while they fit.  A tabu search then walks the feasible space with flip
and swap moves, always taking the best move that leads somewhere new.
"""

import numpy as np

from fepss import Instance, VisitRecord, random_solution, tabu_search

rng = np.random.default_rng(0)
n, m = 60, 5
r = rng.integers(0, 1001, size=(m, n)).astype(float)
p = np.floor(r.sum(axis=0) / m + 500 * rng.random(n)) + 1
inst = Instance(p, r, np.floor(0.25 * r.sum(axis=1)))

start = random_solution(inst, rng)
print("random start:", start.objective, "items:", start.n_selected)

###############################################################################
# "Somewhere new" is decided by three hashed signature tables.  A solution
# counts as visited only when all three agree, which keeps false alarms rare
# with a fixed memory footprint.

rec = VisitRecord(inst.n, rng, table_bits=20)
trace = []
best = tabu_search(inst, start, 500, rec, rng, trace=trace)
print("after 500 moves:", best.objective, "feasible:", best.feasible)

###############################################################################
# ``trace`` holds every accepted solution, so an exact duplicate check is
# one line.

print("moves:", len(trace), "distinct:", len(set(trace)))
