"""
The solution pool
=================

The pool keeps ``ns`` good, mutually different solutions.  A newcomer joins
by pushing out the member with the lowest mix of normalized objective,
distance to its nearest neighbour and summed item score.  The best member is
never pushed out.
"""

import numpy as np

from fepss import Instance, Params, coarse_scores, init_solution_set, score_V, update
from fepss.core import evaluate

rng = np.random.default_rng(1)
inst = Instance([6, 10, 12, 13], [[2, 4, 6, 7], [1, 1, 1, 1]], [11, 3])
c = coarse_scores(inst)

ss = init_solution_set(inst, rng, Params(ns=4, table_bits=16))
print(ss.dump(), end="")
print("selection counts:", ss.w)

###############################################################################
# Scores of each member against the rest (alpha weights the objective).

for s in ss.members:
    print(s.bits, s.objective, round(score_V(ss.members, s, c, 0.7), 3))

###############################################################################
# Offering a solution returns whatever left the pool: ``None`` for a
# duplicate, the newcomer itself if it was the weakest.

print(update(ss, ss.members[0].copy(), c, 0.7))
newcomer = evaluate(inst, [1, 0, 0, 0])
gone = update(ss, newcomer, c, 0.7)
print("dropped:", gone.bits, "pool best:", ss.best.objective)
