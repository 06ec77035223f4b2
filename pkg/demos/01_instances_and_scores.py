"""
Instances, item scores and renumbering
======================================

A knapsack instance holds profits ``p``, a consumption matrix ``r`` (one row
per resource) and capacities ``b``.  The search never looks at items in file
order: it sorts them by a cheap profit-per-consumption score first.
"""

import numpy as np

from fepss import Instance, coarse_scores, parse_orlib, renumber
from fepss.instance import serialize_orlib

# Four items, two resources.
inst = Instance([6, 10, 12, 13], [[2, 4, 6, 7], [1, 1, 1, 1]], [11, 3], name="tiny")
print(inst.n, "items,", inst.m, "resources")

###############################################################################
# The score divides each profit by the item's consumption, each resource
# measured as a share of its capacity.

c = coarse_scores(inst)
print(np.round(c, 3))

###############################################################################
# Renumbering sorts items by ascending score.  The permutation is kept so a
# solution found in the sorted space can be mapped back.

work, ren = renumber(inst)
print("sorted profits:", work.p)
bits = np.array([0, 1, 0, 1], dtype=np.uint8)  # items 2 and 4 in file order
moved = ren.to_renumbered(bits)
print("same objective:", inst.objective(bits), work.objective(moved))
print("round trip:", ren.to_original(moved))

###############################################################################
# OR-Library files hold several problems; a zero optimum means unknown.

text = serialize_orlib([inst, inst])
problems = parse_orlib(text, name="twice")
print([p.name for p in problems], problems[0].best_known)
