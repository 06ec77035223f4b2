"""
Partial assignments from the pool
=================================

Each iteration fixes some items and leaves the rest to an exact search.
Two generators decide what to fix.  The pool-vote generator ranks items by
how often the pool selects them, mixed with their position in score order,
and fixes the confident ends of that ranking by majority vote.  The
incumbent-centred generator frees a handful of items picked by three
selectors and fixes everything else to the incumbent's values.
"""

import numpy as np

from fepss import Instance, Params, init_solution_set, renumber
from fepss.pagen import delta_scores, gen_pa_from_cbs, gen_pa_from_ss, split_fixed_free

rng = np.random.default_rng(2)
n, m = 80, 5
r = rng.integers(0, 1001, size=(m, n)).astype(float)
p = np.floor(r.sum(axis=0) / m + 500 * rng.random(n)) + 1
inst, _ = renumber(Instance(p, r, np.floor(0.25 * r.sum(axis=1))))

params = Params(ns=20, max_ite=100, table_bits=18, random_per_slot=50).resolve(inst.n)
ss = init_solution_set(inst, rng, params)
s_star = ss.best

###############################################################################
# The ranking and the fixed/free cut around the incumbent's size.

delta = delta_scores(ss, inst.n, params.beta, rng)
fixed, free = split_fixed_free(delta, s_star.n_selected, params.Delta)
print(len(fixed), "fixed,", len(free), "free (Delta =", params.Delta, ")")

pa = gen_pa_from_ss(inst, ss, s_star, delta, params, rng)
print("pool vote:", len(pa), "fixings,", pa.selected.size, "set to 1, feasible:", pa.is_feasible(inst))

###############################################################################
# Around the incumbent only a few items are released.

pa = gen_pa_from_cbs(inst, ss, s_star, params, rng)
print("incumbent:", inst.n - len(pa), "items free")
