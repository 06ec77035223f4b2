"""
A full search and a small batch
===============================

``run`` puts the pieces together: build the pool, then alternate between
pool-vote and incumbent-centred explorations until the budget is spent.
Deterministic mode counts iterations and subsolver nodes instead of seconds,
so results repeat exactly.
"""

import tempfile
from pathlib import Path

import numpy as np

from fepss import Instance, Params, run
from fepss.cli import main
from fepss.instance import serialize_orlib

rng = np.random.default_rng(4)
n, m = 100, 5
r = rng.integers(0, 1001, size=(m, n)).astype(float)
p = np.floor(r.sum(axis=0) / m + 500 * rng.random(n)) + 1
inst = Instance(p, r, np.floor(0.25 * r.sum(axis=1)), name="demo")

res = run(inst, Params(max_time=10, seed=1))
print("best:", res.best_objective, "found after", round(res.time_to_best, 2), "s,", res.iterations, "iterations")
for t, f in res.history:
    print(f"  {t:7.2f} s  {f:g}")

###############################################################################
# The same through the batch harness, three seeds in deterministic mode.
# The CSV goes to a file; the per-instance summary is printed.

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo.txt"
    path.write_text(serialize_orlib([inst]))
    out = Path(tmp) / "runs.csv"
    main(["--instance", str(path), "--seeds", "1..3", "--deterministic", "50:20000",
          "--param", "ns=30", "--out", str(out)])
    print(out.read_text())
