"""Partial assignments derived from the pool or from the incumbent.

Items are assumed to be renumbered by ascending coarse score, so an item's
index carries meaning: higher index, more attractive item.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Solution
from .instance import Instance
from .params import Params
from .pool import SolutionSet


@dataclass(frozen=True)
class PartialAssignment:
    """Fixed values for a subset of items; ``items`` are distinct."""

    items: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        items = np.asarray(self.items, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.uint8)
        if items.shape != values.shape:
            raise ValueError("items and values differ in length")
        if np.unique(items).size != items.size:
            raise ValueError("an item is fixed twice")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "values", values)

    @classmethod
    def empty(cls) -> "PartialAssignment":
        return cls(np.zeros(0, np.int64), np.zeros(0, np.uint8))

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "PartialAssignment":
        return cls(np.fromiter(d.keys(), np.int64, len(d)), np.fromiter(d.values(), np.uint8, len(d)))

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.items.tolist(), self.values.tolist()))

    def __len__(self):
        return self.items.size

    @property
    def selected(self) -> np.ndarray:
        return self.items[self.values == 1]

    def usage(self, inst: Instance) -> np.ndarray:
        return inst.r[:, self.selected].sum(axis=1)

    def is_feasible(self, inst: Instance) -> bool:
        return bool(np.all(self.usage(inst) <= inst.b))


def delta_scores(ss: SolutionSet, n: int, beta: float, rng: np.random.Generator) -> np.ndarray:
    """Per-item score mixing pool vote share with position plus noise."""
    pos = np.arange(1, n + 1) / n
    u = rng.random(n)
    # rng.random is [0, 1); the noise term is meant to be open at 0
    u = np.where(u == 0.0, np.nextafter(0.0, 1.0), u)
    return beta * ss.w / ss.ns + (1 - beta) * (pos + u) / 2


def split_fixed_free(delta: np.ndarray, t: int, Delta: int) -> tuple[np.ndarray, np.ndarray]:
    """Fixed and free items from the ascending ``delta`` ordering.

    Positions ``[n-t-Delta, n-t+Delta]`` (1-based, clamped to ``[1, n]``) are
    free; everything else is fixed.
    """
    n = delta.size
    order = np.argsort(delta, kind="stable")
    lo = max(1, n - t - Delta)
    hi = min(n, n - t + Delta)
    free = order[lo - 1:hi] if lo <= hi else order[:0]
    fixed = np.concatenate([order[:lo - 1], order[hi:]]) if lo <= hi else order
    return fixed, free


def gen_pa_from_ss(
    inst: Instance,
    ss: SolutionSet,
    s_star: Solution,
    delta: np.ndarray,
    params: Params,
    rng: np.random.Generator,
    mutation: bool = True,
) -> PartialAssignment:
    """Vote values for the fixed items from random pool samples.

    The fixed items come from :func:`split_fixed_free` with ``t`` the number
    of items in ``s_star``.  Each fixed item gets 1 when at least half of
    ``ns // 10`` members drawn with replacement select it; the value is then
    flipped with probability
    ``1 / (10 n)``.  Infeasible drafts are discarded and redrawn.  After
    ``params.pa_retry_cap`` failures the plain majority values are used and
    selected items are dropped in ascending ``delta`` order until feasible.
    """
    fixed, _ = split_fixed_free(delta, s_star.n_selected, params.Delta)
    if fixed.size == 0:
        return PartialAssignment.empty()
    num = max(1, ss.ns // 10)
    mat = ss.matrix()
    p_mut = 1.0 / (10 * inst.n) if mutation else 0.0
    r_fixed = inst.r[:, fixed]

    def draft():
        picks = rng.integers(0, ss.ns, size=(fixed.size, num))
        votes = mat[picks, fixed[:, None]].sum(axis=1)
        return (votes >= num / 2).astype(np.uint8)

    for _ in range(params.pa_retry_cap):
        v = draft()
        flip = rng.random(fixed.size) < p_mut
        v ^= flip.astype(np.uint8)
        if np.all(r_fixed @ v <= inst.b):
            return PartialAssignment(fixed, v)

    v = draft()
    key = delta[fixed]
    usage = r_fixed @ v
    for k in np.argsort(key, kind="stable"):
        if np.all(usage <= inst.b):
            break
        if v[k]:
            v[k] = 0
            usage -= r_fixed[:, k]
    return PartialAssignment(fixed, v)


def voting_select(ss: SolutionSet, s_star: Solution) -> np.ndarray:
    """Items where the pool disagrees with the incumbent by more than one std."""
    w = ss.w
    sigma = float(np.std(w))
    sel = s_star.bits == 1
    return np.flatnonzero((sel & (w < ss.ns - sigma)) | (~sel & (w > sigma)))


def _first_index(w: np.ndarray, threshold: float) -> int:
    """0-based position of the first ``w_i >= threshold``; ``n`` when none."""
    hit = np.flatnonzero(w >= threshold)
    return int(hit[0]) if hit.size else w.size


def random_select(ss: SolutionSet, p1: float, rng: np.random.Generator) -> np.ndarray:
    """Each item from the first half-voted item onwards, with probability ``p1``."""
    start = _first_index(ss.w, ss.ns / 2)
    cand = np.arange(start, ss.w.size)
    return cand[rng.random(cand.size) < p1]


def ratio_candidates(inst: Instance, ss: SolutionSet, t2: int) -> np.ndarray:
    """Union over constraints of the ``t2`` best profit-per-consumption items.

    Only items between the first item selected by any member and the first
    item selected by half the pool (both inclusive) are considered.
    """
    n = inst.n
    idx1 = _first_index(ss.w, ss.ns / 2)
    idx2 = _first_index(ss.w, 1)
    hi = min(idx1, n - 1)
    if idx2 > hi or t2 <= 0:
        return np.zeros(0, np.int64)
    cand = np.arange(idx2, hi + 1)
    r = inst.r[:, cand]
    with np.errstate(divide="ignore"):
        ratio = np.where(r > 0, inst.p[cand] / np.where(r > 0, r, 1.0), np.inf)
    chosen = set()
    for row in ratio:
        # descending ratio, ties by index ascending
        order = np.lexsort((cand, -row))
        chosen.update(cand[order[:t2]].tolist())
    return np.array(sorted(chosen), dtype=np.int64)


def ratio_select(inst: Instance, ss: SolutionSet, p2: float, t2: int, rng: np.random.Generator) -> np.ndarray:
    cand = ratio_candidates(inst, ss, t2)
    return cand[rng.random(cand.size) < p2]


def gen_pa_from_cbs(
    inst: Instance, ss: SolutionSet, s_star: Solution, params: Params, rng: np.random.Generator
) -> PartialAssignment:
    """Fix every item outside the union of the three selectors to its incumbent value."""
    free = np.zeros(inst.n, dtype=bool)
    free[voting_select(ss, s_star)] = True
    free[random_select(ss, params.P1, rng)] = True
    free[ratio_select(inst, ss, params.P2, params.t2, rng)] = True
    fixed = np.flatnonzero(~free)
    return PartialAssignment(fixed, s_star.bits[fixed])

