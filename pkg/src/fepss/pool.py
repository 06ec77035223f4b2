"""The solution pool: random construction, initialization and replacement."""

from __future__ import annotations

import logging

import numba as nb
import numpy as np

from .core import Solution, evaluate
from .instance import Instance
from .params import Params
from .tabu import VisitRecord, tabu_search

log = logging.getLogger(__name__)

_BATCH = 10_000


@nb.njit(cache=True)
def _fill_in_order(orders, r, b, out):
    """Row-wise: add items in the given order whenever they still fit."""
    m = b.size
    slack = np.empty(m)
    for row in range(orders.shape[0]):
        slack[:] = b
        for k in range(orders.shape[1]):
            i = orders[row, k]
            ok = True
            for j in range(m):
                if r[j, i] > slack[j]:
                    ok = False
                    break
            if ok:
                for j in range(m):
                    slack[j] -= r[j, i]
                out[row, i] = 1


def _random_bits(inst: Instance, rng: np.random.Generator, count: int) -> np.ndarray:
    orders = rng.permuted(np.tile(np.arange(inst.n), (count, 1)), axis=1)
    out = np.zeros((count, inst.n), dtype=np.uint8)
    _fill_in_order(orders, inst.r, inst.b, out)
    return out


def random_solution(inst: Instance, rng: np.random.Generator) -> Solution:
    """Try items in uniformly random order, keeping each one that fits."""
    return evaluate(inst, _random_bits(inst, rng, 1)[0])


class SolutionSet:
    """``ns`` feasible solutions plus per-item selection counts ``w``.

    Members are kept in order of residence: the oldest member comes first.
    """

    def __init__(self, members: list[Solution]):
        if len(members) < 2:
            raise ValueError("a solution set needs at least two members")
        self.members = list(members)
        self.w = np.sum([s.bits for s in self.members], axis=0, dtype=np.int64)

    @property
    def ns(self) -> int:
        return len(self.members)

    @property
    def best_index(self) -> int:
        return int(np.argmax([s.objective for s in self.members]))

    @property
    def best(self) -> Solution:
        return self.members[self.best_index]

    def matrix(self) -> np.ndarray:
        return np.stack([s.bits for s in self.members])

    def __contains__(self, s: Solution) -> bool:
        return any(np.array_equal(s.bits, t.bits) for t in self.members)

    def replace(self, k: int, s: Solution) -> Solution:
        """Remove member ``k`` and append ``s`` as the newest member."""
        old = self.members.pop(k)
        self.members.append(s)
        self.w += s.bits.astype(np.int64) - old.bits.astype(np.int64)
        return old

    def dump(self) -> str:
        """One line per member: the 0/1 string and its objective."""
        return "".join(f"{''.join(map(str, s.bits))} {s.objective:g}\n" for s in self.members)


def _normalize(x: np.ndarray) -> np.ndarray:
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.zeros_like(x, dtype=np.float64)
    return (x - lo) / (hi - lo)


def pool_scores(bits: np.ndarray, objectives: np.ndarray, c: np.ndarray, alpha: float) -> np.ndarray:
    """Replacement score of every row of ``bits`` relative to the other rows.

    Mixes normalized objective, normalized distance to the nearest other row,
    and normalized coarse value ``sum_i c_i * bits_i``.  Items with an infinite
    coarse score contribute nothing to the coarse value.
    """
    x = bits.astype(np.int64)
    dist = x @ (1 - x).T + (1 - x) @ x.T
    np.fill_diagonal(dist, np.iinfo(np.int64).max)
    nearest = dist.min(axis=1).astype(np.float64)
    coarse = x @ np.where(np.isfinite(c), c, 0.0)
    f = np.asarray(objectives, dtype=np.float64)
    return alpha * _normalize(f) + (1 - alpha) / 2 * (_normalize(nearest) + _normalize(coarse))


def score_V(members: list[Solution], s: Solution, c: np.ndarray, alpha: float) -> float:
    """Replacement score of ``s`` within ``members`` (``s`` must be one of them)."""
    idx = next(k for k, t in enumerate(members) if t is s or np.array_equal(t.bits, s.bits))
    bits = np.stack([t.bits for t in members])
    return float(pool_scores(bits, np.array([t.objective for t in members]), c, alpha)[idx])


def update(ss: SolutionSet, s: Solution, c: np.ndarray, alpha: float) -> Solution | None:
    """Offer ``s`` to the pool; return whichever solution was dropped.

    ``None`` means ``s`` duplicated a member and nothing changed.  The
    returned solution is ``s`` itself when it lost the comparison.
    """
    if s in ss:
        return None
    cands = ss.members + [s]
    objs = np.array([t.objective for t in cands])
    v = pool_scores(np.stack([t.bits for t in cands]), objs, c, alpha)
    order = np.argsort(v, kind="stable")
    protected = int(np.argmax(objs))
    victim = int(order[0]) if order[0] != protected else int(order[1])
    if victim == len(cands) - 1:
        return s
    return ss.replace(victim, s)


def init_solution_set(inst: Instance, rng: np.random.Generator, params: Params) -> SolutionSet:
    """Best ``ns`` of ``ns * random_per_slot`` random solutions, each refined by tabu search."""
    ns = params.ns
    total = max(ns, ns * params.random_per_slot)
    top_bits = np.zeros((0, inst.n), dtype=np.uint8)
    top_obj = np.zeros(0)
    done = 0
    while done < total:
        k = min(_BATCH, total - done)
        bits = _random_bits(inst, rng, k)
        obj = bits @ inst.p
        # earlier solutions come first, so a stable sort keeps them on ties
        all_bits = np.concatenate([top_bits, bits])
        all_obj = np.concatenate([top_obj, obj])
        keep = np.argsort(-all_obj, kind="stable")[:ns]
        top_bits, top_obj = all_bits[keep], all_obj[keep]
        done += k

    def new_record():
        return VisitRecord(inst.n, rng, params.table_bits)

    rec = new_record()
    members: list[Solution] = []
    seen: set[bytes] = set()
    retries = 0
    allow_dups = not params.distinct_pool
    for bits in top_bits:
        start = evaluate(inst, bits)
        while True:
            if not params.shared_record:
                rec = new_record()
            s = tabu_search(inst, start, params.max_ite, rec, rng)
            if allow_dups or s.key() not in seen:
                break
            if start.key() not in seen:
                s = start
                break
            retries += 1
            if retries > 100 * ns:
                log.warning("could not build %d distinct pool members; allowing duplicates", ns)
                allow_dups = True
                break
            start = random_solution(inst, rng)
        members.append(s)
        seen.add(s.key())
    return SolutionSet(members)
