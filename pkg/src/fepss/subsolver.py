"""Subproblem reduction and an anytime branch-and-bound for the free items.

The branch-and-bound runs depth first over the free items in descending
coarse-score order, trying value 1 before 0.  A node's bound is the smallest
fractional single-constraint (Dantzig) bound over all constraints, capped by
the sum of the remaining profits.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numba as nb
import numpy as np
from scipy.optimize import linprog

from .core import Solution, evaluate
from .instance import Instance, coarse_scores
from .pagen import PartialAssignment


@dataclass(frozen=True)
class Budget:
    """Search budget: ``"seconds"`` of wall clock or ``"nodes"`` explored."""

    mode: str
    amount: float

    def __post_init__(self):
        if self.mode not in ("seconds", "nodes"):
            raise ValueError(f"unknown budget mode {self.mode!r}")
        if not self.amount > 0:
            raise ValueError("budget amount must be positive")

    @classmethod
    def seconds(cls, s: float) -> "Budget":
        return cls("seconds", s)

    @classmethod
    def nodes(cls, k: float) -> "Budget":
        return cls("nodes", k)

    @classmethod
    def unlimited(cls) -> "Budget":
        return cls("nodes", math.inf)


@dataclass(frozen=True)
class Subproblem:
    base: Instance
    fixed: PartialAssignment
    residual: np.ndarray
    free: np.ndarray
    c: np.ndarray = field(repr=False)
    deficit_constraint: int = -1

    def __post_init__(self):
        if np.any(self.residual < 0):
            raise ValueError("fixed part violates a resource constraint")
        if np.intersect1d(self.fixed.items, self.free).size:
            raise ValueError("an item is both fixed and free")
        if self.fixed.items.size + self.free.size != self.base.n:
            raise ValueError("fixed and free items do not cover the instance")


@dataclass(frozen=True)
class SolveResult:
    solution: Solution
    optimal: bool
    nodes: int


def _residual(inst: Instance, pa: PartialAssignment) -> np.ndarray:
    return inst.b - pa.usage(inst)


def _free_items(n: int, pa: PartialAssignment) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[pa.items] = False
    return np.flatnonzero(mask)


def subproblem(inst: Instance, pa: PartialAssignment, c: np.ndarray | None = None) -> Subproblem:
    """Subproblem that fixes exactly ``pa`` (no release step)."""
    if c is None:
        c = coarse_scores(inst)
    return Subproblem(inst, pa, _residual(inst, pa), _free_items(inst.n, pa), c)


def deficit_constraint(residual: np.ndarray, total_free: np.ndarray) -> int:
    """Constraint with the largest free-demand to residual-capacity ratio.

    Zero residual counts as infinitely tight when free items still consume
    the resource, and as slack otherwise.  Ties go to the lowest index.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(residual > 0, total_free / np.where(residual > 0, residual, 1.0),
                         np.where(total_free > 0, np.inf, 0.0))
    return int(np.argmax(ratio))


def reduce(
    inst: Instance,
    pa: PartialAssignment,
    t1: int,
    release_key: str = "profit",
    c: np.ndarray | None = None,
) -> Subproblem:
    """Release the ``t1`` top-ranked fixings of ``pa`` and build the subproblem.

    Fixings are ranked by ``p_i / b_l`` (``release_key="profit"``) or by
    ``p_i / r_il`` (``"profit-per-consumption"``), descending, ties by index,
    where ``l`` is the deficit constraint of the unreleased subproblem.
    """
    residual = _residual(inst, pa)
    if np.any(residual < 0):
        raise ValueError("partial assignment violates a resource constraint")
    free = _free_items(inst.n, pa)
    l = deficit_constraint(residual, inst.r[:, free].sum(axis=1))
    if release_key == "profit":
        key = inst.p[pa.items] / inst.b[l]
    elif release_key == "profit-per-consumption":
        r_l = inst.r[l, pa.items]
        with np.errstate(divide="ignore"):
            key = np.where(r_l > 0, inst.p[pa.items] / np.where(r_l > 0, r_l, 1.0), np.inf)
    else:
        raise ValueError(f"unknown release key {release_key!r}")
    order = np.lexsort((pa.items, -key))
    keep = np.sort(order[min(t1, len(pa)):])
    kept = PartialAssignment(pa.items[keep], pa.values[keep])
    sub = subproblem(inst, kept, c)
    return Subproblem(sub.base, sub.fixed, sub.residual, sub.free, sub.c, l)


def _branch_order(sub: Subproblem) -> np.ndarray:
    """Free items by descending coarse score, ties by index."""
    return sub.free[np.lexsort((sub.free, -sub.c[sub.free]))]


def _assemble(sub: Subproblem, order: np.ndarray, free_bits: np.ndarray) -> np.ndarray:
    bits = np.zeros(sub.base.n, dtype=np.uint8)
    bits[sub.fixed.items] = sub.fixed.values
    bits[order] = free_bits
    return bits


def greedy_complete(sub: Subproblem) -> Solution:
    """Add free items in descending coarse-score order while they fit."""
    order = _branch_order(sub)
    res = sub.residual.copy()
    take = np.zeros(order.size, dtype=np.uint8)
    r = sub.base.r
    for k, i in enumerate(order):
        if np.all(r[:, i] <= res):
            res -= r[:, i]
            take[k] = 1
    return evaluate(sub.base, _assemble(sub, order, take))


# --- branch and bound kernel ---------------------------------------------------


@nb.njit(cache=True)
def _ratio_orders(p, r):
    m, k = r.shape
    orders = np.empty((m, k), np.int64)
    key = np.empty(k)
    for j in range(m):
        for i in range(k):
            key[i] = p[i] / r[j, i] if r[j, i] > 0 else np.inf
        orders[j] = np.argsort(-key, kind="mergesort")
    return orders


@nb.njit(cache=True)
def _bound(d, cur, res, p, r, orders, suffix, cutoff):
    """Upper bound for a node whose first ``d`` items are decided.

    Returns early once the bound drops to ``cutoff`` or below.
    """
    ub = suffix[d]
    if cur + ub <= cutoff:
        return cur + ub
    m = res.size
    # the aggregate row (last, when present) is usually the tightest: try it first
    for jj in range(m):
        j = m - 1 - jj
        cap = max(res[j], 0.0)
        val = 0.0
        prev = -1
        crit = -1
        with_crit = -np.inf
        for idx in orders[j]:
            if idx < d:
                continue
            if crit >= 0:
                # first item after the critical one: fill the gap at its ratio
                val = max(val + cap * p[idx] / r[j, idx], with_crit)
                crit = -2
                break
            w = r[j, idx]
            if w <= cap:
                cap -= w
                val += p[idx]
                prev = idx
            else:
                crit = idx
                # critical item forced in, making room at the last taken item's ratio
                if prev >= 0 and r[j, prev] > 0:
                    with_crit = val + p[idx] - (w - cap) * p[prev] / r[j, prev]
            if val >= ub:
                break
        if crit >= 0:
            val = max(val, with_crit)
        if val < ub:
            ub = val
            if cur + ub <= cutoff:
                break
    return cur + ub


@nb.njit(cache=True)
def _now():
    with nb.objmode(t="f8"):
        t = time.perf_counter()
    return t


@nb.njit(cache=True)
def _bnb(p, r, res0, base, integral, best_val, best_x, node_limit, deadline, m):
    """Depth-first search; returns (best value, exhausted flag, nodes).

    Rows of ``r`` past ``m`` are surrogate constraints: used for bounding,
    never for feasibility.
    """
    k = r.shape[1]
    orders = _ratio_orders(p, r)
    suffix = np.zeros(k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] + p[i]
    res = res0.copy()
    x = np.zeros(k, np.uint8)
    stage = np.zeros(k + 1, np.int8)
    d = 0
    cur = base
    nodes = 0
    eps = 1e-9
    while True:
        if d == k:
            if cur > best_val + eps:
                best_val = cur
                best_x[:] = x
            d -= 1
            if d < 0:
                break
            continue
        st = stage[d]
        if st == 0:
            nodes += 1
            if nodes > node_limit:
                return best_val, False, nodes - 1
            if deadline > 0 and (nodes & 1023) == 0 and _now() > deadline:
                return best_val, False, nodes
            bnd = _bound(d, cur, res, p, r, orders, suffix, best_val + eps)
            if integral:
                bnd = math.floor(bnd + 1e-6)
            if bnd <= best_val + eps:
                d -= 1
                if d < 0:
                    break
                continue
            fits = True
            for j in range(m):
                if r[j, d] > res[j]:
                    fits = False
                    break
            if fits:
                stage[d] = 1
                x[d] = 1
                cur += p[d]
                for j in range(res.size):
                    res[j] -= r[j, d]
            else:
                stage[d] = 2
            d += 1
            stage[d] = 0
        elif st == 1:
            x[d] = 0
            cur -= p[d]
            for j in range(res.size):
                res[j] += r[j, d]
            stage[d] = 2
            d += 1
            stage[d] = 0
        else:
            d -= 1
            if d < 0:
                break
    return best_val, True, nodes


def _arrays(sub: Subproblem):
    order = _branch_order(sub)
    p = np.ascontiguousarray(sub.base.p[order])
    r = np.ascontiguousarray(sub.base.r[:, order])
    base = float(sub.base.p[sub.fixed.selected].sum())
    return order, p, r, base


def surrogate_row(p: np.ndarray, r: np.ndarray, res: np.ndarray) -> tuple[np.ndarray, float] | None:
    """Constraints aggregated with the LP-relaxation duals.

    Any non-negative combination of the constraints is implied by them, so a
    Dantzig bound on the aggregate is valid everywhere in the tree; with the
    optimal duals it matches the LP bound at the root.
    """
    if p.size == 0 or r.shape[0] < 2:
        return None
    lp = linprog(-p, A_ub=r, b_ub=res, bounds=(0, 1), method="highs")
    if lp.status != 0:
        return None
    u = np.maximum(-lp.ineqlin.marginals, 0.0)
    if not np.any(u > 0):
        return None
    u = u / u.max()
    return u @ r, float(u @ res)


# below this many free items the LP costs more than the pruning it buys
SURROGATE_MIN_FREE = 20


def _with_surrogate(p, r, res):
    sur = surrogate_row(p, r, res) if p.size >= SURROGATE_MIN_FREE else None
    if sur is None:
        return r, res
    row, cap = sur
    return np.ascontiguousarray(np.vstack([r, row])), np.append(res, cap)


def _is_integral(inst: Instance) -> bool:
    return bool(np.all(inst.p == np.round(inst.p)))


def solve(sub: Subproblem, budget: Budget) -> SolveResult:
    """Best completion of ``sub`` found within ``budget``.

    Starts from the greedy completion, so a solution is always returned;
    ``optimal`` is set when the search tree was exhausted.  Wall-clock budgets
    are checked every 1024 nodes.
    """
    greedy = greedy_complete(sub)
    order, p, r, base = _arrays(sub)
    best_x = np.ascontiguousarray(greedy.bits[order])
    node_limit = np.iinfo(np.int64).max
    deadline = 0.0
    if budget.mode == "nodes":
        if math.isfinite(budget.amount):
            node_limit = int(budget.amount)
    else:
        deadline = time.perf_counter() + budget.amount
    m = r.shape[0]
    r_ext, res_ext = _with_surrogate(p, r, sub.residual.astype(np.float64))
    val, exhausted, nodes = _bnb(p, r_ext, res_ext, base, _is_integral(sub.base),
                                 greedy.objective, best_x, node_limit, deadline, m)
    if val <= greedy.objective:
        return SolveResult(greedy, exhausted, nodes)
    return SolveResult(evaluate(sub.base, _assemble(sub, order, best_x)), exhausted, nodes)


def node_bound(sub: Subproblem, decided: np.ndarray) -> float:
    """Bound of the search node whose first ``len(decided)`` free items are set.

    ``decided`` holds 0/1 values for the leading items of the branching
    order.  Returns ``-inf`` when those values already break a constraint.
    """
    order, p, r, base = _arrays(sub)
    d = len(decided)
    x = np.asarray(decided, dtype=np.float64)
    res = sub.residual - r[:, :d] @ x
    if np.any(res < 0):
        return -math.inf
    suffix = np.concatenate([np.cumsum(p[::-1])[::-1], [0.0]])
    r_ext, res_ext = _with_surrogate(p, r, sub.residual.astype(np.float64))
    res_ext = res_ext - r_ext[:, :d] @ x
    return float(_bound(d, base + float(p[:d] @ x), res_ext, p, r_ext, _ratio_orders(p, r_ext), suffix, -math.inf))


def branch_order(sub: Subproblem) -> np.ndarray:
    """Free items in the order the search branches on them."""
    return _branch_order(sub)
