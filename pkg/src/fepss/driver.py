"""The main search loop and its two solution finders."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .core import Solution, evaluate
from .instance import Instance, Renumbering, coarse_scores, renumber
from .pagen import (
    PartialAssignment,
    delta_scores,
    gen_pa_from_cbs,
    gen_pa_from_ss,
)
from .params import Params
from .pool import SolutionSet, init_solution_set, update
from .subsolver import Budget, greedy_complete, reduce, solve, subproblem

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    best: Solution
    best_objective: float
    time_to_best: float
    iterations: int
    history: list[tuple[float, float]] = field(default_factory=list)
    pool_dump: str | None = None


class SearchState:
    """Everything one run owns: renumbered instance, pool, incumbent and RNG."""

    def __init__(self, inst: Instance, params: Params, rng: np.random.Generator | None = None):
        self.params = params
        self.inst = inst
        self.c = coarse_scores(inst)
        self.rng = rng if rng is not None else np.random.default_rng(params.seed)
        self.pool: SolutionSet | None = None
        self.s_star: Solution | None = None
        self.explores = 0
        self.last_pa: PartialAssignment | None = None
        # monotonic time at which the whole run must stop (wall-clock mode only)
        self.deadline: float | None = None

    def init_pool(self) -> None:
        self.pool = init_solution_set(self.inst, self.rng, self.params)
        self.s_star = self.pool.best

    def budget(self) -> Budget:
        if self.params.deterministic:
            return Budget.nodes(self.params.T)
        t = self.params.T
        if self.deadline is not None:
            # never let one explore run past the end of the run
            t = min(t, max(self.deadline - time.monotonic(), 1e-3))
        return Budget.seconds(t)

    def explore(self, pa: PartialAssignment) -> Solution:
        sub = reduce(self.inst, pa, self.params.t1, self.params.release_key, self.c)
        self.explores += 1
        self.last_pa = sub.fixed
        return solve(sub, self.budget()).solution


def find_solution_from_ss(state: SearchState) -> Solution:
    """Explore a pool-voted partial assignment and offer the result to the pool."""
    p = state.params
    delta = delta_scores(state.pool, state.inst.n, p.beta, state.rng)
    pa = gen_pa_from_ss(state.inst, state.pool, state.s_star, delta, p, state.rng)
    s = state.explore(pa)
    update(state.pool, s, state.c, p.alpha)
    return s


def find_solution_from_cbs(state: SearchState) -> Solution:
    """``cbs_ite_num`` explorations around the incumbent; the best result is returned."""
    p = state.params
    best = None
    for _ in range(p.cbs_ite_num):
        pa = gen_pa_from_cbs(state.inst, state.pool, state.s_star, p, state.rng)
        s = state.explore(pa)
        update(state.pool, s, state.c, p.alpha)
        if best is None or s.objective > best.objective:
            best = s
    return best


def _degenerate(inst: Instance) -> bool:
    return inst.n < 2 or bool(np.all(inst.r.sum(axis=1) <= inst.b))


def run(inst: Instance, params: Params, dump_pool: bool = False) -> RunResult:
    """Search ``inst`` until the budget runs out.

    ``params.max_time`` is seconds, or main-loop iterations in deterministic
    mode, where ``time_to_best`` and history times are iteration indices too.
    The returned solution is in the instance's original item numbering.
    """
    t0 = time.monotonic()
    params = params.resolve(inst.n)
    work, ren = renumber(inst)
    state = SearchState(work, params)
    if not params.deterministic:
        state.deadline = t0 + params.max_time

    def clock(it: int) -> float:
        return float(it) if params.deterministic else time.monotonic() - t0

    if _degenerate(work):
        s = greedy_complete(subproblem(work, PartialAssignment.empty()))
        return _result(inst, ren, s, clock(0), 0, [(clock(0), s.objective)], None)

    state.init_pool()
    history = [(clock(0), state.s_star.objective)]
    time_to_best = history[0][0]
    ite = 0
    best_updated = False

    def out_of_budget() -> bool:
        if params.deterministic:
            return ite >= params.max_time
        return time.monotonic() - t0 > params.max_time

    while not out_of_budget():
        if ite >= params.cbs_interval and (ite % params.cbs_interval == 0 or best_updated):
            best_updated = False
            s = find_solution_from_cbs(state)
        else:
            s = find_solution_from_ss(state)
        if s is not None and s.objective > state.s_star.objective:
            best_updated = True
            state.s_star = s
            time_to_best = clock(ite + 1)
            history.append((time_to_best, s.objective))
            log.debug("iteration %d: new best %g", ite, s.objective)
        ite += 1

    dump = state.pool.dump() if dump_pool else None
    return _result(inst, ren, state.s_star, time_to_best, ite, history, dump)


def _result(inst, ren: Renumbering, s: Solution, ttb, ite, history, dump) -> RunResult:
    best = evaluate(inst, ren.to_original(s.bits))
    return RunResult(best, best.objective, ttb, ite, history, dump)
