import numpy as np
import pytest

from fepss import Instance, Params
from fepss.driver import SearchState, find_solution_from_cbs, find_solution_from_ss, run
from fepss.instance import renumber

from conftest import brute_force, random_instance, tiny


def _small(**kw):
    base = dict(ns=4, max_ite=20, table_bits=16, random_per_slot=20, deterministic=True, T=10_000)
    base.update(kw)
    return Params(**base)


def _state(inst, params):
    work, _ = renumber(inst)
    st = SearchState(work, params.resolve(work.n))
    st.init_pool()
    return st


def test_ss_finder_tiny():
    st = _state(tiny(), _small())
    s = find_solution_from_ss(st)
    assert s.objective == 23
    assert st.pool.best.objective == 23


def test_ss_finder_respects_fixed_part(rng):
    inst = random_instance(rng, 30, 4)
    st = _state(inst, _small(ns=6))
    before = st.pool.best.objective
    for _ in range(5):
        s = find_solution_from_ss(st)
        assert s.feasible
        pa = st.last_pa
        np.testing.assert_array_equal(s.bits[pa.items], pa.values)
        assert st.pool.best.objective >= before
        before = st.pool.best.objective


def test_cbs_single_round(rng):
    inst = random_instance(rng, 30, 4)
    st = _state(inst, _small(ns=6, cbs_ite_num=1))
    find_solution_from_cbs(st)
    assert st.explores == 1


def test_cbs_returns_round_max(rng, monkeypatch):
    inst = random_instance(rng, 30, 4)
    st = _state(inst, _small(ns=6, cbs_ite_num=5))
    seen = []
    orig = st.explore

    def spy(pa):
        assert set(pa.selected.tolist()) <= set(np.flatnonzero(st.s_star.bits).tolist())
        s = orig(pa)
        seen.append(s.objective)
        return s

    monkeypatch.setattr(st, "explore", spy)
    s = find_solution_from_cbs(st)
    assert len(seen) == 5 and s.objective == max(seen)


def test_first_interval_uses_ss_only(rng, monkeypatch):
    import fepss.driver as drv

    calls = []
    real_ss, real_cbs = drv.find_solution_from_ss, drv.find_solution_from_cbs
    monkeypatch.setattr(drv, "find_solution_from_ss", lambda st: calls.append("ss") or real_ss(st))
    monkeypatch.setattr(drv, "find_solution_from_cbs", lambda st: calls.append("cbs") or real_cbs(st))
    inst = random_instance(rng, 20, 3)
    run(inst, _small(max_time=12, cbs_interval=5, cbs_ite_num=1))
    assert calls[:5] == ["ss"] * 5
    assert calls[5] == "cbs" and calls[10] == "cbs"
    assert len(calls) == 12


def test_zero_budget_returns_pool_best(rng):
    inst = random_instance(rng, 20, 3)
    params = _small(max_time=0)
    res = run(inst, params)
    st = _state(inst, params)
    assert res.iterations == 0
    assert res.best_objective == st.pool.best.objective
    assert res.history == [(0.0, res.best_objective)]


def test_deterministic_runs_identical(rng):
    inst = random_instance(rng, 30, 4)
    a = run(inst, _small(max_time=15, seed=9))
    b = run(inst, _small(max_time=15, seed=9))
    assert a.best == b.best
    assert a.history == b.history and a.time_to_best == b.time_to_best


def test_history_strictly_increasing_and_feasible(rng):
    inst = random_instance(rng, 40, 5)
    res = run(inst, _small(max_time=30, cbs_interval=10, cbs_ite_num=2))
    objs = [f for _, f in res.history]
    assert all(a < b for a, b in zip(objs, objs[1:]))
    assert res.best.feasible and res.best_objective == objs[-1]
    assert res.time_to_best == res.history[-1][0]


def test_result_in_original_numbering(rng):
    inst = random_instance(rng, 12, 2)
    res = run(inst, _small(max_time=10))
    assert res.best_objective == inst.objective(res.best.bits)
    assert res.best_objective == brute_force(inst)


@pytest.mark.parametrize(
    "inst",
    [
        Instance([7], [[3]], [5]),
        Instance([4, 5, 6], [[1, 1, 1]], [10]),
    ],
)
def test_degenerate_guard(inst):
    res = run(inst, _small(max_time=5))
    assert res.iterations == 0
    assert res.best_objective == brute_force(inst)


def test_wall_clock_mode_stops(rng):
    import time

    inst = random_instance(rng, 60, 5)
    t0 = time.monotonic()
    # T far beyond the run budget: explores must be cut at the run's deadline
    res = run(inst, Params(max_time=0.5, T=30, ns=6, max_ite=10, table_bits=16, random_per_slot=10))
    assert time.monotonic() - t0 < 1.0
    assert res.best.feasible and res.iterations >= 1


def test_pool_dump(rng):
    inst = random_instance(rng, 10, 2)
    res = run(inst, _small(max_time=2), dump_pool=True)
    lines = res.pool_dump.splitlines()
    assert len(lines) == 4 and all(len(ln.split()[0]) == 10 for ln in lines)
