import itertools
import os
from pathlib import Path

import numpy as np
import pytest

from fepss import Instance

DATA_DIR = Path(os.environ.get("FEPSS_DATA", Path(__file__).resolve().parents[1] / "data"))


def tiny() -> Instance:
    return Instance([6, 10, 12, 13], [[2, 4, 6, 7], [1, 1, 1, 1]], [11, 3], name="tiny")


def random_instance(rng, n, m, lo=1, hi=100, tightness=0.5) -> Instance:
    r = rng.integers(lo, hi + 1, size=(m, n)).astype(float)
    p = rng.integers(lo, hi + 1, size=n).astype(float)
    b = np.maximum(1.0, np.floor(tightness * r.sum(axis=1)))
    return Instance(p, r, b)


def chu_beasley(n, m, tightness=0.25, seed=0) -> Instance:
    """Correlated instance of the kind found in the OR-Library (100, 5) set."""
    rng = np.random.default_rng(seed)
    r = rng.integers(0, 1001, size=(m, n)).astype(float)
    b = np.floor(tightness * r.sum(axis=1))
    p = np.floor(r.sum(axis=0) / m + 500 * rng.random(n)) + 1
    return Instance(p, r, b, name=f"cb{n}x{m}-{seed}")


def brute_force(inst: Instance, fixed: dict | None = None) -> float:
    """Exhaustive optimum, optionally with some items fixed."""
    fixed = fixed or {}
    free = [i for i in range(inst.n) if i not in fixed]
    best = -np.inf
    base = np.zeros(inst.n)
    for i, v in fixed.items():
        base[i] = v
    for combo in itertools.product((0, 1), repeat=len(free)):
        x = base.copy()
        x[free] = combo
        if np.all(inst.r @ x <= inst.b):
            best = max(best, float(inst.p @ x))
    return best


@pytest.fixture
def tiny_inst():
    return tiny()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# (criterion, passed, detail) lines collected by test_acceptance
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
