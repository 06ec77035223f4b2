import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fepss.core import evaluate, flip_delta, hamming

from conftest import brute_force, random_instance, tiny


def test_evaluate_tiny_optimum():
    s = evaluate(tiny(), [0, 1, 0, 1])
    assert s.objective == 23
    assert s.slack.tolist() == [0, 1]
    assert s.feasible
    assert brute_force(tiny()) == 23


def test_evaluate_empty(rng):
    inst = random_instance(rng, 7, 3)
    s = evaluate(inst, np.zeros(7))
    assert s.objective == 0
    np.testing.assert_array_equal(s.slack, inst.b)
    assert s.feasible


def test_evaluate_all_tiny_infeasible():
    s = evaluate(tiny(), [1, 1, 1, 1])
    assert s.slack.tolist() == [-8, -1]
    assert not s.feasible


def test_evaluate_length_mismatch():
    with pytest.raises(ValueError):
        evaluate(tiny(), [0, 1, 0])


def test_flip_delta_single():
    s = evaluate(tiny(), [0, 0, 0, 0])
    d_obj, d_slack = flip_delta(tiny(), s, 1)
    assert d_obj == 10
    assert d_slack.tolist() == [-4, -1]


def test_flip_twice_cancels():
    inst = tiny()
    s = evaluate(inst, [1, 0, 1, 0])
    before = s.copy()
    s.flip(inst, 2)
    s.flip(inst, 2)
    assert s == before
    assert s.objective == before.objective
    np.testing.assert_array_equal(s.slack, before.slack)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_incremental_matches_scratch(seed):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(1, 25)), int(rng.integers(1, 6))
    inst = random_instance(rng, n, m)
    s = evaluate(inst, rng.integers(0, 2, n))
    for step in range(300):
        i = int(rng.integers(n))
        s.flip(inst, i)
        if step % 50 == 0 or step == 299:
            ref = evaluate(inst, s.bits)
            assert s.objective == ref.objective
            np.testing.assert_array_equal(s.slack, ref.slack)


def test_swap_composition(rng):
    inst = random_instance(rng, 12, 3)
    s = evaluate(inst, rng.integers(0, 2, 12))
    for _ in range(1000):
        ones, zeros = np.flatnonzero(s.bits), np.flatnonzero(s.bits == 0)
        if ones.size and zeros.size and rng.random() < 0.5:
            s.swap(inst, int(rng.choice(ones)), int(rng.choice(zeros)))
        else:
            s.flip(inst, int(rng.integers(12)))
    ref = evaluate(inst, s.bits)
    assert s.objective == ref.objective
    np.testing.assert_array_equal(s.slack, ref.slack)


def test_hamming_examples():
    inst = tiny()
    a = evaluate(inst, [0, 1, 0, 1])
    assert hamming(a, a) == 0
    assert hamming(a, evaluate(inst, [1, 0, 1, 0])) == 4
    assert hamming(a, evaluate(inst, [0, 1, 1, 1])) == 1
    with pytest.raises(ValueError):
        hamming([0, 1], [0, 1, 1])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.booleans(), st.booleans()), min_size=1, max_size=64))
def test_hamming_metric(cols):
    x, y, z = (np.array(c, dtype=np.uint8) for c in zip(*cols))
    assert hamming(x, y) == hamming(y, x)
    assert (hamming(x, y) == 0) == np.array_equal(x, y)
    assert hamming(x, z) <= hamming(x, y) + hamming(y, z)
