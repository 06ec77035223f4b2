import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fepss.core import evaluate
from fepss.instance import (
    Instance,
    ParseError,
    coarse_scores,
    parse_mkgk,
    parse_orlib,
    read_best_known,
    renumber,
    serialize_mkgk,
    serialize_orlib,
)

from conftest import random_instance, tiny


def test_parse_orlib_single():
    (inst,) = parse_orlib("1 2 1 0  6 10  2 4  5")
    assert (inst.n, inst.m) == (2, 1)
    assert inst.p.tolist() == [6, 10]
    assert inst.r.tolist() == [[2, 4]]
    assert inst.b.tolist() == [5]
    assert inst.best_known is None


def test_parse_orlib_two_problems_sequential():
    text = "2  2 1 0  6 10  2 4  5   3 2 17  1 2 3  1 1 1  2 2 2  4 5"
    a, b = parse_orlib(text, name="f")
    assert a.n == 2 and b.n == 3 and b.m == 2
    assert b.best_known == 17
    assert b.r.tolist() == [[1, 1, 1], [2, 2, 2]]
    assert b.b.tolist() == [4, 5]
    assert (a.name, b.name) == ("f#1", "f#2")


@pytest.mark.parametrize(
    "text, where",
    [
        ("1 2 1 0  6 10  2 4", "shortage"),
        ("1 2 1 0  6 x  2 4  5", "non-numeric"),
        ("1 0 1 0", "positive"),
        ("1 2 1 0  6 10  2 4  0", "capacity"),
    ],
)
def test_parse_orlib_errors(text, where):
    with pytest.raises(ParseError, match=where):
        parse_orlib(text)


def test_parse_orlib_error_names_offset():
    with pytest.raises(ParseError, match="offset 5"):
        parse_orlib("1 2 1 0  6 x  2 4  5")


def test_parse_mkgk_plain():
    inst = parse_mkgk("2 1  6 10  2 4  5")
    assert inst.p.tolist() == [6, 10] and inst.r.tolist() == [[2, 4]] and inst.b.tolist() == [5]
    assert inst.best_known is None


def test_parse_mkgk_best_known_layouts():
    after = parse_mkgk("2 1 16  6 10  2 4  5")
    before = parse_mkgk("16 2 1  6 10  2 4  5")
    for inst in (after, before):
        assert inst.best_known == 16
        assert inst.p.tolist() == [6, 10]
        assert inst.b.tolist() == [5]


def test_parse_mkgk_missing_capacity():
    with pytest.raises(ParseError, match="layouts"):
        parse_mkgk("2 2  6 10  2 4  1 1  5")


def test_coarse_scores_tiny():
    c = coarse_scores(tiny())
    # 6/(2/11+1/3), 10/(4/11+1/3), 12/(6/11+1/3), 13/(7/11+1/3)
    expected = [6 / (2 / 11 + 1 / 3), 10 / (4 / 11 + 1 / 3), 12 / (6 / 11 + 1 / 3), 13 / (7 / 11 + 1 / 3)]
    np.testing.assert_allclose(c, expected, rtol=1e-12)
    np.testing.assert_allclose(c, [11.647, 14.348, 13.655, 13.406], atol=5e-4)


def test_coarse_scores_single_item():
    assert coarse_scores(Instance([10], [[2]], [4]))[0] == 20


def test_coarse_scores_free_item():
    c = coarse_scores(Instance([3, 4], [[0, 1], [0, 2]], [5, 5]))
    assert c[0] == np.inf and np.isfinite(c[1])


def test_renumber_tiny_order():
    work, ren = renumber(tiny())
    # 1-based original order (1, 4, 3, 2)
    assert ren.backward.tolist() == [0, 3, 2, 1]
    assert work.p.tolist() == [6, 13, 12, 10]
    assert work.r.tolist() == [[2, 7, 6, 4], [1, 1, 1, 1]]


def test_renumber_sorted_is_identity():
    inst = Instance([1, 2, 3], [[1, 1, 1]], [2])
    _, ren = renumber(inst)
    assert ren.forward.tolist() == [0, 1, 2]


def test_renumber_ties_by_index():
    inst = Instance([5, 5, 5], [[1, 1, 1]], [2])
    _, ren = renumber(inst)
    assert ren.backward.tolist() == [0, 1, 2]


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 30), m=st.integers(1, 5))
def test_renumber_properties(seed, n, m):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n, m)
    work, ren = renumber(inst)
    assert np.array_equal(ren.backward[ren.forward], np.arange(n))
    assert np.array_equal(ren.forward[ren.backward], np.arange(n))
    assert np.all(np.diff(coarse_scores(work)) >= 0)
    bits = rng.integers(0, 2, n)
    a = evaluate(inst, bits)
    b = evaluate(work, ren.to_renumbered(bits))
    assert a.objective == b.objective
    np.testing.assert_array_equal(a.slack, b.slack)
    assert np.array_equal(ren.to_original(ren.to_renumbered(bits)), bits)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), k=st.integers(1, 3))
def test_orlib_round_trip(seed, k):
    rng = np.random.default_rng(seed)
    insts = [random_instance(rng, int(rng.integers(1, 8)), int(rng.integers(1, 4))) for _ in range(k)]
    text = serialize_orlib(insts)
    again = serialize_orlib(parse_orlib(text))
    assert again.split() == text.split()


def test_mkgk_round_trip():
    text = serialize_mkgk(tiny())
    assert serialize_mkgk(parse_mkgk(text)).split() == text.split()
    assert text.split() == "4 2 6 10 12 13 2 4 6 7 1 1 1 1 11 3".split()


def test_read_best_known(tmp_path):
    f = tmp_path / "bk.txt"
    f.write_text(
        "Problem Name   Best Feasible Solution Value\n"
        "5.100-00   24381\n"
        "tiny,23\n"
        "Problem Name   LP optimal\n"
        "5.100-00   2.458e+04\n"
    )
    assert read_best_known(f) == {"5.100-00": 24381.0, "tiny": 23.0}


def test_instance_invariants():
    with pytest.raises(ValueError):
        Instance([0, 1], [[1, 1]], [1])
    with pytest.raises(ValueError):
        Instance([1, 1], [[1, 1]], [0])
    with pytest.raises(ValueError):
        Instance([1, 1], [[1, 1, 1]], [1])
