import random

import pytest
from hypothesis import given, strategies as st

from dendrolog import oracle as o
from dendrolog.oracle import (Compose, Const, Exhausted, PartialOracle, Proj, Query, Succ,
                              Undecided, Value, evaluate)


def test_constant_and_query_examples():
    assert evaluate(Const(7), []) == Value(7)
    q = Compose(Query(Proj(0, 1)), [Proj(0, 1)])
    assert evaluate(q, [5], PartialOracle({5: 1})) == Value(1)
    assert evaluate(q, [5]) == Undecided(frozenset({5}))


def test_budget_exhaustion():
    slow = o.PrimRec(Const(0, 0), Compose(Succ(), [Proj(1, 2)]))
    assert evaluate(slow, [1000], budget=50) == Exhausted()
    assert evaluate(slow, [1000], budget=100_000) == Value(1000)


@pytest.mark.parametrize("x,y", [(0, 0), (3, 5), (5, 3), (7, 7)])
def test_arithmetic_library(x, y):
    assert evaluate(o.ADD, [x, y]) == Value(x + y)
    assert evaluate(o.MUL, [x, y]) == Value(x * y)
    assert evaluate(o.MONUS, [x, y]) == Value(max(x - y, 0))
    assert evaluate(o.LEQ, [x, y]) == Value(int(x <= y))


def test_order_codes():
    f3 = o.fin_order_code(3)
    for x in range(5):
        for y in range(5):
            assert evaluate(f3, [x, y]) == Value(int(x < 3 and y < 3 and x <= y))
            assert evaluate(o.omega_star_code(), [x, y]) == Value(int(y <= x))


def test_smn_example():
    e = o.smn(o.ADD, [4])
    assert evaluate(e, [9]) == Value(13)


def test_fixed_point_example():
    # k(e) = index of the constant code answering e; its fixed point returns its own index
    k = o.SmnIdx(Const(o.index(Proj(0, 2)), 1), Proj(0, 1))
    fp = o.fixed_point(k)
    assert evaluate(fp, [3]) == Value(o.index(fp))


def test_turing_jump_tri_state():
    halts = o.index(Const(2, 1))
    assert o.tj_member(halts) == o.YES
    asks = o.index(Query(Proj(0, 1)))
    assert o.tj_member(asks) == o.UNDECIDED
    assert o.tj_member(asks, PartialOracle({asks: 0})) == o.YES
    assert o.tj_member(12345) == o.NO_WITHIN_BUDGET


def test_t_predicate_accepts_only_true_traces():
    c = o.ADD
    e = o.smn(c, [2])
    r, t = o.run_with_trace(e, 3)
    assert r == Value(5)
    assert o.t_predicate(e, 3, t)
    assert not o.t_predicate(e, 4, t)
    assert not o.t_predicate(e, 3, t + 1)


@given(st.integers(0, 10**6), st.integers(0, 4))
def test_index_decode_round_trip(seed, depth):
    c = o.random_code(random.Random(seed), 1, depth)
    assert o.decode(o.index(c)) == c
    assert o.from_json(o.to_json(c)) == c


@given(st.integers(0, 10**6), st.integers(0, 20))
def test_budget_monotone(seed, x):
    c = o.random_code(random.Random(seed), 1, 3, oracle=False)
    small = evaluate(c, [x], budget=40)
    if isinstance(small, Value):
        assert evaluate(c, [x], budget=4000) == small


@given(st.dictionaries(st.integers(0, 30), st.integers(0, 1), max_size=8),
       st.dictionaries(st.integers(31, 60), st.integers(0, 1), max_size=8),
       st.integers(0, 10**6), st.integers(0, 30))
def test_oracle_extension_preserves_values(small, extra, seed, x):
    c = o.random_code(random.Random(seed), 1, 3)
    a = PartialOracle(small)
    r = evaluate(c, [x], a)
    if isinstance(r, Value):
        assert evaluate(c, [x], a.extend(extra)) == r


def test_sampled_kernel_self_check():
    rep = o.check_kernel(samples=30, seed=1)
    assert rep["failures"] == []
    assert rep["budget_monotone"]["violations"] == 0
