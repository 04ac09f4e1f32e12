import pytest
from hypothesis import given, strategies as st

from dendrolog import notation as nt
from dendrolog import oracle as orc
from dendrolog.order import fin

UNIVERSE = range(64)


@pytest.fixture(scope="module")
def J():
    return nt.Hierarchy("J")


def test_first_level_is_zero(J):
    assert J.level(0)["in"] == []
    assert J.level(1) == {"in": [0], "out": list(range(1, 64)), "unknown": []}


def test_sup_of_the_constant_zero_code(J):
    s = nt.sup(0, nt.const_code(0))
    assert J.member(s, 1) == nt.OUT
    assert J.member(s, 2) == nt.IN
    assert J.norm(s, 4) == ("known", 1)


def test_richter_step_on_empty_and_first_star(J):
    step = nt.richter_step(nt.empty_pairs(), nt.Bounds(universe=16))
    assert step == {n: (nt.IN if n == 0 else nt.OUT) for n in range(16)}
    star = nt.pairs_from_dict({(0, 0): nt.IN})
    b = nt.Bounds()
    assert nt.richter_member(star, nt.sup(0, nt.const_code(0)), b) == nt.IN
    assert nt.richter_member(star, nt.vee(0, 999), b) == nt.IN


def test_theta_le_of_empty_is_the_first_star():
    P = nt.theta_le_step(nt.empty_pairs(), "J")
    assert P.has(0, 0) == nt.IN
    assert all(P.has(u, v) == nt.OUT for u in range(8) for v in range(8) if (u, v) != (0, 0))


@pytest.mark.parametrize("op", ["R", "J"])
def test_pair_iterate_equals_star_of_iterate(op):
    h = nt.Hierarchy(op)
    P = nt.pair_hierarchy(op, 4)
    for L in range(5):
        star = h.mstar(L)
        for u in UNIVERSE:
            for v in UNIVERSE:
                assert P[L].has(u, v) == star.has(u, v)


def test_r_only_agrees_with_j_at_low_levels(J):
    R = nt.Hierarchy("R")
    for L in range(3):
        assert R.level(L) == J.level(L)


def test_jx_agrees_with_j_until_x_enters(J):
    for x in UNIVERSE:
        Jx = nt.Hierarchy("Jx", x=x)
        for L in range(5):
            if L == 0 or J.member(x, L - 1) != nt.IN:
                assert Jx.level(L) == J.level(L)


def test_jx_trivializes_after_saturation_at_zero():
    Jx = nt.Hierarchy("Jx", x=0)
    assert Jx.level(3)["in"] == list(UNIVERSE)


def test_levels_are_monotone(J):
    for L in range(4):
        assert set(J.level(L)["in"]) <= set(J.level(L + 1)["in"])


@pytest.mark.parametrize("budget", [20, 60, 200, 800])
def test_tri_state_soundness_across_budgets(budget, J):
    h = nt.Hierarchy("J", nt.Bounds(budget=budget))
    for L in range(4):
        for n in UNIVERSE:
            a, b = h.member(n, L), J.member(n, L)
            assert {a, b} != {nt.IN, nt.OUT}


def test_norms_stable_when_bounds_grow(J):
    big = nt.Hierarchy("J", nt.Bounds(budget=800, qbound=24))
    for n in J.level(4)["in"]:
        assert big.norm(n, 4) == J.norm(n, 4)


def test_mstar_test_examples(J):
    assert nt.mstar_test(0, 0, 2, J) == nt.IN
    assert nt.mstar_test(0, 1, 2, J) == nt.OUT


def test_tj_reduction_of_a_halting_code(J):
    x = orc.index(orc.Const(0, 1))
    a = nt.tj_reduction(0, x)
    assert nt.view(a)[0] == "sup"
    for L in range(4):
        assert J.member(a, L) == nt.OUT


def test_tj_code_case_split():
    halts = orc.index(orc.Const(0, 1))
    e = nt.tj_code(5, halts)
    assert orc.evaluate(e, [0]) == orc.Value(5)      # no computation within 0 steps
    assert orc.evaluate(e, [50]) == orc.Value(1)


def test_h_index_restricts_below_n():
    # [e](z) = 0 exactly when z <= 10
    e = orc.index(orc.Compose(orc.MONUS, [orc.Proj(0, 1), orc.Const(10, 1)]))
    for n in range(4):
        h = orc.decode(nt.h_index(e, n))
        for u in range(4):
            for v in range(4):
                want = 0 if max(orc.pair(u, v), orc.pair(u, n), orc.pair(v, n)) <= 10 else 1
                assert orc.evaluate(h, [orc.pair(u, v)], budget=50_000) == orc.Value(want)


def test_hyperjump_reduction_code_unfolds_once():
    x = 0
    f = nt.hyperjump_reduction_code(x)
    e = orc.index(orc.Const(0, 1))
    r = orc.evaluate(f, [e], budget=200_000)
    assert isinstance(r, orc.Value)
    tag, a, b = nt.view(r.value)
    assert (tag, a) == ("sup", x)
    # each branch unfolds the same way, one restriction further down
    inner = orc.evaluate(b, [3], budget=200_000)
    assert isinstance(inner, orc.Value)
    assert nt.view(inner.value)[:2] == ("sup", x)


def _capped(X):
    return X | {len(X)} if len(X) < 3 else X


def test_exact_chain_for_a_closing_operator():
    chain = nt.canonical_chain(fin(5), _capped)
    assert chain[4] == chain[3] == {0, 1, 2}
    assert nt.check_exact_chain(fin(5), chain, _capped)["ok"]


def test_exact_chain_for_a_constant_operator():
    op = lambda X: frozenset({7})
    assert nt.check_exact_chain(fin(3), nt.canonical_chain(fin(3), op), op)["ok"]


def test_exact_chain_violations():
    chain = nt.canonical_chain(fin(5), _capped)
    skipped = dict(chain)
    skipped[2] = skipped[1]
    laws = {v["law"] for v in nt.check_exact_chain(fin(5), skipped, _capped)["violations"]}
    assert {"recursion", "strict_growth"} <= laws
    grow = lambda X: X | {len(X)}
    rep = nt.check_exact_chain(fin(4), nt.canonical_chain(fin(4), grow), grow)
    assert [v["law"] for v in rep["violations"]] == ["stabilization"]
    assert not nt.check_exact_chain(fin(3), {0: set()}, grow)["ok"]


@given(st.integers(0, 10**9))
def test_view_round_trip(n):
    v = nt.view(n)
    assert nt.from_view(v) == n


@given(st.integers(0, 500), st.integers(0, 500))
def test_constructors_are_distinct(a, b):
    codes = {nt.sup(a, b), nt.vee(a, b), nt.adm(a)}
    assert len(codes) == 3 and 0 not in codes
