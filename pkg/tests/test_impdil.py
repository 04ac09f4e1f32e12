import itertools

import pytest
from hypothesis import given, strategies as st

import brute
from dendrolog import genedendron as gd
from dendrolog import oracle as orc
from dendrolog.dilator import check_predilator
from dendrolog.errors import BudgetError, DomainError, ValidationError
from dendrolog.impdil import (ImpConfig, ImpNode, a_embedding, b_descent, check_clause_ii,
                              embed_b, imp_children, imp_compare, imp_member, imp_predilator,
                              restricted_code, search_branch)
from dendrolog.order import fin

EVENS_REAL = {i: brute.evens(i) for i in range(40)}


@pytest.fixture(scope="module")
def evens():
    return gd.shoenfield(gd.evens_kernel())


@pytest.fixture(scope="module")
def evens_branch(evens):
    return gd.longest_prefix(evens, fin(9), 20)


def cfg(a=3, b=None, **kw):
    return ImpConfig(orc.fin_order_code(a), b if b is not None else orc.fin_order_code(5), **kw)


def test_empty_node_is_a_member(evens):
    assert imp_member(ImpNode(), fin(4), evens, cfg())


def test_length_mismatch_is_not_a_member(evens, evens_branch):
    assert not imp_member(ImpNode(evens_branch[:2], (0, 1), (0,)), fin(9), evens, cfg())
    assert not imp_member(ImpNode(evens_branch[:2], (0,), ()), fin(9), evens, cfg())


def test_values_outside_x_are_rejected(evens, evens_branch):
    with pytest.raises(DomainError):
        imp_member(ImpNode(evens_branch[:2], (0,), (7,)), fin(3), evens, cfg())


def test_refuted_f_values(evens, evens_branch):
    c = cfg()
    sigma = evens_branch[:4]
    assert imp_member(ImpNode(sigma, (1, 0), (0, 1)), fin(9), evens, c)
    assert not imp_member(ImpNode(sigma, (0, 1), (0, 1)), fin(9), evens, c)   # increase in b
    assert not imp_member(ImpNode(sigma, (7, 0), (0, 1)), fin(9), evens, c)   # outside b's field


def test_refuted_g_values(evens, evens_branch):
    c = cfg()
    sigma = evens_branch[:4]
    assert imp_member(ImpNode(sigma, (1, 0), (2, 5)), fin(9), evens, c)
    assert not imp_member(ImpNode(sigma, (1, 0), (1, 0)), fin(9), evens, c)
    assert not imp_member(ImpNode(sigma, (1, 0), (0, 0)), fin(9), evens, c)
    # outside the field of a, g is unconstrained
    outside = ImpConfig(orc.fin_order_code(1), orc.fin_order_code(5))
    assert imp_member(ImpNode(sigma, (1, 0), (3, 0)), fin(9), evens, outside)


def _tree(evens, X, c, depth):
    out, stack = [], [ImpNode()]
    while stack:
        n = stack.pop()
        out.append(n)
        if len(n) < depth:
            stack.extend(imp_children(n, X, evens, c))
    return out


def test_members_are_closed_under_prefixes(evens):
    c = cfg(f_window=3, g_window=3)
    for n in _tree(evens, fin(4), c, 2):
        for m in range(len(n) + 1):
            assert imp_member(n.prefix(m), fin(4), evens, c)


def test_children_are_members_and_below_their_parent(evens):
    c = cfg(f_window=3, g_window=3)
    cmp = imp_compare(evens, fin(4))
    for n in _tree(evens, fin(4), c, 1):
        for k in imp_children(n, fin(4), evens, c):
            assert imp_member(k, fin(4), evens, c)
            assert cmp(k, n) < 0


def test_membership_persists_into_larger_x(evens):
    c = cfg(f_window=3, g_window=3)
    for n in _tree(evens, fin(3), c, 2):
        for m in (4, 6):
            assert imp_member(n, fin(m), evens, c)


def test_imp_predilator_laws(evens):
    F = imp_predilator(evens, cfg(f_window=3, g_window=4, step_breadth=8))
    rep = check_predilator(F, sample_budget=40, seed=0, max_size=3, elem_limit=40)
    assert rep.ok, rep.summary()


def test_empty_genedendron_gives_a_trivial_order():
    g = gd.shoenfield(gd.empty_kernel())
    c = cfg()
    r = search_branch(g, c, fin(3), 1)
    assert r.branch is None and r.exhausted
    assert imp_predilator(g, c).apply(fin(3)).window(5) == [()]


def test_clause_i_well_founded_b_has_no_descent(evens):
    r = search_branch(evens, cfg(), fin(9), 15, budget=50_000)
    assert r.branch is None and r.exhausted


def test_clause_ii_ill_founded_b_with_room_in_x(evens):
    c = cfg(b=orc.omega_star_code(), f_window=40)
    rep = check_clause_ii(evens, c, fin(9), 10, search_budget=2_000)
    assert rep["dx_branch"] and rep["a_embeds"] and rep["constructed"]
    assert rep["recovered_branch"] and rep["recovered_embedding"]
    assert rep["problems"] == []


def test_clause_ii_x_too_small(evens):
    c = ImpConfig(orc.fin_order_code(12), orc.omega_star_code(), f_window=40)
    rep = check_clause_ii(evens, c, fin(9), 10, search_budget=500)
    assert not rep["a_embeds"]
    assert rep["searched"]["found"] is False


def test_descent_and_embedding_helpers():
    c = cfg(b=orc.omega_star_code())
    assert b_descent(c, 4, {}) == (0, 1, 2, 3)
    assert b_descent(cfg(), 6, {}) is None or len(b_descent(cfg(), 6, {}, window=5) or ()) < 6
    assert a_embedding(cfg(), fin(9), 5, {}) == (0, 1, 2, 0, 0)
    assert a_embedding(cfg(a=5), fin(3), 5, {}) is None


def ranked_code():
    """x <=_b y iff R(x) <= R(y): any finite order, read off the real."""
    return orc.Compose(orc.LEQ, [orc.Query(orc.Proj(0, 2)), orc.Query(orc.Proj(1, 2))])


B_CODES = {
    "omega": (orc.omega_code(), {}),
    "omegastar": (orc.omega_star_code(), {}),
    "fin7": (orc.fin_order_code(7), {}),
    "evens-restricted": (restricted_code(orc.omega_code()), EVENS_REAL),
}


def _check_embedding(code, real, enum, branch, g):
    c = ImpConfig(orc.fin_order_code(3), code)
    cmp = imp_compare(gd.shoenfield(gd.evens_kernel()), fin(9))
    below = lambda x, y: x != y and orc.evaluate(code, [x, y], orc.PartialOracle(real)).value == 1
    out = embed_b(branch, g, enum, c, real)
    bad = 0
    for i, j in itertools.permutations(range(len(enum)), 2):
        if below(enum[i], enum[j]) and not cmp(out[i], out[j]) < 0:
            bad += 1
    return bad


@pytest.mark.parametrize("name", sorted(B_CODES))
def test_embed_b_is_order_preserving_on_fixed_codes(name, evens_branch):
    code, real = B_CODES[name]
    fld = [x for x in range(16) if orc.evaluate(code, [x, x], orc.PartialOracle(real)).value == 1]
    g = (0,) * 10
    for k in range(1, 7):
        for enum in itertools.combinations(fld[:8], k):
            assert _check_embedding(code, real, enum, evens_branch, g) == 0


@pytest.mark.parametrize("k", range(1, 7))
def test_embed_b_is_order_preserving_on_every_order(k, evens_branch):
    code = ranked_code()
    g = (0,) * 10
    for ranks in itertools.permutations(range(k)):
        real = dict(enumerate(ranks))
        assert _check_embedding(code, real, tuple(range(k)), evens_branch, g) == 0


def test_embed_b_first_element_takes_the_base_case(evens_branch):
    c = ImpConfig(orc.fin_order_code(3), orc.omega_star_code())
    out = embed_b(evens_branch, (4, 5), [3], c)
    assert out == [ImpNode(evens_branch[:2], (3,), (4,))]


def test_embed_b_on_a_decreasing_enumeration(evens_branch):
    # omega order, enumerated 0,1,2: each new element is the b-maximum
    c = ImpConfig(orc.fin_order_code(3), orc.omega_code())
    out = embed_b(evens_branch, (0, 1, 2), [0, 1, 2], c)
    assert [n.f for n in out] == [(0,), (1,), (2,)]
    assert all(len(n) == 1 for n in out)
    c = ImpConfig(orc.fin_order_code(3), orc.omega_star_code())
    out = embed_b(evens_branch, (0, 1, 2), [0, 1, 2], c)
    assert [n.f for n in out] == [(0,), (0, 1), (0, 1, 2)]


def test_embed_b_rejects_bad_input(evens_branch):
    c = ImpConfig(orc.fin_order_code(3), orc.omega_code())
    with pytest.raises(ValidationError):
        embed_b(evens_branch, (0, 1), [2, 1], c)
    with pytest.raises(BudgetError):
        embed_b(evens_branch[:2], (0,), [0, 1], c)
    with pytest.raises(BudgetError):
        embed_b(evens_branch, (0,) * 4, [0, 1], ImpConfig(orc.fin_order_code(3), ranked_code()))
