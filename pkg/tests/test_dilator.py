import random

import pytest
from hypothesis import given, strategies as st

import brute
from dendrolog import dilator as dl
from dendrolog.dendroid import PatternDendroid, lin_star, random_pattern_dendroid
from dendrolog.order import Finite, IncreasingMap, OmegaStar, fin, increasing_maps


def single_param():
    return PatternDendroid({(), (("p", 0),)}, [])


def swapped_identity():
    """F(X) = X, but F(f) swaps the images of the two least elements."""
    def m(f, x):
        xs = f.domain.window(f.domain.size)
        if len(xs) >= 2 and x in xs[:2]:
            x = xs[1] if x == xs[0] else xs[0]
        return f(x)
    return dl.Predilator("swapped", lambda X: X, m, lambda X, x: {x})


def test_identity_and_constant_pass():
    assert dl.check_predilator(dl.identity()).ok
    assert dl.check_predilator(dl.constant(fin(1))).ok


def test_broken_map_is_caught():
    rep = dl.check_predilator(swapped_identity())
    assert rep.failed("map_increasing") or rep.failed("monotonicity") or rep.failed("functoriality")


def test_trace_examples():
    assert dl.trace(dl.constant(fin(1)), 3) == [(0, 0)]
    assert dl.trace(dl.identity(), 2) == [(1, 0)]
    assert dl.trace(lin_star(single_param()), 2) == [(0, ()), (1, (("p", 0),))]


def _denotation(F, entries, n):
    X = fin(n)
    out = []
    for k, s in entries:
        for f in increasing_maps(fin(k), X):
            out.append(F.map(f)(s))
    return out


@pytest.mark.parametrize("seed", range(6))
def test_trace_reconstructs_lin_star(seed):
    D = random_pattern_dendroid(random.Random(seed), max_depth=3)
    F = lin_star(D)
    entries = dl.trace(F, 4)
    for n in range(5):
        den = _denotation(F, entries, n)
        assert len(den) == len(set(den))
        assert sorted(den, key=repr) == sorted(dl.finite_elements(F, fin(n)), key=repr)
        # the order on F(n) is the one induced by the hull patterns
        patterns = D.nodes
        want = brute.kb_sorted(brute.hull_at(patterns, n, D.terms, 4),
                               lambda a, b: (a[0] != "t", a[1]) < (b[0] != "t", b[1]))
        assert F.apply(fin(n)).window(10_000) == want


def test_sums():
    two = dl.sum(dl.constant(fin(1)), dl.constant(fin(1)))
    for n in range(4):
        assert two.apply(fin(n)).size == 2 or len(dl.finite_elements(two, fin(n))) == 2
    ident = dl.sum(dl.identity())
    assert dl.finite_elements(ident, fin(3)) == [(0, 0), (0, 1), (0, 2)]
    mixed = dl.sum(dl.constant(fin(1)), dl.identity())
    assert dl.finite_elements(mixed, Finite([0, 1])) == [(0, 0), (1, 0), (1, 1)]
    assert dl.check_predilator(mixed).ok
    assert dl.check_predilator(dl.sum(lin_star(single_param()), dl.identity())).ok


def test_climax_examples():
    assert dl.climax_bounded(dl.identity(), [fin(3)], 5) is None
    r = dl.climax_bounded(dl.constant(OmegaStar()), [fin(0)], 4)
    assert r is not None and r[0] == 0 and r[1].validate()


@given(st.integers(0, 5))
def test_climax_monotone_in_depth(d):
    F = lin_star(PatternDendroid({(), (("t", 0),), (("t", 0), ("p", 0)),
                                  (("t", 0), ("p", 0), ("p", 1))}, [0]))
    probes = [fin(n) for n in range(4)]
    r = dl.climax_bounded(F, probes, d)
    if r is not None:
        for e in range(d):
            q = dl.climax_bounded(F, probes, e)
            assert q is not None and q[0] <= r[0]


@pytest.mark.parametrize("seed", range(8))
def test_lin_star_of_random_dendroids_is_a_predilator(seed):
    D = random_pattern_dendroid(random.Random(seed))
    assert dl.check_predilator(lin_star(D), sample_budget=60, seed=seed).ok


def test_order_broken_mutant_fails_monotonicity():
    D = PatternDendroid({(), (("p", 0),), (("p", 0), ("p", 1))}, [])
    rep = dl.check_predilator(lin_star(D, order_broken=True))
    assert rep.failed("monotonicity")
