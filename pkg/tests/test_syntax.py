import pytest
from hypothesis import given, strategies as st

from dendrolog.betalogic import syntax as sx


def n_terms():
    base = st.sampled_from(["0", "x", "?0", "?3"])
    return st.recursive(base, lambda t: st.one_of(
        t.map(lambda a: f"(S {a})"),
        st.tuples(st.sampled_from("+*"), t, t).map(lambda p: f"({p[0]} {p[1]} {p[2]})")),
        max_leaves=4)


def formulas():
    atom = st.one_of(
        st.tuples(st.sampled_from(["=", "le"]), n_terms(), n_terms()).map(
            lambda p: f"({p[0]} {p[1]} {p[2]})"),
        st.tuples(st.integers(0, 5), n_terms()).map(lambda p: f"(I #{p[0]} {p[1]})"),
        n_terms().map(lambda t: f"(Ibar {t})"))
    return st.recursive(atom, lambda f: st.one_of(
        f.map(lambda a: f"(not {a})"),
        st.tuples(st.sampled_from(["and", "or", "imp"]), f, f).map(
            lambda p: f"({p[0]} {p[1]} {p[2]})"),
        st.tuples(st.sampled_from(["forall", "exists"]), f).map(
            lambda p: f"({p[0]} N y {p[1]})")), max_leaves=5)


@given(formulas())
def test_render_parse_round_trip(text):
    A = sx.parse_formula(text)
    assert sx.parse_formula(sx.render(A)) == A


@pytest.mark.parametrize("text,deg", [
    ("(= 0 0)", 0),
    ("(not (= 0 0))", 1),
    ("(and (= 0 0) (not (le 0 0)))", 2),
    ("(forall Ord x (leq-ord x x))", 1),
    ("(exists N y (forall N z (= y z)))", 2),
])
def test_degree(text, deg):
    assert sx.degree(sx.parse_formula(text)) == deg


def test_parse_examples():
    A = sx.parse_formula("(forall Ord x (leq-ord x x))")
    assert A == ("forall", "Ord", "v0", ("leqo", ("ovar", "v0"), ("ovar", "v0")))
    assert sx.parse_formula("(Ibar (S (S 0)))") == ("Ibar", sx.numeral(2))
    assert sx.numeral_value(sx.parse_formula("(Ibar (S (S 0)))")[1]) == 2


def test_alpha_equivalent_formulas_coincide():
    assert sx.parse_formula("(forall N a (= a a))") == sx.parse_formula("(forall N b (= b b))")


@pytest.mark.parametrize("text", ["(= 0", "(foo", "(and (= 0 0))", ")", "(= 0 0) junk)"])
def test_syntax_errors(text):
    with pytest.raises(sx.SyntaxErr):
        sx.parse_formula(text)


@pytest.mark.parametrize("text", [
    "(= #1 0)",
    "(leq-ord (S 0) #1)",
    "(forall Ord x (= x 0))",
    "(leq-ord z #0)",
])
def test_sort_errors(text):
    with pytest.raises(sx.SortErr):
        sx.parse_formula(text)


def test_params_and_relabel():
    A = sx.parse_formula("(and (I #2 0) (leq-ord #0 #2))")
    assert sx.params(A) == {0, 2}
    assert sx.params(sx.relabel(A, lambda x: x + 10)) == {10, 12}


def test_least_new_formula_commutes_with_relabeling():
    xs, ys = [0, 1], [5, 9]
    A = sx.least_new_formula("inductive", xs, [])
    B = sx.least_new_formula("inductive", ys, [])
    assert sx.relabel(A, {0: 5, 1: 9}.__getitem__) == B


def test_sequent_round_trip():
    seq = sx.parse_sequent("(seq ((= 0 0)) ((= (S 0) 0) (Ibar 0)))")
    assert sx.parse_sequent(sx.render_sequent(seq)) == seq
