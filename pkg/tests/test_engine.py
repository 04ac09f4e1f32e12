import pytest

from corpus import ROOTS
from dendrolog.betalogic import engine as eng
from dendrolog.betalogic import syntax as sx
from dendrolog.betalogic.semantics import model_corpus, standard
from dendrolog.dendroid import P, T, check_laws, occ
from dendrolog.errors import DomainError, ValidationError
from dendrolog.order import Omega, fin, increasing_maps

INF_ATOM = eng.interleave([("t", 0)])[1]


def positions(pi, depth, breadth=2):
    out, stack = [], [()]
    while stack:
        p = stack.pop()
        out.append(p)
        if len(p) < depth:
            stack.extend(p + (a,) for a in pi.child_atoms(p, breadth))
    return out


def sig(node):
    return (node.sequent, node.rule, node.axiom, node.level, node.stage, node.phase,
            node.params, node.arity)


def test_lk_tautology_closes():
    pi = eng.generate(eng.LK, "|- (or (= 0 0) (not (= 0 0)))", fin(2))
    ex = eng.explore(pi, 6)
    assert ex.closed and not ex.open_leaves


def test_axiom_at_the_root():
    pi = eng.generate(eng.LK, "(= 0 0) |- (= 0 0)", fin(1))
    assert pi.root.arity == "none" and pi.root.axiom is not None


def test_open_branch_and_model_of_an_invalid_sequent():
    pi = eng.generate(eng.LK, "(= 0 0) |- (= (S 0) 0)", fin(2))
    br = eng.find_open_branch(pi, 40, guide=standard(fin(2), 8))
    assert br is not None and len(br) == 41
    m = eng.extract_model(br)
    assert sx.parse_formula("(= 0 0)") in m.true_atoms
    assert sx.parse_formula("(= (S 0) 0)") in m.false_atoms
    rep = eng.check_branch_lemmas(pi, br)
    assert not (rep["b"] or rep["c"] or rep["d"])


def test_branch_lemma_checker_flags_a_broken_branch():
    pi = eng.generate(eng.LK, "(= 0 0) |- (= (S 0) 0)", fin(2))
    br = eng.find_open_branch(pi, 6, guide=standard(fin(2), 8))
    rep = eng.check_branch_lemmas(pi, [br[0], br[3], br[1]])
    assert rep["b"] and not rep["ok"]


@pytest.mark.parametrize("sysn,tpl,root", [r for r in ROOTS if "#" not in r[2]][:5])
def test_mutilation_of_generated_preproofs(sysn, tpl, root):
    system = eng.system_from_name(sysn, tpl)
    for m in range(4):
        beta = eng.generate(system, root, fin(m))
        for n in range(m + 1):
            alpha = eng.generate(system, root, fin(n))
            for f in increasing_maps(fin(n), fin(m)):
                mut = eng.mutilate_preproof(beta, f)
                for p in positions(alpha, 5):
                    assert sig(mut.label(p)) == sig(alpha.label(p))


def test_instantiation_from_omega_matches_direct_generation():
    system = eng.inductive("(= x x)")
    root = "(= 0 0) |- (= (S 0) 0)"
    src = eng.generate(system, root, Omega())
    inst = eng.instantiate_preproof(src, fin(3))
    direct = eng.generate(system, root, fin(3))
    for p in positions(direct, 5):
        assert sig(inst.label(p)) == sig(direct.label(p))


@pytest.mark.parametrize("sysn,tpl,root", ROOTS)
def test_parameter_restriction(sysn, tpl, root):
    pi = eng.generate(eng.system_from_name(sysn, tpl), root, fin(3))
    base = pi.root.occ()
    for p in positions(pi, 7):
        assert pi.label(p).occ() <= base | occ(p)


def test_den_two_premise_example():
    pi = eng.generate(eng.LK, "(= 0 0) |- (and (= 0 0) (= 0 0))", Omega())
    D = eng.den(pi)
    top = INF_ATOM
    assert D.member_omega((T(0), top))
    assert D.member_omega((T(1), top))
    assert not D.member_omega((T(2), top))
    assert not D.member_omega((T(0),))
    assert D.in_hull(Omega(), (T(0),))


def test_den_carries_parameters_of_ordinal_rules():
    pi = eng.generate(eng.LK, "|- (forall Ord z (leq-ord z z))", Omega())
    D = eng.den(pi)
    assert D.in_hull(fin(3), (P(2), INF_ATOM))
    assert check_laws(D, n_max=2, depth=4, seq_cap=60).ok


def test_root_validation():
    with pytest.raises(ValidationError):
        eng.generate(eng.LK, "|- (= x 0)", fin(1))
    with pytest.raises(DomainError):
        eng.generate(eng.LK, "|- (leq-ord #5 #5)", fin(2))
    with pytest.raises(DomainError):
        eng.system_from_name("nope")


@pytest.mark.parametrize("sysn,tpl,root", ROOTS)
def test_closed_expansions_are_sound(sysn, tpl, root):
    system = eng.system_from_name(sysn, tpl)
    alpha = fin(3)
    pi = eng.generate(system, root, alpha)
    ex = eng.explore(pi, 6, breadth=3)
    if ex.closed:
        for st in model_corpus(alpha, 24, template=system.template, eq_is_equality=True):
            assert st.satisfies(pi.root.sequent)


@pytest.mark.parametrize("sysn,tpl,root", ROOTS)
def test_extract_model_never_conflicts_on_generated_branches(sysn, tpl, root):
    system = eng.system_from_name(sysn, tpl)
    pi = eng.generate(system, root, fin(3))
    br = eng.find_open_branch(pi, 10, breadth=2, guide=standard(fin(3), 8, system.template))
    if br is not None:
        eng.extract_model(br)
        rep = eng.check_branch_lemmas(pi, br)
        assert not (rep["b"] or rep["d"])


def test_generation_is_deterministic():
    a = eng.generate(eng.LK, "(= 0 0) |- (= (S 0) 0)", fin(2))
    b = eng.generate(eng.LK, "(= 0 0) |- (= (S 0) 0)", fin(2))
    for p in positions(a, 6):
        assert a.label(p).to_json() == b.label(p).to_json()
