import pytest
from hypothesis import given, settings

from geomproof.calculus import (
    CheckError, Measures, Namer, Proof, Rule, Sequent, Theory, axiom, check, check_classical,
    check_intuitionistic, cut_degree, height, identity, infer, is_cut_free, pack_theory,
    theory_leaf, unpack_theory, uses_theory,
)
from geomproof.formula import And, Atom, BigAnd, Const, Signature, Var, forall, rank
from corpus import (
    P, Q, c, excluded_middle, instance, invalid_cases, pq_classical, theory, valid_cases,
)
from strategies import formulas


def test_axiom_node():
    ax = axiom([P(c)], [P(c)])
    assert check_classical(ax) == Measures(0, 0)
    assert check_intuitionistic(ax) == Measures(0, 0)


def test_excluded_middle():
    em = excluded_middle()
    assert check_classical(em).height == 3
    with pytest.raises(CheckError) as e:
        check_intuitionistic(em)
    assert e.value.reason == "succedent-overflow"
    assert e.value.path == (0,)


def test_eigenvariable_violation():
    a = Var("a")
    bad = Proof(Sequent((P(a),), (forall("x", P(Var("x"))),)),
                Rule("forall_r", pos=0, minors=((0,),), eigenvar="a"), (axiom([P(a)], [P(a)]),))
    with pytest.raises(CheckError) as e:
        check(bad)
    assert e.value.reason == "eigenvariable"


def test_swap_conjunction_intuitionistically():
    ab, ba = And(P(c), Q(c)), And(Q(c), P(c))
    left = infer("and_l2", [ab], [Q(c)], [axiom([Q(c)], [Q(c)])], ab)
    right = infer("and_l1", [ab], [P(c)], [axiom([P(c)], [P(c)])], ab)
    p = infer("and_r", [ab], [ba], [left, right], ba)
    assert len(list(p.nodes())) == 5
    assert check_intuitionistic(p) == Measures(2, 0)


@pytest.mark.parametrize("case", valid_cases(), ids=lambda k: k.name)
def test_valid_corpus(case):
    check(case.proof, case.theory, intuitionistic=case.intuitionistic)


@pytest.mark.parametrize("case", invalid_cases(), ids=lambda k: k.name)
def test_invalid_corpus(case):
    with pytest.raises(CheckError) as e:
        check(case.proof, case.theory, intuitionistic=case.intuitionistic)
    assert e.value.reason == case.reason
    assert e.value.path == case.path


def test_rejection_reasons_covered():
    reasons = {k.reason for k in invalid_cases()}
    assert reasons == {"bad-index", "eigenvariable", "schema", "structural", "theory-axiom",
                       "succedent-overflow", "non-atomic-axiom", "malformed"}


def test_measures():
    p = pq_classical()
    assert height(p) == 4
    assert cut_degree(p) == rank(theory("pq").axioms[1]) + 1
    assert not is_cut_free(p) and uses_theory(p)


@settings(max_examples=60, deadline=None)
@given(formulas)
def test_identity_is_intuitionistic(f):
    p = identity(f)
    assert p.conclusion == Sequent((f,), (f,))
    m = check_intuitionistic(p)
    assert m.cut_degree == 0
    assert m.height <= 2 * rank(f)


def test_identity_with_context():
    p = identity(forall("x", P(Var("x"))), [Q(c)], [P(Var("a"))])
    assert check(p).cut_degree == 0
    assert p.conclusion.ante == (Q(c), forall("x", P(Var("x"))))


def test_theory_validation():
    sig = Signature(frozenset({"c"}), (), (("P", 1),), False)
    with pytest.raises(ValueError):
        Theory("open", sig, (P(Var("a")),))
    with pytest.raises(ValueError):
        Theory("dup", sig, (P(c), P(c)))


def test_pack_single_axiom():
    sig = Signature(frozenset({"c"}), (), (("P", 1),), False)
    t = Theory("one", sig, (P(c),))
    packed = pack_theory(theory_leaf([], [P(c)], t, 0), t)
    assert packed.conclusion == Sequent((BigAnd((P(c),)),), (P(c),))
    assert height(packed) == 1
    check_intuitionistic(packed)
    back = unpack_theory(packed, t)
    assert back.conclusion == Sequent((), (P(c),))
    check_intuitionistic(back, t)


def test_pack_without_theory_use():
    t = theory("pq")
    ax = axiom([Q(c)], [Q(c)])
    packed = pack_theory(ax, t)
    assert packed.conclusion.ante == (Q(c), t.conjunction())
    assert packed.rule == ax.rule


def test_pack_robinson_equation():
    rb = theory("robinson")
    zero = Const("0")
    p = instance(rb, 3, [zero])             # |- add(0,0) = 0
    packed = pack_theory(p, rb)
    assert packed.conclusion.ante == (rb.conjunction(),)
    assert not uses_theory(packed)
    check(packed)


def test_unpack_two_axioms():
    t = theory("pq")
    big = t.conjunction()
    p = identity(big)
    out = unpack_theory(p, t)
    assert out.conclusion == Sequent((), (big,))
    check(out, t)


def test_unpack_rejects_other_conjunction():
    t = theory("pq")
    with pytest.raises(ValueError):
        unpack_theory(identity(BigAnd((P(c),))), t)


def test_namer_is_deterministic():
    a, b = Namer({"_e1"}), Namer({"_e1"})
    assert [a.fresh() for _ in range(3)] == [b.fresh() for _ in range(3)] == ["_e2", "_e3", "_e4"]
    assert Namer().fresh(["_e1"]) == "_e2"


def test_intuitionistic_theory_leaf():
    t = theory("pq")
    with pytest.raises(CheckError) as e:
        check_intuitionistic(theory_leaf([], [P(c), Q(c)], t, 0), t)
    assert e.value.reason == "succedent-overflow"
