import pytest
from hypothesis import given, strategies as st

from geomproof.formula import (
    EMPTY, And, App, Atom, BigAnd, BigOr, BVar, Const, Forall, GeomClass, Imp, Not, Or,
    Signature, SignatureError, Var, abstract, big_and, big_or, classify, eq, exists, forall,
    free_vars, instantiate, is_inf_geometric_implication, labels, locally_closed, rank,
    substitute, succedent_of,
)
from strategies import first_order, formulas, terms

c = Const("c")
P = lambda t: Atom("P", (t,))
Q = lambda t: Atom("Q", (t,))
R = lambda *t: Atom("R", t)


def test_rank_examples():
    assert rank(P(c)) == 0
    assert rank(forall("x", P(Var("x")))) == 1
    assert rank(BigOr((P(c), And(Q(c), Atom("R", (c,)))))) == 2


def test_classify_examples():
    zero, one = Const("0"), Const("1")
    x, y = Var("x"), Var("y")
    field = forall("x", Or(eq(x, zero), exists("y", eq(App("mul", (x, y)), one))))
    assert classify(field) is GeomClass.GEOMETRIC_IMPLICATION

    a = Var("a")
    robinson = forall("a", Imp(Not(eq(a, zero)), exists("y", eq(a, App("suc", (y,))))))
    assert classify(robinson) is GeomClass.NONE

    n = lambda k: Const(str(k))
    arch = forall("x", BigOr(tuple(Atom("lt", (x, n(k))) for k in (1, 2, 3))))
    assert classify(arch) is GeomClass.INF_GEOMETRIC_IMPLICATION
    assert GeomClass.GEOMETRIC_IMPLICATION not in labels(arch)


def test_labels_include_implied_classes():
    ls = labels(P(c))
    assert ls == {GeomClass.GEOMETRIC_FORMULA, GeomClass.INF_GEOMETRIC_FORMULA,
                  GeomClass.GEOMETRIC_IMPLICATION, GeomClass.INF_GEOMETRIC_IMPLICATION}
    assert classify(P(c)) is GeomClass.GEOMETRIC_FORMULA
    assert labels(forall("x", Not(P(Var("x"))))) >= {GeomClass.GEOMETRIC_IMPLICATION}
    conj = BigAnd((Imp(P(c), Q(c)), forall("x", P(Var("x")))))
    assert classify(conj) is GeomClass.INF_GEOMETRIC_IMPLICATION
    assert classify(Imp(forall("x", P(Var("x"))), Q(c))) is GeomClass.NONE


def test_substitute_examples():
    a, b = Var("a"), Var("b")
    assert substitute(P(a), "a", c) == P(c)
    ex = exists("y", R(a, Var("y")))
    assert substitute(ex, "a", App("f", (b,))) == exists("y", R(App("f", (b,)), Var("y")))
    assert substitute(P(b), "a", c) == P(b)


def test_substitute_rejects_loose_terms():
    with pytest.raises(ValueError):
        substitute(P(Var("a")), "a", BVar(0))


def test_big_or_helpers():
    assert big_or([Q(c)]) == BigOr((Q(c),))
    assert big_or([P(c), Q(c), P(c)]) == BigOr((P(c), Q(c)))
    assert big_or([]) is EMPTY
    assert succedent_of(EMPTY) == ()
    assert big_and([P(c), P(c)]) == BigAnd((P(c),))


def test_duplicate_members_rejected():
    with pytest.raises(ValueError):
        BigOr((P(c), P(c)))


def test_binder_hints_do_not_matter():
    assert Forall(P(BVar(0)), "x") == Forall(P(BVar(0)), "y")
    assert forall("x", P(Var("x"))) == forall("z", P(Var("z")))


def test_signature_check():
    sig = Signature(frozenset({"c"}), (("f", 1),), (("P", 1),), False)
    sig.check(P(App("f", (c,))))
    with pytest.raises(SignatureError):
        sig.check(Atom("P", (c, c)))
    with pytest.raises(SignatureError):
        sig.check(eq(c, c))
    with pytest.raises(SignatureError):
        sig.check(P(Const("e")))
    Signature(relations=(("Z", 0),)).check(Atom("Z"))


@given(formulas, terms)
def test_substitution_preserves_rank_and_closure(f, t):
    g = substitute(f, "a", t)
    assert rank(g) == rank(f)
    assert locally_closed(g)
    assert "a" not in free_vars(g) or "a" in {v for v in _vars(t)}


def _vars(t):
    match t:
        case Var(n):
            yield n
        case App(_, args):
            for s in args:
                yield from _vars(s)


@given(formulas)
def test_abstract_instantiate_roundtrip(f):
    assert instantiate(abstract(f, "a"), Var("a")) == f


@given(formulas, terms)
def test_instance_rank_matches_quantifier_body(f, t):
    q = forall("a", f)
    assert rank(instantiate(q.body, t)) == rank(q) - 1


@given(first_order)
def test_first_order_implications_are_well_classified(f):
    labs = labels(f)
    if GeomClass.GEOMETRIC_IMPLICATION in labs:
        assert GeomClass.INF_GEOMETRIC_IMPLICATION in labs
    if GeomClass.GEOMETRIC_FORMULA in labs:
        assert labs >= {GeomClass.INF_GEOMETRIC_FORMULA, GeomClass.GEOMETRIC_IMPLICATION}
    assert (GeomClass.NONE in labs) == (not is_inf_geometric_implication(f))


@given(st.lists(formulas, max_size=5))
def test_big_or_dedup_is_idempotent(fs):
    d = big_or(fs)
    if d is EMPTY:
        assert not fs
    else:
        assert big_or(d.members) == d
        assert set(d.members) == set(fs)
