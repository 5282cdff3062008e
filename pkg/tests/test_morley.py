import pytest

from geomproof.barr import BarrInput, translate
from geomproof.calculus import Sequent, Theory, check, check_intuitionistic
from geomproof.formula import (
    And, Atom, BigOr, Const, Exists, Forall, GeomClass, Imp, Not, Or, Signature, Var, eq,
    exists, forall, free_vars, labels,
)
from geomproof.morley import (
    FormulaClosure, MorleyError, canonical, clauses, equivalence_proof, morleyize,
    morleyize_theory, transport,
)
from corpus import P, Q, c, pq_classical, theory

x, y, u = Var("x"), Var("y"), Var("u")
R = lambda *t: Atom("R", t)
ZERO = Const("0")
SIG = Signature(frozenset({"c", "0"}), (("f", 1),), (("P", 1), ("Q", 1), ("R", 2)), True)

MIXED = (
    eq(u, ZERO),
    Not(P(u)),
    Imp(P(u), exists("y", R(u, y))),
    forall("y", Or(R(u, y), Not(P(y)))),
    And(P(u), forall("x", exists("y", R(x, y)))),
)


def geometric(theory):
    return all(GeomClass.GEOMETRIC_IMPLICATION in labels(a) for a in theory.axioms)


def test_single_equation():
    cl = FormulaClosure((eq(u, ZERO),), SIG)
    assert cl.members == (eq(u, ZERO),)
    ms, m = morleyize(cl)
    assert len(m.axioms) == 4
    pa = ms.p(eq(u, ZERO))
    assert pa.args == (u,)
    assert forall("u", Imp(pa, eq(u, ZERO))) in m.axioms
    assert geometric(m)


def test_negation_closure():
    cl = FormulaClosure((Not(P(u)), P(u)), SIG)
    assert cl.members == (Not(P(u)), P(u))
    ms, m = morleyize(cl)
    keys = clauses(Not(P(u)), ms)
    assert set(keys) == {"1", "2", "6a", "6b"}
    assert keys["6a"] == forall("u", Imp(ms.p(Not(P(u))), ms.n(P(u))))
    assert len(m.axioms) == 8
    assert geometric(m)


def test_clause_labels_per_connective():
    cl = FormulaClosure(MIXED, SIG)
    ms, _ = morleyize(cl)
    expect = {
        Atom: {"3a", "3b"}, And: {"4a", "4b"}, Or: {"5a", "5b"}, Not: {"6a", "6b"},
        Imp: {"7a", "7b"},
    }
    for m in cl.members:
        got = set(clauses(m, ms)) - {"1", "2"}
        match m:
            case Exists():
                assert got == {"8a", "8b"}
            case Forall():
                assert got == {"9a", "9b"}
            case _:
                assert got == expect[type(m)]


def test_closure_is_subformula_closed():
    cl = FormulaClosure(MIXED, SIG)
    keys = {canonical(m) for m in cl.members}
    for m in cl.members:
        match m:
            case Not(b):
                assert canonical(b) in keys
            case And(l, r) | Or(l, r) | Imp(l, r):
                assert canonical(l) in keys and canonical(r) in keys
    assert len(cl.members) == len(keys)


def test_relation_arities_follow_free_variables():
    ms, m = morleyize(FormulaClosure(MIXED, SIG))
    rels = dict(m.signature.relations)
    for member, pn, nn in ms.name_map():
        assert rels[pn] == rels[nn] == len(free_vars(member))
    assert len({pn for _, pn, _ in ms.name_map()}) == len(ms.name_map())


def test_names_are_deterministic():
    a, _ = morleyize(FormulaClosure(MIXED, SIG))
    b, _ = morleyize(FormulaClosure(MIXED, SIG))
    assert a.name_map() == b.name_map()


def test_rejects_infinitary_input():
    with pytest.raises(MorleyError):
        FormulaClosure((BigOr((P(c), Q(c))),), SIG)


def test_theory_of_a_fact():
    sig = Signature(frozenset({"c"}), (), (("P", 1),), False)
    t = Theory("fact", sig, (P(c),))
    ms, ta = morleyize_theory(t)
    assert ta.axioms[-1] == ms.p(P(c))
    assert len(ta.axioms) == 4 + 1
    assert geometric(ta)


def test_robinson_is_morleyized():
    rb = theory("robinson")
    ms, ta = morleyize_theory(rb)
    assert geometric(ta)
    assert len(ta.axioms) > len(rb.axioms)
    for a in rb.axioms:
        body = FormulaClosure.of_theory(rb).matrix(a)[1]
        assert canonical(body) in ms.positive


def test_axiom_outside_closure():
    t = theory("pq")
    small = FormulaClosure((P(u),), t.signature)
    with pytest.raises(MorleyError):
        morleyize_theory(t, small)


MIXED_MS, MIXED_M = morleyize(FormulaClosure(MIXED, SIG))


@pytest.mark.parametrize("a", MIXED_MS.closure.members, ids=canonical)
def test_equivalence_proofs(a):
    ms, m = MIXED_MS, MIXED_M
    fwd, bwd = equivalence_proof(a, ms, m)
    assert fwd.conclusion == Sequent((a,), (ms.p(a),))
    assert bwd.conclusion == Sequent((ms.p(a),), (a,))
    check_intuitionistic(fwd, m)
    check_intuitionistic(bwd, m)


def test_equivalence_outside_closure():
    ms, m = morleyize(FormulaClosure((P(u),), SIG))
    with pytest.raises(MorleyError):
        equivalence_proof(Q(u), ms, m)


def test_transport_then_barr():
    t = theory("pq")
    proof = pq_classical(t)
    cl = FormulaClosure.of_theory(t, extra=(Q(c),))
    ms, ta = morleyize_theory(t, cl)
    assert geometric(ta)
    goal, moved = transport(proof, t, ms, ta, Q(c))
    assert goal == ms.p(Q(c))
    check(moved, ta)
    out, report = translate(BarrInput(ta, goal, moved))
    assert out.conclusion == Sequent((), (goal,))
    check_intuitionistic(out, ta)
    assert report["final_height"] > 0


def test_transport_requires_goal():
    t = theory("pq")
    cl = FormulaClosure.of_theory(t, extra=(Q(c),))
    ms, ta = morleyize_theory(t, cl)
    with pytest.raises(MorleyError):
        transport(pq_classical(t), t, ms, ta, P(c))
