"""Hypothesis strategies for formulas and ordinal notations."""
from hypothesis import strategies as st

from geomproof.formula import (
    And, App, Atom, BigAnd, BigOr, Const, Imp, Not, Or, Var, dedup, exists, forall,
)
from geomproof.ordinal import ONE, ZERO, Ordinal, natural_sum, phi

VARS = ("a", "b", "u")

terms = st.recursive(
    st.sampled_from([Const("c"), Const("d"), Var("a"), Var("b"), Var("u")]),
    lambda sub: st.builds(lambda t: App("f", (t,)), sub),
    max_leaves=3,
)

atoms = st.one_of(
    st.builds(lambda t: Atom("P", (t,)), terms),
    st.builds(lambda t: Atom("Q", (t,)), terms),
    st.builds(lambda s, t: Atom("R", (s, t)), terms, terms),
)


def _extend(sub):
    return st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Imp, sub, sub),
        st.builds(forall, st.sampled_from(VARS), sub),
        st.builds(exists, st.sampled_from(VARS), sub),
        st.builds(lambda ms: BigAnd(dedup(ms)), st.lists(sub, max_size=4)),
        st.builds(lambda ms: BigOr(dedup(ms)), st.lists(sub, max_size=4)),
    )


formulas = st.recursive(atoms, _extend, max_leaves=8)


def _first_order(sub):
    return st.one_of(
        st.builds(Not, sub), st.builds(And, sub, sub), st.builds(Or, sub, sub),
        st.builds(Imp, sub, sub), st.builds(forall, st.sampled_from(VARS), sub),
        st.builds(exists, st.sampled_from(VARS), sub),
    )


first_order = st.recursive(atoms, _first_order, max_leaves=6)


def ordinals_below(top_index: int, depth: int = 2):
    """Notations below phi(top_index, 2), as sums of principal terms."""
    def principals(d):
        base = [st.just(ONE)]
        if d > 0:
            inner = ordinals_below(top_index, d - 1)
            base.append(inner.map(lambda b: phi(ZERO, b)))
        for a in range(1, top_index + 1):
            lower = [0, 1] if a == top_index else [0, 1, 2]
            base.append(st.sampled_from(lower).map(lambda b, a=a: phi(a, b)))
        return st.one_of(*base)

    return st.lists(principals(depth), max_size=4).map(
        lambda xs: natural_sum(*xs) if xs else ZERO)


small_ordinals = ordinals_below(1)
medium_ordinals = ordinals_below(2)
naturals = st.integers(0, 50).map(Ordinal.of)
