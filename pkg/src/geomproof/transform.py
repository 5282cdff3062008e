"""Proof-to-proof transformations: weakening, substitution, inversion and cut elimination.

Every function returns a fresh proof object; inputs are never mutated.
Fresh eigenvariables come from a :class:`Namer` created once per top-level
call, so outputs are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .calculus import (
    L, R, LOGICAL, Namer, Proof, Sequent, Theory, all_names, check, cut_formula, infer,
    height, is_cut_free, node_minors, principal_formula, relabel, uses_theory,
)
from .formula import (
    And, BigAnd, BigOr, Exists, Forall, Formula, Imp, Not, Or, Term, Var,
    free_vars, instantiate, locally_closed, rank, substitute, term_subst, term_vars,
)
from .ordinal import Ordinal, compare, natural_sum, phi


@dataclass(frozen=True)
class BoundCertificate:
    input_height: Ordinal
    input_degree: Ordinal
    claimed_bound: Ordinal
    achieved_height: Ordinal
    other_height: Ordinal | None = None     # height of the second input of a reduction
    elided_cases: tuple = ()                # connectives reduced by the unpublished pattern

    @property
    def holds(self) -> bool:
        return compare(self.achieved_height, self.claimed_bound) <= 0

    def to_dict(self) -> dict:
        out = {
            "input_height": str(self.input_height),
            "input_degree": str(self.input_degree),
            "claimed_bound": str(self.claimed_bound),
            "achieved_height": str(self.achieved_height),
        }
        if self.other_height is not None:
            out["other_height"] = str(self.other_height)
        if self.elided_cases:
            out["elided_cases"] = list(self.elided_cases)
        return out


def _without(seq, f) -> tuple:
    return tuple(x for x in seq if x != f)


def _fv(formulas) -> set:
    return {v for f in formulas for v in free_vars(f)}


def _namer(*proofs, formulas=(), names=(), prefix="_v") -> Namer:
    avoid = set(names) | _fv(formulas)
    for p in proofs:
        avoid |= all_names(p)
    return Namer(avoid, prefix=prefix)


def _rename_eigen(node: Proof, avoid: set, namer: Namer) -> Proof:
    """Give the last inference a fresh eigenvariable if its current one is in ``avoid``."""
    a = node.rule.eigenvar
    if not a or a not in avoid:
        return node
    b = namer.fresh(avoid)
    prems = tuple(_subst(q, a, Var(b), namer) for q in node.premises)
    return Proof(node.conclusion, replace(node.rule, eigenvar=b), prems)


# -- weakening ----------------------------------------------------------------

def weaken(p: Proof, ante, succ, namer: Namer | None = None) -> Proof:
    """Proof of ``ante |- succ`` from a proof of a subsequent, same height."""
    ante, succ = tuple(ante), tuple(succ)
    if not set(p.ante) <= set(ante) or not set(p.succ) <= set(succ):
        raise ValueError("weakening target does not contain the endsequent")
    if ante == p.ante and succ == p.succ:
        return p
    if p.rule.eigenvar:
        avoid = _fv(ante + succ)
        if p.rule.eigenvar in avoid:
            namer = namer or _namer(p, formulas=ante + succ)
            p = _rename_eigen(p, avoid, namer)
    return relabel(p, ante, succ)


# -- substitution ---------------------------------------------------------------

def _subst(p: Proof, a: str, t: Term, namer: Namer) -> Proof:
    if a not in p.conclusion.free_vars():
        return p    # the subproof already proves the substituted sequent
    node = p
    if node.rule.eigenvar:
        node = _rename_eigen(node, set(term_vars(t)), namer)
    r = node.rule
    rule = r if r.term is None else replace(r, term=term_subst(r.term, a, t))
    conclusion = Sequent(tuple(substitute(f, a, t) for f in node.ante),
                         tuple(substitute(f, a, t) for f in node.succ))
    return Proof(conclusion, rule, tuple(_subst(q, a, t, namer) for q in node.premises))


def substitute_proof(p: Proof, a: str, t: Term, namer: Namer | None = None) -> Proof:
    """Replace the free variable ``a`` by ``t`` throughout ``p``."""
    namer = namer or _namer(p, names={a, *term_vars(t)})
    return _subst(p, a, t, namer)


# -- inversion --------------------------------------------------------------------

# kind -> (side of X, connective)
INVERSIONS = {
    "and_l": (L, And), "and_r": (R, And), "or_l": (L, Or), "or_r": (R, Or),
    "imp_r": (R, Imp), "imp_l": (L, Imp), "imp_l_right": (L, Imp),
    "neg_r": (R, Not), "neg_l": (L, Not),
    "forall_r": (R, Forall), "exists_l": (L, Exists),
    "bigor_l": (L, BigOr), "bigand_r": (R, BigAnd),
}
PAIR_KINDS = ("and_r", "or_l", "imp_l")
CLASSICAL_ONLY = ("or_r", "imp_l", "neg_l")


def _components(kind: str, x: Formula, term, member) -> list:
    """Per output proof: (added antecedent, added succedent, premise chooser)."""
    first = lambda node: 0
    match kind:
        case "and_l":
            return [((x.left, x.right), (), first)]
        case "and_r":
            return [((), (x.left,), first), ((), (x.right,), lambda n: 1)]
        case "or_l":
            return [((x.left,), (), first), ((x.right,), (), lambda n: 1)]
        case "or_r":
            return [((), (x.left, x.right), first)]
        case "imp_r":
            return [((x.left,), (x.right,), first)]
        case "imp_l":
            return [((), (x.left,), first), ((x.right,), (), lambda n: 1)]
        case "imp_l_right":
            return [((x.right,), (), lambda n: 1)]
        case "neg_r":
            return [((x.body,), (), first)]
        case "neg_l":
            return [((), (x.body,), first)]
        case "forall_r":
            return [((), (instantiate(x.body, term),), first)]
        case "exists_l":
            return [((instantiate(x.body, term),), (), first)]
        case "bigor_l":
            return [((member,), (), lambda n, i=x.members.index(member): i)]
        case "bigand_r":
            return [((), (member,), lambda n, i=x.members.index(member): i)]
    raise ValueError(f"unknown inversion {kind}")


def _invert_one(p, side, x, add_ante, add_succ, choose, term, namer):
    def target(node):
        if side == L:
            return _without(node.ante, x) + add_ante, node.succ + add_succ
        return node.ante + add_ante, _without(node.succ, x) + add_succ

    def go(node):
        ante, succ = target(node)
        r = node.rule
        if r.name == "theory" and side == R and node.succ[r.pos] == x:
            raise ValueError("the inverted formula is a cited theory axiom")
        if r.name in LOGICAL and LOGICAL[r.name][0] == side and principal_formula(node) == x:
            prem = node.premises[choose(node)]
            if r.eigenvar:
                prem = _subst(prem, r.eigenvar, term, namer)
            if x in prem.conclusion.side(side):
                prem = go(prem)
            return weaken(prem, ante, succ, namer)
        for j, minors in enumerate(node_minors(node)):
            if (side, x) in minors:
                return weaken(go(node.premises[j]), ante, succ, namer)
        node = _rename_eigen(node, _fv(ante + succ), namer)
        prems = [go(q) if x in q.conclusion.side(side) else q for q in node.premises]
        return relabel(node, ante, succ, prems)

    return go(p)


def invert(kind: str, p: Proof, x: Formula, *, term: Term | None = None,
           member: Formula | None = None, mode: str = "classical"):
    """Inversion of ``x`` in the endsequent of ``p``.

    Pair kinds (and_r, or_l, imp_l) return a tuple of two proofs.  Every
    output is no higher than ``p`` and has no larger cut degree.
    """
    if kind not in INVERSIONS:
        raise ValueError(f"unknown inversion {kind}")
    if mode not in ("classical", "intuitionistic"):
        raise ValueError(f"unknown mode {mode}")
    if mode == "intuitionistic" and kind in CLASSICAL_ONLY:
        raise ValueError(f"inversion {kind} is not available intuitionistically")
    side, conn = INVERSIONS[kind]
    if not isinstance(x, conn):
        raise ValueError(f"{kind} needs a formula of type {conn.__name__}")
    if x not in p.conclusion.side(side):
        raise ValueError("principal formula absent from the endsequent")
    if kind in ("forall_r", "exists_l") and (term is None or not locally_closed(instantiate(x.body, term))):
        raise ValueError("a closed witness term is required")
    if kind in ("bigor_l", "bigand_r") and member not in x.members:
        raise ValueError("member not in the infinitary connective")
    namer = _namer(p, names=term_vars(term) if term is not None else ())
    outs = tuple(_invert_one(p, side, x, a, s, choose, term, namer)
                 for a, s, choose in _components(kind, x, term, member))
    return outs if kind in PAIR_KINDS else outs[0]


# -- cut reduction ----------------------------------------------------------------

def _principal_on(node: Proof, side: str, c: Formula) -> bool:
    r = node.rule
    if r.name in LOGICAL:
        return LOGICAL[r.name][0] == side and principal_formula(node) == c
    if r.name == "axiom":
        return node.ante[r.pos] == c
    if r.name == "theory":
        return side == R and node.succ[r.pos] == c
    return False


@dataclass
class _Ctx:
    namer: Namer
    elided: set


def _reduce(c, p, q, ctx) -> Proof:
    """Proof of (ante p - c), ante q |- succ p, (succ q - c)."""
    ante = _without(p.ante, c) + q.ante
    succ = p.succ + _without(q.succ, c)
    namer = ctx.namer
    if c not in p.ante:
        return weaken(p, ante, succ, namer)
    if c not in q.succ:
        return weaken(q, ante, succ, namer)
    if p.rule.name == "axiom" and _principal_on(p, L, c):
        return weaken(q, ante, succ, namer)
    if q.rule.name == "axiom" and _principal_on(q, R, c):
        return weaken(p, ante, succ, namer)
    if not _principal_on(p, L, c):
        return _descend(c, p, q, L, ante, succ, ctx)
    if not _principal_on(q, R, c):
        return _descend(c, p, q, R, ante, succ, ctx)
    if q.rule.name == "theory":
        raise ValueError("cannot reduce a cut against a theory axiom leaf")
    return _principal_case(c, p, q, ante, succ, ctx)


def _descend(c, p, q, side, ante, succ, ctx) -> Proof:
    """C is a side formula of the last inference of p (side L) or q (side R)."""
    node = p if side == L else q
    node = _rename_eigen(node, _fv(ante + succ), ctx.namer)

    def reduced(prem):
        if side == L:
            return _reduce(c, prem, q, ctx) if c in prem.ante else prem
        return _reduce(c, p, prem, ctx) if c in prem.succ else prem

    for j, minors in enumerate(node_minors(node)):
        if (side, c) in minors:
            return weaken(reduced(node.premises[j]), ante, succ, ctx.namer)
    return relabel(node, ante, succ, [reduced(prem) for prem in node.premises])


def _principal_case(c, p, q, ante, succ, ctx) -> Proof:
    namer = ctx.namer
    avoid = _fv(ante + succ) | _fv(p.ante + p.succ) | _fv(q.ante + q.succ)
    p = _rename_eigen(p, avoid, namer)
    q = _rename_eigen(q, avoid, namer)
    ps = [_reduce(c, pi, q, ctx) if c in pi.ante else pi for pi in p.premises]
    qs = [_reduce(c, p, qi, ctx) if c in qi.succ else qi for qi in q.premises]

    def cut(d, left, right, a=ante, s=succ):
        return infer("cut", a, s, [left, right], cut=d)

    pr, qr = p.rule, q.rule
    match c:
        case Not(a):
            ctx.elided.add("not")
            return cut(a, ps[0], qs[0])
        case And(a, b):
            ctx.elided.add("and")
            i = 0 if pr.name == "and_l1" else 1
            return cut((a, b)[i], qs[i], ps[0])
        case Or(a, b):
            ctx.elided.add("or")
            i = 0 if qr.name == "or_r1" else 1
            return cut((a, b)[i], qs[0], ps[i])
        case Imp(a, b):
            ctx.elided.add("imp")
            first = cut(a, ps[0], qs[0], ante, succ + (b,))
            return cut(b, first, ps[1])
        case Forall(body):
            t = pr.term
            inst = instantiate(body, t)
            return cut(inst, _subst(qs[0], qr.eigenvar, t, namer), ps[0])
        case Exists(body):
            ctx.elided.add("exists")
            t = qr.term
            inst = instantiate(body, t)
            return cut(inst, qs[0], _subst(ps[0], pr.eigenvar, t, namer))
        case BigAnd(ms):
            i = pr.member
            return cut(ms[i], qs[i], ps[0])
        case BigOr(ms):
            ctx.elided.add("bigor")
            i = qr.member
            return cut(ms[i], qs[0], ps[i])
    raise ValueError(f"no principal reduction for {c}")


def reduce_cut(c: Formula, p: Proof, q: Proof, theory: Theory | None = None):
    """Remove a cut on ``c`` between ``p`` (c on the left) and ``q`` (c on the right).

    Returns the proof of (ante p - c), ante q |- succ p, (succ q - c) and a
    certificate with the bound alpha # alpha # beta # beta.
    """
    mp, mq = check(p, theory), check(q, theory)
    rho = rank(c)
    if mp.cut_degree > rho or mq.cut_degree > rho:
        raise ValueError(f"input cut degree exceeds rank {rho} of the cut formula")
    ctx = _Ctx(_namer(p, q, formulas=(c,), prefix="_r"), set())
    out = _reduce(c, p, q, ctx)
    alpha, beta = Ordinal.of(mp.height), Ordinal.of(mq.height)
    cert = BoundCertificate(alpha, Ordinal.of(rho), natural_sum(alpha, alpha, beta, beta),
                            Ordinal.of(height(out)), beta, tuple(sorted(ctx.elided)))
    return out, cert


# -- cut elimination ------------------------------------------------------------------

def _eliminate(node: Proof, ctx) -> Proof:
    if is_cut_free(node):
        return node
    prems = tuple(_eliminate(q, ctx) for q in node.premises)
    if node.rule.name != "cut":
        return Proof(node.conclusion, node.rule, prems)
    c = cut_formula(node)
    reduced = _reduce(c, prems[1], prems[0], ctx)
    return _eliminate(weaken(reduced, node.ante, node.succ, ctx.namer), ctx)


def eliminate_cuts(p: Proof):
    """Cut-free proof of the same endsequent, with a phi(rho, alpha) certificate.

    Theory leaves are not accepted: pack the theory into the antecedent first.
    """
    if uses_theory(p):
        raise ValueError("proof cites theory axioms; pack the theory first")
    m = check(p)
    ctx = _Ctx(_namer(p, prefix="_c"), set())
    out = _eliminate(p, ctx)
    cert = BoundCertificate(Ordinal.of(m.height), Ordinal.of(m.cut_degree),
                            phi(m.cut_degree, m.height), Ordinal.of(height(out)),
                            elided_cases=tuple(sorted(ctx.elided)))
    return out, cert
