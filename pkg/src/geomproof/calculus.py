"""Sequents, proof objects and the verifying checker.

A proof node records its conclusion, the rule applied and its premises.
Every logical rule is fused with weakening and contraction: once the minor
formulas are discharged, what remains of each premise must embed (as a
set) into the conclusion.  Rule tags carry positions, so the principal and
minor formulas of the last inference can be read off any node.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .formula import (
    And, Atom, BigAnd, BigOr, Exists, Forall, Formula, Imp, Not, Or,
    Signature, Term, Var, big_and, free_vars, instantiate, locally_closed,
    rank, term_locally_closed, term_vars,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

L, R = "L", "R"

# rule name -> (side of the principal formula, connective)
LOGICAL = {
    "neg_l": (L, Not), "neg_r": (R, Not),
    "imp_l": (L, Imp), "imp_r": (R, Imp),
    "and_l1": (L, And), "and_l2": (L, And), "and_r": (R, And),
    "or_l": (L, Or), "or_r1": (R, Or), "or_r2": (R, Or),
    "forall_l": (L, Forall), "forall_r": (R, Forall),
    "exists_l": (L, Exists), "exists_r": (R, Exists),
    "bigand_l": (L, BigAnd), "bigand_r": (R, BigAnd),
    "bigor_l": (L, BigOr), "bigor_r": (R, BigOr),
}
RULE_NAMES = ("axiom", "theory", "cut") + tuple(LOGICAL)
EIGEN_RULES = ("forall_r", "exists_l")
TERM_RULES = ("forall_l", "exists_r")
MEMBER_RULES = ("bigand_l", "bigor_r")


@dataclass(frozen=True)
class Sequent:
    ante: tuple = ()
    succ: tuple = ()

    def side(self, s: str) -> tuple:
        return self.ante if s == L else self.succ

    def formulas(self):
        return itertools.chain(self.ante, self.succ)

    def free_vars(self) -> set:
        return {v for f in self.formulas() for v in free_vars(f)}


@dataclass(frozen=True)
class Rule:
    name: str
    pos: Optional[int] = None      # principal position (axiom: antecedent index)
    pos2: Optional[int] = None     # axiom only: succedent index
    minors: tuple = ()             # per premise, positions of its minor formulas
    member: Optional[int] = None
    term: Optional[Term] = None
    eigenvar: Optional[str] = None
    axiom: Optional[int] = None    # theory axiom index


@dataclass(frozen=True)
class Proof:
    conclusion: Sequent
    rule: Rule
    premises: tuple = ()

    @property
    def ante(self):
        return self.conclusion.ante

    @property
    def succ(self):
        return self.conclusion.succ

    def nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    axioms: tuple

    def __post_init__(self):
        if len(set(self.axioms)) != len(self.axioms):
            raise ValueError("duplicate axiom")
        for a in self.axioms:
            if free_vars(a) or not locally_closed(a):
                raise ValueError(f"axiom is not closed: {a}")
            self.signature.check(a)

    def conjunction(self) -> BigAnd:
        if not self.axioms:
            raise ValueError("empty theory has no conjunction")
        return big_and(self.axioms)


@dataclass(frozen=True)
class Measures:
    height: int
    cut_degree: int


class CheckError(Exception):
    """Rejection of a proof, pointing at the first offending node."""

    def __init__(self, path: tuple, reason: str, detail: str = ""):
        self.path = tuple(path)
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason} at {list(self.path)}: {detail}")


# -- schemas -----------------------------------------------------------------

def minor_schema(rule_name: str, principal: Formula, *, term=None, eigenvar=None,
                 member=None) -> list:
    """Per premise, the (side, formula) minors the rule expects."""
    p = principal
    match rule_name:
        case "neg_l":
            return [[(R, p.body)]]
        case "neg_r":
            return [[(L, p.body)]]
        case "imp_l":
            return [[(R, p.left)], [(L, p.right)]]
        case "imp_r":
            return [[(L, p.left), (R, p.right)]]
        case "and_l1":
            return [[(L, p.left)]]
        case "and_l2":
            return [[(L, p.right)]]
        case "and_r":
            return [[(R, p.left)], [(R, p.right)]]
        case "or_l":
            return [[(L, p.left)], [(L, p.right)]]
        case "or_r1":
            return [[(R, p.left)]]
        case "or_r2":
            return [[(R, p.right)]]
        case "forall_l":
            return [[(L, instantiate(p.body, term))]]
        case "forall_r":
            return [[(R, instantiate(p.body, Var(eigenvar)))]]
        case "exists_l":
            return [[(L, instantiate(p.body, Var(eigenvar)))]]
        case "exists_r":
            return [[(R, instantiate(p.body, term))]]
        case "bigand_l":
            return [[(L, p.members[member])]]
        case "bigand_r":
            return [[(R, m)] for m in p.members]
        case "bigor_l":
            return [[(L, m)] for m in p.members]
        case "bigor_r":
            return [[(R, p.members[member])]]
    raise ValueError(f"no schema for {rule_name}")


def principal_formula(node: Proof) -> Optional[Formula]:
    r = node.rule
    if r.name in LOGICAL:
        return node.conclusion.side(LOGICAL[r.name][0])[r.pos]
    if r.name == "theory":
        return node.succ[r.pos]
    if r.name == "axiom":
        return node.ante[r.pos]
    return None


def cut_formula(node: Proof) -> Formula:
    return node.premises[0].succ[node.rule.minors[0][0]]


def node_minors(node: Proof) -> list:
    """Per premise, the (side, formula) minors of an existing node."""
    r = node.rule
    if r.name == "cut":
        c = cut_formula(node)
        return [[(R, c)], [(L, c)]]
    if r.name in LOGICAL:
        return minor_schema(r.name, principal_formula(node), term=r.term,
                            eigenvar=r.eigenvar, member=r.member)
    return []


# -- checker -------------------------------------------------------------------

def _local(node: Proof, path, theory, intuitionistic):
    r, c = node.rule, node.conclusion
    if intuitionistic and len(c.succ) > 1:
        raise CheckError(path, "succedent-overflow", f"{len(c.succ)} formulas on the right")
    for f in c.formulas():
        if not locally_closed(f):
            raise CheckError(path, "malformed", f"loose bound variable in {f}")
    if r.name not in RULE_NAMES:
        raise CheckError(path, "schema", f"unknown rule {r.name}")

    def in_range(i, seq):
        if not isinstance(i, int) or not 0 <= i < len(seq):
            raise CheckError(path, "bad-index", f"position {i} out of range")

    if r.name == "axiom":
        if node.premises:
            raise CheckError(path, "schema", "axiom with premises")
        in_range(r.pos, c.ante)
        in_range(r.pos2, c.succ)
        if c.ante[r.pos] != c.succ[r.pos2]:
            raise CheckError(path, "schema", "axiom formulas differ")
        if not isinstance(c.ante[r.pos], Atom):
            raise CheckError(path, "non-atomic-axiom", str(c.ante[r.pos]))
        return
    if r.name == "theory":
        if node.premises:
            raise CheckError(path, "schema", "theory axiom with premises")
        in_range(r.pos, c.succ)
        if theory is None or not isinstance(r.axiom, int) or not 0 <= r.axiom < len(theory.axioms):
            raise CheckError(path, "theory-axiom", f"unknown theory axiom {r.axiom}")
        if theory.axioms[r.axiom] != c.succ[r.pos]:
            raise CheckError(path, "theory-axiom", "cited formula is not that axiom")
        return

    if r.name == "cut":
        if len(node.premises) != 2 or len(r.minors) != 2 or any(len(m) != 1 for m in r.minors):
            raise CheckError(path, "schema", "cut needs two premises with one minor each")
        in_range(r.minors[0][0], node.premises[0].succ)
        expected = [[(R, cut_formula(node))], [(L, cut_formula(node))]]
    else:
        side, conn = LOGICAL[r.name]
        in_range(r.pos, c.side(side))
        principal = c.side(side)[r.pos]
        if not isinstance(principal, conn):
            raise CheckError(path, "schema", f"{r.name} on {principal}")
        if r.name in TERM_RULES and (r.term is None or not term_locally_closed(r.term)):
            raise CheckError(path, "schema", "missing or malformed witness term")
        if r.name in EIGEN_RULES:
            if not r.eigenvar:
                raise CheckError(path, "schema", "missing eigenvariable")
            if r.eigenvar in c.free_vars():
                raise CheckError(path, "eigenvariable",
                                 f"{r.eigenvar} occurs in the lower sequent")
        if r.name in MEMBER_RULES:
            in_range(r.member, principal.members)
        expected = minor_schema(r.name, principal, term=r.term, eigenvar=r.eigenvar,
                                member=r.member)
    if len(node.premises) != len(expected) or len(r.minors) != len(expected):
        raise CheckError(path, "schema", f"{r.name} expects {len(expected)} premises")
    ante_set, succ_set = set(c.ante), set(c.succ)
    for j, (prem, wanted, idxs) in enumerate(zip(node.premises, expected, r.minors)):
        if len(idxs) != len(wanted):
            raise CheckError(path, "bad-index", f"premise {j} minor count")
        for (side, formula), i in zip(wanted, idxs):
            in_range(i, prem.conclusion.side(side))
            if prem.conclusion.side(side)[i] != formula:
                raise CheckError(path, "schema", f"premise {j} minor is not {formula}")
        left = {f for s, f in wanted if s == L}
        right = {f for s, f in wanted if s == R}
        extra = [f for f in prem.ante if f not in left and f not in ante_set]
        extra += [f for f in prem.succ if f not in right and f not in succ_set]
        if extra:
            raise CheckError(path, "structural", f"premise {j} side formula {extra[0]} not in conclusion")


def check(p: Proof, theory: Theory | None = None, *, intuitionistic: bool = False) -> Measures:
    def go(node, path):
        _local(node, path, theory, intuitionistic)
        height, degree = 0, 0
        if node.rule.name == "cut":
            degree = rank(cut_formula(node)) + 1
        for i, prem in enumerate(node.premises):
            m = go(prem, path + (i,))
            height = max(height, m.height + 1)
            degree = max(degree, m.cut_degree)
        return Measures(height, degree)

    return go(p, ())


def check_classical(p: Proof, theory: Theory | None = None) -> Measures:
    return check(p, theory)


def check_intuitionistic(p: Proof, theory: Theory | None = None) -> Measures:
    return check(p, theory, intuitionistic=True)


def height(p: Proof) -> int:
    return 1 + max(height(q) for q in p.premises) if p.premises else 0


def cut_degree(p: Proof) -> int:
    return max((rank(cut_formula(n)) + 1 for n in p.nodes() if n.rule.name == "cut"), default=0)


def is_cut_free(p: Proof) -> bool:
    return all(n.rule.name != "cut" for n in p.nodes())


def uses_theory(p: Proof) -> bool:
    return any(n.rule.name == "theory" for n in p.nodes())


# -- construction -----------------------------------------------------------------

def sequent(ante: Iterable = (), succ: Iterable = ()) -> Sequent:
    return Sequent(tuple(ante), tuple(succ))


def axiom(ante, succ, atom: Formula | None = None) -> Proof:
    ante, succ = tuple(ante), tuple(succ)
    if atom is None:
        atom = next((f for f in ante if isinstance(f, Atom) and f in succ), None)
        if atom is None:
            raise ValueError("no atom shared by both sides")
    return Proof(Sequent(ante, succ), Rule("axiom", pos=ante.index(atom), pos2=succ.index(atom)))


def theory_leaf(ante, succ, theory: Theory, index: int) -> Proof:
    succ = tuple(succ)
    return Proof(Sequent(tuple(ante), succ),
                 Rule("theory", pos=succ.index(theory.axioms[index]), axiom=index))


def infer(name: str, ante, succ, premises, principal: Formula | None = None, *,
          cut: Formula | None = None, term: Term | None = None,
          eigenvar: str | None = None, member=None) -> Proof:
    """Build a node, computing every position from the formulas given."""
    conclusion = Sequent(tuple(ante), tuple(succ))
    premises = tuple(premises)
    if name == "cut":
        wanted, pos = [[(R, cut)], [(L, cut)]], None
    else:
        side = LOGICAL[name][0]
        pos = conclusion.side(side).index(principal)
        if member is not None and not isinstance(member, int):
            member = principal.members.index(member)
        wanted = minor_schema(name, principal, term=term, eigenvar=eigenvar, member=member)
    if len(wanted) != len(premises):
        raise ValueError(f"{name} expects {len(wanted)} premises, got {len(premises)}")
    minors = tuple(
        tuple(prem.conclusion.side(s).index(f) for s, f in ws)
        for prem, ws in zip(premises, wanted)
    )
    return Proof(conclusion, Rule(name, pos=pos, minors=minors, member=member, term=term,
                                  eigenvar=eigenvar), premises)


def relabel(node: Proof, ante, succ, premises=None) -> Proof:
    """Same inference as ``node`` with a new conclusion and premises."""
    r = node.rule
    premises = node.premises if premises is None else tuple(premises)
    if r.name == "axiom":
        return axiom(ante, succ, node.ante[r.pos])
    if r.name == "theory":
        succ = tuple(succ)
        return Proof(Sequent(tuple(ante), succ),
                     Rule("theory", pos=succ.index(node.succ[r.pos]), axiom=r.axiom))
    if r.name == "cut":
        return infer("cut", ante, succ, premises, cut=cut_formula(node))
    return infer(r.name, ante, succ, premises, principal_formula(node), term=r.term,
                 eigenvar=r.eigenvar, member=r.member)


def all_names(p: Proof) -> set:
    """Every variable name appearing free anywhere in ``p`` or as a rule parameter."""
    out = set()
    for n in p.nodes():
        out |= n.conclusion.free_vars()
        if n.rule.eigenvar:
            out.add(n.rule.eigenvar)
        if n.rule.term is not None:
            out.update(term_vars(n.rule.term))
    return out


@dataclass
class Namer:
    """Deterministic fresh-variable supply for one transformation run."""
    avoid: set = field(default_factory=set)
    prefix: str = "_e"
    counter: int = 0

    def fresh(self, extra: Iterable[str] = ()) -> str:
        extra = set(extra)
        while True:
            self.counter += 1
            name = f"{self.prefix}{self.counter}"
            if name not in self.avoid and name not in extra:
                self.avoid.add(name)
                return name


def identity(a: Formula, ante=(), succ=(), namer: Namer | None = None) -> Proof:
    """Cut-free proof of ``ante, a |- succ, a`` from atomic axioms only.

    Intuitionistic whenever ``succ`` is empty.
    """
    ante, succ = tuple(ante), tuple(succ)
    if namer is None:
        namer = Namer({v for f in ante + succ + (a,) for v in free_vars(f)}, prefix="_i")
    ga, gs = ante + (a,), succ + (a,)
    match a:
        case Atom():
            return axiom(ga, gs, a)
        case Not(b):
            inner = identity(b, ante, succ, namer)
            left = infer("neg_l", ante + (b, a), succ, [inner], a)
            return infer("neg_r", ga, gs, [left], a)
        case And(b, c):
            pb = infer("and_l1", ga, succ + (b,), [identity(b, ante, succ, namer)], a)
            pc = infer("and_l2", ga, succ + (c,), [identity(c, ante, succ, namer)], a)
            return infer("and_r", ga, gs, [pb, pc], a)
        case Or(b, c):
            pb = infer("or_r1", ante + (b,), gs, [identity(b, ante, succ, namer)], a)
            pc = infer("or_r2", ante + (c,), gs, [identity(c, ante, succ, namer)], a)
            return infer("or_l", ga, gs, [pb, pc], a)
        case Imp(b, c):
            p1 = identity(b, ante, succ, namer)
            p2 = identity(c, ante, succ, namer)
            mid = infer("imp_l", ante + (b, a), succ + (c,), [p1, p2], a)
            return infer("imp_r", ga, gs, [mid], a)
        case Forall(body):
            v = namer.fresh()
            inst = instantiate(body, Var(v))
            mid = infer("forall_l", ga, succ + (inst,), [identity(inst, ante, succ, namer)], a,
                        term=Var(v))
            return infer("forall_r", ga, gs, [mid], a, eigenvar=v)
        case Exists(body):
            v = namer.fresh()
            inst = instantiate(body, Var(v))
            mid = infer("exists_r", ante + (inst,), gs, [identity(inst, ante, succ, namer)], a,
                        term=Var(v))
            return infer("exists_l", ga, gs, [mid], a, eigenvar=v)
        case BigAnd(ms):
            prems = [infer("bigand_l", ga, succ + (m,), [identity(m, ante, succ, namer)], a,
                           member=i) for i, m in enumerate(ms)]
            return infer("bigand_r", ga, gs, prems, a)
        case BigOr(ms):
            prems = [infer("bigor_r", ante + (m,), gs, [identity(m, ante, succ, namer)], a,
                           member=i) for i, m in enumerate(ms)]
            return infer("bigor_l", ga, gs, prems, a)
    raise TypeError(f"not a formula: {a!r}")


# -- theories as a single conjunction ------------------------------------------

def pack_theory(p: Proof, theory: Theory) -> Proof:
    """Turn a proof over ``theory`` into a pure proof with its conjunction on the left."""
    check(p, theory)
    big = theory.conjunction()

    def go(node):
        ante = node.ante + (big,)
        if node.rule.name == "theory":
            a = theory.axioms[node.rule.axiom]
            return infer("bigand_l", ante, node.succ, [identity(a)], big, member=a)
        return relabel(node, ante, node.succ, [go(q) for q in node.premises])

    return go(p)


def unpack_theory(p: Proof, theory: Theory) -> Proof:
    """Inverse of :func:`pack_theory`: cut the conjunction against its proof from the axioms."""
    big = theory.conjunction()
    if big not in p.ante:
        raise ValueError("the theory conjunction does not occur in the antecedent")
    leaves = [theory_leaf((), (a,), theory, i) for i, a in enumerate(theory.axioms)]
    whole = infer("bigand_r", (), (big,), leaves, big)
    ante = tuple(f for f in p.ante if f != big)
    return infer("cut", ante, p.succ, [whole, p], cut=big)
