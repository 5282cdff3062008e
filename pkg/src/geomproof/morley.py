"""Morleyization: geometric axiomatizations of first-order theories.

Every member A of a finite subformula-closed set gets two relation symbols
P_A and N_A whose arguments are the free variables of A in order of first
occurrence.  Members keep their free variables as names, so a clause
instantiated at those names speaks about the member itself.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .calculus import Proof, Theory, axiom, check, identity, infer, relabel, theory_leaf
from .formula import (
    And, App, Atom, BVar, Const, Exists, Forall, Formula, Imp, Not, Or, Signature, Var,
    dedup, exists, forall_close, free_vars, instantiate, is_first_order,
)
from .transform import weaken


class MorleyError(ValueError):
    pass


def _term_key(t) -> str:
    match t:
        case Var(n):
            return f"v:{n}"
        case BVar(i):
            return f"#{i}"
        case Const(n):
            return f"c:{n}"
        case App(fn, args):
            return f"{fn}(" + ",".join(map(_term_key, args)) + ")"
    raise TypeError(t)


def canonical(f: Formula) -> str:
    """Text key of a formula that ignores binder hints."""
    match f:
        case Atom(rel, args):
            return f"{rel}(" + ",".join(map(_term_key, args)) + ")"
        case Not(b):
            return f"~{canonical(b)}"
        case And(l, r):
            return f"&({canonical(l)},{canonical(r)})"
        case Or(l, r):
            return f"|({canonical(l)},{canonical(r)})"
        case Imp(l, r):
            return f">({canonical(l)},{canonical(r)})"
        case Forall(b):
            return f"A.{canonical(b)}"
        case Exists(b):
            return f"E.{canonical(b)}"
    raise MorleyError(f"not a first-order formula: {f!r}")


def open_binder(q, avoid) -> tuple:
    """(name, body) with the binder opened at its hint, suffixed away from ``avoid``."""
    base = q.name or "x"
    name, k = base, 0
    while name in avoid:
        k += 1
        name = f"{base}{k}"
    return name, instantiate(q.body, Var(name))


@dataclass(frozen=True)
class FormulaClosure:
    base: tuple
    signature: Signature
    members: tuple = field(init=False)

    def __post_init__(self):
        out = []
        for f in self.base:
            if not is_first_order(f):
                raise MorleyError(f"not first-order: {f}")
            self.signature.check(f)
            self._collect(f, out)
        object.__setattr__(self, "members", dedup(out))

    def _collect(self, f, out):
        out.append(f)
        match f:
            case Not(b):
                self._collect(b, out)
            case And(l, r) | Or(l, r) | Imp(l, r):
                self._collect(l, out)
                self._collect(r, out)
            case Forall() | Exists():
                self._collect(self.opened(f)[1], out)

    def opened(self, q) -> tuple:
        return open_binder(q, set(free_vars(q)) | set(self.signature.constants))

    @staticmethod
    def of_theory(t: Theory, extra=()) -> "FormulaClosure":
        probe = FormulaClosure((), t.signature)
        return FormulaClosure(tuple(probe.matrix(a)[1] for a in t.axioms) + tuple(extra),
                              t.signature)

    def matrix(self, f: Formula) -> tuple:
        """Strip the universal prefix: (opened names, matrix)."""
        names = []
        while isinstance(f, Forall):
            name, f = open_binder(f, set(free_vars(f)) | set(names) | set(self.signature.constants))
            names.append(name)
        return tuple(names), f


@dataclass(frozen=True)
class MorleySignature:
    original: Signature
    positive: dict      # canonical key -> relation name
    negative: dict
    closure: FormulaClosure

    def _atom(self, table, f):
        key = canonical(f)
        if key not in table:
            raise MorleyError(f"formula outside the closure: {f}")
        return Atom(table[key], tuple(Var(v) for v in free_vars(f)))

    def p(self, f: Formula) -> Atom:
        return self._atom(self.positive, f)

    def n(self, f: Formula) -> Atom:
        return self._atom(self.negative, f)

    @property
    def signature(self) -> Signature:
        rels = []
        for m in self.closure.members:
            k = len(free_vars(m))
            rels += [(self.positive[canonical(m)], k), (self.negative[canonical(m)], k)]
        return self.original.extend(relations=rels)

    def name_map(self) -> list:
        """(member, P name, N name) rows in closure order."""
        return [(m, self.positive[canonical(m)], self.negative[canonical(m)])
                for m in self.closure.members]


def _names(closure: FormulaClosure) -> tuple:
    sig = closure.signature
    taken = set(sig.constants) | {n for n, _ in sig.functions} | {n for n, _ in sig.relations}
    keys = [canonical(m) for m in closure.members]
    digests = {k: hashlib.sha1(k.encode()).hexdigest() for k in keys}
    width = 8
    while True:
        pos = {k: f"P_{digests[k][:width]}" for k in keys}
        neg = {k: f"N_{digests[k][:width]}" for k in keys}
        names = list(pos.values()) + list(neg.values())
        if len(set(names)) == len(names) and not taken & set(names):
            return pos, neg
        width += 2
        if width > 40:
            raise MorleyError("cannot find fresh relation names")


def clauses(m: Formula, ms: MorleySignature) -> dict:
    """The axioms contributed by member m, keyed by clause label."""
    us = free_vars(m)
    close = lambda body: forall_close(us, body)
    pa, na = ms.p(m), ms.n(m)
    out = {
        "1": close(Not(And(pa, na))),
        "2": close(Or(pa, na)),
    }

    def both(label, x, y):
        out[label + "a"] = close(Imp(x, y))
        out[label + "b"] = close(Imp(y, x))

    match m:
        case Atom():
            both("3", pa, m)
        case And(b, c):
            both("4", pa, And(ms.p(b), ms.p(c)))
        case Or(b, c):
            both("5", pa, Or(ms.p(b), ms.p(c)))
        case Not(b):
            both("6", pa, ms.n(b))
        case Imp(b, c):
            both("7", pa, Or(ms.n(b), ms.p(c)))
        case Exists():
            w, body = ms.closure.opened(m)
            both("8", pa, exists(w, ms.p(body)))
        case Forall():
            w, body = ms.closure.opened(m)
            out["9a"] = close(Imp(na, exists(w, ms.n(body))))
            out["9b"] = close(Imp(exists(w, ms.n(body)), na))
    return out


def morleyize(closure: FormulaClosure, name: str = "M") -> tuple:
    """(MorleySignature, theory M^a) for a closure."""
    pos, neg = _names(closure)
    ms = MorleySignature(closure.signature, pos, neg, closure)
    axioms = []
    for m in closure.members:
        axioms.extend(clauses(m, ms).values())
    return ms, Theory(name, ms.signature, tuple(axioms))


def morleyize_theory(t: Theory, closure: FormulaClosure | None = None) -> tuple:
    """(MorleySignature, T^a): M^a plus the assertion of P_A for every axiom of t."""
    closure = closure or FormulaClosure.of_theory(t)
    ms, m = morleyize(closure, f"{t.name}_M")
    keys = {canonical(x) for x in closure.members}
    extra = []
    for a in t.axioms:
        names, body = closure.matrix(a)
        if canonical(body) not in keys:
            raise MorleyError(f"axiom outside the closure: {a}")
        extra.append(forall_close(free_vars(body), ms.p(body)))
    return ms, Theory(f"{t.name}_a", ms.signature, m.axioms + tuple(dedup(extra)))


# -- equivalence proofs ------------------------------------------------------------

class _Builder:
    def __init__(self, ms: MorleySignature, theory: Theory):
        self.ms, self.theory = ms, theory
        self.cache = {}

    def cite(self, m, label, p: Proof) -> Proof:
        """Discharge the instance of clause ``label`` of m from the antecedent of p."""
        ax = clauses(m, self.ms)[label]
        try:
            idx = self.theory.axioms.index(ax)
        except ValueError:
            raise MorleyError(f"clause {label} of {m} is not an axiom of the theory") from None
        chain = [ax]
        for v in free_vars(m):
            chain.append(instantiate(chain[-1].body, Var(v)))
        q = p
        for outer, inner, v in reversed(list(zip(chain, chain[1:], free_vars(m)))):
            ante = tuple(f for f in q.ante if f != inner) + (outer,)
            q = infer("forall_l", ante, q.succ, [q], outer, term=Var(v))
        leaf = theory_leaf((), (ax,), self.theory, idx)
        return infer("cut", tuple(f for f in q.ante if f != ax), q.succ, [leaf, q], cut=ax)

    def arrow(self, m, label) -> Proof:
        """X |- Y from the implication clause X -> Y of m."""
        imp = instantiate_all(clauses(m, self.ms)[label], free_vars(m))
        x, y = imp.left, imp.right
        mp = infer("imp_l", (x, imp), (y,), [identity(x), identity(y)], imp)
        return self.cite(m, label, mp)

    @staticmethod
    def chain(p: Proof, q: Proof) -> Proof:
        """Cut p: G |- X against q: X, H |- D."""
        x = p.succ[0]
        ante = dedup(p.ante + tuple(f for f in q.ante if f != x))
        return infer("cut", ante, q.succ, [p, q], cut=x)

    def clash(self, m) -> Proof:
        """P_m, N_m |- (from clause 1)."""
        pa, na = self.ms.p(m), self.ms.n(m)
        conj = And(pa, na)
        both = infer("and_r", (pa, na), (conj,), [axiom((pa, na), (pa,)), axiom((pa, na), (na,))], conj)
        neg = infer("neg_l", (pa, na, Not(conj)), (), [both], Not(conj))
        return self.cite(m, "1", neg)

    def excludes(self, m) -> Proof:
        """N_m, m |- ."""
        return self.chain(self.fwd(m), self.clash(m))

    def from_neg(self, m) -> Proof:
        """~m |- N_m (from clause 2)."""
        pa, na, nm = self.ms.p(m), self.ms.n(m), Not(m)
        left = infer("neg_l", (pa, nm), (na,), [self.bwd(m)], nm)
        right = axiom((na, nm), (na,))
        split = infer("or_l", (Or(pa, na), nm), (na,), [left, right], Or(pa, na))
        return self.cite(m, "2", split)

    def fwd(self, m) -> Proof:
        return self._get("fwd", m)

    def bwd(self, m) -> Proof:
        return self._get("bwd", m)

    def _get(self, way, m):
        key = (way, canonical(m))
        if key not in self.cache:
            self.cache[key] = getattr(self, f"_{way}")(m)
        return self.cache[key]

    def _fwd(self, m) -> Proof:
        ms = self.ms
        pa = ms.p(m)
        match m:
            case Atom():
                return self.arrow(m, "3b")
            case And(b, c):
                pb, pc = ms.p(b), ms.p(c)
                l = infer("and_l1", (m,), (pb,), [self.fwd(b)], m)
                r = infer("and_l2", (m,), (pc,), [self.fwd(c)], m)
                return self.chain(infer("and_r", (m,), (And(pb, pc),), [l, r], And(pb, pc)),
                                  self.arrow(m, "4b"))
            case Or(b, c):
                d = Or(ms.p(b), ms.p(c))
                l = infer("or_r1", (b,), (d,), [self.fwd(b)], d)
                r = infer("or_r2", (c,), (d,), [self.fwd(c)], d)
                return self.chain(infer("or_l", (m,), (d,), [l, r], m), self.arrow(m, "5b"))
            case Not(b):
                return self.chain(self.from_neg(b), self.arrow(m, "6b"))
            case Imp(b, c):
                pb, nb, pc = ms.p(b), ms.n(b), ms.p(c)
                d = Or(nb, pc)
                mp = infer("imp_l", (pb, m), (pc,), [self.bwd(b), self.fwd(c)], m)
                yes = infer("or_r2", (pb, m), (d,), [mp], d)
                no = infer("or_r1", (nb, m), (d,), [axiom((nb, m), (nb,))], d)
                split = infer("or_l", (Or(pb, nb), m), (d,), [yes, no], Or(pb, nb))
                return self.chain(self.cite(b, "2", split), self.arrow(m, "7b"))
            case Exists():
                w, body = ms.closure.opened(m)
                d = exists(w, ms.p(body))
                intro = infer("exists_r", (body,), (d,), [self.fwd(body)], d, term=Var(w))
                return self.chain(infer("exists_l", (m,), (d,), [intro], m, eigenvar=w),
                                  self.arrow(m, "8b"))
            case Forall():
                w, body = ms.closure.opened(m)
                na, nb = ms.n(m), ms.n(body)
                d = exists(w, nb)
                inst = infer("forall_l", (nb, m), (), [self.excludes(body)], m, term=Var(w))
                gone = infer("exists_l", (d, m), (), [inst], d, eigenvar=w)
                no = weaken(self.chain(self.arrow(m, "9a"), gone), (na, m), (pa,))
                yes = axiom((pa, m), (pa,))
                split = infer("or_l", (Or(pa, na), m), (pa,), [yes, no], Or(pa, na))
                return self.cite(m, "2", split)
        raise MorleyError(f"unsupported member {m}")

    def _bwd(self, m) -> Proof:
        ms = self.ms
        pa = ms.p(m)
        match m:
            case Atom():
                return self.arrow(m, "3a")
            case And(b, c):
                d = And(ms.p(b), ms.p(c))
                l = infer("and_l1", (d,), (b,), [self.bwd(b)], d)
                r = infer("and_l2", (d,), (c,), [self.bwd(c)], d)
                return self.chain(self.arrow(m, "4a"), infer("and_r", (d,), (m,), [l, r], m))
            case Or(b, c):
                d = Or(ms.p(b), ms.p(c))
                l = infer("or_r1", (ms.p(b),), (m,), [self.bwd(b)], m)
                r = infer("or_r2", (ms.p(c),), (m,), [self.bwd(c)], m)
                return self.chain(self.arrow(m, "5a"), infer("or_l", (d,), (m,), [l, r], d))
            case Not(b):
                nb = ms.n(b)
                intro = infer("neg_r", (nb,), (m,), [self.excludes(b)], m)
                return self.chain(self.arrow(m, "6a"), intro)
            case Imp(b, c):
                nb, pc = ms.n(b), ms.p(c)
                d = Or(nb, pc)
                no = weaken(self.excludes(b), (nb, b), (c,))
                yes = weaken(self.bwd(c), (pc, b), (c,))
                split = infer("or_l", (d, b), (c,), [no, yes], d)
                return self.chain(self.arrow(m, "7a"), infer("imp_r", (d,), (m,), [split], m))
            case Exists():
                w, body = ms.closure.opened(m)
                pb = ms.p(body)
                d = exists(w, pb)
                intro = infer("exists_r", (pb,), (m,), [self.bwd(body)], m, term=Var(w))
                return self.chain(self.arrow(m, "8a"),
                                  infer("exists_l", (d,), (m,), [intro], d, eigenvar=w))
            case Forall():
                w, body = ms.closure.opened(m)
                pb, nb, na = ms.p(body), ms.n(body), ms.n(m)
                up = infer("exists_r", (nb,), (exists(w, nb),), [axiom((nb,), (nb,))],
                           exists(w, nb), term=Var(w))
                to_na = self.chain(up, self.arrow(m, "9b"))           # N_B(w) |- N_A
                absurd = weaken(self.chain(to_na, self.clash(m)), (pa, nb), (body,))
                yes = weaken(self.bwd(body), (pa, pb), (body,))
                split = infer("or_l", (pa, Or(pb, nb)), (body,), [yes, absurd], Or(pb, nb))
                inst = self.cite(body, "2", split)
                return infer("forall_r", (pa,), (m,), [inst], m, eigenvar=w)
        raise MorleyError(f"unsupported member {m}")


def instantiate_all(f: Formula, names) -> Formula:
    for v in names:
        f = instantiate(f.body, Var(v))
    return f


def equivalence_proof(a: Formula, ms: MorleySignature, theory: Theory) -> tuple:
    """Intuitionistic proofs over ``theory`` of A |- P_A and P_A |- A."""
    if canonical(a) not in ms.positive:
        raise MorleyError(f"formula outside the closure: {a}")
    b = _Builder(ms, theory)
    return b.fwd(a), b.bwd(a)


# -- moving a classical proof into the Morleyized theory ---------------------------

def transport(p: Proof, t: Theory, ms: MorleySignature, ta: Theory, goal: Formula) -> tuple:
    """Classical proof over T^a of |- forall P_goal from a proof over t of |- goal.

    Returns (goal formula over T^a, proof).
    """
    check(p, t)
    if p.ante or set(p.succ) != {goal}:
        raise MorleyError("proof must end in |- goal")
    closure = ms.closure
    builder = _Builder(ms, ta)
    derived = {}
    for i, a in enumerate(t.axioms):
        names, body = closure.matrix(a)
        asserted = forall_close(free_vars(body), ms.p(body))
        leaf = theory_leaf((), (asserted,), ta, ta.axioms.index(asserted))
        inst = instantiate_all(asserted, free_vars(body))
        pick = identity(inst)
        chain = [asserted]
        for v in free_vars(body):
            chain.append(instantiate(chain[-1].body, Var(v)))
        for outer, inner, v in reversed(list(zip(chain, chain[1:], free_vars(body)))):
            pick = infer("forall_l", tuple(f for f in pick.ante if f != inner) + (outer,),
                         pick.succ, [pick], outer, term=Var(v))
        have = infer("cut", (), (inst,), [leaf, pick], cut=asserted) if free_vars(body) else leaf
        proof = _Builder.chain(have, builder.bwd(body))          # |- body
        for k in reversed(range(len(names))):
            formula = forall_close(names[k:], body)
            proof = infer("forall_r", (), (formula,), [proof], formula, eigenvar=names[k])
        derived[i] = proof

    def go(node):
        if node.rule.name == "theory":
            return weaken(derived[node.rule.axiom], node.ante, node.succ)
        return relabel(node, node.ante, node.succ, [go(q) for q in node.premises])

    body = go(p)
    final = _Builder.chain(body, builder.fwd(goal))
    target = forall_close(free_vars(goal), ms.p(goal))
    for k in reversed(range(len(free_vars(goal)))):
        formula = forall_close(free_vars(goal)[k:], ms.p(goal))
        final = infer("forall_r", (), (formula,), [final], formula, eigenvar=free_vars(goal)[k])
    return target, final

