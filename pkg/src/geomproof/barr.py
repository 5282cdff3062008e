"""From classical proofs of geometric sequents to intuitionistic ones.

A disjunction ``\\/(Phi, A)`` is handled through :class:`Form`, which keeps
the list of disjuncts together with the way it is rendered: as a literal
big disjunction, as a bare formula (when Phi is empty and A stands alone),
or as the empty succedent.
"""
from __future__ import annotations

from dataclasses import dataclass

from .calculus import (
    Namer, Proof, Theory, all_names, axiom, check, identity, infer, is_cut_free,
    pack_theory, principal_formula, relabel, unpack_theory, height,
)
from .formula import (
    EMPTY, And, BigAnd, BigOr, Exists, Forall, Formula, Imp, Not, Or, Var, dedup,
    free_vars, instantiate, is_inf_geometric, is_inf_geometric_implication,
)
from .transform import eliminate_cuts, invert, weaken


class RuleExclusionError(AssertionError):
    """A right rule whose principal formula cannot be geometric was met."""


class BarrError(ValueError):
    pass


@dataclass(frozen=True)
class Form:
    members: tuple
    plain: bool = False     # one disjunct rendered without a wrapper

    @property
    def formula(self):
        if not self.members:
            return EMPTY
        if self.plain:
            return self.members[0]
        return BigOr(self.members)

    @property
    def succ(self) -> tuple:
        f = self.formula
        return () if f is EMPTY else (f,)


def _phi(phi) -> tuple:
    return () if phi is EMPTY else dedup(phi)


def literal(phi) -> Form:
    """The disjunction of phi itself (empty succedent when phi is empty)."""
    return Form(_phi(phi))


def joined(phi, a: Formula) -> Form:
    """\\/(phi, a); just ``a`` when phi is empty."""
    members = _phi(phi)
    return Form(dedup(members + (a,)), plain=not members)


def _into(m: Formula, dst: Form, ante=()) -> Proof:
    """ante, m |- dst for a disjunct m of dst."""
    base = identity(m, ante)
    if dst.plain:
        return base
    return infer("bigor_r", base.ante, dst.succ, [base], dst.formula, member=m)


def retarget(p: Proof, src: Form, dst: Form) -> Proof:
    """Move the succedent of p from src to dst, whose disjuncts include src's."""
    if not set(src.members) <= set(dst.members):
        raise BarrError("target disjunction lacks a disjunct")
    if src.formula == dst.formula:
        return p
    if not src.members:
        return weaken(p, p.ante, dst.succ)
    if src.plain:
        bridge = _into(src.formula, dst)
    else:
        bridge = infer("bigor_l", (src.formula,), dst.succ,
                       [_into(m, dst) for m in src.members], src.formula)
    return infer("cut", p.ante, dst.succ, [p, bridge], cut=src.formula)


def _expect(p: Proof, form: Form, what: str):
    if p.succ != form.succ:
        raise BarrError(f"{what}: expected succedent {form.succ}, got {p.succ}")


# -- helper lemmas ------------------------------------------------------------

def helper_exists(p: Proof, phi, f: Exists, s) -> Proof:
    """From ante |- \\/(phi, F(s)) to ante |- \\/(phi, exists x F)."""
    inst = instantiate(f.body, s)
    src, dst = joined(phi, inst), joined(phi, f)
    _expect(p, src, "helper_exists")
    if src.plain:
        return infer("exists_r", p.ante, (f,), [p], f, term=s)
    prems = []
    for m in src.members:
        if m in dst.members:
            prems.append(_into(m, dst))
        else:
            witness = infer("exists_r", (m,), (f,), [identity(m)], f, term=s)
            prems.append(infer("bigor_r", (m,), dst.succ, [witness], dst.formula, member=f))
    bridge = infer("bigor_l", (src.formula,), dst.succ, prems, src.formula)
    return infer("cut", p.ante, dst.succ, [p, bridge], cut=src.formula)


def helper_conj(p: Proof, q: Proof, phi, b: Formula, c: Formula) -> Proof:
    """From ante |- \\/(phi, B) and ante |- \\/(phi, C) to ante |- \\/(phi, B & C)."""
    fb, fc, dst = joined(phi, b), joined(phi, c), joined(phi, And(b, c))
    _expect(p, fb, "helper_conj")
    _expect(q, fc, "helper_conj")
    ante = dedup(p.ante + q.ante)
    if dst.plain:
        return infer("and_r", ante, dst.succ, [p, q], dst.formula)

    def pair():   # B, C |- B & C
        return infer("and_r", (b, c), (And(b, c),),
                     [identity(b, (c,)), identity(c, (b,))], And(b, c))

    # B, \/(phi, C) |- dst
    inner = []
    for m in fc.members:
        if m in dst.members:
            inner.append(_into(m, dst, (b,)))
        else:
            inner.append(infer("bigor_r", (b, c), dst.succ, [pair()], dst.formula, member=And(b, c)))
    left = infer("bigor_l", (b, fc.formula), dst.succ, inner, fc.formula)
    # \/(phi, B), \/(phi, C) |- dst
    outer = []
    for m in fb.members:
        if m in dst.members:
            outer.append(_into(m, dst, (fc.formula,)))
        else:
            outer.append(left)
    both = infer("bigor_l", (fb.formula, fc.formula), dst.succ, outer, fb.formula)
    if fb.formula == fc.formula:
        return infer("cut", ante, dst.succ, [p, both], cut=fb.formula)
    first = infer("cut", p.ante + (fc.formula,), dst.succ, [p, both], cut=fb.formula)
    return infer("cut", ante, dst.succ, [q, first], cut=fc.formula)


def helper_neg(p: Proof, phi, a: Formula) -> Proof:
    """From ante |- \\/(phi, A) to ante, ~A |- \\/phi."""
    src, dst = joined(phi, a), literal(phi)
    _expect(p, src, "helper_neg")
    gamma, na = p.ante, Not(a)
    absurd = infer("neg_l", gamma + (a, na), dst.succ, [identity(a, gamma)], na)
    if src.plain:
        return infer("cut", gamma + (na,), dst.succ, [p, absurd], cut=a)
    prems = []
    for m in src.members:
        if m == a:
            prems.append(absurd)
        else:
            base = identity(m, gamma)
            prems.append(infer("bigor_r", gamma + (m, na), dst.succ, [base], dst.formula, member=m))
    split = infer("bigor_l", gamma + (src.formula, na), dst.succ, prems, src.formula)
    return infer("cut", gamma + (na,), dst.succ, [p, split], cut=src.formula)


def helper_impl(p: Proof, q: Proof, phi, a: Formula, b: Formula) -> Proof:
    """From ante, B |- \\/phi and ante |- \\/(phi, A) to ante, A -> B |- \\/phi."""
    src, dst = joined(phi, a), literal(phi)
    _expect(p, dst, "helper_impl")
    _expect(q, src, "helper_impl")
    gamma, imp = q.ante, Imp(a, b)
    if not set(p.ante) <= set(gamma) | {b}:
        raise BarrError("helper_impl: premises have different contexts")
    if src.plain:
        return infer("imp_l", gamma + (imp,), dst.succ, [q, p], imp)
    modus = infer("imp_l", (a,) + gamma + (imp,), dst.succ, [identity(a, gamma), p], imp)
    prems = []
    for m in src.members:
        if m == a:
            prems.append(modus)
        else:
            base = identity(m, gamma)
            prems.append(infer("bigor_r", gamma + (m, imp), dst.succ, [base], dst.formula, member=m))
    split = infer("bigor_l", gamma + (imp, src.formula), dst.succ, prems, src.formula)
    return infer("cut", gamma + (imp,), dst.succ, [q, split], cut=src.formula)


def _lift(p: Proof, phi, a: Formula, wrapped: Formula, wrap) -> Proof:
    """Common shape of the flattening and binary-disjunction helpers."""
    src, dst = joined(phi, a), joined(phi, wrapped)
    _expect(p, src, "helper")
    gamma = p.ante
    if src.plain:
        return wrap(p, gamma)
    prems = []
    for m in src.members:
        if m == a:
            base = wrap(identity(a, gamma), gamma + (a,))
            prems.append(infer("bigor_r", base.ante, dst.succ, [base], dst.formula, member=wrapped))
        else:
            prems.append(_into(m, dst, gamma))
    split = infer("bigor_l", gamma + (src.formula,), dst.succ, prems, src.formula)
    return infer("cut", gamma, dst.succ, [p, split], cut=src.formula)


def helper_flatten(p: Proof, phi, a: Formula, theta) -> Proof:
    """From ante |- \\/(phi, A) with A in theta to ante |- \\/(phi, \\/theta)."""
    theta = BigOr(dedup(theta)) if not isinstance(theta, BigOr) else theta
    if a not in theta.members:
        raise BarrError("helper_flatten: the disjunct is not a member of theta")
    return _lift(p, phi, a, theta, lambda d, ante: infer(
        "bigor_r", ante, (theta,), [d], theta, member=a))


def helper_or(p: Proof, phi, a: Formula, disj: Or) -> Proof:
    """From ante |- \\/(phi, A) to ante |- \\/(phi, A | B) (or B | A)."""
    rule = "or_r1" if disj.left == a else "or_r2"
    if (disj.left if rule == "or_r1" else disj.right) != a:
        raise BarrError("helper_or: not a disjunct")
    return _lift(p, phi, a, disj, lambda d, ante: infer(rule, ante, (disj,), [d], disj))


# -- the core translation -----------------------------------------------------

LEFT_RULES = ("forall_l", "bigand_l", "and_l1", "and_l2", "exists_l", "bigor_l", "or_l")
EXCLUDED = ("forall_r", "bigand_r", "neg_r", "imp_r")


def _check_geometric(ante, succ):
    for f in succ:
        if not is_inf_geometric(f):
            raise BarrError(f"succedent formula is not inf-geometric: {f}")
    for f in ante:
        if not is_inf_geometric_implication(f):
            raise BarrError(f"antecedent formula is not an inf-geometric implication: {f}")


def _translate(node: Proof) -> Proof:
    r = node.rule
    phi = dedup(node.succ)
    here = literal(phi)

    def sub(i):
        prem = node.premises[i]
        return _translate(prem), literal(prem.succ)

    match r.name:
        case "axiom":
            atom = node.ante[r.pos]
            base = axiom(node.ante, (atom,), atom)
            return infer("bigor_r", node.ante, here.succ, [base], here.formula, member=atom)
        case name if name in LEFT_RULES:
            prems = [retarget(d, f, here) for d, f in map(sub, range(len(node.premises)))]
            return relabel(node, node.ante, here.succ, prems)
        case "neg_l":
            a = principal_formula(node).body
            d, f = sub(0)
            out = helper_neg(retarget(d, f, joined(phi, a)), phi, a)
            return weaken(out, node.ante, here.succ)
        case "imp_l":
            imp = principal_formula(node)
            (d0, f0), (d1, f1) = sub(0), sub(1)
            d0 = weaken(retarget(d0, f0, joined(phi, imp.left)), node.ante, joined(phi, imp.left).succ)
            d1 = weaken(retarget(d1, f1, here), node.ante + (imp.right,), here.succ)
            out = helper_impl(d1, d0, phi, imp.left, imp.right)
            return weaken(out, node.ante, here.succ)
        case "exists_r":
            f = principal_formula(node)
            inst = instantiate(f.body, r.term)
            d, src = sub(0)
            return weaken(helper_exists(retarget(d, src, joined(phi, inst)), phi, f, r.term),
                          node.ante, here.succ)
        case "and_r":
            conj = principal_formula(node)
            (d0, f0), (d1, f1) = sub(0), sub(1)
            fb, fc = joined(phi, conj.left), joined(phi, conj.right)
            d0 = weaken(retarget(d0, f0, fb), node.ante, fb.succ)
            d1 = weaken(retarget(d1, f1, fc), node.ante, fc.succ)
            return helper_conj(d0, d1, phi, conj.left, conj.right)
        case "or_r1" | "or_r2":
            disj = principal_formula(node)
            a = disj.left if r.name == "or_r1" else disj.right
            d, src = sub(0)
            return weaken(helper_or(retarget(d, src, joined(phi, a)), phi, a, disj),
                          node.ante, here.succ)
        case "bigor_r":
            theta = principal_formula(node)
            a = theta.members[r.member]
            d, src = sub(0)
            return weaken(helper_flatten(retarget(d, src, joined(phi, a)), phi, a, theta),
                          node.ante, here.succ)
        case name if name in EXCLUDED:
            raise RuleExclusionError(f"{name} met while translating a geometric sequent")
        case "cut":
            raise BarrError("cut met; the input must be cut-free")
        case "theory":
            raise BarrError("theory leaf met; pack the theory first")
    raise BarrError(f"unexpected rule {r.name}")


def to_disjunction(p: Proof, *, simplify: bool = False) -> Proof:
    """Intuitionistic proof of ante |- \\/succ from a cut-free classical one.

    The result ends in the literal disjunction of the deduplicated succedent
    (or an empty succedent).  With ``simplify`` a singleton is collapsed.
    """
    check(p)
    if not is_cut_free(p):
        raise BarrError("input proof contains cuts")
    _check_geometric(p.ante, p.succ)
    out = _translate(p)
    return collapse_singleton(out) if simplify else out


def collapse_singleton(p: Proof) -> Proof:
    """Replace a succedent \\/{A} by A through a bridging cut."""
    if len(p.succ) == 1 and isinstance(p.succ[0], BigOr) and len(p.succ[0].members) == 1:
        m = p.succ[0].members
        return retarget(p, Form(m), Form(m, plain=True))
    return p


simplify = collapse_singleton


# -- the pipeline -----------------------------------------------------------------

@dataclass(frozen=True)
class BarrInput:
    theory: Theory
    goal: Formula
    classical_proof: Proof

    def __post_init__(self):
        for a in self.theory.axioms:
            if not is_inf_geometric_implication(a):
                raise BarrError(f"axiom is not an inf-geometric implication: {a}")
        if not is_inf_geometric_implication(self.goal):
            raise BarrError(f"goal is not an inf-geometric implication: {self.goal}")
        check(self.classical_proof, self.theory)
        c = self.classical_proof.conclusion
        if c.ante or not c.succ or set(c.succ) != {self.goal}:
            raise BarrError("the classical proof does not end in |- goal")


def _goal(p: Proof, g: Formula, namer: Namer) -> Proof:
    """Intuitionistic proof of ante p |- g from a cut-free classical one."""
    gamma = p.ante
    match g:
        case Forall(body):
            a = namer.fresh()
            inst = instantiate(body, Var(a))
            d = _goal(invert("forall_r", p, g, term=Var(a)), inst, namer)
            return infer("forall_r", gamma, (g,), [d], g, eigenvar=a)
        case BigAnd(ms):
            prems = [_goal(invert("bigand_r", p, g, member=m), m, namer) for m in ms]
            return infer("bigand_r", gamma, (g,), prems, g)
        case Not(g0):
            d = to_disjunction(invert("neg_r", p, g))
            return infer("neg_r", gamma, (g,), [d], g)
        case Imp(f0, f1):
            d = to_disjunction(invert("imp_r", p, g))
            d = retarget(d, Form((f1,)), Form((f1,), plain=True))
            return infer("imp_r", gamma, (g,), [d], g)
    d = to_disjunction(weaken(p, gamma, (g,)) if p.succ != (g,) else p)
    return retarget(d, Form((g,)), Form((g,), plain=True))


def translate(inp: BarrInput):
    """Run the pipeline; returns the intuitionistic proof and a stage report."""
    t, g, p = inp.theory, inp.goal, inp.classical_proof
    report = {"input_height": height(p)}
    packed = pack_theory(p, t) if t.axioms else p
    report["packed_height"] = height(packed)
    cut_free, cert = eliminate_cuts(packed)
    report["cut_free_height"] = height(cut_free)
    report["certificate"] = cert.to_dict()
    namer = Namer(all_names(cut_free) | set(free_vars(g)), prefix="_b")
    core = _goal(cut_free, g, namer)
    out = unpack_theory(core, t) if t.axioms else core
    m = check(out, t, intuitionistic=True)
    report["final_height"] = m.height
    report["final_cut_degree"] = m.cut_degree
    return out, report


def barr_translate(inp: BarrInput) -> Proof:
    return translate(inp)[0]
