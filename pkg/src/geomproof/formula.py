"""Terms and infinitary formulas in locally nameless form.

Free variables are names; bound variables are de Bruijn indices counted
from the innermost binder.  Binders keep a name hint for printing only, so
two formulas that differ only in hints compare equal.

Infinitary conjunctions and disjunctions carry a finite, ordered,
duplicate-free tuple of members.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Union


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class BVar:
    index: int


@dataclass(frozen=True, slots=True)
class Const:
    name: str


@dataclass(frozen=True, slots=True)
class App:
    fn: str
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError(f"application of {self.fn} needs arguments")


Term = Union[Var, BVar, Const, App]


# -- formulas ----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Atom:
    rel: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    body: "Formula"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class Exists:
    body: "Formula"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class BigAnd:
    members: tuple

    def __post_init__(self):
        _check_members(self.members)


@dataclass(frozen=True, slots=True)
class BigOr:
    members: tuple

    def __post_init__(self):
        _check_members(self.members)


Formula = Union[Atom, Not, And, Or, Imp, Forall, Exists, BigAnd, BigOr]
BINARY = (And, Or, Imp)
QUANT = (Forall, Exists)
BIG = (BigAnd, BigOr)


def _check_members(members):
    if not isinstance(members, tuple):
        raise TypeError("members must be a tuple")
    if len(set(members)) != len(members):
        raise ValueError("duplicate members in infinitary connective")


def eq(s: Term, t: Term) -> Atom:
    return Atom("=", (s, t))


class _EmptyDisjunction:
    """Marker for the disjunction of no formulas (an empty succedent)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"


EMPTY = _EmptyDisjunction()


def dedup(fs: Iterable) -> tuple:
    seen, out = set(), []
    for f in fs:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return tuple(out)


def big_or(fs: Iterable):
    """Disjunction of ``fs`` with duplicates removed.

    The empty sequence maps to :data:`EMPTY`; a singleton stays a literal
    one-member disjunction.
    """
    members = dedup(fs)
    if not members:
        return EMPTY
    return BigOr(members)


def big_and(fs: Iterable) -> BigAnd:
    return BigAnd(dedup(fs))


def succedent_of(d) -> tuple:
    """Render a disjunction (or EMPTY) as a succedent."""
    return () if d is EMPTY else (d,)


# -- signatures ---------------------------------------------------------------

class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    constants: frozenset = frozenset()
    functions: tuple = ()   # ((name, arity), ...)
    relations: tuple = ()   # ((name, arity), ...)
    equality: bool = True

    def __post_init__(self):
        names = list(self.constants) + [n for n, _ in self.functions] + [n for n, _ in self.relations]
        if len(names) != len(set(names)):
            raise SignatureError("symbol declared twice")
        if any(a < 1 for _, a in self.functions):
            raise SignatureError("function arity must be positive")
        if any(a < 0 for _, a in self.relations):
            raise SignatureError("negative relation arity")

    @property
    def function_arity(self) -> dict:
        return dict(self.functions)

    @property
    def relation_arity(self) -> dict:
        return dict(self.relations)

    def extend(self, constants=(), functions=(), relations=()) -> "Signature":
        return Signature(
            frozenset(self.constants) | frozenset(constants),
            tuple(sorted(set(self.functions) | set(functions))),
            tuple(sorted(set(self.relations) | set(relations))),
            self.equality,
        )

    def check_term(self, t: Term) -> None:
        match t:
            case Const(name):
                if name not in self.constants and not name.isdigit():
                    raise SignatureError(f"undeclared constant {name}")
            case App(fn, args):
                arity = self.function_arity.get(fn)
                if arity is None:
                    raise SignatureError(f"undeclared function {fn}")
                if arity != len(args):
                    raise SignatureError(f"{fn} expects {arity} arguments, got {len(args)}")
                for a in args:
                    self.check_term(a)

    def check(self, f: "Formula") -> None:
        for node in walk(f):
            if isinstance(node, Atom):
                if node.rel == "=":
                    if not self.equality:
                        raise SignatureError("equality not admitted")
                    if len(node.args) != 2:
                        raise SignatureError("equality is binary")
                else:
                    arity = self.relation_arity.get(node.rel)
                    if arity is None:
                        raise SignatureError(f"undeclared relation {node.rel}")
                    if arity != len(node.args):
                        raise SignatureError(
                            f"{node.rel} expects {arity} arguments, got {len(node.args)}")
                for a in node.args:
                    self.check_term(a)


# -- traversal ------------------------------------------------------------------

def children(f: Formula) -> tuple:
    match f:
        case Atom():
            return ()
        case Not(b) | Forall(b) | Exists(b):
            return (b,)
        case And(l, r) | Or(l, r) | Imp(l, r):
            return (l, r)
        case BigAnd(ms) | BigOr(ms):
            return ms
    raise TypeError(f"not a formula: {f!r}")


def walk(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from walk(c)


def rebuild(f: Formula, kids: tuple) -> Formula:
    match f:
        case Atom():
            return f
        case Not():
            return Not(kids[0])
        case Forall(_, name):
            return Forall(kids[0], name)
        case Exists(_, name):
            return Exists(kids[0], name)
        case And():
            return And(*kids)
        case Or():
            return Or(*kids)
        case Imp():
            return Imp(*kids)
        case BigAnd():
            return BigAnd(dedup(kids))
        case BigOr():
            return BigOr(dedup(kids))
    raise TypeError(f"not a formula: {f!r}")


def map_terms(f: Formula, fn: Callable[[Term, int], Term], depth: int = 0) -> Formula:
    """Apply ``fn(term, binder_depth)`` to every top-level term of every atom."""
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(fn(t, depth) for t in f.args))
    inner = depth + 1 if isinstance(f, QUANT) else depth
    return rebuild(f, tuple(map_terms(c, fn, inner) for c in children(f)))


def _term_map(t: Term, leaf: Callable[[Term], Term]) -> Term:
    if isinstance(t, App):
        return App(t.fn, tuple(_term_map(a, leaf) for a in t.args))
    return leaf(t)


def term_vars(t: Term) -> Iterator[str]:
    match t:
        case Var(name):
            yield name
        case App(_, args):
            for a in args:
                yield from term_vars(a)


def term_locally_closed(t: Term, depth: int = 0) -> bool:
    match t:
        case BVar(i):
            return i < depth
        case App(_, args):
            return all(term_locally_closed(a, depth) for a in args)
    return True


def term_subst(t: Term, name: str, s: Term) -> Term:
    return _term_map(t, lambda x: s if x == Var(name) else x)


# -- binders ----------------------------------------------------------------

def instantiate(body: Formula, t: Term) -> Formula:
    """Replace the loose index 0 of a binder body by the closed term ``t``."""
    def fn(term, depth):
        return _term_map(term, lambda x: t if x == BVar(depth) else x)
    return map_terms(body, fn)


def abstract(f: Formula, name: str) -> Formula:
    """Turn free variable ``name`` into the loose index 0 (inverse of instantiate)."""
    def fn(term, depth):
        return _term_map(term, lambda x: BVar(depth) if x == Var(name) else x)
    return map_terms(f, fn)


def forall(name: str, body: Formula) -> Forall:
    return Forall(abstract(body, name), name)


def exists(name: str, body: Formula) -> Exists:
    return Exists(abstract(body, name), name)


def forall_close(names: Iterable[str], body: Formula) -> Formula:
    for n in reversed(tuple(names)):
        body = forall(n, body)
    return body


def substitute(f: Formula, a: str, t: Term, signature: Signature | None = None) -> Formula:
    """Replace every free occurrence of variable ``a`` by ``t``.

    Bound variables are indices, so there is nothing to capture.
    """
    if signature is not None:
        signature.check_term(t)
    if not term_locally_closed(t):
        raise ValueError("substituted term has loose bound variables")
    if a not in free_vars(f):
        return f
    return map_terms(f, lambda term, _d: term_subst(term, a, t))


@lru_cache(maxsize=200_000)
def free_vars(f: Formula) -> tuple:
    """Free variable names in order of first occurrence."""
    if isinstance(f, Atom):
        return dedup(v for t in f.args for v in term_vars(t))
    return dedup(v for c in children(f) for v in free_vars(c))


@lru_cache(maxsize=200_000)
def locally_closed(f: Formula, depth: int = 0) -> bool:
    if isinstance(f, Atom):
        return all(term_locally_closed(t, depth) for t in f.args)
    inner = depth + 1 if isinstance(f, QUANT) else depth
    return all(locally_closed(c, inner) for c in children(f))


def constants_of(f: Formula) -> set:
    out = set()

    def visit(t):
        match t:
            case Const(n):
                out.add(n)
            case App(_, args):
                for a in args:
                    visit(a)

    for node in walk(f):
        if isinstance(node, Atom):
            for t in node.args:
                visit(t)
    return out


def is_first_order(f: Formula) -> bool:
    return not any(isinstance(g, BIG) for g in walk(f))


# -- rank ---------------------------------------------------------------------

@lru_cache(maxsize=200_000)
def rank(f: Formula) -> int:
    """Structural rank: atoms 0, every connective one above its tallest part.

    Terms never contribute, so instances of a quantifier body share its rank.
    """
    kids = children(f)
    if not kids:
        return 0 if isinstance(f, Atom) else 1
    return max(rank(c) for c in kids) + 1


# -- geometric classes -----------------------------------------------------

class GeomClass(enum.Enum):
    GEOMETRIC_FORMULA = "geometric-formula"
    INF_GEOMETRIC_FORMULA = "inf-geometric-formula"
    GEOMETRIC_IMPLICATION = "geometric-implication"
    INF_GEOMETRIC_IMPLICATION = "inf-geometric-implication"
    NONE = "none"

    def __str__(self):
        return self.value


@lru_cache(maxsize=100_000)
def is_geometric(f: Formula) -> bool:
    match f:
        case Atom():
            return True
        case And(l, r) | Or(l, r):
            return is_geometric(l) and is_geometric(r)
        case Exists(b):
            return is_geometric(b)
    return False


@lru_cache(maxsize=100_000)
def is_inf_geometric(f: Formula) -> bool:
    match f:
        case Atom():
            return True
        case And(l, r) | Or(l, r):
            return is_inf_geometric(l) and is_inf_geometric(r)
        case Exists(b):
            return is_inf_geometric(b)
        case BigOr(ms):
            return all(is_inf_geometric(m) for m in ms)
    return False


def strip_foralls(f: Formula) -> Formula:
    while isinstance(f, Forall):
        f = f.body
    return f


def is_geometric_implication(f: Formula) -> bool:
    m = strip_foralls(f)
    match m:
        case Not(a):
            return is_geometric(a)
        case Imp(a, b):
            return is_geometric(a) and is_geometric(b)
    return is_geometric(m)


@lru_cache(maxsize=100_000)
def is_inf_geometric_implication(f: Formula) -> bool:
    match f:
        case Not(a):
            return is_inf_geometric(a)
        case Imp(a, b):
            return is_inf_geometric(a) and is_inf_geometric(b)
        case Forall(b):
            return is_inf_geometric_implication(b)
        case BigAnd(ms):
            return all(is_inf_geometric_implication(m) for m in ms)
    return is_inf_geometric(f)


def labels(f: Formula) -> frozenset:
    """Every class ``f`` belongs to (NONE only when it belongs to none)."""
    out = set()
    if is_geometric(f):
        out.add(GeomClass.GEOMETRIC_FORMULA)
    if is_inf_geometric(f):
        out.add(GeomClass.INF_GEOMETRIC_FORMULA)
    if is_geometric_implication(f):
        out.add(GeomClass.GEOMETRIC_IMPLICATION)
    if is_inf_geometric_implication(f):
        out.add(GeomClass.INF_GEOMETRIC_IMPLICATION)
    return frozenset(out) or frozenset({GeomClass.NONE})


_SPECIFICITY = list(GeomClass)


def classify(f: Formula) -> GeomClass:
    """The most specific geometric class of ``f``."""
    return min(labels(f), key=_SPECIFICITY.index)
