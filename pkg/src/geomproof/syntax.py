"""Text syntax for formulas, theories, proofs and ordinal lists.

Formula grammar, loosest to tightest::

    formula := unary_or_binary ('->' formula)?          right associative
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '~' unary | ('forall' | 'exists') ident+ '.' formula | primary
    primary := '(' formula ')' | '/\\{' items '}' | '\\/{' items '}' | atom | term '=' term

A quantifier body extends as far right as possible.  An identifier is a
constant when the signature declares it (or it is all digits), a bound
variable when a binder is in scope, and a free variable otherwise.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .calculus import Proof, Rule, Sequent, Theory
from .formula import (
    App, Atom, BVar, BigAnd, BigOr, Const, Exists, Forall, Imp, Not, And, Or, Signature,
    Var, abstract, free_vars,
)
from .ordinal import Ordinal, parse_ordinal, to_text as ordinal_text


class ParseError(ValueError):
    def __init__(self, msg, line=1, col=1):
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {msg}")


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<arrow>->|→)
  | (?P<bigand>/\\|⋀)
  | (?P<bigor>\\/|⋁)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>[0-9]+)
  | (?P<sym>[~¬&∧|∨().,;{}=∀∃])
""", re.VERBOSE)

_ALIASES = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "⋀": "/\\", "⋁": "\\/",
            "∀": "forall", "∃": "exists"}
KEYWORDS = ("forall", "exists")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokens(text: str, line0: int = 1) -> list:
    out, pos, line, col = [], 0, line0, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind, s = m.lastgroup, m.group()
        if kind != "ws":
            s = _ALIASES.get(s, s)
            if kind == "sym" and s in ("forall", "exists"):
                kind = "ident"
            if kind == "sym" and s in ("->", "/\\", "\\/"):
                kind = {"->": "arrow", "/\\": "bigand", "\\/": "bigor"}[s]
            out.append(_Tok(kind, s, line, col))
        for ch in m.group():
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(_Tok("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text, signature: Signature | None, line0=1):
        self.toks = _tokens(text, line0)
        self.i = 0
        self.constants = set(signature.constants) if signature else set()

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, msg):
        t = self.tok
        raise ParseError(msg, t.line, t.col)

    def take(self, text=None, kind=None):
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = text or {"ident": "an identifier"}.get(kind, kind)
            self.fail(f"expected {want!r}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def at(self, text):
        return self.tok.text == text and self.tok.kind != "eof"

    def done(self):
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")

    # formulas
    def formula(self, env):
        left = self.disj(env)
        if self.tok.kind == "arrow":
            self.i += 1
            return Imp(left, self.formula(env))
        return left

    def disj(self, env):
        f = self.conj(env)
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conj(env))
        return f

    def conj(self, env):
        f = self.unary(env)
        while self.at("&"):
            self.i += 1
            f = And(f, self.unary(env))
        return f

    def unary(self, env):
        if self.at("~"):
            self.i += 1
            return Not(self.unary(env))
        if self.tok.kind == "ident" and self.tok.text in KEYWORDS:
            kind = self.take().text
            names = [self.take(kind="ident").text]
            while self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
                names.append(self.take().text)
            for n in names:
                if n in KEYWORDS:
                    self.fail("keyword used as a variable")
            self.take(".")
            body = self.formula(env + names)
            for n in reversed(names):
                body = (Forall if kind == "forall" else Exists)(body, n)
            return body
        return self.primary(env)

    def items(self, env):
        self.take("{")
        out = []
        if not self.at("}"):
            out.append(self.formula(env))
            while self.at(";"):
                self.i += 1
                out.append(self.formula(env))
        self.take("}")
        if len(set(out)) != len(out):
            self.fail("duplicate member in a big connective")
        return tuple(out)

    def primary(self, env):
        t = self.tok
        if t.text == "(":
            self.i += 1
            f = self.formula(env)
            self.take(")")
            return f
        if t.kind == "bigand":
            self.i += 1
            return BigAnd(self.items(env))
        if t.kind == "bigor":
            self.i += 1
            return BigOr(self.items(env))
        if t.kind == "num":
            left = self.term(env)
            self.take("=")
            return Atom("=", (left, self.term(env)))
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail(f"expected a formula, found {t.text or 'end of input'!r}")
        name = self.take().text
        args = None
        if self.at("("):
            args = self.arguments(env)
        if self.at("="):
            self.i += 1
            left = self._head(name, args, env)
            return Atom("=", (left, self.term(env)))
        return Atom(name, tuple(args or ()))

    def arguments(self, env):
        self.take("(")
        args = []
        if not self.at(")"):
            args.append(self.term(env))
            while self.at(","):
                self.i += 1
                args.append(self.term(env))
        self.take(")")
        return args

    def _head(self, name, args, env):
        if args is not None:
            if not args:
                self.fail(f"function {name} applied to no arguments")
            return App(name, tuple(args))
        if name in env:
            return BVar(len(env) - 1 - max(i for i, n in enumerate(env) if n == name))
        if name in self.constants or name.isdigit():
            return Const(name)
        return Var(name)

    def term(self, env):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Const(t.text)
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail(f"expected a term, found {t.text or 'end of input'!r}")
        name = self.take().text
        args = self.arguments(env) if self.at("(") else None
        return self._head(name, args, env)


def parse_formula(text: str, signature: Signature | None = None, *, line: int = 1):
    p = _Parser(text, signature, line)
    f = p.formula([])
    p.done()
    if signature is not None:
        signature.check(f)
    return f


def parse_term(text: str, signature: Signature | None = None):
    p = _Parser(text, signature)
    t = p.term([])
    p.done()
    return t


# -- printing -------------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}


def _prec(f) -> int:
    if isinstance(f, (Forall, Exists)):
        return 0
    return _PREC.get(type(f), 4)


def term_text(t, env=()) -> str:
    match t:
        case Var(n) | Const(n):
            return n
        case BVar(i):
            if i >= len(env):
                raise ValueError("loose bound variable")
            return env[len(env) - 1 - i]
        case App(fn, args):
            return f"{fn}(" + ",".join(term_text(a, env) for a in args) + ")"
    raise TypeError(t)


def formula_text(f, signature: Signature | None = None) -> str:
    avoid = set(free_vars(f)) | (set(signature.constants) if signature else set())
    return _show(f, [], avoid)


def _show(f, env, avoid) -> str:
    match f:
        case Atom("=", (a, b)):
            return f"{term_text(a, env)} = {term_text(b, env)}"
        case Atom(rel, ()):
            return rel
        case Atom(rel, args):
            return f"{rel}(" + ",".join(term_text(a, env) for a in args) + ")"
        case Not(b):
            inner = _show(b, env, avoid)
            return "~" + (f"({inner})" if _prec(b) < 4 else inner)
        case And(l, r) | Or(l, r):
            p = _prec(f)
            op = " & " if isinstance(f, And) else " | "
            return _wrap(l, env, avoid, _prec(l) < p) + op + _wrap(r, env, avoid, _prec(r) <= p)
        case Imp(l, r):
            return _wrap(l, env, avoid, _prec(l) <= 1) + " -> " + _wrap(r, env, avoid, _prec(r) < 1)
        case Forall(b, name) | Exists(b, name):
            word = "forall" if isinstance(f, Forall) else "exists"
            name = _fresh(name or "x", avoid | set(env))
            return f"{word} {name}. " + _show(b, env + [name], avoid)
        case BigAnd(ms) | BigOr(ms):
            op = "/\\" if isinstance(f, BigAnd) else "\\/"
            return op + "{" + "; ".join(_show(m, env, avoid) for m in ms) + "}"
    raise TypeError(f)


def _wrap(f, env, avoid, paren):
    s = _show(f, env, avoid)
    return f"({s})" if paren else s


def _fresh(name, taken):
    if name not in taken and name not in KEYWORDS:
        return name
    k = 1
    while f"{name}{k}" in taken:
        k += 1
    return f"{name}{k}"


# -- theories -------------------------------------------------------------------

def _arity_list(items, line_no, kind):
    out = []
    for item in items:
        name, sep, n = item.partition("/")
        if not sep or not n.isdigit() or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
            raise ParseError(f"bad {kind} declaration {item!r}", line_no, 1)
        out.append((name, int(n)))
    return out


def parse_theory(text: str) -> Theory:
    """Line-based theory file: declarations first, then one axiom per line."""
    name, consts, funcs, rels, equality = None, [], [], [], False
    axioms = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        match head:
            case "theory":
                name = rest
            case "constants":
                consts += rest.split()
            case "functions":
                funcs += _arity_list(rest.split(), no, "function")
            case "relations":
                rels += _arity_list(rest.split(), no, "relation")
            case "equality":
                equality = True
            case "axiom":
                axioms.append((no, rest, raw.index("axiom") + 7))
            case _:
                raise ParseError(f"unknown directive {head!r}", no, 1)
    if name is None:
        raise ParseError("missing 'theory NAME' line")
    try:
        sig = Signature(frozenset(consts), tuple(funcs), tuple(rels), equality)
    except ValueError as e:
        raise ParseError(str(e)) from None
    parsed = []
    for no, src, col in axioms:
        try:
            parsed.append(parse_formula(src, sig, line=no))
        except ParseError as e:
            raise ParseError(str(e).split(": ", 1)[1], e.line, e.col + col - 1) from None
        except ValueError as e:
            raise ParseError(str(e), no, col) from None
    try:
        return Theory(name, sig, tuple(parsed))
    except ValueError as e:
        raise ParseError(str(e)) from None


def _sig_lines(sig: Signature) -> list:
    out = []
    if sig.constants:
        out.append("constants " + " ".join(sorted(sig.constants)))
    if sig.functions:
        out.append("functions " + " ".join(f"{n}/{k}" for n, k in sig.functions))
    if sig.relations:
        out.append("relations " + " ".join(f"{n}/{k}" for n, k in sig.relations))
    if sig.equality:
        out.append("equality")
    return out


def theory_text(t: Theory) -> str:
    lines = [f"theory {t.name}"] + _sig_lines(t.signature)
    lines += ["axiom " + formula_text(a, t.signature) for a in t.axioms]
    return "\n".join(lines) + "\n"


# -- proofs -------------------------------------------------------------------------

RULE_FIELDS = ("pos", "pos2", "minors", "member", "term", "eigenvar", "axiom")


def signature_to_json(sig: Signature) -> dict:
    return {
        "constants": sorted(sig.constants),
        "functions": [[n, k] for n, k in sig.functions],
        "relations": [[n, k] for n, k in sig.relations],
        "equality": sig.equality,
    }


def signature_from_json(d: dict) -> Signature:
    return Signature(frozenset(d.get("constants", [])),
                     tuple((n, k) for n, k in d.get("functions", [])),
                     tuple((n, k) for n, k in d.get("relations", [])),
                     bool(d.get("equality", False)))


def proof_to_json(p: Proof, sig: Signature) -> dict:
    """JSON tree for ``p``; every formula must belong to ``sig``."""
    for f in p.conclusion.formulas():
        sig.check(f)
    r = p.rule
    rule = {"name": r.name}
    for k in RULE_FIELDS:
        v = getattr(r, k)
        if v is None or (k == "minors" and not v):
            continue
        if k == "minors":
            v = [list(m) for m in v]
        elif k == "term":
            v = term_text(v)
        rule[k] = v
    return {
        "sequent": [[formula_text(f, sig) for f in p.ante], [formula_text(f, sig) for f in p.succ]],
        "rule": rule,
        "premises": [proof_to_json(q, sig) for q in p.premises],
    }


def proof_from_json(d: dict, sig: Signature) -> Proof:
    try:
        ante, succ = d["sequent"]
        r = dict(d["rule"])
        name = r.pop("name")
        unknown = set(r) - set(RULE_FIELDS)
        if unknown:
            raise ParseError(f"unknown rule fields {sorted(unknown)}")
        if "minors" in r:
            r["minors"] = tuple(tuple(m) for m in r["minors"])
        if "term" in r:
            r["term"] = parse_term(r["term"], sig)
        seq = Sequent(tuple(parse_formula(s, sig) for s in ante),
                      tuple(parse_formula(s, sig) for s in succ))
        prems = tuple(proof_from_json(q, sig) for q in d.get("premises", []))
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed proof node: {e}") from None
    return Proof(seq, Rule(name, **r), prems)


def dump_json(doc) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def proof_document(p: Proof, sig: Signature, theory: str | None = None, **extra) -> dict:
    doc = {"signature": signature_to_json(sig)}
    if theory:
        doc["theory"] = theory
    doc["proof"] = proof_to_json(p, sig)
    doc.update(extra)
    return doc


def print_proof(p: Proof, sig: Signature, theory: str | None = None) -> str:
    return dump_json(proof_document(p, sig, theory))


def parse_proof(text: str) -> tuple:
    """(proof, signature, theory name or None) from a proof document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict) or "proof" not in doc:
        raise ParseError("a proof document needs a 'proof' field")
    sig = signature_from_json(doc.get("signature", {}))
    return proof_from_json(doc["proof"], sig), sig, doc.get("theory")


# -- ordinals -------------------------------------------------------------------------

def parse_ordinals(text: str) -> list:
    """One ordinal expression per line; blank lines and ``//`` comments skipped."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        try:
            out.append(parse_ordinal(line))
        except ValueError as e:
            raise ParseError(str(e), no, 1) from None
    return out


def ordinals_text(xs) -> str:
    return "".join(ordinal_text(x) + "\n" for x in xs)
