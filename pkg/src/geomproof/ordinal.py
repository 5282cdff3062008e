"""Ordinal notations below Gamma_0 in Veblen normal form.

An ordinal is a finite non-increasing sum of additive principal terms
``phi(a, b)``, each with a multiplicity.  ``phi(0, b)`` is omega^b, so the
natural number n is the single term ``phi(0, 0)`` taken n times.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cmp_to_key, lru_cache, total_ordering
from typing import Iterable


class NotationOverflow(ArithmeticError):
    """A result would reach Gamma_0, outside the notation system."""


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple = ()   # ((a, b, multiplicity), ...), strictly decreasing principals

    @staticmethod
    def of(n) -> "Ordinal":
        if isinstance(n, Ordinal):
            return n
        if isinstance(n, int) and n >= 0:
            return ZERO if n == 0 else Ordinal(((ZERO, ZERO, n),))
        raise TypeError(f"cannot make an ordinal from {n!r}")

    def __lt__(self, other):
        return compare(self, other) < 0

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_finite(self) -> bool:
        return all(a == ZERO and b == ZERO for a, b, _ in self.terms)

    def __int__(self):
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][2] if self.terms else 0

    def __add__(self, other):
        return add(self, other)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Ordinal({to_text(self)})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, ZERO, 1),))


def _coerce(x) -> Ordinal:
    return x if isinstance(x, Ordinal) else Ordinal.of(x)


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


def principal(a: Ordinal, b: Ordinal) -> Ordinal:
    return Ordinal(((a, b, 1),))


def _cmp_principal(a1, b1, a2, b2) -> int:
    c = compare(a1, a2)
    if c == 0:
        return compare(b1, b2)
    if c < 0:
        # phi(a1, b1) < phi(a2, b2) iff b1 < phi(a2, b2)
        return compare(b1, principal(a2, b2))
    return -compare(b2, principal(a1, b1))


@lru_cache(maxsize=500_000)
def _compare(x: Ordinal, y: Ordinal) -> int:
    for (a1, b1, k1), (a2, b2, k2) in zip(x.terms, y.terms):
        c = _cmp_principal(a1, b1, a2, b2)
        if c:
            return c
        if k1 != k2:
            return _sign(k1 - k2)
    return _sign(len(x.terms) - len(y.terms))


def compare(x, y) -> int:
    """-1, 0 or 1 as ``x`` is less than, equal to or greater than ``y``."""
    x, y = _coerce(x), _coerce(y)
    if x is y:
        return 0
    return _compare(x, y)


def lhd(p: tuple, q: tuple) -> bool:
    """The product order on ordinal pairs driving the double inductions."""
    (a, b), (a2, b2) = p, q
    ca, cb = compare(a, a2), compare(b, b2)
    return (ca == 0 and cb < 0) or (ca < 0 and cb == 0) or (ca < 0 and cb < 0)


def _normalize(terms: Iterable) -> Ordinal:
    merged: list = []
    for t in sorted(terms, key=cmp_to_key(lambda s, u: -_cmp_principal(s[0], s[1], u[0], u[1]))):
        if merged and _cmp_principal(merged[-1][0], merged[-1][1], t[0], t[1]) == 0:
            a, b, k = merged[-1]
            merged[-1] = (a, b, k + t[2])
        else:
            merged.append(tuple(t))
    return Ordinal(tuple(merged))


@lru_cache(maxsize=200_000)
def _nsum(x: Ordinal, y: Ordinal) -> Ordinal:
    return _normalize(x.terms + y.terms)


def natural_sum(*xs) -> Ordinal:
    """Hessenberg sum: merge the principal terms of all arguments."""
    out = ZERO
    for x in xs:
        out = _nsum(out, _coerce(x))
    return out


def add(x, y) -> Ordinal:
    """Ordinary (left-absorbing) ordinal sum."""
    x, y = _coerce(x), _coerce(y)
    if not y.terms:
        return x
    la, lb, lk = y.terms[0]
    kept = []
    for a, b, k in x.terms:
        c = _cmp_principal(a, b, la, lb)
        if c > 0:
            kept.append((a, b, k))
        elif c == 0:
            lk += k
    return Ordinal(tuple(kept) + ((la, lb, lk),) + y.terms[1:])


def successor(x) -> Ordinal:
    return add(x, ONE)


@lru_cache(maxsize=200_000)
def _phi(a: Ordinal, b: Ordinal) -> Ordinal:
    if len(b.terms) == 1 and b.terms[0][2] == 1 and compare(b.terms[0][0], a) > 0:
        return b   # b is already a fixed point of phi(a, .)
    return principal(a, b)


def phi(a, b) -> Ordinal:
    """Two-argument Veblen function on notations."""
    return _phi(_coerce(a), _coerce(b))


def omega_power(b) -> Ordinal:
    return phi(0, b)


OMEGA = phi(0, 1)


# -- closure -----------------------------------------------------------------

@dataclass(frozen=True)
class NSum:
    """The binary natural sum, as a closure generator."""
    arity = 2


@dataclass(frozen=True)
class Phi:
    """The unary function phi(eta, .)."""
    eta: Ordinal
    arity = 1


@dataclass(frozen=True)
class PhiBelow:
    """The family phi(eta, .) for every eta below ``bound``."""
    bound: Ordinal


NSUM = NSum()


def least_index_above(a, x) -> Ordinal:
    """Least delta with phi(a, delta) > x."""
    a, x = _coerce(a), _coerce(x)
    if not x.terms:
        return ZERO
    c, d, _ = x.terms[0]
    rel = compare(c, a)
    if rel == 0:
        return successor(d)
    if rel > 0:
        return successor(principal(c, d))
    return least_index_above(a, d)


def closure(seed: Iterable, fns: Iterable) -> Ordinal:
    """Least ordinal containing 0 and the seeds and closed under ``fns``.

    ``fns`` may mention NSUM, Phi(eta) and PhiBelow(bound).  The individual
    Phi generators must form an initial segment {phi(eta, .) | eta < k};
    other patterns raise NotImplementedError.
    """
    seeds = [_coerce(s) for s in seed]
    top = max(seeds, default=ZERO)
    fns = list(fns)
    has_sum = any(isinstance(f, NSum) for f in fns)
    etas = {_coerce(f.eta) for f in fns if isinstance(f, Phi)}
    bounds = [_coerce(f.bound) for f in fns if isinstance(f, PhiBelow)]
    unknown = [f for f in fns if not isinstance(f, (NSum, Phi, PhiBelow))]
    if unknown:
        raise NotImplementedError(f"unrecognised closure generators {unknown}")
    bound = max(bounds, default=ZERO)
    if etas:
        k = len(etas)
        if etas != {Ordinal.of(i) for i in range(k)}:
            missing = [e for e in etas if compare(e, bound) >= 0]
            if missing:
                raise NotImplementedError("phi generators must form an initial segment")
        bound = max(bound, Ordinal.of(k))
    if not has_sum and not bound:
        return successor(top) if seeds else ONE
    return phi(bound, least_index_above(bound, top))


# -- text syntax ---------------------------------------------------------------

def _term_text(a: Ordinal, b: Ordinal) -> str:
    if a == ZERO and b == ONE:
        return "w"
    return f"phi({to_text(a)},{to_text(b)})"


def to_text(x: Ordinal) -> str:
    if not x.terms:
        return "0"
    parts = []
    for a, b, k in x.terms:
        if a == ZERO and b == ZERO:
            parts.append(str(k))
        else:
            parts.extend([_term_text(a, b)] * k)
    return "+".join(parts)


class OrdinalSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|(phi)|(w)|([()#+,]))")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``0``, naturals, ``w``, ``phi(a,b)``, ``a+b``, ``a#b`` and parentheses.

    ``#`` binds tighter than ``+``; both associate to the left.
    """
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OrdinalSyntaxError(f"unexpected character at column {pos + 1}: {text[pos:pos + 10]!r}")
        tokens.append((m.group(0).strip(), pos + 1))
        pos = m.end()
    tokens = [t for t in tokens if t[0]]
    i = 0

    def peek():
        return tokens[i][0] if i < len(tokens) else None

    def expect(tok):
        nonlocal i
        if peek() != tok:
            col = tokens[i][1] if i < len(tokens) else len(text) + 1
            raise OrdinalSyntaxError(f"expected {tok!r} at column {col}")
        i += 1

    def atom():
        nonlocal i
        tok = peek()
        if tok is None:
            raise OrdinalSyntaxError("unexpected end of ordinal expression")
        if tok.isdigit():
            i += 1
            return Ordinal.of(int(tok))
        if tok == "w":
            i += 1
            return OMEGA
        if tok == "phi":
            i += 1
            expect("(")
            a = expr()
            expect(",")
            b = expr()
            expect(")")
            return phi(a, b)
        if tok == "(":
            i += 1
            v = expr()
            expect(")")
            return v
        raise OrdinalSyntaxError(f"unexpected {tok!r} at column {tokens[i][1]}")

    def nsum():
        nonlocal i
        v = atom()
        while peek() == "#":
            i += 1
            v = natural_sum(v, atom())
        return v

    def expr():
        nonlocal i
        v = nsum()
        while peek() == "+":
            i += 1
            v = add(v, nsum())
        return v

    result = expr()
    if i != len(tokens):
        raise OrdinalSyntaxError(f"trailing input at column {tokens[i][1]}")
    return result
