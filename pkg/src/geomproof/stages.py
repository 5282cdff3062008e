"""Finite set-theoretic evaluation of the closure-style ordinal definitions.

Natural numbers are von Neumann ordinals here: the set for n is
{0, ..., n-1}.  These routines follow the set recursions literally and
serve as an independent check on the symbolic engine in ``ordinal``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable


def union_closure(xs: Iterable[int]) -> frozenset:
    """X ∪ {u | u ∈ y for some y ∈ X}, for a set X of finite ordinals."""
    out = set(xs)
    if out:
        out.update(range(max(out)))     # every y below the largest member is in some member
    return frozenset(out)


def as_ordinal(s: frozenset) -> int:
    n = len(s)
    if s != frozenset(range(n)):
        raise ValueError(f"{sorted(s)} is not transitive")
    return n


@lru_cache(maxsize=None)
def natural_sum_by_recursion(a: int, b: int) -> int:
    """Natural sum computed from the pair-recursive set definition."""
    xs = [natural_sum_by_recursion(a, d) for d in range(b)]
    xs += [natural_sum_by_recursion(e, b) for e in range(a)]
    xs += [natural_sum_by_recursion(e, d) for e in range(a) for d in range(b)]
    return as_ordinal(union_closure(xs))


def closure_by_stages(seed: Iterable[int], fns: list[tuple[int, Callable]],
                      limit: int = 10_000, max_stages: int = 1_000):
    """Closure of ``seed`` under ``fns`` computed stage by stage.

    Returns the resulting finite ordinal, or None when some stage reaches
    ``limit`` (the closure is then at least that large, e.g. omega).
    """
    from itertools import product

    stage = union_closure(set(seed) | {0})
    for _ in range(max_stages):
        new = set()
        for arity, f in fns:
            for args in product(stage, repeat=arity):
                new.add(f(*args))
        nxt = stage | union_closure(new)
        if max(nxt) >= limit:
            return None
        if nxt == stage:
            return as_ordinal(stage)
        stage = nxt
    return None


def stage_sets(seed: Iterable[int], fns, stages: int) -> list[frozenset]:
    """The first ``stages`` stage sets X_0, X_1, ..."""
    from itertools import product

    out = [union_closure(set(seed) | {0})]
    for _ in range(stages - 1):
        cur = out[-1]
        new = {f(*args) for arity, f in fns for args in product(cur, repeat=arity)}
        out.append(cur | union_closure(new))
    return out
