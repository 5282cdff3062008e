"""Acceptance criteria; each test prints a single PASS/FAIL line."""
import random
import time

import pytest

from geomproof.barr import BarrInput, RuleExclusionError, barr_translate
from geomproof.calculus import (
    CheckError, Sequent, check, check_classical, check_intuitionistic, height, pack_theory,
    uses_theory,
)
from geomproof.formula import GeomClass, Signature, labels, rank
from geomproof.morley import FormulaClosure, equivalence_proof, morleyize, morleyize_theory, transport
from geomproof.ordinal import (
    ZERO, Ordinal, compare, lhd, natural_sum, omega_power, parse_ordinal, phi, to_text,
)
from geomproof.stages import natural_sum_by_recursion
from geomproof.syntax import (
    formula_text, parse_formula, parse_ordinals, parse_proof, parse_theory, print_proof,
    theory_text,
)
from geomproof.transform import PAIR_KINDS, eliminate_cuts, invert, reduce_cut
from corpus import (
    CLASSICAL_KINDS, FIXTURES, SIG, Q, barr_inputs, c, invalid_cases, inversion_fixtures,
    pq_classical, random_cut_pair, random_cut_proof, random_formula, random_ordinal, theory,
    valid_cases,
)


@pytest.fixture
def verdict(capsys):
    def say(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail
    return say


def test_checker_soundness(verdict):
    good, bad = valid_cases(), invalid_cases()
    start = time.perf_counter()
    wrong = []
    for case in good:
        try:
            check(case.proof, case.theory, intuitionistic=case.intuitionistic)
        except CheckError as e:
            wrong.append((case.name, e.reason))
    for case in bad:
        try:
            check(case.proof, case.theory, intuitionistic=case.intuitionistic)
            wrong.append((case.name, "accepted"))
        except CheckError as e:
            if (e.reason, e.path) != (case.reason, case.path):
                wrong.append((case.name, e.reason))
    elapsed = time.perf_counter() - start
    reasons = {k.reason for k in bad}
    ok = (not wrong and len(good) >= 20 and len(bad) >= 10 and len(reasons) == 8
          and elapsed < 1.0)
    verdict(1, ok, f"{len(good)} valid, {len(bad)} invalid over {len(reasons)} reasons, "
                   f"{len(wrong)} misclassified, {elapsed:.3f}s")


def _eliminates(p):
    before = check(p)
    out, cert = eliminate_cuts(p)
    m = check_classical(out)
    bound = phi(before.cut_degree, before.height)
    return (m.cut_degree == 0 and out.conclusion == p.conclusion and cert.holds
            and compare(Ordinal.of(m.height), bound) <= 0)


def test_cut_elimination(verdict):
    rng = random.Random(2024)
    start = time.perf_counter()
    corpus = []
    for case in valid_cases():
        p = case.proof
        if uses_theory(p):
            p = pack_theory(p, case.theory)
        corpus.append(p)
    randoms = [random_cut_proof(rng, 8, 3) for _ in range(500)]
    failures = sum(not _eliminates(p) for p in corpus + randoms)
    elapsed = time.perf_counter() - start
    tallest = max(height(p) for p in randoms)
    verdict(2, failures == 0 and elapsed < 60,
            f"{len(corpus)} corpus + {len(randoms)} random (max height {tallest}), "
            f"{failures} failures, {elapsed:.1f}s")


def test_reduction_bound(verdict):
    rng = random.Random(7)
    violations = 0
    n = 250
    for _ in range(n):
        cf, p, q = random_cut_pair(rng)
        out, cert = reduce_cut(cf, p, q)
        alpha, beta = height(p), height(q)
        exact = natural_sum(*(Ordinal.of(h) for h in (alpha, alpha, beta, beta)))
        if height(out) > 2 * alpha + 2 * beta or cert.claimed_bound != exact:
            violations += 1
        # the reduced proof only cuts on formulas of rank below the cut formula
        if check(out).cut_degree > rank(cf):
            violations += 1
    verdict(3, violations == 0, f"{n} reduce_cut instances, {violations} violations")


def test_inversion_suite(verdict):
    rng = random.Random(99)
    bad, total = [], 0
    for kind in CLASSICAL_KINDS + ("imp_l_right",):
        intu = kind == "imp_l_right"
        fixtures = inversion_fixtures(kind, rng, 10)
        for p, x, extra in fixtures:
            m = check(p, intuitionistic=intu)
            outs = invert(kind, p, x, mode="intuitionistic" if intu else "classical", **extra)
            for o in outs if kind in PAIR_KINDS else (outs,):
                mo = check(o, intuitionistic=intu)
                total += 1
                if mo.height > m.height or mo.cut_degree > m.cut_degree:
                    bad.append(kind)
    verdict(4, not bad, f"13 clauses x 10 fixtures, {total} outputs rechecked, "
                        f"{len(bad)} exceed their input")


def test_barr_translation(verdict):
    inputs = barr_inputs()
    names = " ".join(n for n, _ in inputs)
    failed, fired = [], 0
    for name, inp in inputs:
        try:
            out = barr_translate(inp)
            check_intuitionistic(out, inp.theory)
            if out.conclusion != Sequent((), (inp.goal,)):
                failed.append(name)
        except RuleExclusionError:
            fired += 1
            failed.append(name)
        except CheckError:
            failed.append(name)
    covered = all(k in names for k in ("localring", "field", "torsion"))
    verdict(5, not failed and len(inputs) >= 15 and covered and not fired,
            f"{len(inputs)} inputs, {len(failed)} failed, exclusion fired {fired} times")


def test_ordinal_algebra(verdict):
    rng = random.Random(5)
    errors = []
    for _ in range(10_000):
        a, b, x = (random_ordinal(rng, 1) for _ in range(3))
        if natural_sum(a, b) != natural_sum(b, a):
            errors.append("comm")
        if natural_sum(natural_sum(a, b), x) != natural_sum(a, natural_sum(b, x)):
            errors.append("assoc")
        if natural_sum(a, ZERO) != a:
            errors.append("identity")
        y = random_ordinal(rng, 1)
        if lhd((a, b), (x, y)) and compare(natural_sum(a, b), natural_sum(x, y)) >= 0:
            errors.append("lhd")
    for m in range(100):
        for n in range(100):
            if natural_sum_by_recursion(m, n) != int(natural_sum(Ordinal.of(m), Ordinal.of(n))):
                errors.append("oracle")
    for _ in range(1000):
        k = rng.randrange(3)
        al, be = Ordinal.of(k), random_ordinal(rng, 2, 1)
        top = phi(al, be)
        x, y = random_ordinal(rng, 2, 1), random_ordinal(rng, 2, 1)
        if compare(x, top) < 0 and compare(y, top) < 0:
            if compare(natural_sum(x, y), top) >= 0:
                errors.append("closure-sum")
            if compare(x, al) < 0 and compare(phi(x, y), top) >= 0:
                errors.append("closure-phi")
        if compare(x, be) < 0 and compare(phi(al, x), top) >= 0:
            errors.append("monotone")
    for n in range(6):
        if phi(0, n) != omega_power(Ordinal.of(n)):
            errors.append("omega")
    verdict(6, not errors, f"1e4 sum triples, 100x100 oracle pairs, 1e3 phi triples, "
                           f"{len(errors)} errors")


def _random_closure(rng, size=50):
    sig = Signature(frozenset({"c", "d"}), (), (("P", 1), ("Q", 1), ("R", 2)), False)
    base = []
    closure = FormulaClosure((), sig)
    while len(closure.members) < size:
        base.append(random_formula(rng, 3, first_order=True))
        closure = FormulaClosure(tuple(base), sig)
    return closure


def test_morleyization(verdict):
    rng = random.Random(50)
    closure = _random_closure(rng)
    ms, m = morleyize(closure)
    emitted = list(m.axioms)
    bad_proofs = 0
    for a in closure.members:
        fwd, bwd = equivalence_proof(a, ms, m)
        try:
            check_intuitionistic(fwd, m)
            check_intuitionistic(bwd, m)
        except CheckError:
            bad_proofs += 1
    for name in ("pq", "robinson", "localring", "field", "equality"):
        emitted += morleyize_theory(theory(name))[1].axioms
    not_geometric = sum(GeomClass.GEOMETRIC_IMPLICATION not in labels(x) for x in emitted)
    # end to end: classical proof over pq, moved to T^a, then translated
    t = theory("pq")
    ms2, ta = morleyize_theory(t, FormulaClosure.of_theory(t, extra=(Q(c),)))
    goal, moved = transport(pq_classical(t), t, ms2, ta, Q(c))
    out = barr_translate(BarrInput(ta, goal, moved))
    check_intuitionistic(out, ta)
    pipeline = out.conclusion == Sequent((), (goal,))
    verdict(7, not bad_proofs and not not_geometric and pipeline,
            f"{len(closure.members)}-member closure, {2 * len(closure.members)} equivalence "
            f"proofs ({bad_proofs} rejected), {len(emitted)} axioms ({not_geometric} not "
            f"geometric), pipeline {'ok' if pipeline else 'broken'}")


def test_round_trip(verdict):
    mismatches, counts = [], {"formulas": 0, "theories": 0, "proofs": 0, "ordinals": 0}
    for path in sorted(FIXTURES.glob("*.thy")):
        t = parse_theory(path.read_text(encoding="utf-8"))
        counts["theories"] += 1
        if parse_theory(theory_text(t)) != t:
            mismatches.append(path.name)
        for a in t.axioms:
            counts["formulas"] += 1
            text = formula_text(a, t.signature)
            if parse_formula(text, t.signature) != a:
                mismatches.append(text)
    for path in sorted(FIXTURES.glob("*.prf")):
        text = path.read_text(encoding="utf-8")
        p, sig, name = parse_proof(text)
        counts["proofs"] += 1
        if print_proof(p, sig, name) != text:
            mismatches.append(path.name)
        for node in p.nodes():
            for f in node.ante + node.succ:
                counts["formulas"] += 1
                if parse_formula(formula_text(f, sig), sig) != f:
                    mismatches.append(formula_text(f, sig))
    for path in sorted(FIXTURES.glob("*.ord")):
        for x in parse_ordinals(path.read_text(encoding="utf-8")):
            counts["ordinals"] += 1
            if parse_ordinal(to_text(x)) != x:
                mismatches.append(to_text(x))
    for case in valid_cases():
        sig = case.theory.signature.extend(SIG.constants, SIG.functions, SIG.relations) \
            if case.theory else SIG
        counts["proofs"] += 1
        p, _, _ = parse_proof(print_proof(case.proof, sig))
        if p != case.proof:
            mismatches.append(case.name)
    detail = ", ".join(f"{v} {k}" for k, v in counts.items())
    verdict(8, not mismatches, f"{detail}, {len(mismatches)} mismatches")
