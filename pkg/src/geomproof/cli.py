"""Command-line surface.

Every command writes deterministic output.  Exit status: 0 success,
2 rejection or negative classification, 3 parse error, 4 internal breach.
Failures print a JSON error document on stdout.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .barr import BarrError, BarrInput, RuleExclusionError, to_disjunction, translate
from .calculus import CheckError, Theory, check
from .formula import GeomClass, SignatureError, classify, labels
from .morley import FormulaClosure, MorleyError, morleyize_theory
from .ordinal import OrdinalSyntaxError, parse_ordinal, to_text as ordinal_text
from .syntax import (
    ParseError, dump_json, formula_text, parse_formula, parse_ordinals, parse_proof,
    parse_term, parse_theory, print_proof, proof_document, proof_to_json, theory_text,
)
from .transform import INVERSIONS, PAIR_KINDS, eliminate_cuts, invert

__all__ = ["main", "run", "Workspace", "parse_formula", "parse_theory", "parse_proof"]

OK, REJECTED, PARSE, INTERNAL = 0, 2, 3, 4


@dataclass
class Workspace:
    """Files loaded by name; each kind is dispatched on the file extension."""
    theories: dict = field(default_factory=dict)
    proofs: dict = field(default_factory=dict)
    ordinals: dict = field(default_factory=dict)

    def load(self, path):
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        match path.suffix:
            case ".thy":
                t = parse_theory(text)
                self.theories[t.name] = t
                return t
            case ".prf":
                self.proofs[path.stem] = parse_proof(text)
                return self.proofs[path.stem]
            case ".ord":
                self.ordinals[path.stem] = parse_ordinals(text)
                return self.ordinals[path.stem]
        raise ParseError(f"unknown file kind {path.suffix!r}")

    @property
    def signatures(self) -> dict:
        return {n: t.signature for n, t in self.theories.items()}


class _Fail(Exception):
    def __init__(self, status, doc):
        self.status, self.doc = status, doc


def _emit(out, text, path=None):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _expect_kind(path, suffix):
    if Path(path).suffix != suffix:
        raise ParseError(f"expected a {suffix} file, got {str(path)!r}")
    return Workspace().load(path)


def _theory(path) -> Theory:
    return _expect_kind(path, ".thy") if path else None


def _proof(path) -> tuple:
    return _expect_kind(path, ".prf")


# -- commands -----------------------------------------------------------------------

def cmd_classify(args, out):
    if args.formula:
        sig = _theory(args.theory).signature if args.theory else None
        formulas = [parse_formula(args.formula, sig)]
    else:
        t = _theory(args.file)
        formulas, sig = list(t.axioms), t.signature
    status = OK
    for f in formulas:
        labs = labels(f)
        best = classify(f)
        extra = sorted(str(x) for x in labs if x != best)
        out.write(f"{best}\t{','.join(extra) or '-'}\t{formula_text(f, sig)}\n")
        if GeomClass.NONE in labs:
            status = REJECTED
        if args.expect and GeomClass(args.expect) not in labs:
            status = REJECTED
    return status


def cmd_check(args, out):
    p, sig, _ = _proof(args.file)
    m = check(p, _theory(args.theory), intuitionistic=args.mode == "intuitionistic")
    out.write(dump_json({"status": "ok", "mode": args.mode,
                         "height": m.height, "cut_degree": m.cut_degree}))
    return OK


def cmd_cutelim(args, out):
    p, sig, name = _proof(args.file)
    q, cert = eliminate_cuts(p)
    doc = proof_document(q, sig, name, certificate=cert.to_dict())
    _emit(out, dump_json(doc), args.output)
    if args.report:
        Path(args.report).write_text(dump_json(cert.to_dict()), encoding="utf-8")
    return OK


def cmd_invert(args, out):
    p, sig, name = _proof(args.file)
    x = parse_formula(args.formula, sig)
    term = parse_term(args.term, sig) if args.term else None
    member = parse_formula(args.member, sig) if args.member else None
    res = invert(args.kind, p, x, term=term, member=member, mode=args.mode)
    if args.kind in PAIR_KINDS:
        doc = proof_document(res[0], sig, name)
        del doc["proof"]
        doc["proofs"] = [proof_to_json(r, sig) for r in res]
        _emit(out, dump_json(doc), args.output)
    else:
        _emit(out, print_proof(res, sig, name), args.output)
    return OK


def cmd_barr(args, out):
    p, sig, name = _proof(args.proof)
    if args.to_disjunction:
        q = to_disjunction(p, simplify=args.simplify_singleton_disj)
        check(q, intuitionistic=True)
        _emit(out, print_proof(q, sig, name), args.output)
        return OK
    if not (args.theory and args.goal):
        raise _Fail(PARSE, {"error": "usage", "message": "--theory and --goal are required"})
    t = _theory(args.theory)
    goal = parse_formula(args.goal, t.signature)
    q, report = translate(BarrInput(t, goal, p))
    _emit(out, print_proof(q, t.signature, t.name), args.output)
    if args.report:
        Path(args.report).write_text(dump_json(report), encoding="utf-8")
    return OK


def cmd_morleyize(args, out):
    t = _theory(args.file)
    extra = []
    for s in args.extra or ():
        extra.append(FormulaClosure((), t.signature).matrix(parse_formula(s, t.signature))[1])
    closure = FormulaClosure.of_theory(t, extra)
    ms, ta = morleyize_theory(t, closure)
    _emit(out, theory_text(ta), args.output)
    if args.map:
        rows = [{"formula": formula_text(m, t.signature), "positive": pn, "negative": nn}
                for m, pn, nn in ms.name_map()]
        Path(args.map).write_text(dump_json(rows), encoding="utf-8")
    return OK


def cmd_ord(args, out):
    xs = [parse_ordinal(e) for e in args.expr or ()]
    if args.file:
        xs += _expect_kind(args.file, ".ord")
    for x in xs:
        out.write(ordinal_text(x) + "\n")
    return OK


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geomproof", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="geometric class of each axiom")
    c.add_argument("file", nargs="?")
    c.add_argument("--formula")
    c.add_argument("--theory", help="signature source for --formula")
    c.add_argument("--expect", choices=[str(g) for g in GeomClass])
    c.set_defaults(fn=cmd_classify)

    c = sub.add_parser("check", help="verify a proof")
    c.add_argument("file")
    c.add_argument("--theory")
    c.add_argument("--mode", choices=("classical", "intuitionistic"), default="classical")
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("cutelim", help="eliminate cuts with a height certificate")
    c.add_argument("file")
    c.add_argument("-o", "--output")
    c.add_argument("--report")
    c.set_defaults(fn=cmd_cutelim)

    c = sub.add_parser("invert", help="apply an inversion")
    c.add_argument("kind", choices=sorted(INVERSIONS))
    c.add_argument("file")
    c.add_argument("--formula", required=True)
    c.add_argument("--term")
    c.add_argument("--member")
    c.add_argument("--mode", choices=("classical", "intuitionistic"), default="classical")
    c.add_argument("-o", "--output")
    c.set_defaults(fn=cmd_invert)

    c = sub.add_parser("barr", help="classical to intuitionistic proof")
    c.add_argument("--theory")
    c.add_argument("--goal")
    c.add_argument("--proof", required=True)
    c.add_argument("--to-disjunction", action="store_true",
                   help="translate a cut-free proof of G |- D to G |- \\/D only")
    c.add_argument("--simplify-singleton-disj", action="store_true")
    c.add_argument("-o", "--output")
    c.add_argument("--report")
    c.set_defaults(fn=cmd_barr)

    c = sub.add_parser("morleyize", help="geometric axiomatization of a theory")
    c.add_argument("file")
    c.add_argument("--extra", action="append", help="additional closure seed")
    c.add_argument("-o", "--output")
    c.add_argument("--map", help="write the relation name map here")
    c.set_defaults(fn=cmd_morleyize)

    c = sub.add_parser("ord", help="normalize ordinal expressions")
    c.add_argument("file", nargs="?")
    c.add_argument("--expr", action="append")
    c.set_defaults(fn=cmd_ord)
    return ap


def _error(kind, e, **more):
    return {"error": kind, "message": str(e), **more}


def run(argv, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "classify" and not (args.file or args.formula):
        doc, status = _error("usage", "a theory file or --formula is required"), PARSE
    else:
        try:
            return args.fn(args, out)
        except _Fail as e:
            doc, status = e.doc, e.status
        except ParseError as e:
            doc, status = _error("parse", e, line=e.line, column=e.col), PARSE
        except (OrdinalSyntaxError, SignatureError, json.JSONDecodeError, OSError) as e:
            doc, status = _error("parse", e), PARSE
        except CheckError as e:
            doc, status = _error("rejected", e.detail, reason=e.reason, path=list(e.path)), REJECTED
        except RuleExclusionError as e:
            doc, status = _error("internal", e), INTERNAL
        except (BarrError, MorleyError, ValueError) as e:
            doc, status = _error("rejected", e), REJECTED
        except Exception as e:      # noqa: BLE001 - any other failure is an invariant breach
            doc, status = _error("internal", f"{type(e).__name__}: {e}"), INTERNAL
    out.write(dump_json(doc))
    return status


def main(argv=None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:          # argparse usage errors
        return PARSE if e.code not in (0, None) else 0


if __name__ == "__main__":
    sys.exit(main())
