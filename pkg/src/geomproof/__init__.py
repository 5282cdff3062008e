"""Proof kernel and cut elimination for finitely-branching infinitary sequent calculus."""
from .barr import BarrInput, barr_translate, to_disjunction, translate
from .calculus import (
    CheckError, Measures, Proof, Rule, Sequent, Theory, check, check_classical,
    check_intuitionistic, pack_theory, unpack_theory,
)
from .formula import GeomClass, Signature, classify, labels, rank
from .morley import FormulaClosure, equivalence_proof, morleyize, morleyize_theory, transport
from .ordinal import Ordinal, compare, natural_sum, parse_ordinal, phi
from .syntax import parse_formula, parse_proof, parse_theory, print_proof
from .transform import eliminate_cuts, invert, reduce_cut, substitute_proof, weaken

__version__ = "0.1.0"

__all__ = [
    "BarrInput", "barr_translate", "to_disjunction", "translate",
    "CheckError", "Measures", "Proof", "Rule", "Sequent", "Theory", "check", "check_classical",
    "check_intuitionistic", "pack_theory", "unpack_theory",
    "GeomClass", "Signature", "classify", "labels", "rank",
    "FormulaClosure", "equivalence_proof", "morleyize", "morleyize_theory", "transport",
    "Ordinal", "compare", "natural_sum", "parse_ordinal", "phi",
    "parse_formula", "parse_proof", "parse_theory", "print_proof",
    "eliminate_cuts", "invert", "reduce_cut", "substitute_proof", "weaken",
]
