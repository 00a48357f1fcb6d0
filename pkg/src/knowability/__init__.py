"""Epistemic modal logic, quantum logic and the Frauchiger-Renner no-go argument."""
from .formula import Formula, ParseError, Schema, parse, render, render_unicode
from .kripke import KripkeModel, check_schema, search_countermodel, valuate
from .proof import ProofScript, bundled_scripts, check_line, check_proof
from .propositional import LogicMode, pl_tautology

__all__ = [
    "Formula", "ParseError", "Schema", "parse", "render", "render_unicode",
    "KripkeModel", "check_schema", "search_countermodel", "valuate",
    "ProofScript", "bundled_scripts", "check_line", "check_proof",
    "LogicMode", "pl_tautology",
]
