"""Possibilistic knowledge bases, their fusion, and a graded sequent calculus."""
from .formula import parse_formula
from .fusion import eval_plan, merge, parse_plan, simplify
from .lpl import lpl_necessity, parse_lpl, translate_spl, truth_value
from .norms import LUKASIEWICZ, MINIMUM, PRODUCT, get_norm
from .possdist import KnowledgeBase, PossibilityDistribution, WeightedFormula, least_specific, necessity
from .prover import inconsistency_degree, prove_pref
from .sequent import check_derivation, extract_constraints, solve_min

__all__ = [
    "KnowledgeBase", "LUKASIEWICZ", "MINIMUM", "PRODUCT", "PossibilityDistribution", "WeightedFormula",
    "check_derivation", "eval_plan", "extract_constraints", "get_norm", "inconsistency_degree",
    "least_specific", "lpl_necessity", "merge", "necessity", "parse_formula", "parse_lpl", "parse_plan",
    "prove_pref", "simplify", "solve_min", "translate_spl", "truth_value",
]
