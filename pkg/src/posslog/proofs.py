"""Derivation builders for the bundled proof corpus.

These are fixed proof templates, not a search procedure: each function
assembles the derivation of one known sequent schema (composition lemmas,
generalized modus ponens, excluded middle) from the calculus rules, and
``robot_proof`` strings them together into the full localization example.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .lpl import ZERO_C, AndMin, Arrow, Atom, Const, LplFormula, Not, OrMax, Param, TensorNorm
from .sequent import Derivation, Sequent


def node(rule: str, antecedent, succedent, *premises: Derivation, **side) -> Derivation:
    return Derivation(rule, Sequent(tuple(antecedent), succedent), tuple(premises), side or None)


def ant(d: Derivation) -> list[LplFormula]:
    return list(d.conclusion.antecedent)


def identity(f: LplFormula) -> Derivation:
    return node("id", [f], f)


def weaken(d: Derivation, *extra: LplFormula) -> Derivation:
    for f in extra:
        d = node("weL", ant(d) + [f], d.conclusion.succedent, d)
    return d


def cut(left: Derivation, right: Derivation) -> Derivation:
    """Cut on the left premise's succedent; context order is right then left."""
    rest = ant(right)
    rest.remove(left.conclusion.succedent)
    return node("cut", rest + ant(left), right.conclusion.succedent, left, right)


def degree_bound(lower: LplFormula, upper: LplFormula) -> Derivation:
    return node("s'", [lower], upper)


def excluded_middle(f: LplFormula) -> Derivation:
    """``⊢ L (+) !L`` for a Boolean-fragment formula L.

    Goes through ``!!(L (+) !L)``, contracting the Boolean hypothesis once,
    and then drops the double negation.
    """
    em = OrMax(f, Not(f))
    refuted = Not(em)
    zero = identity(ZERO_C)
    f_proves_em = node("plus-R", [f], em, identity(f))
    not_f = node("imp-R", [refuted], Not(f),
                 node("imp-L", [f, refuted], ZERO_C, f_proves_em, zero))
    twice = node("imp-L", [refuted, refuted], ZERO_C,
                 node("plus-R", [refuted], em, not_f), zero)
    once = node("L1con", [refuted], ZERO_C, twice, identity(refuted))
    double_neg = node("imp-R", [], Not(refuted), once)
    return cut(double_neg, node("notnot", [Not(refuted)], em))


def case_split(context: LplFormula, f: LplFormula, goal: LplFormula,
               on_true: Derivation, on_false: Derivation, others=()) -> Derivation:
    """From ``others, context, f ⊢ goal`` and ``others, context, !f ⊢ goal`` derive
    ``others, context ⊢ goal`` through excluded middle and Boolean contraction."""
    em = OrMax(f, Not(f))
    both = node("plus-L", [*others, context, em], goal, on_true, on_false)
    return node("L1con", [*others, context], goal, both, weaken(excluded_middle(f), context))


def _absurd(f: LplFormula, goal: LplFormula) -> Derivation:
    # f, !f ⊢ goal
    return node("imp-L", [f, Not(f)], goal, identity(f), node("zero-L", [ZERO_C], goal))


def _degree_case(degree: LplFormula, x: LplFormula, f: LplFormula, goal: LplFormula) -> Derivation:
    # degree, !f ⊢ x (+) ...   from the numerical leaf degree ⊢ x
    return weaken(node("plus-R", [degree], goal, degree_bound(degree, x)), Not(f))


def and_composition(a1: LplFormula, f1: LplFormula, a2: LplFormula, f2: LplFormula,
                    x: LplFormula) -> Derivation:
    """``(a1 (+) f1) & (a2 (+) f2) ⊢ x (+) (f1 & f2)``, valid iff a1 ≤ x and a2 ≤ x."""
    first, second = OrMax(a1, f1), OrMax(a2, f2)
    p = AndMin(first, second)
    goal = OrMax(x, AndMin(f1, f2))

    def refute(degree, graded, f):
        # p, !f ⊢ goal, using the conjunct (degree (+) f)
        inner = node("plus-L", [graded, Not(f)], goal,
                     _degree_case(degree, x, f, goal), _absurd(f, goal))
        return node("and-L", [p, Not(f)], goal, inner)

    both_true = weaken(
        node("plus-R", [f1, f2], goal,
             node("and-R", [f1, f2], AndMin(f1, f2),
                  weaken(identity(f1), f2), weaken(identity(f2), f1))),
        p,
    )
    second_false = weaken(refute(a2, second, f2), f1)
    first_true = case_split(p, f2, goal, both_true, second_false, others=[f1])
    first_false = refute(a1, first, f1)
    return case_split(p, f1, goal, first_true, first_false)


def modus_ponens(alpha: LplFormula, a: LplFormula, b: LplFormula, beta: LplFormula,
                 x: LplFormula) -> Derivation:
    """``alpha (+) (a -> b), beta (+) a ⊢ x (+) b``, valid iff alpha ≤ x and beta ≤ x."""
    rule = OrMax(alpha, Arrow(a, b))
    fact = OrMax(beta, a)
    goal = OrMax(x, b)
    from_beta = weaken(node("plus-R", [beta], goal, degree_bound(beta, x)), rule)
    from_alpha = weaken(node("plus-R", [alpha], goal, degree_bound(alpha, x)), a)
    detach = node("imp-L", [a, Arrow(a, b)], goal,
                  identity(a), node("plus-R", [b], goal, identity(b)))
    from_a = node("plus-L", [a, rule], goal, from_alpha, detach)
    return node("plus-L", [rule, fact], goal, from_beta, from_a)


def tensor_composition(k: LplFormula, g: LplFormula, h: LplFormula,
                       xi1: LplFormula, xi2: LplFormula, x: LplFormula) -> Derivation:
    """``(k (+) g) -> h, (xi2 (+) k) (*) (xi1 (+) g) ⊢ x (+) h``, valid iff xi1 × xi2 ≤ x."""
    rule = Arrow(OrMax(k, g), h)
    left, right = OrMax(xi2, k), OrMax(xi1, g)
    goal = OrMax(x, h)

    def fire(premise_formula):
        # rule, premise_formula ⊢ x (+) h
        reach = node("plus-R", [premise_formula], OrMax(k, g), identity(premise_formula))
        return node("plus-R", [premise_formula, rule], goal,
                    node("imp-L", [premise_formula, rule], h, reach, identity(h)))

    product = node("tensor-R", [xi1, xi2], TensorNorm(xi1, xi2), identity(xi1), identity(xi2))
    numeric = cut(product, degree_bound(TensorNorm(xi1, xi2), x))
    both_degrees = weaken(node("plus-R", [xi1, xi2], goal, numeric), rule)
    degree_and_g = weaken(fire(g), xi2)
    from_degree = node("plus-L", [rule, xi2, right], goal, both_degrees, degree_and_g)
    from_k = weaken(fire(k), right)
    split = node("plus-L", [rule, left, right], goal, from_degree, from_k)
    return node("tensor-L", [rule, TensorNorm(left, right)], goal, split)


def _conjuncts(f: LplFormula) -> list[LplFormula]:
    if isinstance(f, AndMin):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def project(source: LplFormula, target: LplFormula) -> Derivation:
    """``source ⊢ target`` where target is one of source's &-conjuncts."""
    if source == target:
        return identity(source)
    if not isinstance(source, AndMin):
        raise ValueError("target is not a conjunct of source")
    side = source.left if target in _conjuncts(source.left) else source.right
    return node("and-L", [source], target, project(side, target))


def rearrange(source: LplFormula, target: LplFormula) -> Derivation:
    """``source ⊢ target`` for two &-groupings of the same conjuncts."""
    if isinstance(target, AndMin):
        return node("and-R", [source], target, rearrange(source, target.left), rearrange(source, target.right))
    return project(source, target)


def regroup_disjunct(degree: LplFormula, source: LplFormula, target: LplFormula) -> Derivation:
    """``degree (+) source ⊢ degree (+) target`` with source, target regrouped conjunctions."""
    goal = OrMax(degree, target)
    return node("plus-L", [OrMax(degree, source)], goal,
                node("plus-R", [degree], goal, identity(degree)),
                node("plus-R", [source], goal, rearrange(source, target)))


ROBOT_BINDINGS = {
    "theta1": Fraction(3, 5),
    "theta2": Fraction(1, 2),
    "theta4": Fraction(3, 10),
    "theta5": Fraction(3, 5),
    "eta": Fraction(1, 5),
    "theta6": Fraction(2, 5),
}


def robot_gamma(degrees: Mapping[str, Fraction] | None = None) -> list[LplFormula]:
    """The localization premises; symbolic degrees unless ``degrees`` gives values."""
    def deg(name):
        return Param(name) if degrees is None else Const(degrees[name])

    A, B, D, E, F, G, H = (Atom(c) for c in "ABDEFGH")
    return [
        AndMin(OrMax(deg("theta4"), E), OrMax(deg("theta5"), F)),
        Arrow(OrMax(AndMin(AndMin(D, E), F), G), H),
        OrMax(deg("eta"), Arrow(AndMin(A, B), D)),
        AndMin(OrMax(deg("theta1"), A), OrMax(deg("theta2"), B)),
        OrMax(deg("theta6"), G),
    ]


def robot_proof() -> Derivation:
    """Derivation of ``gamma ⊢ $x (+) H`` for the symbolic localization premises."""
    A, B, D, E, F, G, H = (Atom(c) for c in "ABDEFGH")
    th1, th2, th4, th5, th6, eta = (Param(n) for n in ("theta1", "theta2", "theta4", "theta5", "theta6", "eta"))
    alpha, beta, gamma, xi2, x = (Param(n) for n in ("alpha", "beta", "gamma", "xi2", "x"))
    ef_facts, rule_h, rule_d, ab_facts, g_fact = robot_gamma()
    conj_def = AndMin(AndMin(D, E), F)

    ef = and_composition(th4, E, th5, F, alpha)
    ab = and_composition(th1, A, th2, B, gamma)
    d_from_ab = cut(ab, modus_ponens(eta, AndMin(A, B), D, gamma, beta))
    context = [ef_facts, rule_d, ab_facts]
    both = node("and-R", context, AndMin(OrMax(alpha, AndMin(E, F)), OrMax(beta, D)),
                weaken(ef, rule_d, ab_facts), weaken(d_from_ab, ef_facts))
    combined = cut(both, and_composition(alpha, AndMin(E, F), beta, D, xi2))
    premise = cut(combined, regroup_disjunct(xi2, AndMin(AndMin(E, F), D), conj_def))
    joint = node("tensor-R", context + [g_fact], TensorNorm(OrMax(xi2, conj_def), g_fact),
                 premise, identity(g_fact))
    last = cut(joint, tensor_composition(conj_def, G, H, th6, xi2, x))
    # restate the root in the premises' listed order
    return Derivation(last.rule, Sequent(tuple(robot_gamma()), last.conclusion.succedent), last.premises)


def shipped_proofs() -> dict[str, Derivation]:
    """Name -> derivation for every proof file in the bundled corpus."""
    p = Param
    return {
        "gamma1_proof": robot_proof(),
        "gm_proof": modus_ponens(p("alpha"), Atom("A"), Atom("B"), p("beta"), p("x")),
        "tensor_comp_proof": tensor_composition(Atom("K"), Atom("G"), Atom("H"), p("xi1"), p("xi2"), p("x")),
        "and_comp_proof": and_composition(p("alpha1"), Atom("L1"), p("alpha2"), Atom("L2"), p("x")),
    }
