"""Merging possibilistic knowledge bases.

Semantic combination works pointwise on distributions; the syntactic merges
build the base whose least specific distribution is that combination. Merge
plans are explicit binary trees evaluated bottom-up in tree order, since
mixing operators breaks associativity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
import typing
from typing import Mapping

from .errors import FormulaSyntaxError, UnboundLeaf
from .formula import Or, entails_classical, is_tautology
from .norms import NormFamily, get_norm
from .possdist import KnowledgeBase, PossibilityDistribution, WeightedFormula, align

CONJ = "conj"
DISJ = "disj"


def combine_semantic(d1: PossibilityDistribution, d2: PossibilityDistribution,
                     n: NormFamily, mode: str = CONJ) -> PossibilityDistribution:
    """Pointwise t-norm (``conj``) or t-conorm (``disj``) of two distributions."""
    if mode not in (CONJ, DISJ):
        raise ValueError(f"mode must be {CONJ!r} or {DISJ!r}")
    op = n.tnorm if mode == CONJ else n.conorm
    d1, d2 = align(d1, d2)
    return PossibilityDistribution(d1.universe, tuple(op(a, b) for a, b in zip(d1.values, d2.values)))


def merge_conjunctive(k1: KnowledgeBase, k2: KnowledgeBase, n: NormFamily) -> KnowledgeBase:
    """Both bases plus every cross-disjunction, weighted by the dual conorm."""
    cross = [
        WeightedFormula(Or(a.formula, b.formula), n.conorm(a.weight, b.weight))
        for a in k1.items
        for b in k2.items
    ]
    return KnowledgeBase(k1.items + k2.items + tuple(cross), k1.universe + k2.universe)


def merge_disjunctive(k1: KnowledgeBase, k2: KnowledgeBase, n: NormFamily) -> KnowledgeBase:
    """Cross-disjunctions only, weighted by the t-norm.

    Crosses whose t-norm weight is 0 (possible under Lukasiewicz) say nothing
    and are left out.
    """
    cross = []
    for a in k1.items:
        for b in k2.items:
            w = n.tnorm(a.weight, b.weight)
            if w > 0:
                cross.append(WeightedFormula(Or(a.formula, b.formula), w))
    return KnowledgeBase(tuple(cross), k1.universe + k2.universe)


def merge(k1: KnowledgeBase, k2: KnowledgeBase, n: NormFamily, mode: str = CONJ) -> KnowledgeBase:
    if mode == CONJ:
        return merge_conjunctive(k1, k2, n)
    if mode == DISJ:
        return merge_disjunctive(k1, k2, n)
    raise ValueError(f"mode must be {CONJ!r} or {DISJ!r}")


def _subsumed_at(kb: KnowledgeBase, i: int) -> bool:
    target = kb.items[i]
    cut = [wf.formula for j, wf in enumerate(kb.items) if j != i and wf.weight >= target.weight]
    return entails_classical(cut, target.formula)


def is_subsumed(kb: KnowledgeBase, wf: WeightedFormula) -> bool:
    """Whether the other formulae at least as certain as ``wf`` entail it."""
    try:
        i = kb.items.index(wf)
    except ValueError:
        raise ValueError(f"{wf} is not in the knowledge base") from None
    return _subsumed_at(kb, i)


def simplify(kb: KnowledgeBase) -> KnowledgeBase:
    """Drop tautologies, then subsumed formulae one at a time until none is left.

    The weakest candidates go first (later entries before earlier ones on ties)
    so that cross-formulae are removed before the rules they came from.
    """
    kb = KnowledgeBase(tuple(wf for wf in kb.items if not is_tautology(wf.formula)), kb.universe)
    while True:
        order = sorted(range(len(kb.items)), key=lambda i: (kb.items[i].weight, -i))
        for i in order:
            if _subsumed_at(kb, i):
                kb = kb.without(i)
                break
        else:
            return kb


# -- merge plans ---------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    name: str


@dataclass(frozen=True)
class Union:
    left: "MergePlan"
    right: "MergePlan"


@dataclass(frozen=True)
class Conj:
    norm: str
    left: "MergePlan"
    right: "MergePlan"


@dataclass(frozen=True)
class Disj:
    norm: str
    left: "MergePlan"
    right: "MergePlan"


MergePlan = typing.Union[Leaf, Union, Conj, Disj]

_PLAN_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([(),]))")


def _plan_tokens(text: str) -> list[tuple[str, int]]:
    tokens, pos = [], 0
    while text[pos:].strip():
        m = _PLAN_TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError("unexpected character in plan", text, pos)
        tokens.append((m.group(1) or m.group(2), m.start(m.lastindex)))
        pos = m.end()
    return tokens


def parse_plan(text: str) -> MergePlan:
    """Read ``name``, ``union(p,q)``, ``conj(norm,p,q)`` or ``disj(norm,p,q)``."""
    tokens = _plan_tokens(text)
    i = 0

    def take(expected=None):
        nonlocal i
        if i >= len(tokens):
            raise FormulaSyntaxError("unexpected end of plan", text, len(text))
        tok, pos = tokens[i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", text, pos)
        i += 1
        return tok, pos

    def node():
        name, pos = take()
        if name in "(),":
            raise FormulaSyntaxError(f"unexpected {name!r}", text, pos)
        if i < len(tokens) and tokens[i][0] == "(":
            take("(")
            if name == "union":
                left = node()
                take(",")
                right = node()
                take(")")
                return Union(left, right)
            if name in ("conj", "disj"):
                norm_name, norm_pos = take()
                try:
                    norm = get_norm(norm_name).name
                except ValueError as e:
                    raise FormulaSyntaxError(str(e), text, norm_pos) from None
                take(",")
                left = node()
                take(",")
                right = node()
                take(")")
                return (Conj if name == "conj" else Disj)(norm, left, right)
            raise FormulaSyntaxError(f"unknown plan operator {name!r}", text, pos)
        return Leaf(name)

    plan = node()
    if i != len(tokens):
        raise FormulaSyntaxError(f"unexpected {tokens[i][0]!r}", text, tokens[i][1])
    return plan


def format_plan(plan: MergePlan) -> str:
    if isinstance(plan, Leaf):
        return plan.name
    if isinstance(plan, Union):
        return f"union({format_plan(plan.left)}, {format_plan(plan.right)})"
    op = "conj" if isinstance(plan, Conj) else "disj"
    return f"{op}({plan.norm}, {format_plan(plan.left)}, {format_plan(plan.right)})"


def plan_leaves(plan: MergePlan) -> list[str]:
    if isinstance(plan, Leaf):
        return [plan.name]
    return plan_leaves(plan.left) + plan_leaves(plan.right)


def eval_plan(plan: MergePlan, env: Mapping[str, KnowledgeBase], simplify_each: bool = False) -> KnowledgeBase:
    if isinstance(plan, Leaf):
        try:
            kb = env[plan.name]
        except KeyError:
            raise UnboundLeaf(plan.name) from None
    else:
        left = eval_plan(plan.left, env, simplify_each)
        right = eval_plan(plan.right, env, simplify_each)
        if isinstance(plan, Union):
            kb = left + right
        elif isinstance(plan, Conj):
            kb = merge_conjunctive(left, right, get_norm(plan.norm))
        elif isinstance(plan, Disj):
            kb = merge_disjunctive(left, right, get_norm(plan.norm))
        else:
            raise TypeError(f"not a merge plan: {plan!r}")
    return simplify(kb) if simplify_each and not isinstance(plan, Leaf) else kb
