"""Graded refutation for possibilistic knowledge bases.

Inconsistency degrees come from level cuts and the satisfiability kernel:
``Inc`` is the largest weight whose cut is classically inconsistent. The
weighted resolution rule is kept for ``resolve_step`` and for rebuilding a
readable refutation trace inside the relevant cut.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .degree import ONE, ZERO, format_degree
from .errors import ResolutionError
from .formula import Clause, Formula, Not, is_satisfiable, to_cnf
from .possdist import KnowledgeBase, WeightedFormula

MAX_TRACE_CLAUSES = 20000


@dataclass(frozen=True)
class WeightedClause:
    clause: Clause
    weight: Fraction

    def __post_init__(self):
        if not 0 < self.weight <= 1:
            raise ValueError("clause weight must lie in (0, 1]")

    def __str__(self):
        return f"({self.clause} {format_degree(self.weight)})"


@dataclass(frozen=True)
class ResolutionStep:
    left: WeightedClause
    right: WeightedClause
    pivot: str
    resolvent: WeightedClause

    def __str__(self):
        return f"{self.left} ⨯ {self.right} / {self.pivot} ⇒ {self.resolvent}"


@dataclass(frozen=True)
class ProofResult:
    derivable: bool
    degree: Fraction
    inc_base: Fraction
    trace: Optional[tuple[ResolutionStep, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.derivable and not self.degree > self.inc_base:
            raise ValueError("a derivable goal must beat the base's inconsistency")


def resolve_step(c1: WeightedClause, c2: WeightedClause, pivot: str) -> WeightedClause:
    """Resolve on ``pivot``; the resolvent keeps the smaller weight."""
    a, b = c1.clause, c2.clause
    if pivot in a.positive and pivot in b.negative:
        pos_side, neg_side = a, b
    elif pivot in a.negative and pivot in b.positive:
        pos_side, neg_side = b, a
    else:
        raise ResolutionError(f"{pivot!r} is not complementary in {a} and {b}")
    clause = Clause(
        (pos_side.positive - {pivot}) | neg_side.positive,
        pos_side.negative | (neg_side.negative - {pivot}),
    )
    return WeightedClause(clause, min(c1.weight, c2.weight))


def weighted_clauses(kb: KnowledgeBase) -> list[WeightedClause]:
    """Clause form of a base; each clause inherits its formula's weight."""
    out = []
    for wf in kb.items:
        out.extend(WeightedClause(c, wf.weight) for c in to_cnf(wf.formula))
    return out


def inconsistency_degree(kb: KnowledgeBase) -> Fraction:
    # cuts grow as the level drops, so the first inconsistent one is the answer
    for alpha in kb.weights():
        if not is_satisfiable(kb.cut(alpha)):
            return alpha
    return ZERO


def prove_pref(kb: KnowledgeBase, goal: Formula, trace: bool = False) -> ProofResult:
    """Refute ``kb + (!goal, 1)`` and compare against the base's own inconsistency."""
    refuted = kb.add(WeightedFormula(Not(goal), ONE))
    beta = inconsistency_degree(refuted)
    inc = inconsistency_degree(kb)
    derivable = beta > inc
    steps = None
    if trace and derivable:
        steps = refutation_trace(refuted, beta, support=to_cnf(Not(goal)))
    return ProofResult(derivable, beta if derivable else ZERO, inc, steps)


def refutation_trace(kb: KnowledgeBase, level: Fraction,
                     support: list[Clause] | None = None) -> Optional[tuple[ResolutionStep, ...]]:
    """Find a resolution refutation inside the ``level`` cut of ``kb``.

    With ``support`` given, every step involves a descendant of those clauses
    (set of support); this stays complete when the rest of the cut is
    consistent, which holds for goal refutations above ``Inc``. Returns only
    the steps the empty clause depends on, or None if the search gives up.
    """
    cut = [wc for wc in weighted_clauses(kb) if wc.weight >= level]
    support_set = set(support) if support is not None else None
    parents: dict[Clause, Optional[tuple]] = {}
    weights: dict[Clause, Fraction] = {}
    usable, queue = [], []
    for wc in cut:
        if wc.clause in weights and weights[wc.clause] >= wc.weight:
            continue
        weights[wc.clause] = wc.weight
        parents[wc.clause] = None
        if support_set is None or wc.clause in support_set:
            queue.append(wc.clause)
        else:
            usable.append(wc.clause)
    if any(c.is_empty for c in weights):
        return ()
    while queue:
        given = queue.pop(0)
        usable.append(given)
        for other in list(usable):
            for pivot in sorted(given.positive & other.negative | given.negative & other.positive):
                new = resolve_step(WeightedClause(given, weights[given]),
                                   WeightedClause(other, weights[other]), pivot)
                if new.clause.is_tautology or new.clause in weights:
                    continue
                weights[new.clause] = new.weight
                parents[new.clause] = (given, other, pivot)
                if new.clause.is_empty:
                    return _extract(new.clause, parents, weights)
                queue.append(new.clause)
                if len(weights) > MAX_TRACE_CLAUSES:
                    return None
    return None


def _extract(empty: Clause, parents, weights) -> tuple[ResolutionStep, ...]:
    steps, seen = [], set()

    def visit(c):
        if c in seen or parents[c] is None:
            return
        seen.add(c)
        left, right, pivot = parents[c]
        visit(left)
        visit(right)
        steps.append(ResolutionStep(
            WeightedClause(left, weights[left]),
            WeightedClause(right, weights[right]),
            pivot,
            WeightedClause(c, weights[c]),
        ))

    visit(empty)
    return tuple(steps)


def render_trace(steps) -> str:
    return "\n".join(str(s) for s in steps)
