"""Checking LPL sequent derivations.

A derivation is a tree of rule applications. The checker matches every node
against its rule schema (antecedents are multisets, so exchange is free) and
collects the numeric side conditions of the degree leaves. Leaves whose
degrees are all concrete are decided on the spot; leaves mentioning symbolic
degrees become constraints, and :func:`solve_min` finds their least solution.
"""
from __future__ import annotations

import typing
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping, Optional

from . import lpl
from .degree import ZERO, as_degree, format_degree
from .errors import ConstraintError
from .lpl import AndMin, Arrow, LplFormula, OrMax, TensorNorm, format_lpl, is_l1, is_numeric, parse_lpl
from .norms import MINIMUM, NormFamily


# -- degree terms --------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Times:
    left: "DegreeTerm"
    right: "DegreeTerm"


@dataclass(frozen=True)
class Join:
    left: "DegreeTerm"
    right: "DegreeTerm"


@dataclass(frozen=True)
class Meet:
    left: "DegreeTerm"
    right: "DegreeTerm"


@dataclass(frozen=True)
class Residuum:
    left: "DegreeTerm"
    right: "DegreeTerm"


DegreeTerm = typing.Union[Const, Var, Times, Join, Meet, Residuum]
_TERM_OPS = (Times, Join, Meet, Residuum)
_SYMBOL = {Times: " × ", Join: " ∨ ", Meet: " ∧ ", Residuum: " ⇒ "}


def term_of(f: LplFormula) -> DegreeTerm:
    """Read a closed degree expression as a term."""
    if isinstance(f, lpl.Const):
        return Const(f.value)
    if isinstance(f, lpl.Param):
        return Var(f.name)
    op = {TensorNorm: Times, OrMax: Join, AndMin: Meet, Arrow: Residuum}.get(type(f))
    if op is None:
        raise ValueError(f"{format_lpl(f)} is not a degree expression")
    return op(term_of(f.left), term_of(f.right))


def term_vars(t: DegreeTerm) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, _TERM_OPS):
        return term_vars(t.left) | term_vars(t.right)
    return frozenset()


def evaluate(t: DegreeTerm, assignment: Mapping[str, Fraction], n: NormFamily) -> Fraction:
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        try:
            return assignment[t.name]
        except KeyError:
            raise ConstraintError(f"no value for {t.name}") from None
    left, right = evaluate(t.left, assignment, n), evaluate(t.right, assignment, n)
    if isinstance(t, Times):
        return n.tnorm(left, right)
    if isinstance(t, Join):
        return max(left, right)
    if isinstance(t, Meet):
        return min(left, right)
    return n.residuum(left, right)


def format_term(t: DegreeTerm) -> str:
    if isinstance(t, Const):
        return format_degree(t.value)
    if isinstance(t, Var):
        return t.name
    parts = []
    for side in (t.left, t.right):
        text = format_term(side)
        if isinstance(side, _TERM_OPS) and type(side) is not type(t):
            text = f"({text})"
        parts.append(text)
    return _SYMBOL[type(t)].join(parts)


@dataclass(frozen=True)
class Constraint:
    """``lhs <= rhs``."""

    lhs: DegreeTerm
    rhs: DegreeTerm

    def holds(self, assignment: Mapping[str, Fraction], n: NormFamily) -> bool:
        return evaluate(self.lhs, assignment, n) <= evaluate(self.rhs, assignment, n)

    def __str__(self):
        return f"{format_term(self.lhs)} ≤ {format_term(self.rhs)}"


# -- sequents and derivations --------------------------------------------------

@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[LplFormula, ...]
    succedent: LplFormula

    @classmethod
    def of(cls, antecedent: Iterable, succedent) -> "Sequent":
        ant = tuple(parse_lpl(a) if isinstance(a, str) else a for a in antecedent)
        succ = parse_lpl(succedent) if isinstance(succedent, str) else succedent
        return cls(ant, succ)

    def __str__(self):
        return ", ".join(format_lpl(a) for a in self.antecedent) + " ⊢ " + format_lpl(self.succedent)


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Sequent
    premises: tuple["Derivation", ...] = ()
    side: Optional[Mapping[str, LplFormula]] = field(default=None, compare=False, hash=False)

    def walk(self, path=()):
        yield path, self
        for i, p in enumerate(self.premises):
            yield from p.walk(path + (i,))

    def substitute(self, bindings: Mapping[str, Fraction]) -> "Derivation":
        ant = tuple(lpl.substitute(a, bindings) for a in self.conclusion.antecedent)
        succ = lpl.substitute(self.conclusion.succedent, bindings)
        return Derivation(self.rule, Sequent(ant, succ),
                          tuple(p.substitute(bindings) for p in self.premises), self.side)


def format_path(path: tuple[int, ...]) -> str:
    return "/".join(["root", *map(str, path)])


@dataclass
class Verdict:
    valid: bool
    failures: list[tuple[str, str]]
    constraints: frozenset[Constraint]

    def __str__(self):
        lines = ["valid" if self.valid else "invalid"]
        lines += [f"  {path}: {reason}" for path, reason in self.failures]
        lines += [f"  constraint {c}" for c in sorted(self.constraints, key=str)]
        return "\n".join(lines)


class RuleMismatch(Exception):
    pass


def _ms(formulas) -> Counter:
    return Counter(formulas)


def _remove(counter: Counter, f) -> Optional[Counter]:
    if counter[f] <= 0:
        return None
    out = counter.copy()
    out[f] -= 1
    if not out[f]:
        del out[f]
    return out


def _principal(conc: Sequent, kind) -> list[tuple[LplFormula, Counter]]:
    """Candidate principal formulae of type ``kind`` with their contexts."""
    ant = _ms(conc.antecedent)
    return [(f, _remove(ant, f)) for f in ant if isinstance(f, kind)]


def _same_succ(conc: Sequent, *prems: Sequent) -> None:
    for p in prems:
        if p.succedent != conc.succedent:
            raise RuleMismatch(f"succedent {format_lpl(p.succedent)} should be {format_lpl(conc.succedent)}")


# Each checker receives the conclusion, the premise conclusions and the side
# data; it raises RuleMismatch or returns the constraints the node emits.

def _id(conc, prems, side, n):
    if len(conc.antecedent) != 1 or conc.antecedent[0] != conc.succedent:
        raise RuleMismatch("identity needs exactly A ⊢ A")
    return []


def _ex(conc, prems, side, n):
    (p,) = prems
    _same_succ(conc, p)
    if _ms(p.antecedent) != _ms(conc.antecedent):
        raise RuleMismatch("exchange must keep the antecedent multiset")
    return []


def _cut(conc, prems, side, n):
    left, right = prems
    _same_succ(conc, right)
    cut_formula = left.succedent
    if side and "cut" in side and side["cut"] != cut_formula:
        raise RuleMismatch("declared cut formula differs from the left premise's succedent")
    delta = _remove(_ms(right.antecedent), cut_formula)
    if delta is None:
        raise RuleMismatch(f"cut formula {format_lpl(cut_formula)} missing from the right premise")
    if _ms(conc.antecedent) != delta + _ms(left.antecedent):
        raise RuleMismatch("conclusion antecedent is not the union of the premise contexts")
    return []


def _weaken(conc, prems, side, n):
    (p,) = prems
    _same_succ(conc, p)
    extra = _ms(conc.antecedent)
    extra.subtract(_ms(p.antecedent))
    if any(v < 0 for v in extra.values()) or sum(extra.values()) != 1:
        raise RuleMismatch("weakening adds exactly one antecedent formula")
    return []


def _l1_contraction(conc, prems, side, n):
    major, minor = prems
    _same_succ(conc, major)
    weak = minor.succedent
    if not is_l1(weak):
        raise RuleMismatch(f"{format_lpl(weak)} is not in the Boolean fragment")
    rest = _remove(_ms(major.antecedent), weak)
    if rest is None:
        raise RuleMismatch(f"{format_lpl(weak)} missing from the first premise")
    target = _ms(conc.antecedent)
    shared = [side["A"]] if side and "A" in side else list(_ms(minor.antecedent))
    for a in shared:
        delta = _remove(_ms(minor.antecedent), a)
        gamma = _remove(rest, a)
        if delta is None or gamma is None:
            continue
        if gamma + delta + Counter({a: 1}) == target:
            return []
    raise RuleMismatch("no shared formula A fits Γ, A, L ⊢ B and Δ, A ⊢ L")


def _and_left(conc, prems, side, n):
    _same_succ(conc, *prems)
    for f, gamma in _principal(conc, AndMin):
        options = [gamma + Counter({f.left: 1}), gamma + Counter({f.right: 1})]
        got = [_ms(p.antecedent) for p in prems]
        if len(prems) == 1 and got[0] in options:
            return []
        if len(prems) == 2 and (got == options or got == options[::-1]):
            return []
    raise RuleMismatch("no & formula in the antecedent matches the premises")


def _and_right(conc, prems, side, n):
    f = conc.succedent
    if not isinstance(f, AndMin):
        raise RuleMismatch("succedent is not a & formula")
    left, right = prems
    if (left.succedent, right.succedent) != (f.left, f.right):
        raise RuleMismatch("premises must prove the two conjuncts in order")
    for p in prems:
        if _ms(p.antecedent) != _ms(conc.antecedent):
            raise RuleMismatch("both premises share the conclusion's antecedent")
    return []


def _tensor_left(conc, prems, side, n):
    (p,) = prems
    _same_succ(conc, p)
    for f, gamma in _principal(conc, TensorNorm):
        if _ms(p.antecedent) == gamma + Counter([f.left, f.right]):
            return []
    raise RuleMismatch("no (*) formula in the antecedent matches the premise")


def _tensor_right(conc, prems, side, n):
    f = conc.succedent
    if not isinstance(f, TensorNorm):
        raise RuleMismatch("succedent is not a (*) formula")
    left, right = prems
    if (left.succedent, right.succedent) != (f.left, f.right):
        raise RuleMismatch("premises must prove the two factors in order")
    if _ms(conc.antecedent) != _ms(left.antecedent) + _ms(right.antecedent):
        raise RuleMismatch("conclusion antecedent must join the premise contexts")
    return []


def _plus_left(conc, prems, side, n):
    _same_succ(conc, *prems)
    got = [_ms(p.antecedent) for p in prems]
    for f, gamma in _principal(conc, OrMax):
        options = [gamma + Counter({f.left: 1}), gamma + Counter({f.right: 1})]
        if got == options or got == options[::-1]:
            return []
    raise RuleMismatch("no (+) formula in the antecedent matches the premises")


def _plus_right(conc, prems, side, n):
    f = conc.succedent
    if not isinstance(f, OrMax):
        raise RuleMismatch("succedent is not a (+) formula")
    for p in prems:
        if _ms(p.antecedent) != _ms(conc.antecedent):
            raise RuleMismatch("premise antecedent must equal the conclusion's")
    got = [p.succedent for p in prems]
    if len(prems) == 1 and got[0] in (f.left, f.right):
        return []
    if len(prems) == 2 and got == [f.left, f.right]:
        return []
    raise RuleMismatch("premises do not prove the disjuncts")


def _imp_left(conc, prems, side, n):
    left, right = prems
    _same_succ(conc, right)
    for f, rest in _principal(conc, Arrow):
        if left.succedent != f.left:
            continue
        delta = _remove(_ms(right.antecedent), f.right)
        if delta is not None and rest == _ms(left.antecedent) + delta:
            return []
    raise RuleMismatch("no -> formula in the antecedent matches the premises")


def _imp_right(conc, prems, side, n):
    (p,) = prems
    f = conc.succedent
    if not isinstance(f, Arrow):
        raise RuleMismatch("succedent is not a -> formula")
    if p.succedent != f.right or _ms(p.antecedent) != _ms(conc.antecedent) + Counter({f.left: 1}):
        raise RuleMismatch("premise must be Γ, A ⊢ B")
    return []


def _one_left(conc, prems, side, n):
    (p,) = prems
    _same_succ(conc, p)
    rest = _remove(_ms(conc.antecedent), lpl.ONE_C)
    if rest is None or rest != _ms(p.antecedent):
        raise RuleMismatch("conclusion must add a 1 to the premise antecedent")
    return []


def _zero_left(conc, prems, side, n):
    if lpl.ZERO_C not in conc.antecedent:
        raise RuleMismatch("antecedent has no 0")
    return []


def _double_negation(conc, prems, side, n):
    if len(conc.antecedent) != 1:
        raise RuleMismatch("double negation takes a single antecedent")
    (f,) = conc.antecedent
    target = conc.succedent
    if f != lpl.Not(lpl.Not(target)):
        raise RuleMismatch("antecedent must be !!L for the succedent L")
    if not is_l1(target):
        raise RuleMismatch(f"{format_lpl(target)} is not in the Boolean fragment")
    return []


def _distributivity(inner):
    def check(conc, prems, side, n):
        if len(conc.antecedent) != 1:
            raise RuleMismatch("distributivity axioms take a single antecedent")
        (f,) = conc.antecedent
        ok = (
            isinstance(f, AndMin)
            and isinstance(f.left, inner)
            and isinstance(f.right, inner)
            and f.left.right == f.right.right
            and conc.succedent == inner(AndMin(f.left.left, f.right.left), f.left.right)
        )
        if not ok:
            raise RuleMismatch("sequent does not instantiate the distributivity axiom")
        return []

    return check


def _numeric_sides(conc):
    if not conc.antecedent or not all(is_numeric(a) for a in conc.antecedent):
        raise RuleMismatch("numerical leaves need degree expressions on the left")
    if not is_numeric(conc.succedent):
        raise RuleMismatch("numerical leaves need a degree expression on the right")
    lhs = term_of(conc.antecedent[0])
    for a in conc.antecedent[1:]:
        lhs = Times(lhs, term_of(a))
    return lhs, term_of(conc.succedent)


def _order(conc, prems, side, n):
    lhs, rhs = _numeric_sides(conc)
    c = Constraint(lhs, rhs)
    if term_vars(lhs) | term_vars(rhs):
        return [c]
    if not c.holds({}, n):
        raise RuleMismatch(f"{c} is false")
    return []


def _definition(shape):
    # one side is the defined expression, the other a single degree; ground
    # instances must match exactly, symbolic ones constrain in the sequent's direction
    def check(conc, prems, side, n):
        lhs, rhs = _numeric_sides(conc)
        if len(conc.antecedent) != 1:
            raise RuleMismatch("definition axioms take a single antecedent")
        simple = (Const, Var)
        if not ((shape(lhs) and isinstance(rhs, simple)) or (shape(rhs) and isinstance(lhs, simple))):
            raise RuleMismatch("sequent does not instantiate the definition axiom")
        c = Constraint(lhs, rhs)
        if term_vars(lhs) | term_vars(rhs):
            return [c]
        if evaluate(lhs, {}, n) != evaluate(rhs, {}, n):
            raise RuleMismatch(f"{format_term(lhs)} and {format_term(rhs)} differ under {n.name}")
        return []

    return check


def _is_product(t):
    return isinstance(t, Times) and all(isinstance(s, (Const, Var)) for s in (t.left, t.right))


def _is_negated(t):
    return isinstance(t, Residuum) and isinstance(t.left, (Const, Var)) and t.right == Const(ZERO)


RULES = {
    "id": ({0}, _id),
    "exL": ({1}, _ex),
    "cut": ({2}, _cut),
    "weL": ({1}, _weaken),
    "L1con": ({2}, _l1_contraction),
    "and-L": ({1, 2}, _and_left),
    "and-R": ({2}, _and_right),
    "tensor-L": ({1}, _tensor_left),
    "tensor-R": ({2}, _tensor_right),
    "plus-L": ({2}, _plus_left),
    "plus-R": ({1, 2}, _plus_right),
    "imp-L": ({2}, _imp_left),
    "imp-R": ({1}, _imp_right),
    "one-L": ({1}, _one_left),
    "zero-L": ({0}, _zero_left),
    "notnot": ({0}, _double_negation),
    "distr-tensor-and": ({0}, _distributivity(TensorNorm)),
    "distr-plus-and": ({0}, _distributivity(OrMax)),
    "s'": ({0}, _order),
    "tensor-def": ({0}, _definition(_is_product)),
    "neg-def": ({0}, _definition(_is_negated)),
}

NUMERICAL_RULES = frozenset({"s'", "tensor-def", "neg-def"})
OUT_OF_SCOPE = frozenset({
    "forall-L", "forall-R", "exists-L", "exists-R", "distr-tensor-forall", "CD",
})
ALIASES = {
    "&L": "and-L", "&R": "and-R",
    "(*)L": "tensor-L", "(*)R": "tensor-R",
    "(+)L": "plus-L", "(+)R": "plus-R",
    "->L": "imp-L", "->R": "imp-R",
    "1L": "one-L", "0L": "zero-L",
    "s": "s'", "¬¬": "notnot", "neg-neg": "notnot",
}


def canonical_rule(name: str) -> str:
    return ALIASES.get(name, name)


def _check_node(node: Derivation, n: NormFamily) -> list[Constraint]:
    rule = canonical_rule(node.rule)
    if rule in OUT_OF_SCOPE:
        raise RuleMismatch(f"out-of-scope rule {node.rule!r}")
    if rule not in RULES:
        raise RuleMismatch(f"unknown rule {node.rule!r}")
    arities, check = RULES[rule]
    if len(node.premises) not in arities:
        expected = " or ".join(str(a) for a in sorted(arities))
        raise RuleMismatch(f"arity mismatch: {rule} expects {expected} premises, got {len(node.premises)}")
    return check(node.conclusion, [p.conclusion for p in node.premises], node.side, n)


def check_derivation(d: Derivation, n: NormFamily, bindings: Mapping[str, object] | None = None) -> Verdict:
    """Check every node; failures carry the node path, constraints come from degree leaves."""
    if bindings:
        d = d.substitute({k: as_degree(v) for k, v in bindings.items()})
    failures, constraints = [], set()
    for path, node in d.walk():
        try:
            constraints.update(_check_node(node, n))
        except RuleMismatch as e:
            failures.append((format_path(path), str(e)))
    return Verdict(not failures, failures, frozenset(constraints))


def extract_constraints(d: Derivation) -> frozenset[Constraint]:
    """Constraints of the numerical leaves that mention symbolic degrees."""
    out = set()
    for _, node in d.walk():
        if canonical_rule(node.rule) not in NUMERICAL_RULES:
            continue
        try:
            out.update(_check_node(node, MINIMUM))
        except RuleMismatch:
            pass
    return frozenset(out)


def lower_bounds(cs: Iterable[Constraint]) -> dict[str, list[DegreeTerm]]:
    """Group ``term <= var`` constraints by variable."""
    out: dict[str, list[DegreeTerm]] = {}
    for c in cs:
        if isinstance(c.rhs, Var):
            out.setdefault(c.rhs.name, []).append(c.lhs)
    return out


def _antitone_vars(t: DegreeTerm) -> frozenset[str]:
    if isinstance(t, Residuum):
        return term_vars(t.left) | _antitone_vars(t.right)
    if isinstance(t, _TERM_OPS):
        return _antitone_vars(t.left) | _antitone_vars(t.right)
    return frozenset()


def least_solution(cs: Iterable[Constraint], bindings: Mapping[str, object], n: NormFamily) -> dict[str, Fraction]:
    """Least assignment of the free variables satisfying a stratified system.

    Each free variable must occur alone on the right of its constraints; it is
    set to the join of its lower bounds in dependency order. The result also
    contains the bindings.
    """
    cs = list(cs)
    bound = {k: as_degree(v) for k, v in bindings.items()}
    lower: dict[str, list[DegreeTerm]] = {}
    checks = []
    for c in cs:
        if isinstance(c.rhs, Var) and c.rhs.name not in bound:
            lower.setdefault(c.rhs.name, []).append(c.lhs)
            continue
        free = term_vars(c.rhs) - bound.keys()
        if free:
            raise ConstraintError(f"not stratified: {c} bounds {', '.join(sorted(free))} from above")
        checks.append(c)
    for c in cs:
        bad = _antitone_vars(c.lhs) - bound.keys()
        if bad:
            raise ConstraintError(f"not stratified: {', '.join(sorted(bad))} sits in a residuum antecedent in {c}")

    free_vars = set(lower)
    for c in cs:
        free_vars |= term_vars(c.lhs) - bound.keys()
    missing = sorted(v for v in free_vars if v not in lower)
    if missing:
        raise ConstraintError(f"unbound variable with no lower bound: {', '.join(missing)}")

    graph = {v: set().union(*(term_vars(t) for t in lower[v])) - bound.keys() for v in lower}
    try:
        order = list(TopologicalSorter(graph).static_order())
    except CycleError as e:
        raise ConstraintError(f"cyclic constraint system: {e.args[1]}") from None

    assignment = dict(bound)
    for v in order:
        assignment[v] = max(evaluate(t, assignment, n) for t in lower[v])
    for c in checks:
        if not c.holds(assignment, n):
            raise ConstraintError(f"unsatisfiable: {c}")
    return assignment


def solve_min(cs: Iterable[Constraint], target: str, bindings: Mapping[str, object], n: NormFamily) -> Fraction:
    cs = list(cs)
    if target in bindings:
        raise ConstraintError(f"target {target} is already bound")
    assignment = least_solution(cs, bindings, n)
    if target not in assignment:
        raise ConstraintError(f"target {target} does not occur in the constraints")
    return assignment[target]


def target_of(d: Derivation) -> Optional[str]:
    """The symbolic degree ``x`` of a root succedent ``$x (+) A``, if any."""
    succ = d.conclusion.succedent
    if isinstance(succ, OrMax) and isinstance(succ.left, lpl.Param):
        return succ.left.name
    return None


# -- semantics -----------------------------------------------------------------

def sequent_holds(s: Sequent, n: NormFamily, universe: Iterable[str] = ()) -> bool:
    """Whether the t-norm product of the antecedent is below the succedent everywhere."""
    u = set(universe) | lpl.atoms(s.succedent)
    for a in s.antecedent:
        u |= lpl.atoms(a)
    left = lpl.truth_value(lpl.tensor_all(s.antecedent), u, n)
    right = lpl.truth_value(s.succedent, u, n)
    return all(a <= b for a, b in zip(left.values, right.values))


def unsound_nodes(d: Derivation, n: NormFamily) -> list[str]:
    """Paths of ground nodes whose sequent fails semantically."""
    return [format_path(path) for path, node in d.walk() if not sequent_holds(node.conclusion, n)]


# -- JSON form -----------------------------------------------------------------

def derivation_to_dict(d: Derivation) -> dict:
    out = {
        "rule": d.rule,
        "conclusion": {
            "antecedent": [format_lpl(a) for a in d.conclusion.antecedent],
            "succedent": format_lpl(d.conclusion.succedent),
        },
    }
    if d.premises:
        out["premises"] = [derivation_to_dict(p) for p in d.premises]
    if d.side:
        out["side"] = {k: format_lpl(v) for k, v in d.side.items()}
    return out


def derivation_from_dict(data: Mapping) -> Derivation:
    conc = data["conclusion"]
    side = data.get("side")
    return Derivation(
        data["rule"],
        Sequent.of(conc.get("antecedent", []), conc["succedent"]),
        tuple(derivation_from_dict(p) for p in data.get("premises", [])),
        {k: parse_lpl(v) for k, v in side.items()} if side else None,
    )
