"""Possibility distributions and weighted knowledge bases.

This is the semantic side of the package: necessity, the least specific
distribution of a base, inconsistency, plausible conclusions. Everything is
computed by enumerating worlds, so it doubles as the brute-force oracle for
the syntactic modules.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .degree import ONE, ZERO, as_degree, format_degree
from .errors import UniverseMismatch, UnknownAtomError
from .formula import (
    Formula,
    Not,
    World,
    atoms_of,
    check_universe_size,
    format_formula,
    full_mask,
    iter_bits,
    model_mask,
    normalize_universe,
    parse_formula,
)


@dataclass(frozen=True)
class PossibilityDistribution:
    """Degrees indexed by world number (see :func:`formula.enumerate_worlds`)."""

    universe: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.universe))) != self.universe:
            raise ValueError("universe must be sorted and duplicate free")
        if len(self.values) != 1 << len(self.universe):
            raise ValueError("distribution must be total over the universe")

    @classmethod
    def constant(cls, universe: Iterable[str], value=ONE) -> "PossibilityDistribution":
        u = normalize_universe(universe)
        check_universe_size(u)
        return cls(u, (as_degree(value),) * (1 << len(u)))

    @classmethod
    def from_function(cls, universe: Iterable[str], fn: Callable[[World], object]) -> "PossibilityDistribution":
        u = normalize_universe(universe)
        check_universe_size(u)
        return cls(u, tuple(as_degree(fn(World.from_index(u, k))) for k in range(1 << len(u))))

    def __getitem__(self, world: World | int) -> Fraction:
        if isinstance(world, World):
            if world.universe != self.universe:
                raise UniverseMismatch("world and distribution have different universes")
            world = world.index
        return self.values[world]

    def items(self) -> Iterator[tuple[World, Fraction]]:
        for k, v in enumerate(self.values):
            yield World.from_index(self.universe, k), v

    @property
    def height(self) -> Fraction:
        return max(self.values)

    @property
    def is_normalized(self) -> bool:
        return self.height == ONE

    def extend(self, universe: Iterable[str]) -> "PossibilityDistribution":
        """Cylindrical extension to a larger universe (new atoms are unconstrained)."""
        u = normalize_universe(universe)
        if u == self.universe:
            return self
        if not set(self.universe) <= set(u):
            raise UniverseMismatch("can only extend to a superset universe")
        check_universe_size(u)
        n = len(u)
        positions = [n - 1 - u.index(a) for a in self.universe]
        values = []
        for k in range(1 << n):
            small = 0
            for b in positions:
                small = (small << 1) | (k >> b & 1)
            values.append(self.values[small])
        return PossibilityDistribution(u, tuple(values))

    def map(self, fn: Callable[[Fraction], Fraction]) -> "PossibilityDistribution":
        return PossibilityDistribution(self.universe, tuple(fn(v) for v in self.values))


def align(*dists: PossibilityDistribution) -> list[PossibilityDistribution]:
    """Extend all distributions to the union of their universes."""
    u = normalize_universe(a for d in dists for a in d.universe)
    return [d.extend(u) for d in dists]


@dataclass(frozen=True)
class WeightedFormula:
    formula: Formula
    weight: Fraction

    def __post_init__(self):
        w = as_degree(self.weight)
        if w == ZERO:
            raise ValueError("weight-0 formulae carry no information")
        object.__setattr__(self, "weight", w)

    def __str__(self):
        return f"({format_formula(self.formula)}, {format_degree(self.weight)})"


def _weighted(item) -> WeightedFormula:
    if isinstance(item, WeightedFormula):
        return item
    f, w = item
    if isinstance(f, str):
        f = parse_formula(f)
    return WeightedFormula(f, as_degree(w))


@dataclass(frozen=True)
class KnowledgeBase:
    """A finite multiset of weighted formulae over a declared atom universe."""

    items: tuple[WeightedFormula, ...] = ()
    universe: tuple[str, ...] = field(default=())

    def __post_init__(self):
        items = tuple(_weighted(i) for i in self.items)
        mentioned = {a for wf in items for a in atoms_of(wf.formula)}
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "universe", normalize_universe(mentioned | set(self.universe)))

    @classmethod
    def of(cls, items: Iterable = (), atoms: Iterable[str] = ()) -> "KnowledgeBase":
        """Accepts WeightedFormula values or ``(formula_or_text, weight)`` pairs."""
        return cls(tuple(items), tuple(atoms))

    def __iter__(self) -> Iterator[WeightedFormula]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def union(self, other: "KnowledgeBase") -> "KnowledgeBase":
        return KnowledgeBase(self.items + other.items, self.universe + other.universe)

    __add__ = union

    def add(self, *items) -> "KnowledgeBase":
        return KnowledgeBase(self.items + tuple(_weighted(i) for i in items), self.universe)

    def without(self, index: int) -> "KnowledgeBase":
        return KnowledgeBase(self.items[:index] + self.items[index + 1:], self.universe)

    def with_universe(self, atoms: Iterable[str]) -> "KnowledgeBase":
        return KnowledgeBase(self.items, self.universe + tuple(atoms))

    def weights(self) -> list[Fraction]:
        """Distinct weights, largest first."""
        return sorted({wf.weight for wf in self.items}, reverse=True)

    def cut(self, alpha) -> list[Formula]:
        alpha = as_degree(alpha)
        return [wf.formula for wf in self.items if wf.weight >= alpha]

    def __str__(self):
        return "{" + ", ".join(str(wf) for wf in self.items) + "}"


def _check_atoms(f: Formula, universe: tuple[str, ...]) -> None:
    for a in atoms_of(f):
        if a not in universe:
            raise UnknownAtomError(a)


def necessity(d: PossibilityDistribution, f: Formula) -> Fraction:
    """1 minus the highest possibility of a countermodel (0 when there is none)."""
    _check_atoms(f, d.universe)
    counter = full_mask(len(d.universe)) ^ model_mask(f, d.universe)
    return ONE - max((d.values[k] for k in iter_bits(counter)), default=ZERO)


def least_specific(kb: KnowledgeBase) -> PossibilityDistribution:
    u = kb.universe
    check_universe_size(u)
    full = full_mask(len(u))
    values = [ONE] * (1 << len(u))
    remaining = full
    # a world takes 1 - (largest weight it violates); visit weights top down
    for alpha in kb.weights():
        violated = 0
        for wf in kb.items:
            if wf.weight == alpha:
                violated |= full ^ model_mask(wf.formula, u)
        fresh = violated & remaining
        for k in iter_bits(fresh):
            values[k] = ONE - alpha
        remaining &= ~fresh
    return PossibilityDistribution(u, tuple(values))


def inconsistency_semantic(d: PossibilityDistribution) -> Fraction:
    return ONE - d.height


def plausible_conclusion(d: PossibilityDistribution, f: Formula, alpha) -> bool:
    # both conditions are checked; (ii) only implies (i) when d is normalized
    nec = necessity(d, f)
    return nec > necessity(d, Not(f)) and nec >= as_degree(alpha)


def leq_specific(d1: PossibilityDistribution, d2: PossibilityDistribution) -> bool:
    """True iff ``d2`` is less specific than (pointwise above) ``d1``."""
    if d1.universe != d2.universe:
        raise UniverseMismatch(f"{d1.universe} vs {d2.universe}")
    return all(b >= a for a, b in zip(d1.values, d2.values))


def compatible(d: PossibilityDistribution, kb: KnowledgeBase) -> bool:
    return all(necessity(d, wf.formula) >= wf.weight for wf in kb.items)
