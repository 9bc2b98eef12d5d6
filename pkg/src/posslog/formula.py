"""Classical propositional formulae.

Parsing and printing, distributive clause form, world enumeration, and the
DPLL satisfiability kernel that the rest of the package leans on.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import FormulaSyntaxError, UniverseTooLarge, UnknownAtomError

DEFAULT_MAX_ATOMS = 22
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not IDENT_RE.match(self.name) or self.name in ("true", "false"):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Bottom:
    def __str__(self):
        return "false"


Formula = Union[Atom, Not, And, Or, Implies, Top, Bottom]
TRUE = Top()
FALSE = Bottom()


def atoms_of(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, Not):
        return atoms_of(f.arg)
    if isinstance(f, (And, Or, Implies)):
        return atoms_of(f.left) | atoms_of(f.right)
    return frozenset()


def conjoin(formulas: Iterable[Formula]) -> Formula:
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TRUE if result is None else result


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError("unexpected character", text, start)
        tok = m.group(1) or m.group(2) or m.group(3)
        tokens.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def expect(self, tok):
        if self.peek() != tok:
            found = self.peek() or "end of input"
            raise FormulaSyntaxError(f"expected {tok!r}, found {found!r}", self.text, self.pos())
        self.i += 1

    def parse(self) -> Formula:
        f = self.implication()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.text, self.pos())
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.i += 1
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.i += 1
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek() == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.peek() == "!":
            self.i += 1
            return Not(self.unary())
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok == "(":
            self.i += 1
            f = self.implication()
            self.expect(")")
            return f
        if tok is None or not IDENT_RE.match(tok):
            found = tok or "end of input"
            raise FormulaSyntaxError(f"expected a formula, found {found!r}", self.text, self.pos())
        self.i += 1
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        return Atom(tok)


def parse_formula(text: str) -> Formula:
    """Parse ASCII syntax: ``!`` ``&`` ``|`` ``->``, ``true``/``false``, parentheses.

    Precedence runs ``!`` > ``&`` > ``|`` > ``->``; ``->`` groups to the right.
    """
    return _Parser(text).parse()


_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}


def _prec(f) -> int:
    return _PREC.get(type(f), 5)


def format_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        inner = format_formula(f.arg)
        return "!" + (inner if _prec(f.arg) >= 4 else f"({inner})")
    op = {And: " & ", Or: " | ", Implies: " -> "}[type(f)]
    p = _prec(f)
    left, right = format_formula(f.left), format_formula(f.right)
    if isinstance(f, Implies):
        left_ok, right_ok = _prec(f.left) > p, _prec(f.right) >= p
    else:
        left_ok, right_ok = _prec(f.left) >= p, _prec(f.right) > p
    if not left_ok:
        left = f"({left})"
    if not right_ok:
        right = f"({right})"
    return left + op + right


# -- clauses -----------------------------------------------------------------

@dataclass(frozen=True)
class Clause:
    positive: frozenset[str] = frozenset()
    negative: frozenset[str] = frozenset()

    @classmethod
    def of(cls, *literals: str) -> "Clause":
        """Build from literal strings such as ``"A"`` and ``"!B"``."""
        pos, neg = set(), set()
        for lit in literals:
            if lit.startswith("!"):
                neg.add(lit[1:])
            else:
                pos.add(lit)
        return cls(frozenset(pos), frozenset(neg))

    @property
    def is_tautology(self) -> bool:
        return not self.positive.isdisjoint(self.negative)

    @property
    def is_empty(self) -> bool:
        return not self.positive and not self.negative

    def literals(self) -> list[tuple[str, bool]]:
        lits = [(a, True) for a in self.positive] + [(a, False) for a in self.negative]
        return sorted(lits)

    def evaluate(self, world) -> bool:
        return any(world[a] for a in self.positive) or any(not world[a] for a in self.negative)

    def to_formula(self) -> Formula:
        lits = [Atom(a) if sign else Not(Atom(a)) for a, sign in self.literals()]
        if not lits:
            return FALSE
        f = lits[0]
        for lit in lits[1:]:
            f = Or(f, lit)
        return f

    def __str__(self):
        if self.is_empty:
            return "⊥"
        return " | ".join(a if sign else "!" + a for a, sign in self.literals())


def _cnf(f: Formula, positive: bool) -> set[frozenset]:
    # clauses are frozensets of (atom, sign) pairs; tautologies never survive
    if isinstance(f, Atom):
        return {frozenset(((f.name, positive),))}
    if isinstance(f, Top):
        return set() if positive else {frozenset()}
    if isinstance(f, Bottom):
        return {frozenset()} if positive else set()
    if isinstance(f, Not):
        return _cnf(f.arg, not positive)
    if isinstance(f, And):
        if positive:
            return _cnf(f.left, True) | _cnf(f.right, True)
        return _product(_cnf(f.left, False), _cnf(f.right, False))
    if isinstance(f, Or):
        if positive:
            return _product(_cnf(f.left, True), _cnf(f.right, True))
        return _cnf(f.left, False) | _cnf(f.right, False)
    if isinstance(f, Implies):
        if positive:
            return _product(_cnf(f.left, False), _cnf(f.right, True))
        return _cnf(f.left, True) | _cnf(f.right, False)
    raise TypeError(f"not a formula: {f!r}")


def _product(a: set[frozenset], b: set[frozenset]) -> set[frozenset]:
    out = set()
    for c1 in a:
        for c2 in b:
            c = c1 | c2
            if not any((name, not sign) in c for name, sign in c):
                out.add(c)
    return out


def to_cnf(f: Formula) -> list[Clause]:
    """Distributive clause form; no auxiliary atoms, tautologous clauses dropped."""
    clauses = []
    for lits in _cnf(f, True):
        clauses.append(Clause(frozenset(a for a, s in lits if s), frozenset(a for a, s in lits if not s)))
    clauses.sort(key=lambda c: (len(c.positive) + len(c.negative), c.literals()))
    return clauses


# -- worlds ------------------------------------------------------------------

def max_atoms() -> int:
    value = os.environ.get("POSSLOG_MAX_ATOMS")
    return int(value) if value else DEFAULT_MAX_ATOMS


def normalize_universe(universe: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(universe)))


def check_universe_size(universe: Sequence[str], limit: int | None = None) -> None:
    limit = max_atoms() if limit is None else limit
    if len(universe) > limit:
        raise UniverseTooLarge(
            f"{len(universe)} atoms exceed the world-enumeration limit of {limit} "
            "(set POSSLOG_MAX_ATOMS to raise it)"
        )


@dataclass(frozen=True)
class World:
    """A total valuation over a sorted atom universe."""

    universe: tuple[str, ...]
    values: tuple[bool, ...]

    def __getitem__(self, name: str) -> bool:
        try:
            return self.values[self.universe.index(name)]
        except ValueError:
            raise UnknownAtomError(name) from None

    @property
    def valuation(self) -> dict[str, bool]:
        return dict(zip(self.universe, self.values))

    @property
    def index(self) -> int:
        k = 0
        for v in self.values:
            k = (k << 1) | v
        return k

    @classmethod
    def from_index(cls, universe: tuple[str, ...], k: int) -> "World":
        n = len(universe)
        return cls(universe, tuple(bool(k >> (n - 1 - j) & 1) for j in range(n)))

    def __str__(self):
        return "{" + ", ".join(f"{a}:{int(v)}" for a, v in zip(self.universe, self.values)) + "}"


def enumerate_worlds(universe: Iterable[str], limit: int | None = None) -> list[World]:
    """All valuations over the sorted universe, in binary counting order.

    The first atom is the most significant bit, so world ``k`` is the ``k``-th
    row of the usual truth table.
    """
    u = normalize_universe(universe)
    check_universe_size(u, limit)
    return [World.from_index(u, k) for k in range(1 << len(u))]


def eval_classical(f: Formula, world: World | Mapping[str, bool]) -> bool:
    if isinstance(f, Atom):
        try:
            return bool(world[f.name])
        except KeyError:
            raise UnknownAtomError(f.name) from None
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not eval_classical(f.arg, world)
    if isinstance(f, And):
        return eval_classical(f.left, world) and eval_classical(f.right, world)
    if isinstance(f, Or):
        return eval_classical(f.left, world) or eval_classical(f.right, world)
    if isinstance(f, Implies):
        return not eval_classical(f.left, world) or eval_classical(f.right, world)
    raise TypeError(f"not a formula: {f!r}")


# Model sets as bitmasks: bit k of the mask is world k of enumerate_worlds.

def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=4096)
def atom_mask(universe: tuple[str, ...], name: str) -> int:
    try:
        j = universe.index(name)
    except ValueError:
        raise UnknownAtomError(name) from None
    n = len(universe)
    b = n - 1 - j
    half = 1 << b
    unit = ((1 << half) - 1) << half
    return unit * (full_mask(n) // ((1 << (2 * half)) - 1))


def model_mask(f: Formula, universe: tuple[str, ...]) -> int:
    """Bitmask of the worlds of ``universe`` that satisfy ``f``."""
    full = full_mask(len(universe))
    if isinstance(f, Atom):
        return atom_mask(universe, f.name)
    if isinstance(f, Top):
        return full
    if isinstance(f, Bottom):
        return 0
    if isinstance(f, Not):
        return full ^ model_mask(f.arg, universe)
    left, right = model_mask(f.left, universe), model_mask(f.right, universe)
    if isinstance(f, And):
        return left & right
    if isinstance(f, Or):
        return left | right
    if isinstance(f, Implies):
        return (full ^ left) | right
    raise TypeError(f"not a formula: {f!r}")


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- satisfiability ----------------------------------------------------------

def _dpll(clauses: list[frozenset[int]]) -> bool:
    # unit propagation to fixpoint, then split on the first literal of a shortest clause
    while True:
        if not clauses:
            return True
        unit = None
        for c in clauses:
            if not c:
                return False
            if len(c) == 1:
                unit = next(iter(c))
                break
        if unit is None:
            break
        clauses = _assign(clauses, unit)
    lit = next(iter(min(clauses, key=len)))
    return _dpll(_assign(clauses, lit)) or _dpll(_assign(clauses, -lit))


def _assign(clauses, lit):
    return [c - {-lit} for c in clauses if lit not in c]


def satisfiable(clauses: Iterable[Clause]) -> bool:
    """Decide a clause set by unit propagation and splitting."""
    index: dict[str, int] = {}
    encoded = []
    for c in clauses:
        if c.is_tautology:
            continue
        lits = set()
        for a in c.positive:
            lits.add(index.setdefault(a, len(index) + 1))
        for a in c.negative:
            lits.add(-index.setdefault(a, len(index) + 1))
        encoded.append(frozenset(lits))
    return _dpll(encoded)


def is_satisfiable(formulas: Iterable[Formula]) -> bool:
    clauses = []
    for f in formulas:
        clauses.extend(to_cnf(f))
    return satisfiable(clauses)


def entails_classical(premises: Iterable[Formula], goal: Formula) -> bool:
    return not is_satisfiable([*premises, Not(goal)])


def is_tautology(f: Formula) -> bool:
    return not to_cnf(f)
