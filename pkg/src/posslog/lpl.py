"""The graded language LPL over a finite propositional universe.

Formulae mix classical atoms with degree constants and the connectives
``&`` (min), ``(+)`` (max), ``(*)`` (t-norm) and ``->`` (residuum). Truth
values are possibility distributions computed compositionally; ``!A`` is
``A -> 0``. Symbolic degrees (``$name``) stand for constants whose value is
supplied later, which is what the sequent checker needs.
"""
from __future__ import annotations

import re
import typing
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import formula as cl
from .degree import ONE, ZERO, format_degree
from .errors import ConstraintError, FormulaSyntaxError, UniverseMismatch
from .formula import atom_mask, check_universe_size, full_mask, iter_bits, model_mask, normalize_universe
from .norms import NormFamily
from .possdist import KnowledgeBase, PossibilityDistribution


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return format_lpl(self)


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        if not ZERO <= v <= ONE:
            raise ValueError(f"constant {self.value} outside [0, 1]")
        object.__setattr__(self, "value", v)

    def __str__(self):
        return format_lpl(self)


@dataclass(frozen=True)
class Param:
    """A degree constant known only by name."""

    name: str

    def __str__(self):
        return format_lpl(self)


@dataclass(frozen=True)
class AndMin:
    left: "LplFormula"
    right: "LplFormula"

    def __str__(self):
        return format_lpl(self)


@dataclass(frozen=True)
class OrMax:
    left: "LplFormula"
    right: "LplFormula"

    def __str__(self):
        return format_lpl(self)


@dataclass(frozen=True)
class TensorNorm:
    left: "LplFormula"
    right: "LplFormula"

    def __str__(self):
        return format_lpl(self)


@dataclass(frozen=True)
class Arrow:
    left: "LplFormula"
    right: "LplFormula"

    def __str__(self):
        return format_lpl(self)


LplFormula = typing.Union[Atom, Const, Param, AndMin, OrMax, TensorNorm, Arrow]
BINARY = (AndMin, OrMax, TensorNorm, Arrow)
ZERO_C = Const(ZERO)
ONE_C = Const(ONE)


def Not(f: LplFormula) -> Arrow:
    return Arrow(f, ZERO_C)


def is_negation(f) -> bool:
    return isinstance(f, Arrow) and f.right == ZERO_C


def atoms(f: LplFormula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, BINARY):
        return atoms(f.left) | atoms(f.right)
    return frozenset()


def params(f: LplFormula) -> frozenset[str]:
    if isinstance(f, Param):
        return frozenset((f.name,))
    if isinstance(f, BINARY):
        return params(f.left) | params(f.right)
    return frozenset()


def is_l1(f: LplFormula) -> bool:
    """Membership in the Boolean fragment: no constants strictly inside (0, 1)."""
    if isinstance(f, Const):
        return f.value in (ZERO, ONE)
    if isinstance(f, Param):
        return False
    if isinstance(f, BINARY):
        return is_l1(f.left) and is_l1(f.right)
    return True


def is_numeric(f: LplFormula) -> bool:
    """True for closed degree expressions (no atoms)."""
    if isinstance(f, (Const, Param)):
        return True
    if isinstance(f, BINARY):
        return is_numeric(f.left) and is_numeric(f.right)
    return False


def substitute(f: LplFormula, bindings: Mapping[str, Fraction]) -> LplFormula:
    if isinstance(f, Param):
        return Const(bindings[f.name]) if f.name in bindings else f
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, bindings), substitute(f.right, bindings))
    return f


# -- syntax --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(\(\+\)|\(\*\)|->|[!&()])"
    r"|(\d+(?:\.\d*)?(?:/\d+)?|\.\d+)"
    r"|(\$[A-Za-z_][A-Za-z0-9_]*)"
    r"|([A-Za-z_][A-Za-z0-9_]*))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while text[pos:].strip():
            m = _TOKEN_RE.match(text, pos)
            if not m:
                where = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise FormulaSyntaxError("unexpected character", text, where)
            kind = m.lastindex
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)

    def fail(self, what):
        found = self.peek() or "end of input"
        raise FormulaSyntaxError(f"expected {what}, found {found!r}", self.text, self.pos())

    def parse(self):
        f = self.arrow()
        if self.i != len(self.tokens):
            self.fail("end of input")
        return f

    def arrow(self):
        left = self.plus()
        if self.peek() == "->":
            self.i += 1
            return Arrow(left, self.arrow())
        return left

    def _chain(self, op, cls, sub):
        f = sub()
        while self.peek() == op and self.tokens[self.i][0] == 1:
            self.i += 1
            f = cls(f, sub())
        return f

    def plus(self):
        return self._chain("(+)", OrMax, self.amp)

    def amp(self):
        return self._chain("&", AndMin, self.tensor)

    def tensor(self):
        return self._chain("(*)", TensorNorm, self.unary)

    def unary(self):
        if self.peek() == "!":
            self.i += 1
            return Not(self.unary())
        return self.primary()

    def primary(self):
        if self.i >= len(self.tokens):
            self.fail("a formula")
        kind, tok, pos = self.tokens[self.i]
        if kind == 1 and tok == "(":
            self.i += 1
            f = self.arrow()
            if self.peek() != ")":
                self.fail("')'")
            self.i += 1
            return f
        if kind == 2:
            self.i += 1
            value = Fraction(tok)
            if not ZERO <= value <= ONE:
                raise FormulaSyntaxError("degree literal outside [0, 1]", self.text, pos)
            return Const(value)
        if kind == 3:
            self.i += 1
            return Param(tok[1:])
        if kind == 4:
            self.i += 1
            return Atom(tok)
        self.fail("a formula")


def parse_lpl(text: str) -> LplFormula:
    """Parse LPL text.

    Operators: ``!`` > ``(*)`` > ``&`` > ``(+)`` > ``->`` (right-associative).
    Literals are decimals or ``p/q``; ``$name`` is a symbolic degree.
    """
    return _Parser(text).parse()


_PREC = {Arrow: 1, OrMax: 2, AndMin: 3, TensorNorm: 4}
_OPS = {Arrow: " -> ", OrMax: " (+) ", AndMin: " & ", TensorNorm: " (*) "}


def _prec(f) -> int:
    if is_negation(f):
        return 5
    return _PREC.get(type(f), 6)


def format_lpl(f: LplFormula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return format_degree(f.value)
    if isinstance(f, Param):
        return "$" + f.name
    if is_negation(f):
        inner = format_lpl(f.left)
        return "!" + (inner if _prec(f.left) >= 5 else f"({inner})")
    p = _prec(f)
    left, right = format_lpl(f.left), format_lpl(f.right)
    if isinstance(f, Arrow):
        left_ok, right_ok = _prec(f.left) > p, _prec(f.right) >= p
    else:
        left_ok, right_ok = _prec(f.left) >= p, _prec(f.right) > p
    if not left_ok:
        left = f"({left})"
    if not right_ok:
        right = f"({right})"
    return left + _OPS[type(f)] + right


# -- semantics -----------------------------------------------------------------

def _values(f: LplFormula, universe: tuple[str, ...], n: NormFamily) -> list[Fraction]:
    size = 1 << len(universe)
    if isinstance(f, Atom):
        mask = atom_mask(universe, f.name)
        return [ONE if mask >> k & 1 else ZERO for k in range(size)]
    if isinstance(f, Const):
        return [f.value] * size
    if isinstance(f, Param):
        raise ConstraintError(f"symbolic degree ${f.name} has no value")
    op = {
        AndMin: min,
        OrMax: max,
        TensorNorm: n.tnorm,
        Arrow: n.residuum,
    }[type(f)]
    left, right = _values(f.left, universe, n), _values(f.right, universe, n)
    return [op(a, b) for a, b in zip(left, right)]


def truth_value(f: LplFormula, universe: Iterable[str], n: NormFamily) -> PossibilityDistribution:
    u = normalize_universe(universe)
    missing = atoms(f) - set(u)
    if missing:
        raise UniverseMismatch(f"atoms {sorted(missing)} not in the universe")
    check_universe_size(u)
    return PossibilityDistribution(u, tuple(_values(f, u, n)))


def forces(d: PossibilityDistribution, f: LplFormula, n: NormFamily) -> bool:
    """Whether ``d`` is below the truth value of ``f`` everywhere."""
    tv = truth_value(f, d.universe, n)
    return all(a <= b for a, b in zip(d.values, tv.values))


def tensor_all(formulas: Iterable[LplFormula]) -> LplFormula:
    result = None
    for f in formulas:
        result = f if result is None else TensorNorm(result, f)
    return ONE_C if result is None else result


def and_all(formulas: Iterable[LplFormula]) -> LplFormula:
    result = None
    for f in formulas:
        result = f if result is None else AndMin(result, f)
    return ONE_C if result is None else result


def translate_classical(f: cl.Formula) -> LplFormula:
    if isinstance(f, cl.Atom):
        return Atom(f.name)
    if isinstance(f, cl.Top):
        return ONE_C
    if isinstance(f, cl.Bottom):
        return ZERO_C
    if isinstance(f, cl.Not):
        return Not(translate_classical(f.arg))
    op = {cl.And: AndMin, cl.Or: OrMax, cl.Implies: Arrow}[type(f)]
    return op(translate_classical(f.left), translate_classical(f.right))


def translate_spl(kb: KnowledgeBase) -> LplFormula:
    """``&`` over ``(1 - weight) (+) T(formula)``; the empty base is ``1``."""
    return and_all(OrMax(Const(ONE - wf.weight), translate_classical(wf.formula)) for wf in kb.items)


def lpl_necessity(gamma: Iterable[LplFormula], goal: cl.Formula, n: NormFamily,
                  universe: Iterable[str] = ()) -> Fraction:
    """Necessity of a classical goal under the t-norm product of ``gamma``."""
    gamma = list(gamma)
    u = normalize_universe(set(universe) | cl.atoms_of(goal) | {a for g in gamma for a in atoms(g)})
    check_universe_size(u)
    pi = truth_value(tensor_all(gamma), u, n)
    counter = full_mask(len(u)) ^ model_mask(goal, u)
    return ONE - max((pi.values[k] for k in iter_bits(counter)), default=ZERO)
