"""Triangular norms, their dual conorms and residua, over exact rationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .degree import ONE, ZERO

BinOp = Callable[[Fraction, Fraction], Fraction]


@dataclass(frozen=True)
class NormFamily:
    name: str
    tnorm: BinOp
    conorm: BinOp
    residuum: BinOp

    def negation(self, a: Fraction) -> Fraction:
        return self.residuum(a, ZERO)

    def __repr__(self):
        return f"NormFamily({self.name!r})"


def _godel_residuum(a, b):
    return ONE if a <= b else b


def _goguen_residuum(a, b):
    return ONE if a <= b else b / a


MINIMUM = NormFamily(
    "minimum",
    tnorm=lambda a, b: min(a, b),
    conorm=lambda a, b: max(a, b),
    residuum=_godel_residuum,
)

PRODUCT = NormFamily(
    "product",
    tnorm=lambda a, b: a * b,
    conorm=lambda a, b: a + b - a * b,
    residuum=_goguen_residuum,
)

LUKASIEWICZ = NormFamily(
    "lukasiewicz",
    tnorm=lambda a, b: max(ZERO, a + b - 1),
    conorm=lambda a, b: min(ONE, a + b),
    residuum=lambda a, b: min(ONE, 1 - a + b),
)

NORMS = {n.name: n for n in (MINIMUM, PRODUCT, LUKASIEWICZ)}

_ALIASES = {
    "min": "minimum",
    "max": "minimum",
    "godel": "minimum",
    "prod": "product",
    "goguen": "product",
    "luk": "lukasiewicz",
    "łukasiewicz": "lukasiewicz",
}


def get_norm(name: str | NormFamily) -> NormFamily:
    """Look up a family by name; ``max`` names the minimum family by its conorm."""
    if isinstance(name, NormFamily):
        return name
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    try:
        return NORMS[key]
    except KeyError:
        raise ValueError(f"unknown norm {name!r}; expected one of min, product, lukasiewicz") from None


def norm_apply(n: NormFamily, a, b) -> Fraction:
    return n.tnorm(Fraction(a), Fraction(b))


def conorm_apply(n: NormFamily, a, b) -> Fraction:
    return n.conorm(Fraction(a), Fraction(b))


def residuum_apply(n: NormFamily, a, b) -> Fraction:
    return n.residuum(Fraction(a), Fraction(b))
