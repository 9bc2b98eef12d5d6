"""Text formats for knowledge bases, LPL premise lists and proof files.

A knowledge-base file holds one ``<weight> : <formula>`` entry per line,
``#`` comments, and optional ``name:`` / ``atoms:`` headers::

    name: sigma_c
    atoms: G H
    1 : G -> H

A premise file holds one LPL formula per line. Proof files are JSON, either a
bare derivation tree or a wrapper carrying the norm, target and bindings.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .degree import ZERO, as_degree, format_degree
from .errors import FormulaSyntaxError
from .formula import format_formula, parse_formula
from .lpl import LplFormula, format_lpl, parse_lpl
from .possdist import KnowledgeBase
from .sequent import Derivation, derivation_from_dict, derivation_to_dict

log = logging.getLogger(__name__)


@dataclass
class KbDocument:
    name: str
    entries: list[tuple[str, str]] = field(default_factory=list)
    atoms: Optional[tuple[str, ...]] = None

    def to_kb(self) -> KnowledgeBase:
        items = [(parse_formula(text), as_degree(w)) for w, text in self.entries]
        return KnowledgeBase.of(items, self.atoms or ())

    @classmethod
    def from_kb(cls, kb: KnowledgeBase, name: str, declare_atoms: bool = False) -> "KbDocument":
        entries = [(format_degree(wf.weight), format_formula(wf.formula)) for wf in kb.items]
        return cls(name, entries, kb.universe if declare_atoms else None)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_kb_text(text: str, name: str = "kb") -> KbDocument:
    doc = KbDocument(name)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise FormulaSyntaxError(f"line {lineno}: expected '<weight> : <formula>'", raw, 0)
        head, rest = head.strip(), rest.strip()
        if head == "name":
            doc.name = rest
            continue
        if head == "atoms":
            doc.atoms = tuple(rest.replace(",", " ").split())
            continue
        try:
            weight = as_degree(head)
        except ValueError as e:
            raise FormulaSyntaxError(f"line {lineno}: {e}", raw, 0) from None
        if weight == ZERO:
            log.warning("line %d: dropping weight-0 entry %r", lineno, rest)
            continue
        parse_formula(rest)
        doc.entries.append((head, rest))
    return doc


def format_kb(doc: KbDocument) -> str:
    lines = [f"name: {doc.name}"]
    if doc.atoms is not None:
        lines.append("atoms: " + " ".join(doc.atoms))
    lines += [f"{w} : {text}" for w, text in doc.entries]
    return "\n".join(lines) + "\n"


def read_kb(path) -> KbDocument:
    path = Path(path)
    return parse_kb_text(path.read_text(encoding="utf-8"), path.stem)


def write_kb(doc: KbDocument, path) -> None:
    Path(path).write_text(format_kb(doc), encoding="utf-8")


def parse_gamma_text(text: str) -> list[LplFormula]:
    return [parse_lpl(line) for line in map(_strip_comment, text.splitlines()) if line]


def format_gamma(gamma: list[LplFormula]) -> str:
    return "".join(format_lpl(f) + "\n" for f in gamma)


def read_gamma(path) -> list[LplFormula]:
    return parse_gamma_text(Path(path).read_text(encoding="utf-8"))


@dataclass
class ProofDocument:
    proof: Derivation
    description: str = ""
    norm: Optional[str] = None
    target: Optional[str] = None
    bindings: dict[str, Fraction] = field(default_factory=dict)


def proof_from_json(data) -> ProofDocument:
    if "proof" not in data:
        return ProofDocument(derivation_from_dict(data))
    return ProofDocument(
        derivation_from_dict(data["proof"]),
        data.get("description", ""),
        data.get("norm"),
        data.get("target"),
        {k: as_degree(str(v)) for k, v in data.get("bindings", {}).items()},
    )


def proof_to_json(doc: ProofDocument) -> dict:
    out = {}
    if doc.description:
        out["description"] = doc.description
    if doc.norm:
        out["norm"] = doc.norm
    if doc.target:
        out["target"] = doc.target
    if doc.bindings:
        out["bindings"] = {k: format_degree(v) for k, v in doc.bindings.items()}
    out["proof"] = derivation_to_dict(doc.proof)
    return out


def read_proof(path) -> ProofDocument:
    return proof_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def dump_proof(doc: ProofDocument) -> str:
    return json.dumps(proof_to_json(doc), indent=1, ensure_ascii=False) + "\n"
