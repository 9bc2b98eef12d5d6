"""The bundled robot-localization corpus and the numbers it should reproduce."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .documents import (
    KbDocument,
    ProofDocument,
    dump_proof,
    format_gamma,
    format_kb,
    parse_gamma_text,
    parse_kb_text,
    proof_from_json,
)
from .formula import parse_formula
from .fusion import eval_plan, parse_plan, simplify
from .lpl import lpl_necessity
from .norms import get_norm
from .possdist import KnowledgeBase, least_specific
from .proofs import ROBOT_BINDINGS, robot_gamma, shipped_proofs
from .prover import prove_pref
from .sequent import check_derivation, least_solution, solve_min, unsound_nodes

KB_ENTRIES = {
    "sigma_s": [("1", "D & E & F -> H"), ("0.5", "B & C -> D"), ("0.8", "A & B -> D")],
    "sigma_c": [("1", "G -> H")],
    "facts_s": [("0.4", "A"), ("0.5", "B"), ("0.8", "C"), ("0.7", "E"), ("0.4", "F")],
    "facts_c": [("0.6", "G")],
}

PROOF_DESCRIPTIONS = {
    "gamma1_proof": "localization premises entail $x (+) H",
    "gm_proof": "generalized modus ponens",
    "tensor_comp_proof": "(*) composition",
    "and_comp_proof": "& composition",
}

SCHEMA_3 = "conj({norm}, union(sigma_s, facts_s), union(sigma_c, facts_c))"


def kb_documents() -> dict[str, KbDocument]:
    return {name: KbDocument(name, list(entries)) for name, entries in KB_ENTRIES.items()}


def gamma_text() -> str:
    return format_gamma(robot_gamma(ROBOT_BINDINGS))


def proof_documents() -> dict[str, ProofDocument]:
    out = {}
    for name, proof in shipped_proofs().items():
        robot = name == "gamma1_proof"
        out[name] = ProofDocument(
            proof,
            PROOF_DESCRIPTIONS[name],
            "product" if robot else None,
            "x",
            dict(ROBOT_BINDINGS) if robot else {},
        )
    return out


def rendered_files() -> dict[str, str]:
    """File name -> contents, exactly as shipped."""
    files = {f"{name}.kb": format_kb(doc) for name, doc in kb_documents().items()}
    files["gamma1.lpl"] = gamma_text()
    files.update({f"{name}.json": dump_proof(doc) for name, doc in proof_documents().items()})
    return files


def export(directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, text in rendered_files().items():
        path = directory / fname
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written


def shipped_text(fname: str) -> str:
    return resources.files(__package__).joinpath("corpus", fname).read_text(encoding="utf-8")


def load_kbs() -> dict[str, KnowledgeBase]:
    return {name: parse_kb_text(shipped_text(f"{name}.kb"), name).to_kb() for name in KB_ENTRIES}


def load_proof(name: str) -> ProofDocument:
    import json

    return proof_from_json(json.loads(shipped_text(f"{name}.json")))


@dataclass(frozen=True)
class Reproduction:
    label: str
    got: object
    expected: object

    @property
    def ok(self) -> bool:
        return self.got == self.expected


def reproduce() -> list[Reproduction]:
    """Recompute every headline number of the corpus from the shipped files."""
    kbs = load_kbs()
    h = parse_formula("H")
    rows = []

    union = kbs["sigma_s"] + kbs["sigma_c"] + kbs["facts_s"] + kbs["facts_c"]
    rows.append(Reproduction("schema 1: union proves H", prove_pref(union, h).degree, Fraction(3, 5)))

    merged = simplify(eval_plan(parse_plan("conj(product, sigma_s, sigma_c)"), kbs))
    plain = kbs["sigma_s"] + kbs["sigma_c"]
    rows.append(Reproduction("schema 2: merged rules match their union",
                             least_specific(merged.with_universe(plain.universe)) == least_specific(plain), True))
    facts = kbs["facts_s"] + kbs["facts_c"]
    rows.append(Reproduction("schema 2: merged rules plus facts prove H",
                             prove_pref(merged + facts, h).degree, Fraction(3, 5)))

    product = eval_plan(parse_plan(SCHEMA_3.format(norm="product")), kbs)
    n_base = len(union)
    crosses = sorted((wf.weight for wf in product.items[n_base:] if wf.weight < 1), reverse=True)
    expected = sorted(map(Fraction, ["0.8", "0.92", "0.76", "0.8", "0.92", "0.88", "0.76"]), reverse=True)
    rows.append(Reproduction("schema 3: product cross weights", crosses, expected))
    rows.append(Reproduction("schema 3: product proves H", prove_pref(product, h).degree, Fraction(19, 25)))

    luk = eval_plan(parse_plan(SCHEMA_3.format(norm="lukasiewicz")), kbs)
    rows.append(Reproduction("schema 3: lukasiewicz proves H", prove_pref(luk, h).degree, Fraction(1)))

    norm = get_norm("product")
    gamma = parse_gamma_text(shipped_text("gamma1.lpl"))
    rows.append(Reproduction("lpl: necessity of H", lpl_necessity(gamma, h, norm), Fraction(19, 25)))

    doc = load_proof("gamma1_proof")
    verdict = check_derivation(doc.proof, norm)
    rows.append(Reproduction("proof: checks valid", verdict.valid, True))
    rows.append(Reproduction("proof: least x", solve_min(verdict.constraints, "x", doc.bindings, norm), Fraction(6, 25)))
    ground = doc.proof.substitute(least_solution(verdict.constraints, doc.bindings, norm))
    rows.append(Reproduction("proof: ground instance is sound", unsound_nodes(ground, norm), []))
    return rows
