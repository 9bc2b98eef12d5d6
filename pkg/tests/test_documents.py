import json
import logging
from fractions import Fraction as Fr

import pytest

from posslog import corpus
from posslog.documents import (
    KbDocument,
    ProofDocument,
    dump_proof,
    format_gamma,
    format_kb,
    parse_gamma_text,
    parse_kb_text,
    proof_from_json,
    proof_to_json,
    read_kb,
)
from posslog.errors import FormulaSyntaxError
from posslog.lpl import parse_lpl
from posslog.possdist import KnowledgeBase
from posslog.proofs import modus_ponens


class TestKbFormat:
    def test_parse(self):
        doc = parse_kb_text("# robot rules\nname: rules\natoms: A, B C\n1 : A -> B  # certain\n0.25 : !C\n\n", "x")
        assert doc.name == "rules"
        assert doc.atoms == ("A", "B", "C")
        assert doc.entries == [("1", "A -> B"), ("0.25", "!C")]
        kb = doc.to_kb()
        assert [wf.weight for wf in kb.items] == [1, Fr(1, 4)]

    def test_round_trip(self):
        doc = parse_kb_text("atoms: A B Z\n0.3 : A | B\n1/3 : !A\n")
        assert parse_kb_text(format_kb(doc)) == doc

    def test_zero_weight_is_dropped_with_warning(self, caplog):
        with caplog.at_level(logging.WARNING):
            doc = parse_kb_text("0 : A\n0.5 : B\n")
        assert doc.entries == [("0.5", "B")]
        assert "weight-0" in caplog.text

    @pytest.mark.parametrize("text", ["A -> B\n", "1.5 : A\n", "abc : A\n", "0.5 : A &\n"])
    def test_errors(self, text):
        with pytest.raises(ValueError):
            parse_kb_text(text)

    def test_syntax_error_type(self):
        with pytest.raises(FormulaSyntaxError):
            parse_kb_text("A\n")

    def test_from_kb(self):
        kb = KnowledgeBase.of([("A & B", Fr(19, 25)), ("C", Fr(1, 3))], ["Z"])
        doc = KbDocument.from_kb(kb, "m", declare_atoms=True)
        assert format_kb(doc) == "name: m\natoms: A B C Z\n0.76 : A & B\n1/3 : C\n"
        assert doc.to_kb() == kb

    def test_name_defaults_to_stem(self, tmp_path):
        path = tmp_path / "facts.kb"
        path.write_text("0.5 : A\n")
        assert read_kb(path).name == "facts"


class TestGammaFormat:
    def test_round_trip(self):
        text = "# premises\n0.4 (+) G\n\n(0.3 (+) E) & (0.6 (+) F)\n"
        gamma = parse_gamma_text(text)
        assert gamma == [parse_lpl("0.4 (+) G"), parse_lpl("(0.3 (+) E) & (0.6 (+) F)")]
        assert parse_gamma_text(format_gamma(gamma)) == gamma


class TestProofFormat:
    def test_bare_tree(self):
        d = modus_ponens(parse_lpl("$a"), parse_lpl("A"), parse_lpl("B"), parse_lpl("$b"), parse_lpl("$x"))
        doc = proof_from_json(json.loads(dump_proof(ProofDocument(d)))["proof"])
        assert doc.proof == d and doc.bindings == {}

    def test_wrapper(self):
        d = modus_ponens(parse_lpl("$a"), parse_lpl("A"), parse_lpl("B"), parse_lpl("$b"), parse_lpl("$x"))
        doc = ProofDocument(d, "gm", "product", "x", {"a": Fr(1, 5)})
        data = proof_to_json(doc)
        assert data["bindings"] == {"a": "0.2"}
        assert proof_from_json(json.loads(json.dumps(data))) == doc


class TestShippedCorpus:
    def test_files_match_builders(self):
        for fname, text in corpus.rendered_files().items():
            assert corpus.shipped_text(fname) == text, fname

    def test_every_file_round_trips(self):
        for name in corpus.KB_ENTRIES:
            doc = parse_kb_text(corpus.shipped_text(f"{name}.kb"))
            assert parse_kb_text(format_kb(doc)) == doc
        gamma = parse_gamma_text(corpus.shipped_text("gamma1.lpl"))
        assert parse_gamma_text(format_gamma(gamma)) == gamma
        for name in corpus.PROOF_DESCRIPTIONS:
            doc = corpus.load_proof(name)
            assert proof_from_json(json.loads(dump_proof(doc))) == doc

    def test_reproduction(self):
        rows = corpus.reproduce()
        assert rows and all(r.ok for r in rows), [r.label for r in rows if not r.ok]

    def test_export(self, tmp_path):
        written = corpus.export(tmp_path / "out")
        assert sorted(p.name for p in written) == sorted(corpus.rendered_files())
