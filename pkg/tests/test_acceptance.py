"""Acceptance gate: one check per criterion, exact rational arithmetic throughout.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion
is printed in the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""
from fractions import Fraction as Fr
from itertools import product
import random
import sys

import pytest

from gen import ATOM_POOL, oracle_distribution, oracle_necessity, random_formula, random_kb
from posslog import corpus
from posslog.formula import Atom, Not, atoms_of
from posslog.fusion import combine_semantic, eval_plan, merge, merge_conjunctive, parse_plan, simplify
from posslog import lpl
from posslog.lpl import Const, lpl_necessity, parse_lpl, translate_spl, truth_value
from posslog.norms import NORMS, PRODUCT
from posslog.possdist import least_specific
from posslog.proofs import and_composition, excluded_middle, modus_ponens, tensor_composition
from posslog.prover import prove_pref
from posslog.sequent import check_derivation, extract_constraints, least_solution, unsound_nodes

H = Atom("H")
GRID = [Fr(k, 10) for k in range(11)]
RESULTS = {}


def robot():
    return corpus.load_kbs()


def criterion_1():
    kbs = robot()
    union = kbs["sigma_s"] + kbs["sigma_c"] + kbs["facts_s"] + kbs["facts_c"]
    got = prove_pref(union, H)
    return got.derivable and got.degree == Fr(3, 5), f"H at {got.degree}"


def criterion_2():
    kbs = robot()
    merged = simplify(merge_conjunctive(kbs["sigma_s"], kbs["sigma_c"], PRODUCT))
    plain = kbs["sigma_s"] + kbs["sigma_c"]
    same = least_specific(merged.with_universe(plain.universe)) == least_specific(plain)
    degree = prove_pref(merged + kbs["facts_s"] + kbs["facts_c"], H).degree
    return same and degree == Fr(3, 5), f"distribution equal: {same}; H at {degree}"


def criterion_3():
    kbs = robot()
    left, right = kbs["sigma_s"] + kbs["facts_s"], kbs["sigma_c"] + kbs["facts_c"]
    merged = simplify(merge_conjunctive(left, right, PRODUCT))
    crosses = sorted((str(wf.formula), wf.weight) for wf in merged.items[len(left) + len(right):])
    expected = sorted([
        ("A | G", Fr(19, 25)), ("B | G", Fr(4, 5)), ("C | G", Fr(23, 25)), ("E | G", Fr(22, 25)),
        ("F | G", Fr(19, 25)), ("(B & C -> D) | G", Fr(4, 5)), ("(A & B -> D) | G", Fr(23, 25)),
    ])
    degree = prove_pref(merged, H).degree
    ok = crosses == expected and sorted(w for _, w in crosses) == sorted(
        [Fr(4, 5), Fr(23, 25), Fr(19, 25), Fr(4, 5), Fr(23, 25), Fr(22, 25), Fr(19, 25)]
    ) and degree == Fr(19, 25)
    return ok, f"{len(crosses)} crosses, H at {degree}"


def criterion_4():
    plan = parse_plan("conj(lukasiewicz, union(sigma_s, facts_s), union(sigma_c, facts_c))")
    degree = prove_pref(eval_plan(plan, robot()), H).degree
    return degree == 1, f"H at {degree}"


def criterion_5():
    gamma = corpus.parse_gamma_text(corpus.shipped_text("gamma1.lpl"))
    nec = lpl_necessity(gamma, H, PRODUCT)
    doc = corpus.load_proof("gamma1_proof")
    verdict = check_derivation(doc.proof, PRODUCT)
    x = least_solution(verdict.constraints, doc.bindings, PRODUCT)["x"] if verdict.valid else None
    return nec == Fr(19, 25) and verdict.valid and x == Fr(6, 25), f"necessity {nec}, valid {verdict.valid}, x = {x}"


def criterion_6():
    rng = random.Random(6)
    checked = 0
    for _ in range(200):
        k1, k2 = random_kb(rng, 8, 6), random_kb(rng, 8, 6)
        for n in NORMS.values():
            for mode in ("conj", "disj"):
                syntactic = least_specific(merge(k1, k2, n, mode))
                semantic = combine_semantic(least_specific(k1), least_specific(k2), n, mode)
                if syntactic != semantic:
                    return False, f"mismatch for {n.name}/{mode}: {k1} and {k2}"
                checked += 1
    return True, f"{checked} merges agree"


def criterion_7():
    rng = random.Random(7)
    derivable = 0
    for _ in range(300):
        kb = random_kb(rng, 10, 6)
        goal = random_formula(rng, kb.universe or ATOM_POOL[:1], depth=2)
        kb = kb.with_universe(atoms_of(goal))
        values = oracle_distribution(kb)
        nec = oracle_necessity(kb.universe, values, goal)
        nec_not = oracle_necessity(kb.universe, values, Not(goal))
        got = prove_pref(kb, goal)
        if got.derivable != (nec > nec_not) or (got.derivable and got.degree != nec):
            return False, f"mismatch on {kb} / {goal}"
        derivable += got.derivable
    return True, f"300 queries agree ({derivable} derivable)"


def criterion_8():
    rng = random.Random(8)
    for _ in range(200):
        kb = random_kb(rng, 8, 6)
        expected = least_specific(kb)
        for n in NORMS.values():
            if truth_value(translate_spl(kb), kb.universe, n) != expected:
                return False, f"mismatch under {n.name} on {kb}"
    return True, "200 bases agree under every norm"


def criterion_9():
    for n in NORMS.values():
        t, s, r = n.tnorm, n.conorm, n.residuum
        for a, b in product(GRID, repeat=2):
            if t(a, b) != t(b, a) or t(a, 1) != a or s(a, b) != 1 - t(1 - a, 1 - b) or s(a, b) < max(a, b):
                return False, f"{n.name} fails at ({a}, {b})"
        for a, b, c in product(GRID, repeat=3):
            if t(a, t(b, c)) != t(t(a, b), c):
                return False, f"{n.name} not associative at ({a}, {b}, {c})"
            if b <= c and t(a, b) > t(a, c):
                return False, f"{n.name} not monotone at ({a}, {b}, {c})"
            if (t(a, b) <= c) != (a <= r(b, c)):
                return False, f"{n.name} not adjoint at ({a}, {b}, {c})"
    return True, "3 norms on 11-point grid"


def _ground_corpus():
    doc = corpus.load_proof("gamma1_proof")
    for n in NORMS.values():
        yield n, doc.proof.substitute(least_solution(extract_constraints(doc.proof), doc.bindings, n))
    rng = random.Random(10)
    A, B, K, G, H_ = (lpl.Atom(a) for a in "ABKGH")
    L1, L2 = lpl.Atom("L1"), lpl.Atom("L2")
    for _ in range(20):
        d = [Const(Fr(rng.randint(0, 10), 10)) for _ in range(3)]
        for n in NORMS.values():
            x = Const(max(d[0].value, d[1].value))
            yield n, modus_ponens(d[0], A, B, d[1], x)
            yield n, and_composition(d[0], L1, d[1], lpl.Not(L2), x)
            yield n, tensor_composition(K, G, H_, d[0], d[1], Const(n.tnorm(d[0].value, d[1].value)))
    for f in (L1, lpl.Not(L1), parse_lpl("L1 & L2"), parse_lpl("L1 -> L2")):
        for n in NORMS.values():
            yield n, excluded_middle(f)


def criterion_10():
    count = 0
    for n, d in _ground_corpus():
        verdict = check_derivation(d, n)
        if not verdict.valid or verdict.constraints:
            return False, f"ground derivation rejected under {n.name}: {verdict.failures[:1]}"
        bad = unsound_nodes(d, n)
        if bad:
            return False, f"unsound nodes under {n.name}: {bad[:3]}"
        count += 1
    return True, f"{count} accepted ground derivations sound at every node"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number):
    ok, detail = CRITERIA[number - 1]()
    RESULTS[number] = (ok, detail)
    assert ok, detail


def report_lines(results):
    return [f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}" for k, (ok, detail) in sorted(results.items())]


if __name__ == "__main__":
    results = {k: CRITERIA[k - 1]() for k in range(1, 11)}
    print("\n".join(report_lines(results)))
    sys.exit(0 if all(ok for ok, _ in results.values()) else 1)
