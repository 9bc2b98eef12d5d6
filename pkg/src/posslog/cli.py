"""Command-line front end: ``posslog kb|lpl|proof|corpus ...``.

Exit status is 0 when a goal is derivable or a proof is valid, 1 when it is
not, and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus
from .degree import ONE, as_degree, format_decimal
from .documents import KbDocument, format_kb, read_gamma, read_kb, read_proof
from .errors import ConstraintError, PosslogError
from .formula import parse_formula
from .fusion import eval_plan, parse_plan, plan_leaves, simplify
from .lpl import format_lpl, lpl_necessity, translate_spl
from .norms import get_norm
from .prover import inconsistency_degree, prove_pref, render_trace
from .sequent import check_derivation, least_solution, target_of, unsound_nodes

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


def rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator} ({format_decimal(q)})"


def rational_json(q: Fraction) -> dict:
    return {"rational": f"{q.numerator}/{q.denominator}", "decimal": format_decimal(q)}


def emit(args, text_lines: list[str], data: dict) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print("\n".join(text_lines))


def _union(paths) -> tuple[list[KbDocument], object]:
    docs = [read_kb(p) for p in paths]
    kb = docs[0].to_kb()
    for d in docs[1:]:
        kb = kb + d.to_kb()
    return docs, kb


def cmd_kb_inc(args) -> int:
    _, kb = _union(args.files)
    inc = inconsistency_degree(kb)
    emit(args, [f"inc = {rational(inc)}"], {"inc": rational_json(inc)})
    return EXIT_OK


def cmd_kb_query(args) -> int:
    _, kb = _union(args.files)
    goal = parse_formula(args.goal)
    result = prove_pref(kb, goal, trace=args.trace)
    lines = [
        f"goal: {args.goal}",
        f"derivable: {'yes' if result.derivable else 'no'}",
        f"degree: {rational(result.degree)}",
        f"inc: {rational(result.inc_base)}",
        "method: spl-refutation",
    ]
    if args.trace and result.trace is not None:
        lines += ["trace:", render_trace(result.trace)]
    data = {
        "goal": args.goal,
        "derivable": result.derivable,
        "degree": rational_json(result.degree),
        "inc": rational_json(result.inc_base),
        "method": "spl-refutation",
    }
    if args.trace and result.trace is not None:
        data["trace"] = [str(s) for s in result.trace]
    emit(args, lines, data)
    return EXIT_OK if result.derivable else EXIT_NO


def _write_or_print(args, doc: KbDocument) -> int:
    text = format_kb(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        if args.format == "json":
            emit(args, [], {"written": str(args.output), "entries": len(doc.entries)})
        return EXIT_OK
    if args.format == "json":
        emit(args, [], {"name": doc.name, "entries": [{"weight": w, "formula": f} for w, f in doc.entries]})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_kb_merge(args) -> int:
    plan = parse_plan(args.plan)
    env = {}
    for path in args.files:
        doc = read_kb(path)
        env[doc.name] = doc.to_kb()
        env.setdefault(Path(path).stem, env[doc.name])
    missing = sorted(set(plan_leaves(plan)) - env.keys())
    if missing:
        raise PosslogError(f"no file supplies {', '.join(missing)}")
    merged = eval_plan(plan, env)
    if args.simplify:
        merged = simplify(merged)
    return _write_or_print(args, KbDocument.from_kb(merged, args.name))


def cmd_kb_simplify(args) -> int:
    doc = read_kb(args.file)
    return _write_or_print(args, KbDocument.from_kb(simplify(doc.to_kb()), doc.name))


def cmd_lpl_query(args) -> int:
    gamma = read_gamma(args.file)
    norm = get_norm(args.norm)
    nec = lpl_necessity(gamma, parse_formula(args.goal), norm)
    lines = [
        f"goal: {args.goal}",
        f"derivable: {'yes' if nec > 0 else 'no'}",
        f"necessity: {rational(nec)}",
        f"norm: {norm.name}",
        "method: lpl-semantic",
    ]
    data = {"goal": args.goal, "derivable": nec > 0, "degree": rational_json(nec),
            "norm": norm.name, "method": "lpl-semantic"}
    emit(args, lines, data)
    return EXIT_OK if nec > 0 else EXIT_NO


def cmd_lpl_translate(args) -> int:
    text = format_lpl(translate_spl(read_kb(args.file).to_kb()))
    emit(args, [text], {"lpl": text})
    return EXIT_OK


def _bindings(pairs) -> dict[str, Fraction]:
    out = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep:
            raise PosslogError(f"binding {pair!r} is not name=value")
        out[name.strip().lstrip("$")] = as_degree(value)
    return out


def cmd_proof_check(args) -> int:
    doc = read_proof(args.file)
    norm = get_norm(args.norm or doc.norm or "min")
    bindings = {**doc.bindings, **_bindings(args.bind)} if not args.no_file_bindings else _bindings(args.bind)
    target = args.target or doc.target or target_of(doc.proof)
    verdict = check_derivation(doc.proof, norm, bindings)
    lines = [("valid" if verdict.valid else "invalid") + f" (norm {norm.name})"]
    lines += [f"  {path}: {reason}" for path, reason in verdict.failures]
    constraints = sorted(str(c) for c in verdict.constraints)
    lines += [f"  constraint {c}" for c in constraints]
    data = {
        "valid": verdict.valid,
        "norm": norm.name,
        "failures": [{"path": p, "reason": r} for p, r in verdict.failures],
        "constraints": constraints,
    }
    if verdict.valid and verdict.constraints and target:
        try:
            solution = least_solution(verdict.constraints, {}, norm)
        except ConstraintError as e:
            lines.append(f"  unsolved: {e}")
            data["unsolved"] = str(e)
        else:
            if target in solution:
                x = solution[target]
                ground = doc.proof.substitute({**bindings, **solution})
                sound = not unsound_nodes(ground, norm) and check_derivation(ground, norm).valid
                lines.append(f"{target} = {rational(x)}")
                lines.append(f"N = 1 - {target} = {rational(ONE - x)}")
                lines.append(f"ground instance: {'sound' if sound else 'UNSOUND'}")
                data.update({"target": target, "value": rational_json(x),
                             "necessity": rational_json(ONE - x), "ground_sound": sound})
    emit(args, lines, data)
    return EXIT_OK if verdict.valid else EXIT_NO


def cmd_corpus(args) -> int:
    if args.export:
        for path in corpus.export(args.export):
            print(f"wrote {path}", file=sys.stderr)
    rows = corpus.reproduce()
    lines = [f"{'ok  ' if r.ok else 'FAIL'} {r.label}: {_show(r.got)}" for r in rows]
    data = {"rows": [{"label": r.label, "ok": r.ok, "value": _show(r.got)} for r in rows]}
    emit(args, lines, data)
    return EXIT_OK if all(r.ok for r in rows) else EXIT_NO


def _show(value) -> str:
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, list):
        return "[" + ", ".join(_show(v) for v in value) + "]"
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    norm_choices = ["min", "product", "lukasiewicz"]

    parser = argparse.ArgumentParser(prog="posslog", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    top = parser.add_subparsers(dest="group", required=True)

    kb = top.add_parser("kb", help="possibilistic knowledge bases").add_subparsers(dest="command", required=True)
    p = kb.add_parser("inc", parents=[common], help="inconsistency degree of the union of FILES")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_kb_inc)

    p = kb.add_parser("query", parents=[common], help="preferential query against the union of FILES")
    p.add_argument("files", nargs="+")
    p.add_argument("--goal", required=True)
    p.add_argument("--trace", action="store_true", help="print a resolution refutation")
    p.set_defaults(func=cmd_kb_query)

    p = kb.add_parser("merge", parents=[common], help="evaluate a merge plan over named bases")
    p.add_argument("plan", help="e.g. 'conj(product, union(a, b), c)'")
    p.add_argument("files", nargs="+", help="bases, bound by their name header or file stem")
    p.add_argument("--simplify", action="store_true")
    p.add_argument("--name", default="merged")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_kb_merge)

    p = kb.add_parser("simplify", parents=[common], help="drop tautologies and subsumed formulae")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_kb_simplify)

    lpl = top.add_parser("lpl", help="graded LPL premises").add_subparsers(dest="command", required=True)
    p = lpl.add_parser("query", parents=[common], help="necessity of GOAL under the premises in FILE")
    p.add_argument("file")
    p.add_argument("--goal", required=True)
    p.add_argument("--norm", choices=norm_choices, default="min")
    p.set_defaults(func=cmd_lpl_query)

    p = lpl.add_parser("translate", parents=[common], help="LPL form of a knowledge base")
    p.add_argument("file")
    p.set_defaults(func=cmd_lpl_translate)

    proof = top.add_parser("proof", help="sequent derivations").add_subparsers(dest="command", required=True)
    p = proof.add_parser("check", parents=[common], help="check a JSON derivation")
    p.add_argument("file")
    p.add_argument("--norm", choices=norm_choices)
    p.add_argument("--bind", action="append", metavar="NAME=VALUE")
    p.add_argument("--no-file-bindings", action="store_true", help="ignore bindings stored in the file")
    p.add_argument("--target")
    p.set_defaults(func=cmd_proof_check)

    p = top.add_parser("corpus", parents=[common], help="recompute the bundled example numbers")
    p.add_argument("--export", metavar="DIR", help="also write the corpus files to DIR")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (PosslogError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
