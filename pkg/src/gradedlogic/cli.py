"""Command-line front end.

Subcommands: parse, eval, entail, check-proof, qcheck, score, demo.
Exit codes: 0 for success or a true verdict, 1 for a false verdict (a
countermodel was found, a proof was rejected, scores disagreed), 2 for
usage, input, or resource errors.  With ``--json`` all results are printed
as canonical JSON (sorted keys, exact "p/q" degree strings), byte-identical
across runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from importlib import resources
from pathlib import Path

from .errors import ResourceLimitError
from .grades import TNormKind, as_grade
from .kernel import (
    check_proof,
    parse_proof_script,
    verdict_to_dict,
)
from .prototypes import (
    check_theory_correct_canonical,
    degree,
    grid_worlds,
)
from .questionnaire import (
    cross_check,
    ingest_answers,
    load_spec,
    report_to_dict,
)
from .semantics import Evaluation, eval_basic, find_countermodel, satisfies_formula
from .syntax import (
    ParseError,
    parse_basic,
    parse_formula,
    parse_theory,
    render,
)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif text:
        print(text)


def _read(path) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_parse(args) -> int:
    if args.basic:
        node = parse_basic(args.text)
        kind = "basic"
    else:
        node = parse_formula(args.text)
        kind = "formula"
    _emit(args, {"kind": kind, "canonical": render(node)}, render(node))
    return 0


def _parse_assignments(pairs) -> dict:
    values = {}
    for pair in pairs or ():
        name, eq, raw = pair.partition("=")
        if not eq or not name or not raw:
            raise ValueError(f"--assign needs NAME=GRADE, got {pair!r}")
        values[name] = as_grade(raw)
    return values


def _cmd_eval(args) -> int:
    v = Evaluation(_parse_assignments(args.assign), args.tnorm)
    if args.expr is not None:
        value = eval_basic(v, parse_basic(args.expr))
        _emit(args, {"kind": "basic", "value": str(value)}, str(value))
        return 0
    f = parse_formula(args.formula)
    satisfied = satisfies_formula(v, f)
    _emit(
        args,
        {"kind": "formula", "satisfied": satisfied},
        "true" if satisfied else "false",
    )
    return 0 if satisfied else 1


def _cmd_entail(args) -> int:
    theory = parse_theory(_read(args.theory))
    formula = parse_formula(args.formula)
    m = args.grid_denominator
    counter = find_countermodel(theory, formula, m, args.tnorm)
    if counter is None:
        _emit(
            args,
            {"grid_denominator": m, "verdict": "no countermodel"},
            f"no countermodel with denominator {m}",
        )
        return 0
    values = {name: str(v) for name, v in sorted(counter.values.items())}
    shown = ", ".join(f"{name}={v}" for name, v in values.items()) or "(no variables)"
    _emit(
        args,
        {"grid_denominator": m, "verdict": "countermodel", "countermodel": values},
        f"countermodel: {shown}",
    )
    return 1


def _cmd_check_proof(args) -> int:
    theory = parse_theory(_read(args.theory))
    proof = parse_proof_script(_read(args.proof), theory)
    verdict = check_proof(theory, proof, args.tnorm)
    if verdict.accepted:
        _emit(args, verdict_to_dict(verdict), "accepted")
        return 0
    _emit(
        args,
        verdict_to_dict(verdict),
        f"rejected at line {verdict.line}: {verdict.reason}",
    )
    return 1


def _degree_rows(ev, k):
    disorder = next(iter(ev.dependent))
    for w in grid_worlds(ev.dimension, k):
        yield [str(c) for c in w] + [str(degree(ev, disorder, w))]


def _cmd_qcheck(args) -> int:
    theory = parse_theory(_read(args.theory))
    ev = check_theory_correct_canonical(theory, args.dim, args.grid)
    if ev is None:
        _emit(
            args,
            {"correct": False, "reason": "outside supported pattern"},
            "outside supported pattern",
        )
        return 1
    header = list(ev.basic) + ["degree"]
    rows = list(_degree_rows(ev, args.grid))
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)
    if args.json:
        payload = {
            "correct": True,
            "dimension": args.dim,
            "grid": args.grid,
            "columns": header,
            "rows": rows,
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"correct: canonical evaluation over {', '.join(ev.basic)}")
        if args.csv_out:
            print(f"degree dump written to {args.csv_out}")
        else:
            buffer = io.StringIO()
            writer = csv.writer(buffer)
            writer.writerow(header)
            writer.writerows(rows)
            sys.stdout.write(buffer.getvalue())
    return 0


def _safe_name(respondent: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", respondent) or "anon"


def _score_reports(spec, sheets, kind):
    return [cross_check(sheet, spec, kind) for sheet in sheets]


def _report_line(report) -> str:
    status = "agree" if report.agreement else "DISAGREE"
    return (
        f"{report.respondent}: mean={report.score_mean} "
        f"distance={report.score_q} derivation={report.score_lgim} {status}"
    )


def _cmd_score(args) -> int:
    spec = load_spec(args.spec)
    sheets = ingest_answers(args.answers, spec)
    reports = _score_reports(spec, sheets, args.tnorm)
    out_path = Path(args.out)
    from .kernel import proof_to_json_lines

    lines = []
    for report in reports:
        proof_name = f"{out_path.stem}.{_safe_name(report.respondent)}.proof.jsonl"
        proof_path = out_path.parent / proof_name
        proof_path.write_text(proof_to_json_lines(report.proof), encoding="utf-8")
        lines.append(json.dumps(report_to_dict(report, proof_name), sort_keys=True))
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    all_agree = all(r.agreement for r in reports)
    if args.json:
        for line in lines:
            print(line)
    else:
        for report, line in zip(reports, lines):
            print(_report_line(report))
        print(f"wrote {len(reports)} reports to {out_path}")
    return 0 if all_agree else 1


def _cmd_demo(args) -> int:
    data = resources.files("gradedlogic").joinpath("data")
    spec_text = data.joinpath("demo_questionnaire.json").read_text(encoding="utf-8")
    from .questionnaire import spec_from_dict

    spec = spec_from_dict(json.loads(spec_text))
    with resources.as_file(data.joinpath("demo_answers.csv")) as answers_path:
        sheets = ingest_answers(answers_path, spec)
    reports = _score_reports(spec, sheets, args.tnorm)
    if args.json:
        for report in reports:
            print(json.dumps(report_to_dict(report, None), sort_keys=True))
    else:
        print(f"{spec.name}: {len(spec.items)} items, scale 0..{spec.scale_steps}")
        for report in reports:
            print(_report_line(report))
        verdictline = (
            "all three scoring routes agree"
            if all(r.agreement for r in reports)
            else "scoring routes DISAGREE"
        )
        print(verdictline)
    return 0 if all(r.agreement for r in reports) else 1


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _tnorm(value: str) -> TNormKind:
    try:
        return TNormKind(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown t-norm {value!r} (choose lukasiewicz, product, or min)"
        ) from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tnorm",
        type=_tnorm,
        default=TNormKind.LUKASIEWICZ,
        help="session t-norm: lukasiewicz (default), product, or min",
    )
    common.add_argument(
        "--json", action="store_true", help="print canonical JSON instead of text"
    )

    parser = argparse.ArgumentParser(
        prog="gradedlogic",
        description="Graded-implication reasoning and questionnaire scoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and reprint canonically")
    p.add_argument("text", help="formula (or basic expression with --basic)")
    p.add_argument("--basic", action="store_true", help="treat input as a basic expression")
    p.set_defaults(handler=_cmd_parse)

    p = sub.add_parser("eval", parents=[common], help="evaluate under an assignment")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--formula", help="outer formula to evaluate")
    group.add_argument("--expr", help="basic expression to evaluate")
    p.add_argument(
        "--assign",
        action="append",
        metavar="NAME=GRADE",
        help="variable degree, repeatable",
    )
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("entail", parents=[common], help="grid countermodel search")
    p.add_argument("--theory", required=True, help="newline-separated formula file")
    p.add_argument("--formula", required=True, help="candidate consequence")
    p.add_argument("--grid-denominator", type=int, required=True, metavar="M")
    p.set_defaults(handler=_cmd_entail)

    p = sub.add_parser("check-proof", parents=[common], help="verify a proof script")
    p.add_argument("--theory", required=True)
    p.add_argument("--proof", required=True, help="JSON-lines proof script")
    p.set_defaults(handler=_cmd_check_proof)

    p = sub.add_parser(
        "qcheck", parents=[common],
        help="recognise the canonical disorder theory and dump its degree field",
    )
    p.add_argument("--theory", required=True)
    p.add_argument("--dim", type=int, required=True, help="number of items")
    p.add_argument("--grid", type=int, required=True, help="grid denominator")
    p.add_argument("--csv-out", help="write the degree dump here instead of stdout")
    p.set_defaults(handler=_cmd_qcheck)

    p = sub.add_parser("score", parents=[common], help="score an answers file")
    p.add_argument("--spec", required=True, help="questionnaire spec (JSON)")
    p.add_argument("--answers", required=True, help="answers CSV")
    p.add_argument("--out", required=True, help="reports file (JSON lines)")
    p.set_defaults(handler=_cmd_score)

    p = sub.add_parser("demo", parents=[common], help="score the bundled example")
    p.set_defaults(handler=_cmd_demo)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
