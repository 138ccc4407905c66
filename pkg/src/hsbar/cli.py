"""Command line: ``hsbar <command> [problem] [options]``."""

from __future__ import annotations

import argparse
import json
import sys

from . import corpus
from .errors import BudgetExceeded, HSBarError, NoConsistentAnswer, ValidationError
from .f2core import parse_subset, subset_string
from .forms import classify_orbits, family_invariant
from .hmbar import hm_ranks
from .ktheory import kq1_torus
from .pages import build_e1
from .problem import ProblemFile, ResultDocument, parse_problem
from .rmod import rank_table, render_grid
from .solver import DEFAULT_BUDGET, EXTENSION_MODES, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_NO_ANSWER = 4


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("problem", nargs="?", help="path to a problem document (JSON)")
    p.add_argument("--example", help="use a bundled example instead of a file")
    p.add_argument("--m", type=int, default=2, help="cup coefficient for borromean-m (even)")
    p.add_argument("--no-normalize", action="store_true", help="keep mu(empty set) as given")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "machine"), default="table")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of branches")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsbar",
        description="Pin(2)-monopole Floer homology (bar flavour) from cup product and Rokhlin data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("validate", "check a problem document"),
        ("e1", "print the E1 page"),
        ("pages", "print E1, E2 and every E-infinity page reached"),
        ("solve", "search differentials and extensions; print the final module"),
        ("hm", "ranks of HM-bar and the Gysin quota"),
    ):
        p = sub.add_parser(name, help=text)
        _add_problem_args(p)
        _add_common(p)
        if name in ("pages", "solve"):
            p.add_argument("--extensions", choices=EXTENSION_MODES, default="merge")
            p.add_argument(
                "--orbit",
                action="store_true",
                help="intersect with the candidates of all equivalent presentations (b1 <= 3)",
            )

    p = sub.add_parser("kq", help="KQ^1 of the n-torus")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("classify", help="affine orbits of Rokhlin maps with a given cubic part")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cubic", nargs="*", default=[], help="cubic monomials, e.g. 123")
    _add_common(p)

    p = sub.add_parser("example", help="print a bundled problem document")
    p.add_argument("name")
    p.add_argument("--m", type=int, default=2)

    p = sub.add_parser("list-examples", help="list bundled examples")
    _add_common(p)
    return parser


def load_problem(args) -> ProblemFile:
    if args.example and args.problem:
        raise ValidationError("give either a problem file or --example, not both")
    if args.example:
        return corpus.example(args.example, args.m)
    if not args.problem:
        raise ValidationError("no problem given (path or --example)")
    return parse_problem(args.problem)


def _emit(out, args, table: str, machine) -> None:
    if args.format == "machine":
        out.write(json.dumps(machine, indent=2, sort_keys=True) + "\n")
    else:
        out.write(table.rstrip("\n") + "\n")


def _work_map(problem: ProblemFile, args):
    if args.no_normalize:
        return problem.mu, 0
    mu, c = problem.mu.normalized()
    return mu, 2 * c % 4


def cmd_validate(args, out) -> int:
    problem = load_problem(args)
    inv = family_invariant(problem.cup, problem.mu)
    lines = [
        f"valid: b1={problem.b1}",
        f"rokhlin: {problem.mu.describe()} (weight {problem.mu.weight})",
        f"cup mod 2: {sorted(subset_string(t) for t in problem.cup.mod2)}",
        "torsion bits: "
        + (" ".join(f"{subset_string(s)}:{v}" for s, v in inv.torsion) or "none"),
    ]
    machine = {"valid": True, "input": problem.to_json(), "weight": problem.mu.weight}
    _emit(out, args, "\n".join(lines), machine)
    return EXIT_OK


def cmd_e1(args, out) -> int:
    problem = load_problem(args)
    mu, shift = _work_map(problem, args)
    e1 = build_e1(mu)
    columns = list(range(problem.b1, -1, -1))
    table = f"E1 (normalization shift {shift})\n" + e1.render(columns)
    machine = {"shift": shift, "E1": rank_table(e1.pieces(), columns)}
    _emit(out, args, table, machine)
    return EXIT_OK


def _solve(problem: ProblemFile, args):
    return solve(
        problem.cup,
        problem.mu,
        budget=args.budget,
        normalize=not args.no_normalize,
        extensions=args.extensions,
        orbit=args.orbit,
    )


def cmd_pages(args, out) -> int:
    problem = load_problem(args)
    report = _solve(problem, args)
    columns = list(range(problem.b1, -1, -1))
    parts = ["E1", report.e1.render(columns), "", "E2", report.e2.render(columns)]
    for i, pieces in enumerate(report.einfinity):
        parts += ["", f"E-infinity #{i}", render_grid(pieces, columns)]
    doc = ResultDocument.from_report(problem, report)
    _emit(out, args, "\n".join(parts), doc.to_json()["pages"])
    return EXIT_OK


def verdict(report) -> str:
    if report.unique is not None:
        return f"final: {report.unique.describe()}; unique: yes"
    lines = [f"final: {len(report.final)} candidates; unique: no"]
    lines += [f"  candidate: {m.describe()}" for m in report.final]
    return "\n".join(lines)


def cmd_solve(args, out) -> int:
    problem = load_problem(args)
    try:
        report = _solve(problem, args)
    except NoConsistentAnswer as exc:
        if args.format == "machine":
            doc = ResultDocument.from_report(problem, exc.report)
            out.write(doc.dumps())
        raise
    if args.format == "machine":
        out.write(ResultDocument.from_report(problem, report).dumps())
        return EXIT_OK
    columns = list(range(problem.b1, -1, -1))
    lines = [
        f"input: {problem.name or 'problem'} (b1={problem.b1}, rokhlin {problem.mu.describe()})",
        f"normalization shift: {report.shift}",
        f"gysin quota: {report.quota} summands",
        "",
        "E1",
        report.e1.render(columns),
        "",
        "E2",
        report.e2.render(columns),
    ]
    for i, pieces in enumerate(report.einfinity):
        lines += ["", f"E-infinity #{i}", render_grid(pieces, columns)]
    lines += ["", f"branches explored: {report.explored}", verdict(report)]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_hm(args, out) -> int:
    problem = load_problem(args)
    even, odd = hm_ranks(problem.cup)
    table = f"HM-bar ranks: even {even}, odd {odd}\ngysin quota: {even + odd}"
    _emit(out, args, table, {"even": even, "odd": odd, "quota": even + odd})
    return EXIT_OK


def cmd_kq(args, out) -> int:
    group = kq1_torus(args.n)
    machine = {"n": args.n, "z2": group.z2_count, "z": group.z_count}
    _emit(out, args, str(group), machine)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    try:
        cubic = [parse_subset(c, args.n) for c in args.cubic]
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    orbits = classify_orbits(args.n, cubic)
    lines = [f"{len(orbits)} orbits"]
    machine = []
    for o in orbits:
        lines.append(
            f"  {o.representative.describe():<40} size {o.size:>3}  weights {o.weights[0]}/{o.weights[1]}"
        )
        machine.append(
            {"representative": o.representative.describe(), "size": o.size, "weights": list(o.weights)}
        )
    _emit(out, args, "\n".join(lines), machine)
    return EXIT_OK


def cmd_example(args, out) -> int:
    doc = corpus.example_document(args.name, args.m)
    out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_list_examples(args, out) -> int:
    names = corpus.example_names()
    table = "\n".join(f"{n:<14} {corpus.describe_example(n)}" for n in names)
    _emit(out, args, table, names)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "e1": cmd_e1,
    "pages": cmd_pages,
    "solve": cmd_solve,
    "hm": cmd_hm,
    "kq": cmd_kq,
    "classify": cmd_classify,
    "example": cmd_example,
    "list-examples": cmd_list_examples,
}


def run_command(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ValidationError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except BudgetExceeded as exc:
        err.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except NoConsistentAnswer as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NO_ANSWER
    except HSBarError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
