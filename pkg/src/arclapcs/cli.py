"""Command-line front end.

Exit codes: 0 success / YES, 1 negative answer / failed check, 2 usage or
input error, 3 search budget exhausted (UNKNOWN).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .arcseq import Level, ParseError, SizeGuardError, ValidationError, classify_level, parse_sequence
from .occurrence import format_embedding, occurs
from .reduction import CnfError, audit, build_instance, parse_cnf, read_instance, write_instance
from .solvers import (
    Decision,
    SearchBudget,
    decide_lapcs,
    lapcs_branch_and_bound,
    lapcs_bruteforce,
    lapcs_length_by_enumeration,
    lapcs_parameterized,
)
from .witness import (
    parse_assignment,
    parse_certificate,
    sat_bruteforce,
    build_witness,
    verify_witness,
)

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_UNKNOWN = 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_sequence(path: str):
    try:
        return parse_sequence(_read(path))
    except (ParseError, ValidationError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_cnf(path: str):
    try:
        return parse_cnf(_read(path))
    except (ParseError, CnfError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_classify(args) -> int:
    print(classify_level(_load_sequence(args.file)).name)
    return EXIT_OK


def cmd_occurs(args) -> int:
    pattern = _load_sequence(args.pattern)
    text = _load_sequence(args.text)
    e = occurs(pattern, text)
    if e is None:
        print("no")
        return EXIT_NO
    print(format_embedding(e))
    return EXIT_OK


def _enumeration_level(s1, s2) -> Level:
    level = max(classify_level(s1), classify_level(s2))
    if level <= Level.STEM:
        return Level.STEM
    if level == Level.NESTED:
        return Level.NESTED
    raise InputError(f"the parameterized solver handles STEM or NESTED inputs, got {level.name}")


def cmd_lapcs(args) -> int:
    s1 = _load_sequence(args.a_file)
    s2 = _load_sequence(args.b_file)
    try:
        budget = SearchBudget(args.node_limit, args.time_limit)
        if args.k is not None:
            return _lapcs_decision(args, s1, s2, budget)
        if args.solver == "bf":
            sol = lapcs_bruteforce(s1, s2)
        elif args.solver == "param":
            sol = lapcs_length_by_enumeration(s1, s2, _enumeration_level(s1, s2))
        else:
            sol = lapcs_branch_and_bound(s1, s2, budget)
    except (SizeGuardError, ValidationError) as exc:
        raise InputError(str(exc)) from None
    sys.stdout.write(sol.to_text())
    return EXIT_OK if sol.optimal else EXIT_UNKNOWN


def _lapcs_decision(args, s1, s2, budget) -> int:
    k = args.k
    if k < 0:
        raise InputError("--k must be non-negative")
    if args.solver == "bf":
        sol = lapcs_bruteforce(s1, s2)
        decision = Decision.YES if sol.length >= k else Decision.NO
    elif args.solver == "param":
        # a length-k solution exists iff one of length >= k does
        sol = lapcs_parameterized(s1, s2, k, _enumeration_level(s1, s2))
        decision = Decision.NO if sol is None else Decision.YES
    else:
        decision, sol = decide_lapcs(s1, s2, k, budget)
    print(decision.value)
    if sol is not None:
        sys.stdout.write(sol.to_text())
    return {Decision.YES: EXIT_OK, Decision.NO: EXIT_NO, Decision.UNKNOWN: EXIT_UNKNOWN}[decision]


def cmd_reduce(args) -> int:
    cnf = _load_cnf(args.cnf_file)
    try:
        inst = build_instance(cnf, args.padding)
    except ValidationError as exc:
        raise InputError(str(exc)) from None
    write_instance(inst, args.out_dir)
    for warning in inst.warnings:
        print(f"warning: {warning}")
    print(f"kprime: {inst.kprime}")
    print(f"padding: {inst.padding}")
    print(f"len_s1: {len(inst.s1)}")
    print(f"len_s2: {len(inst.s2)}")
    report = audit(inst)
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_NO


def cmd_audit(args) -> int:
    inst = _load_instance(args.dir)
    report = audit(inst)
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_NO


def _load_instance(directory: str):
    try:
        return read_instance(directory)
    except OSError as exc:
        raise InputError(f"cannot read instance in {directory}: {exc.strerror or exc}") from None
    except (ParseError, CnfError, ValidationError) as exc:
        raise InputError(f"{directory}: {exc}") from None


def cmd_witness(args) -> int:
    cnf = _load_cnf(args.cnf_file)
    if args.solve:
        assignment = sat_bruteforce(cnf)
        if assignment is None:
            print("UNSAT")
            return EXIT_NO
    else:
        try:
            assignment = parse_assignment(args.assignment, cnf.n)
        except ValidationError as exc:
            raise InputError(str(exc)) from None
        if not assignment.satisfies(cnf):
            raise InputError("assignment does not satisfy the formula")
    try:
        inst = build_instance(cnf, args.padding)
    except ValidationError as exc:
        raise InputError(str(exc)) from None
    cert = build_witness(inst, assignment)
    text = cert.to_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    report = verify_witness(inst, cert)
    print(f"assignment: {assignment.to_text()}")
    print(f"length: {cert.length}")
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_NO


def cmd_verify(args) -> int:
    inst = _load_instance(args.dir)
    try:
        cert = parse_certificate(_read(args.cert_file))
    except (ParseError, ValidationError) as exc:
        raise InputError(f"{args.cert_file}: {exc}") from None
    report = verify_witness(inst, cert)
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arclapcs", description="Arc-annotated sequence comparison and the 3SAT snail reduction."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="print the structure level of an AAS file")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("occurs", help="test whether PATTERN occurs in TEXT")
    p.add_argument("pattern")
    p.add_argument("text")
    p.set_defaults(func=cmd_occurs)

    p = sub.add_parser("lapcs", help="longest arc-preserving common subsequence")
    p.add_argument("a_file")
    p.add_argument("b_file")
    p.add_argument("--solver", choices=("bf", "param", "bnb"), default="bnb")
    p.add_argument("--k", type=int, default=None, help="decide whether LAPCS >= K")
    p.add_argument("--node-limit", type=int, default=10_000_000)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.set_defaults(func=cmd_lapcs)

    p = sub.add_parser("reduce", help="build the snail instance for a 3-CNF")
    p.add_argument("cnf_file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--padding", type=int, default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("audit", help="re-audit a reduction directory")
    p.add_argument("dir")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("witness", help="certificate of length k' from a satisfying assignment")
    p.add_argument("cnf_file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--assignment", help='signed variables, e.g. "1,-2,3,-4"')
    group.add_argument("--solve", action="store_true", help="find an assignment by brute force")
    p.add_argument("--padding", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="check a certificate against a reduction directory")
    p.add_argument("dir")
    p.add_argument("cert_file")
    p.set_defaults(func=cmd_verify)
    return parser


def _attach_assignment(argv: list[str]) -> list[str]:
    # "--assignment -1,2,3" would otherwise be read as an unknown option
    out = []
    for token in argv:
        if out and out[-1] == "--assignment" and token.startswith("-"):
            out[-1] = f"--assignment={token}"
        else:
            out.append(token)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_assignment(argv))
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
