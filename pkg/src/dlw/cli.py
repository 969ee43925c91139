"""Command-line interface: ``dlw <subcommand> [options] THEORY``.

Exit status: 0 on success (query verdicts are printed, not encoded in the
status), 1 on parse or validation errors, 2 when a search exceeds its
prefix cap, 3 when an operation's precondition fails, 4 when ``verify``
finds a failing property.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from dlw.errors import DLWError, FormulaSyntaxError, PreconditionError, ResourceLimitError
from dlw.logic import atoms, is_reserved, parse, to_str
from dlw.process import SEMANTICS, Engine, max_prefixes_from_env
from dlw.theory import Mode, parse_theory, serialize_theory, theory_to_json
from dlw.translate import almost_translate, enumerate_translate, faithful_translate, \
    transform_query
from dlw.verify import CHECKS, CorpusParams, verify_corpus

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; here 2 means "resource cap"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--semantics", choices=sorted(SEMANTICS), default="reiter")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-prefixes", type=int, default=None,
                        help="search cap (default: $DLW_MAX_PREFIXES or 1000000)")
    with_theory = _Parser(add_help=False, parents=[common])
    with_theory.add_argument("theory", help="path to a .dlt file, or - for stdin")

    parser = _Parser(prog="dlw", description="Default-logic workbench.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[with_theory], help="parse and validate a theory")
    sub.add_parser("processes", parents=[with_theory],
                   help="list successful and closed processes")
    sub.add_parser("extensions", parents=[with_theory], help="list extensions")

    p = sub.add_parser("entails", parents=[with_theory], help="answer a query")
    p.add_argument("-q", "--query", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--skeptical", dest="mode", action="store_const",
                       const=Mode.SKEPTICAL, default=Mode.SKEPTICAL)
    group.add_argument("--credulous", dest="mode", action="store_const", const=Mode.CREDULOUS)

    sub.add_parser("failsafe", parents=[with_theory],
                   help="decide whether every successful process can be completed")
    p = sub.add_parser("complete", parents=[with_theory],
                       help="decide whether a process can be completed")
    p.add_argument("--process", required=True, help="comma-separated default names")

    p = sub.add_parser("translate", parents=[with_theory],
                       help="translate into normal default logic")
    p.add_argument("--mode", choices=("faithful", "almost", "enumerate"), default="faithful")
    p.add_argument("--reasoning", choices=("skeptical", "credulous"), default="skeptical")
    p.add_argument("-o", "--output", help="write the translated theory here")

    p = sub.add_parser("verify", parents=[common], help="run property checks on a corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-defaults", type=int, default=2)
    p.add_argument("--max-atoms", type=int, default=2)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--checks", default=",".join(CHECKS),
                   help=f"comma-separated subset of {','.join(CHECKS)}")
    return parser


def _read(path: str, stdin: TextIO):
    text = stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse_theory(text)


def _emit(out: TextIO, args, text: str, data) -> None:
    if args.format == "json":
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def _query(text: str):
    try:
        q = parse(text)
    except FormulaSyntaxError as exc:
        raise UsageError(f"query: {exc}") from None
    if any(is_reserved(a) for a in atoms(q)):
        raise UsageError("query may not mention reserved atoms")
    return q


def _run(args, out: TextIO, err: TextIO, stdin: TextIO) -> int:
    if args.max_prefixes is not None and args.max_prefixes <= 0:
        raise UsageError("--max-prefixes must be positive")
    cap = args.max_prefixes or max_prefixes_from_env()

    if args.command == "verify":
        checks = [c for c in args.checks.split(",") if c]
        unknown = sorted(set(checks) - set(CHECKS))
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(unknown)}")
        params = CorpusParams(args.max_defaults, args.max_atoms, args.depth, args.seed,
                              args.count)
        failed = 0
        for report in verify_corpus(params, checks, args.semantics):
            failed += not report.passed
            out.write((report.to_json() if args.format == "json" else str(report)) + "\n")
        return EXIT_VERIFY if failed else EXIT_OK

    query = _query(args.query) if args.command == "entails" else None
    t = _read(args.theory, stdin)
    engine = Engine(t, args.semantics, max_prefixes=cap)

    if args.command == "check":
        names = sorted(t.atoms)
        _emit(out, args, f"ok: {len(t.defaults)} defaults over {len(names)} atoms"
                         f"{' (normal)' if t.normal else ''}",
              {"ok": True, "defaults": len(t.defaults), "atoms": names, "normal": t.normal,
               "theory": theory_to_json(t)})

    elif args.command == "processes":
        procs = engine.enumerate_processes()
        text = "\n".join(f"[{', '.join(t.names(p))}]" for p in procs) or "no processes"
        _emit(out, args, text, {"semantics": args.semantics,
                                "processes": [t.names(p) for p in procs]})

    elif args.command == "extensions":
        exts = engine.extensions()
        lines = []
        for k, e in enumerate(exts, 1):
            first = ", ".join(t.names(e.witnesses[0]))
            more = len(e.witnesses) - 1
            lines.append(f"extension {k}: {to_str(e.axiom)}  from [{first}]"
                         + (f" and {more} more" if more else ""))
        _emit(out, args, "\n".join(lines) or "no extensions",
              {"semantics": args.semantics, "extensions": [e.to_json(t) for e in exts]})

    elif args.command == "entails":
        exts = engine.extensions()
        if args.mode is Mode.SKEPTICAL:
            if not exts:
                err.write("warning: no extensions; skeptical entailment holds vacuously\n")
            verdict = engine.skeptical_entails(query)
        else:
            verdict = engine.credulous_entails(query)
        _emit(out, args, "true" if verdict else "false",
              {"query": to_str(query), "mode": args.mode.value, "result": verdict,
               "extensions": len(exts)})

    elif args.command == "failsafe":
        witness = engine.fail_safe_witness()
        if witness is None:
            text = "fail-safe"
        else:
            text = f"not fail-safe; witness prefix [{', '.join(t.names(witness))}]"
        _emit(out, args, text, {"semantics": args.semantics, "fail_safe": witness is None,
                                "witness": None if witness is None else t.names(witness)})

    elif args.command == "complete":
        names = [n.strip() for n in args.process.split(",") if n.strip()]
        try:
            prefix = t.steps(names)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        if len(set(prefix)) != len(prefix):
            raise UsageError("--process repeats a default")
        verdict = engine.completable(prefix)
        _emit(out, args, "true" if verdict else "false",
              {"process": names, "completable": verdict})

    elif args.command == "translate":
        _translate(args, t, out, err)
    return EXIT_OK


def _translate(args, t, out: TextIO, err: TextIO) -> None:
    info: dict = {"mode": args.mode, "semantics": args.semantics}
    if args.mode == "enumerate":
        result = enumerate_translate(t, args.semantics)
        text = serialize_theory(result)
    else:
        if args.mode == "faithful":
            art = faithful_translate(t, args.semantics)
        else:
            mode = Mode(args.reasoning)
            art, flag = almost_translate(t, args.semantics, mode)
            rule = to_str(transform_query(parse("q"), mode, flag))
            info.update(flag=flag, reasoning=mode.value, query_rewrite=f"q => {rule}")
        header = art.header()
        if "query_rewrite" in info:
            header.insert(1, f"query {info['reasoning']} {info['query_rewrite']}")
        result = art.theory
        text = serialize_theory(result, header)
        info.update(m=art.m, u=art.u)
    info["defaults"] = len(result.defaults)

    summary = [f"{info['defaults']} defaults"]
    if "flag" in info:
        summary += [f"flag {info['flag']}", f"query rewrite ({info['reasoning']}): "
                                            f"{info['query_rewrite']}"]
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        info["output"] = args.output
        _emit(out, args, "\n".join(summary), info)
    elif args.format == "json":
        info["theory"] = text
        _emit(out, args, "", info)
    else:
        # the theory goes to stdout so it can be piped; the rest to stderr
        out.write(text)
        err.write("\n".join(summary) + "\n")


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None, stdin: TextIO | None = None) -> int:
    out, err, stdin = out or sys.stdout, err or sys.stderr, stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args, out, err, stdin)
    except (UsageError, OSError) as exc:
        err.write(f"dlw: error: {exc}\n")
        return EXIT_INVALID
    except ResourceLimitError as exc:
        err.write(f"dlw: resource limit: {exc}\n")
        return EXIT_RESOURCE
    except PreconditionError as exc:
        err.write(f"dlw: precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except DLWError as exc:
        err.write(f"dlw: error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
