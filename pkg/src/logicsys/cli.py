"""Command-line interface: ``logicsys <command> ...``.

Results go to stdout, errors to stderr.  Exit status is 0 on success, 1
for unreadable or malformed input and 2 when the library rejects the
request (unknown symbols, exhausted budget, non-operator tables, ...).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import constructions, table
from .constructions import Derivation, format_set
from .engine import close, closure
from .errors import LogicSystemError, ParseError
from .rulesfile import FAMILIES, emit_rules, is_numeric, parse_rules, parse_set

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_ENGINE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _load_system(args):
    if args.rules and args.family:
        raise ParseError("give either --rules or --family, not both")
    if args.rules:
        return parse_rules(_read(args.rules))
    if args.family:
        if args.family not in FAMILIES:
            raise ParseError(f"unknown family {args.family!r}")
        return constructions.block_family(args.offset)
    raise ParseError("one of --rules or --family is required")


def cmd_close(args) -> None:
    system = _load_system(args)
    X = parse_set(args.set, is_numeric(system.language))
    result, trace = close(system, X, args.budget)
    lines = [format_set(result)]
    if args.trace:
        for pos, (sym, why) in enumerate(trace.steps, start=1):
            lines.append(f"{pos}. {sym}  {why}")
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_table(args) -> None:
    system = parse_rules(_read(args.rules))
    language = system.language
    if args.language is not None:
        language = parse_set(args.language, is_numeric(system.language))
    _write(table.dumps(table.table_from_system(system, language)), args.out)


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def cmd_check(args) -> None:
    t = table.loads(_read(args.table))
    i, ii, iii = table.check_axiom_i(t), table.check_axiom_ii(t), table.check_axiom_iii(t)
    lines = [f"axiom-i: {_verdict(i)}", f"axiom-ii: {_verdict(ii)}", f"axiom-iii: {_verdict(iii)}"]
    if i and iii:
        lines.append(f"remark-1.2: {_verdict(ii)}")
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_ristar(args) -> None:
    t = table.loads(_read(args.table))
    _write(emit_rules(constructions.ri_star(t)), args.out)


def cmd_roundtrip(args) -> None:
    t = table.loads(_read(args.table))
    sys.stdout.write(f"equal: {str(constructions.roundtrip_check(t)).lower()}\n")


def cmd_thm22(args) -> None:
    sys.stdout.write(constructions.thm22_experiment(args.max_arity).to_text())


def cmd_distinct(args) -> None:
    offsets = sorted(parse_set(args.offsets, numeric=True))
    witnesses = constructions.distinctness_experiment(offsets)
    lines = []
    for (m, m2), W in witnesses.items():
        if W is None:
            lines.append(f"{m} {m2}: no witness found")
            continue
        c1 = closure(constructions.block_family(m), W)
        c2 = closure(constructions.block_family(m2), W)
        lines.append(f"{m} {m2}: W={format_set(W)} C_{m}(W)={format_set(c1)} C_{m2}(W)={format_set(c2)}")
    found = sum(W is not None for W in witnesses.values())
    lines.append(f"witnessed: {found}/{len(witnesses)}")
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_derive_rules(args) -> None:
    words = [w for lit in (args.hypotheses, args.axioms, args.conclusions) for w in _words(lit)]
    numeric = bool(words) and all(w.isdigit() for w in words)
    d = Derivation(
        parse_set(args.hypotheses, numeric),
        parse_set(args.axioms, numeric),
        parse_set(args.conclusions, numeric),
    )
    _write(emit_rules(constructions.system_from_derivation(d, args.encoding)), args.out)


def _words(literal: str) -> list[str]:
    return [w.strip() for w in literal.strip().strip("{}").split(",") if w.strip()]


def cmd_join(args) -> None:
    systems = [parse_rules(_read(path)) for path in args.rules]
    sys.stdout.write(constructions.join_experiment(systems).to_text())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logicsys", description="Logic-systems and finite consequence operators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("close", help="deductive closure of a set")
    p.add_argument("--rules", help="rules file")
    p.add_argument("--family", help=f"built-in rule family ({', '.join(FAMILIES)})")
    p.add_argument("--offset", type=int, default=0, help="family offset (default 0)")
    p.add_argument("--set", required=True, help="premises, e.g. 0,1,5 or {}")
    p.add_argument("--trace", action="store_true", help="list every deduction step")
    p.add_argument("--budget", type=int, default=None, help="maximum rule firings")
    p.set_defaults(func=cmd_close)

    p = sub.add_parser("table", help="tabulate the operator of a rules file")
    p.add_argument("--rules", required=True)
    p.add_argument("--language", help="explicit language to tabulate over")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("check", help="check the consequence-operator axioms on a table")
    p.add_argument("table")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ristar", help="rules file generating a given operator table")
    p.add_argument("table")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_ristar)

    p = sub.add_parser("roundtrip", help="re-tabulate a table through its RI* rules")
    p.add_argument("table")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("thm22", help="family versus arity-truncated family")
    p.add_argument("--max-arity", type=int, required=True)
    p.set_defaults(func=cmd_thm22)

    p = sub.add_parser("distinct", help="pairwise witnesses between offset families")
    p.add_argument("--offsets", default="0,1,2,3,4,5,6,7,8,9")
    p.set_defaults(func=cmd_distinct)

    p = sub.add_parser("derive-rules", help="compile a derivation into rules")
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--axioms", default="{}")
    p.add_argument("--conclusions", required=True)
    p.add_argument("--encoding", choices=("wide", "chained"), default="wide")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_derive_rules)

    p = sub.add_parser("join", help="unioned rules versus lattice join of their operators")
    p.add_argument("rules", nargs="+")
    p.set_defaults(func=cmd_join)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except ParseError as exc:
        print(f"logicsys: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (LogicSystemError, ValueError) as exc:
        print(f"logicsys: error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
