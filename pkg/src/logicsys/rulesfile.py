"""Line-oriented rules files and set literals.

Grammar, one directive per line::

    # comment
    language <sym> ...
    axiom <sym> ...
    rule <p1> ... <pk> -> <c1> ... <cm>
    family <name> offset=<m>

``language`` is optional.  Without it a file of decimal symbols lives in
the naturals and a file of tokens lives in the set of tokens it mentions.
"""

from __future__ import annotations

import re
from collections import defaultdict

from .constructions import FAMILY_NAME, BlockFamily
from .errors import ParseError
from .model import Language, Relation, RuleSystem, canonical, is_symbol, validate

_DECIMAL = re.compile(r"0|[1-9][0-9]*")
FAMILIES = {FAMILY_NAME: BlockFamily}


def _typed(words: list[str], numeric: bool, line: int | None = None) -> list:
    if not numeric:
        return words
    out = []
    for w in words:
        if not _DECIMAL.fullmatch(w):
            raise ParseError(f"{w!r} is not a canonical natural number", line)
        out.append(int(w))
    return out


def parse_rules(text: str) -> RuleSystem:
    declared: list[str] | None = None
    axioms: list[tuple[str, int]] = []
    rules: list[tuple[list[str], list[str], int]] = []
    families = []
    words_seen: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "language":
            if declared is not None:
                raise ParseError("language declared twice", lineno)
            if not rest:
                raise ParseError("language needs at least one symbol", lineno)
            declared = rest
            words_seen += rest
        elif head == "axiom":
            if not rest:
                raise ParseError("axiom needs at least one symbol", lineno)
            axioms += [(w, lineno) for w in rest]
            words_seen += rest
        elif head == "rule":
            if rest.count("->") != 1:
                raise ParseError("rule needs exactly one '->'", lineno)
            arrow = rest.index("->")
            prem, concl = rest[:arrow], rest[arrow + 1 :]
            if not prem or not concl:
                raise ParseError("rule needs premises and conclusions on both sides of '->'", lineno)
            rules.append((prem, concl, lineno))
            words_seen += prem + concl
        elif head == "family":
            families.append(_parse_family(rest, lineno))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    numeric_words = [w for w in words_seen if _DECIMAL.fullmatch(w)]
    numeric = bool(families) or (bool(words_seen) and len(numeric_words) == len(words_seen))
    if not numeric and numeric_words:
        raise ParseError("file mixes natural-number symbols with tokens")
    for w in words_seen:
        if not is_symbol(w):
            raise ParseError(f"invalid symbol {w!r}")

    if declared is not None:
        symbols = _typed(declared, numeric)
        if len(set(symbols)) != len(symbols):
            raise ParseError("language lists a symbol twice")
        language = Language.explicit(symbols)
    elif numeric:
        language = Language.naturals()
    else:
        language = Language.explicit(words_seen)
        if not words_seen:
            raise ParseError("empty rules file has no language")

    by_arity: dict[int, set] = defaultdict(set)
    for prem, concl, lineno in rules:
        prem = _typed(prem, numeric, lineno)
        for c in _typed(concl, numeric, lineno):
            by_arity[len(prem) + 1].add(tuple(prem) + (c,))
    relations = [Relation(f"R{n}", n, ts) for n, ts in sorted(by_arity.items())]
    system = RuleSystem(
        language,
        {_typed([w], numeric, lineno)[0] for w, lineno in axioms},
        relations,
        families,
    )
    problems = validate(system)
    if problems:
        raise ParseError("; ".join(map(str, problems)))
    return system


def _parse_family(words: list[str], lineno: int):
    if len(words) != 2 or not words[1].startswith("offset="):
        raise ParseError("expected 'family <name> offset=<m>'", lineno)
    name, offset = words[0], words[1][len("offset=") :]
    if name not in FAMILIES:
        raise ParseError(f"unknown family {name!r}", lineno)
    if not _DECIMAL.fullmatch(offset):
        raise ParseError(f"offset {offset!r} is not a natural number", lineno)
    return FAMILIES[name](int(offset))


def emit_rules(system: RuleSystem) -> str:
    """Canonical text for ``system``; ``parse_rules`` reads it back unchanged."""
    lines = []
    if system.language.is_explicit:
        lines.append("language " + " ".join(map(str, system.language.sorted())))
    axioms = set(system.axioms)
    grouped: dict[tuple, set] = defaultdict(set)
    for rel in system.relations:
        for t in rel.tuples:
            if len(t) == 1:
                axioms.add(t[0])
            else:
                grouped[tuple(canonical(set(t[:-1])))].add(t[-1])
    if axioms:
        lines.append("axiom " + " ".join(map(str, canonical(axioms))))
    for prem in sorted(grouped, key=lambda p: (len(p), p)):
        concl = canonical(grouped[prem])
        lines.append(f"rule {' '.join(map(str, prem))} -> {' '.join(map(str, concl))}")
    for gen in system.generators:
        params = " ".join(f"{k}={v}" for k, v in gen.params.items())
        lines.append(f"family {gen.name} {params}")
    return "\n".join(lines) + "\n"


def parse_set(text: str, numeric: bool) -> frozenset:
    """Read ``0,1,5`` or ``{}`` (braces optional) into a set of symbols."""
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    body = body.strip()
    if not body:
        return frozenset()
    words = [w.strip() for w in body.split(",")]
    if any(not w for w in words):
        raise ParseError(f"empty element in set literal {text!r}")
    for w in words:
        if not is_symbol(w):
            raise ParseError(f"invalid symbol {w!r} in set literal")
    items = _typed(words, numeric)
    if len(set(items)) != len(items):
        raise ParseError(f"set literal {text!r} repeats a symbol")
    return frozenset(items)


def is_numeric(language: Language) -> bool:
    if not language.is_explicit:
        return True
    return all(isinstance(s, int) for s in language.symbols)
