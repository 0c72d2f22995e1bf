"""Languages, ground rule tuples, relations and rule systems.

A symbol is either a non-empty whitespace-free ``str`` token or a natural
number (``int`` >= 0).  A rule tuple ``(a1, ..., an)`` reads its first
``n - 1`` coordinates as a premise *set* and its last coordinate as the
conclusion; a 1-tuple is an axiom.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet, Hashable, Iterable, Iterator, Mapping, Union

Symbol = Union[str, int]
RuleTuple = tuple


def is_symbol(value: object) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, int):
        return value >= 0
    if isinstance(value, str):
        return bool(value) and not any(ch.isspace() for ch in value)
    return False


def premises(coords: RuleTuple) -> frozenset:
    return frozenset(coords[:-1])


def conclusion(coords: RuleTuple) -> Symbol:
    return coords[-1]


def canonical(symbols: Iterable[Symbol]) -> list:
    """Sorted list of symbols: numeric order for naturals, lexicographic for tokens."""
    return sorted(symbols)


@dataclass(frozen=True)
class Language:
    """Either an explicit finite symbol set or the unbounded naturals (``symbols is None``)."""

    symbols: frozenset | None = None

    @classmethod
    def naturals(cls) -> Language:
        return cls(None)

    @classmethod
    def explicit(cls, symbols: Iterable[Symbol]) -> Language:
        return cls(frozenset(symbols))

    @property
    def is_explicit(self) -> bool:
        return self.symbols is not None

    def __contains__(self, symbol: object) -> bool:
        if self.symbols is None:
            return isinstance(symbol, int) and not isinstance(symbol, bool) and symbol >= 0
        return symbol in self.symbols

    def __len__(self) -> int:
        if self.symbols is None:
            raise TypeError("the naturals language is unbounded")
        return len(self.symbols)

    def sorted(self) -> list:
        if self.symbols is None:
            raise TypeError("the naturals language is unbounded")
        return canonical(self.symbols)


@dataclass(frozen=True)
class Relation:
    id: str
    arity: int
    tuples: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "tuples", frozenset(tuple(t) for t in self.tuples))

    @classmethod
    def of(cls, id: str, tuples: Iterable[Iterable[Symbol]]) -> Relation:
        """Build a relation whose arity is read off its (non-empty) tuple set."""
        tuples = [tuple(t) for t in tuples]
        if not tuples:
            raise ValueError(f"cannot infer the arity of empty relation {id!r}")
        return cls(id, len(tuples[0]), frozenset(tuples))

    def sorted_tuples(self) -> list:
        return sorted(self.tuples)


class GeneratorFamily:
    """An intensionally given, possibly infinite, set of rule tuples.

    Subclasses honour the premise-anchored contract: ``applicable(D)`` returns
    exactly the tuples whose whole premise set lies inside the finite set
    ``D``, and that answer is finite and deterministic.
    """

    name: str = "generator"

    @property
    def params(self) -> Mapping[str, int]:
        return {}

    def applicable(self, available: AbstractSet[Symbol]) -> frozenset:
        raise NotImplementedError

    def triggered_by(self, available: AbstractSet[Symbol], symbol: Symbol) -> frozenset:
        """Tuples that became applicable once ``symbol`` joined ``available``."""
        return frozenset(t for t in self.applicable(available) if symbol in t[:-1])

    def materialize(self, max_arity: int) -> Iterator[RuleTuple]:
        """Every tuple of arity at most ``max_arity``; must be finite."""
        raise NotImplementedError


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class RuleSystem:
    language: Language
    axioms: frozenset = field(default_factory=frozenset)
    relations: tuple = ()
    generators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "axioms", frozenset(self.axioms))
        object.__setattr__(
            self, "relations", tuple(sorted(self.relations, key=lambda r: (r.arity, r.id)))
        )
        object.__setattr__(self, "generators", tuple(self.generators))

    def relation(self, id: str) -> Relation | GeneratorFamily:
        from .errors import UnknownRelationError

        for rel in self.relations:
            if rel.id == id:
                return rel
        for gen in self.generators:
            if gen.name == id:
                return gen
        raise UnknownRelationError(f"no relation or generator named {id!r}")

    def with_language(self, language: Language) -> RuleSystem:
        return RuleSystem(language, self.axioms, self.relations, self.generators)

    def symbols(self) -> frozenset:
        """Symbols mentioned by the axioms and the explicit relations."""
        found = set(self.axioms)
        for rel in self.relations:
            for t in rel.tuples:
                found.update(t)
        return frozenset(found)


def validate(system: RuleSystem) -> list[Diagnostic]:
    """Every invariant violation of ``system``; an empty list means valid."""
    out: list[Diagnostic] = []
    lang = system.language
    if lang.is_explicit:
        if not lang.symbols:
            out.append(Diagnostic("empty-language", "explicit language has no symbols"))
        for sym in canonical_or_repr(lang.symbols):
            if not is_symbol(sym):
                out.append(Diagnostic("bad-symbol", f"{sym!r} is not a valid symbol"))
        kinds = {type(s) for s in lang.symbols if is_symbol(s)}
        if len(kinds) > 1:
            out.append(Diagnostic("mixed-symbols", "language mixes tokens and naturals"))

    def check_symbol(sym, where):
        if not is_symbol(sym):
            out.append(Diagnostic("bad-symbol", f"{sym!r} in {where} is not a valid symbol"))
        elif sym not in lang:
            out.append(Diagnostic("unknown-symbol", f"{sym!r} in {where} is outside the language"))

    for sym in canonical_or_repr(system.axioms):
        check_symbol(sym, "axioms")

    seen: set[str] = set()
    for rel in system.relations:
        if rel.id in seen:
            out.append(Diagnostic("duplicate-relation-id", f"relation id {rel.id!r} is repeated"))
        seen.add(rel.id)
        if rel.arity < 1:
            out.append(Diagnostic("invalid-arity", f"relation {rel.id!r} declares arity {rel.arity}"))
        for t in canonical_or_repr(rel.tuples):
            if len(t) != rel.arity:
                out.append(
                    Diagnostic(
                        "arity-mismatch",
                        f"relation {rel.id!r} has arity {rel.arity} but contains {t!r}",
                    )
                )
            for sym in t:
                check_symbol(sym, f"relation {rel.id!r}")
    for gen in system.generators:
        if gen.name in seen:
            out.append(Diagnostic("duplicate-relation-id", f"generator name {gen.name!r} is repeated"))
        seen.add(gen.name)
    return out


def canonical_or_repr(items: Iterable[Hashable]) -> list:
    # Invalid input may mix types; fall back to a repr ordering so validate never raises.
    items = list(items)
    try:
        return sorted(items)
    except TypeError:
        return sorted(items, key=repr)


def is_finite_system(system: RuleSystem) -> bool:
    return not system.generators
