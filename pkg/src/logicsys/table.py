"""Consequence operators on a finite language, stored as full lookup tables.

Subsets are bitmasks over the canonically sorted language: symbol ``i``
of ``table.symbols`` is bit ``1 << i``.  ``images[mask]`` is the mask of
the image of that subset.
"""

from __future__ import annotations

import json
from typing import Callable, Iterable, Mapping

import numpy as np

from .engine import closure
from .errors import (
    LanguageMismatchError,
    LanguageTooLargeError,
    NotAnOperatorError,
    ParseError,
    UnknownSymbolError,
)
from .model import Language, RuleSystem, Symbol, canonical, is_symbol

MAX_TABLE_SYMBOLS = 20


class OperatorTable:
    __slots__ = ("symbols", "images", "_bit")

    def __init__(self, symbols: Iterable[Symbol], images):
        symbols = tuple(canonical(set(symbols)))
        if len(symbols) > MAX_TABLE_SYMBOLS:
            raise LanguageTooLargeError(
                f"operator tables are limited to {MAX_TABLE_SYMBOLS} symbols, got {len(symbols)}"
            )
        images = np.asarray(images, dtype=np.uint32)
        if images.shape != (1 << len(symbols),):
            raise ValueError(f"expected {1 << len(symbols)} images, got shape {images.shape}")
        if images.size and int(images.max()) >= 1 << len(symbols):
            raise ValueError("an image mentions a symbol outside the language")
        images.setflags(write=False)
        self.symbols = symbols
        self.images = images
        self._bit = {s: 1 << i for i, s in enumerate(symbols)}

    @classmethod
    def from_function(cls, symbols: Iterable[Symbol], fn: Callable[[frozenset], Iterable[Symbol]]):
        symbols = canonical(set(symbols))
        probe = cls(symbols, np.zeros(1 << len(symbols), dtype=np.uint32))
        images = [probe.mask(fn(probe.subset(m))) for m in range(1 << len(symbols))]
        return cls(symbols, images)

    @classmethod
    def from_mapping(cls, symbols: Iterable[Symbol], mapping: Mapping[frozenset, Iterable[Symbol]]):
        return cls.from_function(symbols, lambda X: mapping[frozenset(X)])

    @classmethod
    def identity(cls, symbols: Iterable[Symbol]) -> OperatorTable:
        symbols = canonical(set(symbols))
        return cls(symbols, np.arange(1 << len(symbols), dtype=np.uint32))

    @classmethod
    def constant(cls, symbols: Iterable[Symbol]) -> OperatorTable:
        symbols = canonical(set(symbols))
        full = (1 << len(symbols)) - 1
        return cls(symbols, np.full(1 << len(symbols), full, dtype=np.uint32))

    @property
    def language(self) -> Language:
        return Language.explicit(self.symbols)

    @property
    def full(self) -> int:
        return (1 << len(self.symbols)) - 1

    def mask(self, subset: Iterable[Symbol]) -> int:
        m = 0
        for s in subset:
            try:
                m |= self._bit[s]
            except KeyError:
                raise UnknownSymbolError(f"{s!r} is not in the table's language") from None
        return m

    def subset(self, mask: int) -> frozenset:
        return frozenset(s for i, s in enumerate(self.symbols) if mask >> i & 1)

    def image(self, subset: Iterable[Symbol]) -> frozenset:
        return self.subset(int(self.images[self.mask(subset)]))

    def __call__(self, subset: Iterable[Symbol]) -> frozenset:
        return self.image(subset)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorTable):
            return NotImplemented
        return self.symbols == other.symbols and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        return hash((self.symbols, self.images.tobytes()))

    def __repr__(self) -> str:
        return f"OperatorTable({list(self.symbols)!r}, <{len(self.images)} images>)"

    def first_difference(self, other: OperatorTable) -> int | None:
        _same_language(self, other)
        diff = np.flatnonzero(self.images != other.images)
        return int(diff[0]) if diff.size else None


def table_from_system(system: RuleSystem, language: Language | Iterable[Symbol] | None = None):
    """Tabulate the operator generated by ``system`` over a finite language."""
    if language is None:
        language = system.language
    if not isinstance(language, Language):
        language = Language.explicit(language)
    if not language.is_explicit:
        raise LanguageTooLargeError("cannot tabulate over the unbounded naturals language")
    if len(language) > MAX_TABLE_SYMBOLS:
        raise LanguageTooLargeError(
            f"operator tables are limited to {MAX_TABLE_SYMBOLS} symbols, got {len(language)}"
        )
    system = system.with_language(language)
    return OperatorTable.from_function(language.symbols, lambda X: closure(system, X))


def _masks(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.uint32)


def _same_language(c1: OperatorTable, c2: OperatorTable) -> None:
    if c1.symbols != c2.symbols:
        raise LanguageMismatchError(
            f"tables are over different languages: {list(c1.symbols)} vs {list(c2.symbols)}"
        )


def check_axiom_i(t: OperatorTable) -> bool:
    """Extensive and idempotent: X within C(X) = C(C(X))."""
    img = t.images
    X = _masks(len(t.symbols))
    return bool(np.all(img & X == X) and np.array_equal(img[img], img))


def check_axiom_ii(t: OperatorTable) -> bool:
    """Monotone; comparing each subset with its one-element extensions suffices."""
    img = t.images
    X = _masks(len(t.symbols))
    for i in range(len(t.symbols)):
        lower = X[(X >> i) & 1 == 0]
        if np.any(img[lower] & ~img[lower | (1 << i)]):
            return False
    return True


def subset_union(t: OperatorTable) -> np.ndarray:
    """For every X, the union of C(A) over all A contained in X (OR-zeta transform)."""
    acc = t.images.copy()
    X = _masks(len(t.symbols))
    for i in range(len(t.symbols)):
        upper = X[(X >> i) & 1 == 1]
        acc[upper] |= acc[upper ^ (1 << i)]
    return acc


def check_axiom_iii(t: OperatorTable) -> bool:
    return bool(np.array_equal(subset_union(t), t.images))


def is_operator(t: OperatorTable) -> bool:
    return check_axiom_i(t) and check_axiom_ii(t) and check_axiom_iii(t)


def require_operator(t: OperatorTable, what: str = "table") -> None:
    failed = [
        name
        for name, check in (("i", check_axiom_i), ("ii", check_axiom_ii), ("iii", check_axiom_iii))
        if not check(t)
    ]
    if failed:
        raise NotAnOperatorError(f"{what} fails axiom(s) {', '.join(failed)}")


def leq(c1: OperatorTable, c2: OperatorTable) -> bool:
    _same_language(c1, c2)
    return not np.any(c1.images & ~c2.images)


def meet(c1: OperatorTable, c2: OperatorTable) -> OperatorTable:
    _same_language(c1, c2)
    require_operator(c1, "first operand")
    require_operator(c2, "second operand")
    return OperatorTable(c1.symbols, c1.images & c2.images)


def join(c1: OperatorTable, c2: OperatorTable) -> OperatorTable:
    """Least operator above both: apply c1 then c2 until nothing changes."""
    _same_language(c1, c2)
    require_operator(c1, "first operand")
    require_operator(c2, "second operand")
    current = _masks(len(c1.symbols))
    while True:
        nxt = c2.images[c1.images[current]]
        if np.array_equal(nxt, current):
            return OperatorTable(c1.symbols, current)
        current = nxt


def dumps(t: OperatorTable) -> str:
    lines = ["{", f'  "language": {json.dumps(list(t.symbols))},', '  "entries": [']
    rows = [
        f"    [{json.dumps(canonical(t.subset(m)))}, {json.dumps(canonical(t.subset(int(v))))}]"
        for m, v in enumerate(t.images)
    ]
    lines.append(",\n".join(rows))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def loads(text: str) -> OperatorTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"language", "entries"}:
        raise ParseError('table file must be an object with exactly "language" and "entries"')
    symbols = doc["language"]
    if not isinstance(symbols, list) or not all(is_symbol(s) for s in symbols):
        raise ParseError('"language" must be a list of symbols')
    if len(set(symbols)) != len(symbols) or len({type(s) for s in symbols}) > 1:
        raise ParseError('"language" must be duplicate-free and not mix tokens with naturals')
    if canonical(symbols) != symbols:
        raise ParseError('"language" must be sorted canonically')
    if len(symbols) > MAX_TABLE_SYMBOLS:
        raise LanguageTooLargeError(f"operator tables are limited to {MAX_TABLE_SYMBOLS} symbols")
    probe = OperatorTable.identity(symbols)
    images = np.zeros(1 << len(symbols), dtype=np.uint32)
    seen = set()
    for entry in doc["entries"]:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ParseError(f"malformed entry {entry!r}")
        try:
            key = probe.mask(_sorted_array(entry[0]))
            value = probe.mask(_sorted_array(entry[1]))
        except UnknownSymbolError as exc:
            raise ParseError(str(exc)) from None
        if key in seen:
            raise ParseError(f"subset {entry[0]!r} listed twice")
        seen.add(key)
        images[key] = value
    if len(seen) != len(images):
        raise ParseError(f"table lists {len(seen)} of {len(images)} subsets")
    return OperatorTable(symbols, images)


def _sorted_array(items) -> list:
    if not isinstance(items, list) or len(set(map(repr, items))) != len(items):
        raise ParseError(f"expected a duplicate-free array, got {items!r}")
    try:
        ordered = canonical(items)
    except TypeError:
        raise ParseError(f"array {items!r} mixes tokens and naturals") from None
    if ordered != items:
        raise ParseError(f"array {items!r} is not sorted canonically")
    return items
