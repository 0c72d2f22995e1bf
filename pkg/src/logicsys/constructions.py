"""Block rule families, RI*, derivation compilers and the experiments built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import isqrt
from typing import AbstractSet, Iterable, Iterator, Sequence

from .engine import closure
from .errors import InvalidDerivationError, LanguageTooLargeError
from .model import (
    GeneratorFamily,
    Language,
    Relation,
    RuleSystem,
    Symbol,
    canonical,
)
from .table import (
    OperatorTable,
    check_axiom_i,
    check_axiom_ii,
    check_axiom_iii,
    join,
    leq,
    require_operator,
    table_from_system,
)

FAMILY_NAME = "herrmann"


# --- block families ---------------------------------------------------------


def block_start(n: int, offset: int = 0) -> int:
    """First symbol of the arity-``n`` block: offset + (n*n - n - 4)/2 + 1."""
    return offset + (n * n - n - 4) // 2 + 1


def block(n: int, offset: int = 0) -> tuple:
    """The single tuple of arity ``n`` >= 2 in the family with the given offset."""
    if n < 2:
        raise ValueError("blocks start at arity 2")
    start = block_start(n, offset)
    return tuple(range(start, start + n))


def block_arity_of(symbol: int, offset: int = 0) -> int | None:
    """Arity of the block containing ``symbol``, or None below the offset."""
    t = symbol - offset
    if t < 0:
        return None
    # (n - 2)(n + 1)/2 <= t  <=>  n <= (1 + sqrt(9 + 8t))/2
    n = (1 + isqrt(9 + 8 * t)) // 2
    while block_start(n + 1, offset) <= symbol:
        n += 1
    while block_start(n, offset) > symbol:
        n -= 1
    return n


@dataclass(frozen=True)
class BlockFamily(GeneratorFamily):
    """One tuple per arity n >= 2, occupying consecutive naturals above ``offset``."""

    offset: int = 0
    name: str = FAMILY_NAME

    @property
    def params(self):
        return {"offset": self.offset}

    def _complete(self, n: int, available: AbstractSet[Symbol]) -> bool:
        start = block_start(n, self.offset)
        return all(s in available for s in range(start, start + n - 1))

    def applicable(self, available: AbstractSet[Symbol]) -> frozenset:
        arities = set()
        for sym in available:
            if isinstance(sym, int):
                n = block_arity_of(sym, self.offset)
                if n is not None and sym < block_start(n, self.offset) + n - 1:
                    arities.add(n)
        return frozenset(block(n, self.offset) for n in arities if self._complete(n, available))

    def triggered_by(self, available: AbstractSet[Symbol], symbol: Symbol) -> frozenset:
        if not isinstance(symbol, int):
            return frozenset()
        n = block_arity_of(symbol, self.offset)
        if n is None or symbol == block_start(n, self.offset) + n - 1:
            return frozenset()
        return frozenset([block(n, self.offset)]) if self._complete(n, available) else frozenset()

    def materialize(self, max_arity: int) -> Iterator[tuple]:
        for n in range(2, max_arity + 1):
            yield block(n, self.offset)


def block_family(offset: int = 0) -> RuleSystem:
    if offset < 0:
        raise ValueError("offset must be a natural number")
    return RuleSystem(Language.naturals(), generators=(BlockFamily(offset),))


def truncate(system: RuleSystem, max_arity: int) -> RuleSystem:
    """Finite system holding every tuple of arity <= ``max_arity``, generators materialized."""
    if max_arity < 1:
        raise ValueError("max_arity must be at least 1")
    relations = [r for r in system.relations if r.arity <= max_arity]
    for gen in system.generators:
        by_arity: dict[int, set] = {}
        for t in gen.materialize(max_arity):
            by_arity.setdefault(len(t), set()).add(t)
        relations += [Relation(f"{gen.name}/{n}", n, ts) for n, ts in sorted(by_arity.items())]
    return RuleSystem(system.language, system.axioms, relations)


# --- inexpressibility experiments --------------------------------------------


@dataclass(frozen=True)
class Thm22Report:
    max_arity: int
    k: int
    X: frozenset
    C_of_X: frozenset
    C_trunc_of_X: frozenset
    small_subsets_fixed: bool

    @property
    def disagrees(self) -> bool:
        return self.C_of_X != self.C_trunc_of_X

    def to_text(self) -> str:
        return "\n".join(
            [
                f"max_arity: {self.max_arity}",
                f"k: {self.k}",
                f"X: {format_set(self.X)}",
                f"C(X): {format_set(self.C_of_X)}",
                f"C_trunc(X): {format_set(self.C_trunc_of_X)}",
                f"disagree: {str(self.disagrees).lower()}",
                f"small_subsets_fixed: {str(self.small_subsets_fixed).lower()}",
            ]
        ) + "\n"


def thm22_experiment(max_arity: int) -> Thm22Report:
    """Show that the family and its arity-``max_arity`` truncation differ on one block."""
    if max_arity < 2:
        raise ValueError("max_arity must be at least 2")
    family = block_family(0)
    k = max_arity + 1
    X = frozenset(block(k)[:-1])
    fixed = all(closure(family, Y) == frozenset(Y) for Y in combinations(sorted(X), k - 2))
    return Thm22Report(
        max_arity=max_arity,
        k=k,
        X=X,
        C_of_X=closure(family, X),
        C_trunc_of_X=closure(truncate(family, max_arity), X),
        small_subsets_fixed=fixed,
    )


def distinctness_experiment(offsets: Iterable[int], search_bound: int = 64) -> dict:
    """A witness set separating every pair of offset families, keyed by ``(m, m2)`` with m < m2."""
    offsets = sorted(set(offsets))
    if len(offsets) < 2:
        raise ValueError("need at least two offsets")
    families = {m: block_family(m) for m in offsets}
    witnesses = {}
    for m, m2 in combinations(offsets, 2):
        witnesses[(m, m2)] = _find_witness(families[m], families[m2], m, m2, search_bound)
    return witnesses


def _find_witness(f1, f2, m, m2, bound):
    singles = [m, m2] + [s for s in range(bound) if s not in (m, m2)]
    candidates = [frozenset([s]) for s in singles]
    candidates += [frozenset(p) for p in combinations(range(bound), 2)]
    for W in candidates:
        if closure(f1, W) != closure(f2, W):
            return W
    return None


# --- RI* -----------------------------------------------------------------------


def ri_star(t: OperatorTable) -> RuleSystem:
    """Rule system whose tuples conclude, per nonempty finite X, each y in C(X) - (X u C(empty))."""
    require_operator(t)
    axioms_mask = int(t.images[0])
    by_arity: dict[int, set] = {}
    for X in range(1, len(t.images)):
        extra = int(t.images[X]) & ~(X | axioms_mask)
        if not extra:
            continue
        xs = tuple(canonical(t.subset(X)))
        for y in canonical(t.subset(extra)):
            by_arity.setdefault(len(xs) + 1, set()).add(xs + (y,))
    relations = [Relation(f"RI*{n}", n, ts) for n, ts in sorted(by_arity.items())]
    return RuleSystem(t.language, t.subset(axioms_mask), relations)


def roundtrip_check(t: OperatorTable) -> bool:
    return table_from_system(ri_star(t), t.language) == t


# --- derivations --------------------------------------------------------------


@dataclass(frozen=True)
class Derivation:
    hypotheses: frozenset
    axioms_used: frozenset = field(default_factory=frozenset)
    conclusions: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for name in ("hypotheses", "axioms_used", "conclusions"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.hypotheses:
            raise InvalidDerivationError("a derivation needs at least one hypothesis")
        if not self.conclusions:
            raise InvalidDerivationError("a derivation needs at least one conclusion")
        if self.hypotheses & self.axioms_used:
            raise InvalidDerivationError("hypotheses and axioms overlap")
        if self.conclusions & (self.hypotheses | self.axioms_used):
            raise InvalidDerivationError("conclusions overlap the premises")

    @property
    def premise_coords(self) -> tuple:
        return tuple(canonical(self.hypotheses)) + tuple(canonical(self.axioms_used))

    def language(self) -> Language:
        return Language.explicit(self.hypotheses | self.axioms_used | self.conclusions)


def rules_from_derivation(d: Derivation, encoding: str = "wide") -> tuple:
    """Relations that let every conclusion of ``d`` be deduced from its premises."""
    head = d.premise_coords
    arity = len(head) + 1
    if encoding == "wide":
        return (Relation(f"derived{arity}", arity, {head + (x,) for x in d.conclusions}),)
    if encoding == "chained":
        pivot, *rest = canonical(d.conclusions)
        relations = [Relation(f"derived{arity}", arity, {head + (pivot,)})]
        if rest:
            relations.append(Relation("derived-chain2", 2, {(pivot, x) for x in rest}))
        return tuple(relations)
    raise ValueError(f"unknown encoding {encoding!r}; expected 'wide' or 'chained'")


def system_from_derivation(d: Derivation, encoding: str = "wide") -> RuleSystem:
    return RuleSystem(d.language(), relations=rules_from_derivation(d, encoding))


# --- join experiment ---------------------------------------------------------

MAX_JOIN_SYMBOLS = 10


@dataclass(frozen=True)
class JoinReport:
    symbols: tuple
    equal: bool
    first_difference: tuple | None  # (subset, C_union image, lattice join image)
    union_passes_axioms: bool
    union_is_upper_bound: tuple  # one bool per input system

    def to_text(self) -> str:
        lines = [
            f"language: {format_set(self.symbols)}",
            f"systems: {len(self.union_is_upper_bound)}",
            f"union_passes_axioms: {str(self.union_passes_axioms).lower()}",
            "union_is_upper_bound: "
            + ", ".join(str(b).lower() for b in self.union_is_upper_bound),
            f"equal: {str(self.equal).lower()}",
        ]
        if self.first_difference is not None:
            X, u, j = self.first_difference
            lines.append(
                f"first_difference: {format_set(X)} union={format_set(u)} join={format_set(j)}"
            )
        return "\n".join(lines) + "\n"


def union_system(systems: Sequence[RuleSystem]) -> RuleSystem:
    symbols: set = set()
    axioms: set = set()
    relations = []
    for i, s in enumerate(systems):
        if not s.language.is_explicit:
            raise LanguageTooLargeError("join experiment needs explicit languages")
        symbols |= s.language.symbols
        axioms |= s.axioms
        relations += [Relation(f"{i}:{r.id}", r.arity, r.tuples) for r in s.relations]
    return RuleSystem(Language.explicit(symbols), axioms, relations)


def join_experiment(systems: Sequence[RuleSystem]) -> JoinReport:
    """Compare the operator of the unioned rules with the lattice join of the parts."""
    if not 2 <= len(systems) <= 4:
        raise ValueError("join experiment takes 2 to 4 systems")
    union = union_system(systems)
    if len(union.language) > MAX_JOIN_SYMBOLS:
        raise LanguageTooLargeError(
            f"combined language has {len(union.language)} symbols; the limit is {MAX_JOIN_SYMBOLS}"
        )
    c_union = table_from_system(union)
    parts = [table_from_system(s, union.language) for s in systems]
    lattice_join = parts[0]
    for p in parts[1:]:
        lattice_join = join(lattice_join, p)
    diff = c_union.first_difference(lattice_join)
    first = None
    if diff is not None:
        first = (
            c_union.subset(diff),
            c_union.subset(int(c_union.images[diff])),
            lattice_join.subset(int(lattice_join.images[diff])),
        )
    return JoinReport(
        symbols=c_union.symbols,
        equal=diff is None,
        first_difference=first,
        union_passes_axioms=check_axiom_i(c_union)
        and check_axiom_ii(c_union)
        and check_axiom_iii(c_union),
        union_is_upper_bound=tuple(leq(p, c_union) for p in parts),
    )


def format_set(symbols: Iterable[Symbol]) -> str:
    items = canonical(symbols)
    return "{" + ", ".join(map(str, items)) + "}" if items else "{}"
