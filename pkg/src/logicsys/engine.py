"""Forward-chaining closure, deduction traces and trivial applicability."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import BudgetExceededError, InvalidSystemError, UnknownSymbolError
from .model import (
    GeneratorFamily,
    Relation,
    RuleSystem,
    RuleTuple,
    Symbol,
    canonical,
    conclusion,
    premises,
    validate,
)

DEFAULT_BUDGET = 1_000_000

PREMISE = "premise"
AXIOM = "axiom"
RULE = "rule"


@dataclass(frozen=True)
class Justification:
    kind: str
    source: str | None = None
    tuple: RuleTuple | None = None

    def __str__(self) -> str:
        if self.kind == RULE:
            return f"rule {self.source} ({', '.join(map(str, self.tuple))})"
        return self.kind


@dataclass(frozen=True)
class DeductionTrace:
    premises: frozenset
    steps: tuple  # of (symbol, Justification)

    def symbols(self) -> list:
        return [sym for sym, _ in self.steps]


class Closure(NamedTuple):
    closure: frozenset
    trace: DeductionTrace


class _Compiled:
    """Premise-count index over the explicit tuples of a rule system."""

    def __init__(self, system: RuleSystem):
        problems = validate(system)
        if problems:
            raise InvalidSystemError(problems)
        self.entries: list[tuple[tuple, str, RuleTuple, frozenset]] = []
        for rel in system.relations:
            for t in rel.sorted_tuples():
                self.entries.append(((rel.arity, rel.id, t), rel.id, t, premises(t)))
        self.watchers: dict[Symbol, list[int]] = {}
        for i, (_, _, _, prem) in enumerate(self.entries):
            for sym in prem:
                self.watchers.setdefault(sym, []).append(i)


def _compile(system: RuleSystem) -> _Compiled:
    # Cached on the (immutable) system so repeated closures skip validation.
    compiled = system.__dict__.get("_compiled")
    if compiled is None:
        compiled = _Compiled(system)
        object.__setattr__(system, "_compiled", compiled)
    return compiled


def _check_members(system: RuleSystem, symbols: Iterable[Symbol]) -> None:
    for sym in symbols:
        if sym not in system.language:
            raise UnknownSymbolError(f"{sym!r} is not in the language")


def close(system: RuleSystem, X: Iterable[Symbol], budget: int | None = None) -> Closure:
    """Least superset of ``X`` and the axioms closed under every rule of ``system``.

    Works semi-naively: a tuple is examined once, when its last missing
    premise arrives.  The trace lists the members of ``X``, then the
    remaining axioms, then each rule conclusion in firing order.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    X = frozenset(X)
    _check_members(system, X)
    index = _compile(system)

    derived: set[Symbol] = set()
    steps: list[tuple[Symbol, Justification]] = []
    for sym in canonical(X):
        derived.add(sym)
        steps.append((sym, Justification(PREMISE)))
    for sym in canonical(system.axioms - X):
        derived.add(sym)
        steps.append((sym, Justification(AXIOM)))

    missing = [len(prem - derived) for _, _, _, prem in index.entries]
    ready = [index.entries[i][:3] for i, n in enumerate(missing) if n == 0]
    seen_generated: list[set] = []
    for gen in system.generators:
        found = set(gen.applicable(derived))
        seen_generated.append(found)
        ready.extend(((len(t), gen.name, t), gen.name, t) for t in found)
    ready.sort(key=lambda e: e[0])
    agenda = deque(ready)

    fired = 0
    while agenda:
        _, source, t = agenda.popleft()
        fired += 1
        if fired > budget:
            raise BudgetExceededError(f"closure exceeded its budget of {budget} rule firings")
        new = conclusion(t)
        if new in derived:
            continue
        if new not in system.language:
            raise UnknownSymbolError(f"{source} concludes {new!r}, which is outside the language")
        derived.add(new)
        steps.append((new, Justification(RULE, source, t)))

        batch = []
        for i in index.watchers.get(new, ()):
            missing[i] -= 1
            if missing[i] == 0:
                batch.append(index.entries[i][:3])
        for gen, seen in zip(system.generators, seen_generated):
            for g in gen.triggered_by(derived, new):
                if g not in seen:
                    seen.add(g)
                    batch.append(((len(g), gen.name, g), gen.name, g))
        batch.sort(key=lambda e: e[0])
        agenda.extend(batch)

    return Closure(frozenset(derived), DeductionTrace(X, tuple(steps)))


def closure(system: RuleSystem, X: Iterable[Symbol], budget: int | None = None) -> frozenset:
    return close(system, X, budget).closure


def applies_trivially(
    rule: str | Relation | GeneratorFamily, X: Iterable[Symbol], system: RuleSystem
) -> bool:
    """True when ``rule`` alone, iterated over ``X``, yields nothing outside ``X`` and C(empty set)."""
    if isinstance(rule, str):
        rule = system.relation(rule)
    X = frozenset(X)
    if isinstance(rule, Relation):
        alone = RuleSystem(system.language, relations=(rule,))
    else:
        alone = RuleSystem(system.language, generators=(rule,))
    baseline = closure(system, ())
    return closure(alone, X) <= X | baseline


def trace_diagnostics(trace: DeductionTrace, system: RuleSystem, X: Iterable[Symbol]) -> list[str]:
    """Problems with ``trace``; only the first offending step is reported."""
    X = frozenset(X)
    if trace.premises != X:
        return [f"trace premises {canonical(trace.premises)} differ from {canonical(X)}"]
    available = set(X) | set(system.axioms)
    seen: set[Symbol] = set()
    for pos, (sym, why) in enumerate(trace.steps, start=1):
        problem = _step_problem(sym, why, seen, available, system, X)
        if problem:
            return [f"step {pos} ({sym}): {problem}"]
        seen.add(sym)
        available.add(sym)
    return []


def _step_problem(sym, why, seen, available, system, X) -> str | None:
    if sym in seen:
        return "symbol repeats an earlier step"
    if sym not in system.language:
        return "symbol is outside the language"
    if why.kind == PREMISE:
        return None if sym in X else "not a member of the premises"
    if why.kind == AXIOM:
        return None if sym in system.axioms else "not an axiom"
    if why.kind != RULE:
        return f"unknown justification kind {why.kind!r}"
    t = why.tuple
    if not t or conclusion(t) != sym:
        return "cited tuple does not conclude this symbol"
    if not premises(t) <= available:
        return "cited tuple has premises not yet obtained"
    try:
        source = system.relation(why.source)
    except LookupError:
        return f"no relation named {why.source!r}"
    if isinstance(source, Relation):
        if t not in source.tuples:
            return f"tuple is not in relation {why.source!r}"
    elif t not in source.applicable(available):
        return f"tuple is not produced by generator {why.source!r}"
    return None


def validate_trace(trace: DeductionTrace, system: RuleSystem, X: Iterable[Symbol]) -> bool:
    return not trace_diagnostics(trace, system, X)
