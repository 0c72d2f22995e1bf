import random
from itertools import combinations

import pytest
from hypothesis import given, settings

from logicsys import (
    DeductionTrace,
    Justification,
    Language,
    Relation,
    RuleSystem,
    applies_trivially,
    block_family,
    close,
    closure,
    trace_diagnostics,
    validate_trace,
)
from logicsys.errors import BudgetExceededError, InvalidSystemError, UnknownRelationError, UnknownSymbolError
from logicsys.model import GeneratorFamily
from oracles import naive_closure, powerset
from randsys import random_subset, random_system, system_and_subset


def block_by_formula(n):
    # a_i = (n^2 - n - 4)/2 + i, i = 1..n
    return [(n * n - n - 4) // 2 + i for i in range(1, n + 1)]


def test_block_family_closes_zero_to_zero_one():
    assert closure(block_family(0), {0}) == {0, 1}


def test_block_family_empty_set_is_closed():
    assert closure(block_family(0), set()) == frozenset()


def test_block_four():
    X = set(block_by_formula(4)[:-1])
    assert X == {5, 6, 7}
    expected = naive_closure(block_family(0), X)
    assert expected == {5, 6, 7, 8}
    assert closure(block_family(0), X) == expected


def test_chained_blocks_do_not_cascade():
    # block 2 concludes 1, which is not a premise of any other block
    assert closure(block_family(0), {0, 2, 3}) == {0, 1, 2, 3, 4}


def test_trace_layout():
    system = RuleSystem(
        Language.explicit("abcd"),
        {"d"},
        [Relation("r", 2, {("a", "b")}), Relation("s", 3, {("a", "b", "c")})],
    )
    result, trace = close(system, {"a"})
    assert result == {"a", "b", "c", "d"}
    assert trace.steps == (
        ("a", Justification("premise")),
        ("d", Justification("axiom")),
        ("b", Justification("rule", "r", ("a", "b"))),
        ("c", Justification("rule", "s", ("a", "b", "c"))),
    )


def test_trace_from_generator_cites_the_block():
    _, trace = close(block_family(0), {5, 6, 7})
    assert trace.steps[-1] == (8, Justification("rule", "herrmann", (5, 6, 7, 8)))
    assert str(trace.steps[-1][1]) == "rule herrmann (5, 6, 7, 8)"


def test_duplicate_premise_coordinates_are_a_set():
    system = RuleSystem(Language.explicit("ab"), relations=[Relation("r", 3, {("a", "a", "b")})])
    assert closure(system, {"a"}) == {"a", "b"}


def test_unary_relation_behaves_as_axiom():
    system = RuleSystem(Language.explicit("ab"), relations=[Relation("u", 1, {("a",)})])
    assert closure(system, set()) == {"a"}


def test_unknown_symbol_in_input():
    with pytest.raises(UnknownSymbolError):
        close(RuleSystem(Language.explicit("ab")), {"z"})
    with pytest.raises(UnknownSymbolError):
        close(block_family(0), {"a"})


def test_generator_conclusion_outside_explicit_language():
    system = block_family(0).with_language(Language.explicit([0]))
    with pytest.raises(UnknownSymbolError):
        close(system, {0})


def test_invalid_system_is_rejected():
    system = RuleSystem(Language.explicit("ab"), relations=[Relation("r", 3, {("a", "b")})])
    with pytest.raises(InvalidSystemError):
        close(system, set())


class Runaway(GeneratorFamily):
    """Violates the premise-anchored contract: n always yields (n, n + 1)."""

    name = "runaway"

    def applicable(self, available):
        return frozenset((n, n + 1) for n in available)


def test_budget_stops_a_runaway_generator():
    system = RuleSystem(Language.naturals(), generators=(Runaway(),))
    with pytest.raises(BudgetExceededError):
        close(system, {0}, budget=500)


def test_budget_counts_firings():
    system = RuleSystem(Language.explicit("abc"), relations=[Relation("r", 2, {("a", "b"), ("b", "c")})])
    assert closure(system, {"a"}, budget=2) == {"a", "b", "c"}
    with pytest.raises(BudgetExceededError):
        close(system, {"a"}, budget=1)


@settings(max_examples=200)
@given(system_and_subset())
def test_closure_axioms_hold(case):
    system, X = case
    C = closure(system, X)
    assert X | system.axioms <= C
    assert closure(system, C) == C
    assert C == frozenset().union(*(closure(system, A) for A in powerset(X)))


@settings(max_examples=200)
@given(system_and_subset(), system_and_subset())
def test_closure_is_monotone(case, other):
    system, X = case
    _, Y = other
    Y = X | (Y & system.language.symbols)
    assert closure(system, X) <= closure(system, Y)


@settings(max_examples=200)
@given(system_and_subset())
def test_engine_matches_naive_oracle(case):
    system, X = case
    assert closure(system, X) == naive_closure(system, X)


def test_closure_of_empty_set_is_axioms_plus_unary_conclusions():
    rng = random.Random(3)
    for _ in range(100):
        system = random_system(rng)
        extra = Relation("u", 1, {(s,) for s in sorted(system.language.symbols)[:1]})
        with_unary = RuleSystem(system.language, system.axioms, list(system.relations) + [extra])
        assert closure(system, ()) == naive_closure(system, ())
        base = system.axioms | {t[0] for t in extra.tuples}
        assert base <= closure(with_unary, ()) == naive_closure(with_unary, ())


def test_finitary_exhaustive_up_to_twelve_symbols():
    system = RuleSystem(
        Language.naturals(),
        relations=[Relation("r", 3, {(0, 1, 20), (20, 5, 21)}), Relation("s", 2, {(11, 22)})],
        generators=block_family(0).generators,
    )
    X = frozenset(range(12))
    union = frozenset().union(*(closure(system, A) for A in powerset(X)))
    assert closure(system, X) == union


def test_closure_is_deterministic():
    rng = random.Random(11)
    for _ in range(50):
        system = random_system(rng)
        X = random_subset(rng, system.language.symbols)
        assert close(system, X) == close(system, X)


# --- applies_trivially ------------------------------------------------------


def test_axiom_content_applies_trivially():
    system = RuleSystem(Language.explicit("abc"), relations=[Relation("u", 1, {("a",), ("b",)})])
    for X in powerset("abc"):
        assert applies_trivially("u", X, system)


def test_block_four_relation_triviality():
    fam = block_family(0)
    r4 = Relation("r4", 4, {tuple(block_by_formula(4))})
    system = RuleSystem(Language.naturals(), relations=[r4], generators=fam.generators)
    assert applies_trivially("r4", {5, 6}, system)
    assert not applies_trivially("r4", {5, 6, 7}, system)
    assert not applies_trivially(fam.generators[0], {5, 6, 7}, system)
    assert applies_trivially("herrmann", {5, 7}, system)


def test_applies_trivially_unknown_relation():
    with pytest.raises(UnknownRelationError):
        applies_trivially("nope", set(), RuleSystem(Language.explicit("a")))


def test_triviality_literal_reading_is_not_downward_closed():
    # A conclusion already inside X counts as trivial for X but not for a
    # subset that lacks it.
    system = RuleSystem(Language.explicit("ab"), relations=[Relation("r", 2, {("a", "b")})])
    assert applies_trivially("r", {"a", "b"}, system)
    assert not applies_trivially("r", {"a"}, system)
    fam = block_family(0)
    assert applies_trivially("herrmann", {5, 6, 7, 8}, fam)
    assert not applies_trivially("herrmann", {5, 6, 7}, fam)


def test_triviality_downward_when_conclusions_avoid_x():
    rng = random.Random(7)
    checked = 0
    for _ in range(200):
        system = random_system(rng)
        for rel in system.relations:
            X = random_subset(rng, system.language.symbols)
            if X & {t[-1] for t in rel.tuples}:
                continue
            if applies_trivially(rel, X, system):
                checked += 1
                assert all(applies_trivially(rel, Y, system) for Y in powerset(X))
    assert checked > 50


# --- traces -----------------------------------------------------------------


@settings(max_examples=200)
@given(system_and_subset())
def test_engine_traces_validate(case):
    system, X = case
    result, trace = close(system, X)
    assert validate_trace(trace, system, X)
    assert set(trace.symbols()) == result
    assert len(trace.symbols()) == len(result)


def test_generator_trace_validates():
    X = {5, 6, 7, 0, 2, 3}
    _, trace = close(block_family(0), X)
    assert validate_trace(trace, block_family(0), X)


def ab_system():
    return RuleSystem(Language.explicit("abc"), relations=[Relation("r", 3, {("a", "b", "c")})])


def test_trace_with_unobtained_premise_fails():
    trace = DeductionTrace(
        frozenset({"a"}),
        (("a", Justification("premise")), ("c", Justification("rule", "r", ("a", "b", "c")))),
    )
    assert not validate_trace(trace, ab_system(), {"a"})
    assert trace_diagnostics(trace, ab_system(), {"a"}) == [
        "step 2 (c): cited tuple has premises not yet obtained"
    ]


def test_trace_with_repeated_symbol_fails():
    trace = DeductionTrace(
        frozenset({"a"}), (("a", Justification("premise")), ("a", Justification("premise")))
    )
    assert not validate_trace(trace, ab_system(), {"a"})


def test_trace_step_order_matters():
    system = RuleSystem(Language.explicit("abc"), relations=[Relation("r", 2, {("a", "b"), ("b", "c")})])
    steps = (
        ("a", Justification("premise")),
        ("b", Justification("rule", "r", ("a", "b"))),
        ("c", Justification("rule", "r", ("b", "c"))),
    )
    assert validate_trace(DeductionTrace(frozenset({"a"}), steps), system, {"a"})
    swapped = (steps[0], steps[2], steps[1])
    assert not validate_trace(DeductionTrace(frozenset({"a"}), swapped), system, {"a"})


def test_trace_citing_foreign_tuple_or_wrong_axiom_fails():
    fake = DeductionTrace(
        frozenset({"a", "b"}),
        (("a", Justification("premise")), ("c", Justification("rule", "r", ("a", "c")))),
    )
    assert not validate_trace(fake, ab_system(), {"a", "b"})
    axiom = DeductionTrace(frozenset(), (("a", Justification("axiom")),))
    assert not validate_trace(axiom, ab_system(), set())
    missing = DeductionTrace(frozenset({"a"}), ())
    assert not validate_trace(missing, ab_system(), {"b"})
