"""Logic-systems, their finite consequence operators, and the operator lattice."""

from .constructions import (
    BlockFamily,
    Derivation,
    block,
    block_family,
    distinctness_experiment,
    join_experiment,
    ri_star,
    roundtrip_check,
    rules_from_derivation,
    thm22_experiment,
    truncate,
)
from .engine import (
    DeductionTrace,
    Justification,
    applies_trivially,
    close,
    closure,
    trace_diagnostics,
    validate_trace,
)
from .model import GeneratorFamily, Language, Relation, RuleSystem, is_finite_system, validate
from .table import (
    OperatorTable,
    check_axiom_i,
    check_axiom_ii,
    check_axiom_iii,
    join,
    leq,
    meet,
    table_from_system,
)

__version__ = "0.1.0"
