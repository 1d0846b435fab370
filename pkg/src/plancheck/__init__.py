"""Validation and monitored execution of STRIPS plans."""

from .grounding import GroundingError, ground_action
from .model import (
    ActionSchema,
    Domain,
    GroundAction,
    GroundActionDescription,
    GroundAtom,
    Literal,
    ObjectRef,
    Parameter,
    Plan,
    Polarity,
    PredicateDecl,
    Problem,
    SchemaLiteral,
    State,
    Variable,
    World,
    negate,
    well_formed_domain,
    well_formed_problem,
)
from .monitors import (
    ExecutionOutcome,
    FairnessConfig,
    FairnessRefutation,
    Gender,
    GenderBiasError,
    Justification,
    Monitor,
    MonitorError,
    OutOfFuelError,
    TripCount,
    action_preserves_fairness,
    canonical_handler,
    compose,
    execute,
    execute_monitored,
    fairness_monitor,
    fuel_monitor,
    is_fair,
)
from .parser import (
    ParseError,
    parse_domain,
    parse_plan,
    parse_problem,
    print_domain,
    print_plan,
    print_problem,
)
from .semantics import holds, satisfies, update_world, world_set_eq
from .validator import Derivation, DerivationStep, TamperDetected, ValidationError, check_plan, replay

__version__ = "0.1.0"
