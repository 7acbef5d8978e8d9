"""Degree-constrained subgraph (f-factor) toolkit.

Decide and construct perfect f-factors on finite graphs (augmenting-trail
solver plus an independent subset oracle), compute obstruction ranks,
exercise the hereditary-property framework, and run a greedy prefix
construction on lazily generated countable graphs.
"""

__version__ = "0.1.0"

from .core import (
    OMEGA,
    Capacity,
    Edge,
    Factor,
    FactorProblem,
    Graph,
    build_problem,
    degree,
    is_factor,
    is_perfect,
    load_instance,
    make_factor,
    parse_instance,
    problem_from_json,
    problem_to_json,
    remove_edge,
    residual,
)
from .errors import (
    BudgetExceeded,
    ChooserFailure,
    ClassCViolation,
    DeclarationViolated,
    FFactorError,
    InfiniteCapacityUnsupported,
    InstanceParseError,
    InternalHereditaryFailure,
    MalformedEdge,
    MalformedInstance,
    NoSuchEdge,
    NotAFactor,
    NotAugmenting,
    NotDeficient,
    PropertyDoesNotHold,
)
from .obstruction import (
    ObstructionWitness,
    check_p2,
    obstruction_rank,
    obstruction_witness,
)
from .properties import (
    HereditaryReport,
    PropertyId,
    check_property,
    enumerate_factors,
    hereditary_step,
    perfect_factor_bruteforce,
    saturate_finite_set,
)
from .stream import (
    CountableGraphSource,
    ExtensionChooser,
    StreamReport,
    known_factor_chooser,
    make_family,
    p2_guided_chooser,
    run_finite_degeneration,
    stream_factor,
    verify_schedule,
)
from .trails import (
    check_p4,
    find_augmenting_trail,
    flip,
    is_augmenting,
    is_trail,
    solve_by_augmentation,
)

__all__ = [
    "OMEGA",
    "Capacity",
    "Edge",
    "Factor",
    "FactorProblem",
    "Graph",
    "build_problem",
    "degree",
    "is_factor",
    "is_perfect",
    "load_instance",
    "make_factor",
    "parse_instance",
    "problem_from_json",
    "problem_to_json",
    "remove_edge",
    "residual",
    "BudgetExceeded",
    "ChooserFailure",
    "ClassCViolation",
    "DeclarationViolated",
    "FFactorError",
    "InfiniteCapacityUnsupported",
    "InstanceParseError",
    "InternalHereditaryFailure",
    "MalformedEdge",
    "MalformedInstance",
    "NoSuchEdge",
    "NotAFactor",
    "NotAugmenting",
    "NotDeficient",
    "PropertyDoesNotHold",
    "ObstructionWitness",
    "check_p2",
    "obstruction_rank",
    "obstruction_witness",
    "HereditaryReport",
    "PropertyId",
    "check_property",
    "enumerate_factors",
    "hereditary_step",
    "perfect_factor_bruteforce",
    "saturate_finite_set",
    "CountableGraphSource",
    "ExtensionChooser",
    "StreamReport",
    "known_factor_chooser",
    "make_family",
    "p2_guided_chooser",
    "run_finite_degeneration",
    "stream_factor",
    "verify_schedule",
    "check_p4",
    "find_augmenting_trail",
    "flip",
    "is_augmenting",
    "is_trail",
    "solve_by_augmentation",
]
