"""Finite-model engine for approximate compositional game theory.

Selection functions and open games over finite carriers, the epsilon
approximation operator and its algebra, a pseudometric on games, a
canonical document format, and exhaustive law suites.
"""

from .errors import AgtError, BudgetExceeded, FormatError, InputError, PreconditionError
from .metric import (
    INF,
    ExtReal,
    FinMetricSpace,
    FnTable,
    MetricViolation,
    all_tables,
    as_extreal,
    ext_add,
    sup_metric,
    tensor_metric,
    validate_metric,
    within_ball,
)
from .lens import (
    LensMap,
    LensObject,
    UNIT,
    compose_lens,
    costate_of,
    costate_table,
    identity_lens,
    is_short_lens,
    point_of,
    pull_table,
    scalar_of,
    tensor_lens,
    tensor_object,
)
from .selection import (
    SelMorphism,
    SelectionFunction,
    approximate,
    argmax_sel,
    check_argmax_sandwich,
    check_grading,
    check_tensor_exchange,
    eps_argmax_sel,
    is_sel_morphism,
    is_sel_morphism_covariant,
    check_morphism_lift,
    nash_product,
    sel_leq,
)
from .opengame import (
    GameMorphism,
    OpenGame,
    check_game_morphism_lift,
    check_game_tensor_exchange,
    check_seq_exchange,
    game_to_sel,
    is_game_morphism,
    nash_tensor_game,
    sel_to_game,
    seq_compose,
    t_eps_game,
)
from .distance import GameDistance, MetricScale, check_metric_props, sel_distance
from .fileformat import SpecDocument, parse, serialize
from .laws import ScaleCaps, SuiteReport, run_suite

__version__ = "0.1.0"
