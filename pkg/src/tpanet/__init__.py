"""Timed port automata, their composition, and history-based semantics at bounded horizons."""
from .automata import (
    Automaton,
    Execution,
    PortSignature,
    Transition,
    accepts,
    behaviors,
    behaviors_for_input,
    builtin_blocking_pair,
    builtin_buffer,
    builtin_fair_merge,
    check_reactive,
    check_strong_pulse,
    check_strong_pulse_modulo,
    check_weak_pulse,
    enumerate_histories,
    executions,
    rename,
    schedules,
    simulate,
)
from .composition import compose, decomposition_oracle, hide
from .denotational import (
    Component,
    FixConfig,
    StepFun,
    apply,
    automaton_to_component,
    banach_fix,
    check_equivalence,
    classify_pulse,
    compose_components,
    hide_component,
)
from .errors import TPAError
from .history import DyadicDistance, History, Slice, baire_distance, parse_history

__version__ = "0.1.0"
