"""One-to-many composition and hiding of timed port automata.

The product of two automata takes, per tick, every slice whose restriction
to each side is a transition of that side.  When one side cannot see the
other's output in the same tick (it is strongly pulse-driven on the feedback
channels, or there is no feedback at all) the product transitions are built
constructively: that side's feedback output first, then the other side, then
the rest.  Otherwise candidate feedback slices are searched up to a length
bound, and a product state with no consistent candidate is reported as an
empty composition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .automata import (
    DEFAULT_BUDGET,
    Automaton,
    Execution,
    PortSignature,
    PulseWitness,
    accepts,
    behaviors,
    check_reactive,
    check_signature,
    check_strong_pulse_modulo,
    enumerate_inputs,
    enumerate_slices,
    executions,
    is_execution,
    reachable_states,
    schedules,
)
from .errors import (
    EmptyComposition,
    IncompatibleSignatures,
    NotAnOutput,
    PrecondViolated,
)
from .history import History, Slice, render_state


def _fmt(chans) -> str:
    return "{" + ",".join(sorted(chans)) + "}"


def compatible(sig1: PortSignature, sig2: PortSignature) -> None:
    """Raise :class:`IncompatibleSignatures` naming the violated clause, else return None."""
    shared_out = sig1.outputs & sig2.outputs
    if shared_out:
        raise IncompatibleSignatures("O1 & O2 nonempty (shared writer)", min(shared_out))
    h1 = sig1.hidden & sig2.channels
    if h1:
        raise IncompatibleSignatures("H1 & C2 nonempty (hidden channel not private)", min(h1))
    h2 = sig2.hidden & sig1.channels
    if h2:
        raise IncompatibleSignatures("H2 & C1 nonempty (hidden channel not private)", min(h2))


def compose_signatures(sig1: PortSignature, sig2: PortSignature) -> PortSignature:
    compatible(sig1, sig2)
    sig = PortSignature(
        tuple(set(sig1.alphabet) | set(sig2.alphabet)),
        (sig1.inputs - sig2.outputs) | (sig2.inputs - sig1.outputs),
        sig1.outputs | sig2.outputs,
        sig1.hidden | sig2.hidden,
    )
    check_signature(sig)
    return sig


def feedback_channels(sig1: PortSignature, sig2: PortSignature) -> tuple[frozenset, frozenset]:
    """``(J, P)``: channels A2 writes for A1, and channels A1 writes for A2."""
    return sig1.inputs & sig2.outputs, sig2.inputs & sig1.outputs


@dataclass(frozen=True)
class CompositionVerdict:
    J: frozenset
    P: frozenset
    left_strong: bool
    right_strong: bool
    left_witness: PulseWitness | None = None
    right_witness: PulseWitness | None = None
    horizon: int = 0

    @property
    def trivial(self) -> bool:
        return not self.J or not self.P

    @property
    def well_defined(self) -> bool:
        return self.trivial or self.left_strong or self.right_strong

    @property
    def strong_side(self) -> int | None:
        if self.left_strong and self.J and self.P:
            return 1
        if self.right_strong and self.J and self.P:
            return 2
        return None

    def render(self) -> str:
        jp = f"(J={_fmt(self.J)},P={_fmt(self.P)})"
        if not self.J:
            return f"WELL-DEFINED via J empty {jp}"
        if not self.P:
            return f"WELL-DEFINED via P empty {jp}"
        if self.left_strong:
            return f"WELL-DEFINED via A1 strong mod {jp}"
        if self.right_strong:
            return f"WELL-DEFINED via A2 strong mod (P={_fmt(self.P)},J={_fmt(self.J)})"
        return f"NOT-ESTABLISHED neither side strong {jp} at T={self.horizon}"


def check_compose_precondition(A1: Automaton, A2: Automaton, T: int = 2, *,
                               budget: int = DEFAULT_BUDGET) -> CompositionVerdict:
    """Decide which side, if any, is strongly pulse-driven on its feedback channels.

    Both checks are bounded by the horizon ``T`` and the automata's input
    bounds.
    """
    compatible(A1.signature, A2.signature)
    J, P = feedback_channels(A1.signature, A2.signature)
    w1 = check_strong_pulse_modulo(A1, J, P, T, budget=budget)
    w2 = check_strong_pulse_modulo(A2, P, J, T, budget=budget)
    return CompositionVerdict(J, P, w1 is None, w2 is None, w1, w2, T)


class Product(Automaton):
    """Automaton built by :func:`compose`; keeps its factors and how it was scheduled."""

    left: Automaton
    right: Automaton
    schedule: str
    verdict: CompositionVerdict | None
    bound: int


def _max_output_len(A: Automaton, budget: int) -> int:
    longest = 0
    inputs = enumerate_inputs(A.signature, A.input_bound)
    out = A.outputs | A.hidden
    for s in reachable_states(A, budget=budget):
        for inp in inputs:
            for action, _ in A.step(s, inp):
                longest = max(longest, action.project(out).max_len())
    return longest


def default_search_bound(A1: Automaton, A2: Automaton, budget: int = DEFAULT_BUDGET) -> int:
    return max(A1.input_bound, A2.input_bound, _max_output_len(A1, budget), _max_output_len(A2, budget))


def _merge(a1: Slice, a2: Slice, c1: frozenset) -> Slice:
    return a1 + a2.project(a2.domain - c1)


def _constructive(first: Automaton, second: Automaton, J: frozenset, P: frozenset, bound: int,
                  alphabet: tuple):
    """Responder for the schedule where ``first`` does not read ``second`` within a tick.

    J: channels ``second`` writes and ``first`` reads; P: the converse.
    Yields (action, (state_first, state_second)).
    """
    outside = first.inputs - J
    completions = enumerate_slices(alphabet, J, bound) if J else (Slice(),)
    c_first = first.channels

    def respond(s_first, s_second, inp: Slice):
        known = inp.project(outside)
        p_outputs = None
        for jc in completions:
            ps = {a.project(P) for a, _ in first.step(s_first, known + jc)}
            if p_outputs is None:
                p_outputs = ps
            elif ps != p_outputs:
                raise PrecondViolated(
                    f"{first.name or 'automaton'} output on {_fmt(P)} depends on same-tick input on "
                    f"{_fmt(J)} at state {render_state(s_first)}"
                )
        for p in sorted(p_outputs):
            second_in = (inp.project(second.inputs - P)) + p
            for a2, t2 in second.step(s_second, second_in):
                j = a2.project(J)
                matches = [(a1, t1) for a1, t1 in first.step(s_first, known + j) if a1.project(P) == p]
                if not matches:
                    raise PrecondViolated(
                        f"{first.name or 'automaton'} cannot emit {p!r} on {_fmt(P)} once "
                        f"{_fmt(J)} carries {j!r} (state {render_state(s_first)})"
                    )
                for a1, t1 in matches:
                    yield _merge(a1, a2, c_first), t1, t2

    return respond


def _joint(A1: Automaton, A2: Automaton, J: frozenset, P: frozenset, bound: int, alphabet: tuple):
    cands = enumerate_slices(alphabet, J | P, bound)
    outside1, outside2 = A1.inputs - J, A2.inputs - P
    c1 = A1.channels

    def respond(s1, s2, inp: Slice):
        k1, k2 = inp.project(outside1), inp.project(outside2)
        for c in cands:
            j, p = c.project(J), c.project(P)
            left = [(a, t) for a, t in A1.step(s1, k1 + j) if a.project(P) == p]
            if not left:
                continue
            for a2, t2 in A2.step(s2, k2 + p):
                if a2.project(J) != j:
                    continue
                for a1, t1 in left:
                    yield _merge(a1, a2, c1), t1, t2

    return respond


def compose(A1: Automaton, A2: Automaton, *, horizon: int = 2, bound: int | None = None,
            schedule: str = "auto", check: bool = True, check_horizon: int | None = None,
            name: str | None = None, budget: int = DEFAULT_BUDGET) -> Product:
    """The one-to-many composition ``A1 (x) A2``.

    ``schedule`` is ``"auto"`` (pick from the well-definedness verdict),
    ``"left"``/``"right"`` (force a constructive order) or ``"joint"``
    (bounded search over feedback slices of length <= ``bound``).  With
    ``check`` the product's reachable states (within ``check_horizon`` ticks,
    or all of them) are explored and the first (state, input) without a
    transition raises :class:`EmptyComposition`.
    """
    sig = compose_signatures(A1.signature, A2.signature)
    J, P = feedback_channels(A1.signature, A2.signature)
    verdict = None
    if schedule == "auto":
        if not J:
            schedule = "left"
        elif not P:
            schedule = "right"
        else:
            verdict = check_compose_precondition(A1, A2, horizon, budget=budget)
            schedule = {1: "left", 2: "right", None: "joint"}[verdict.strong_side]
    if schedule not in ("left", "right", "joint"):
        raise ValueError(f"unknown schedule {schedule!r}")
    if bound is None:
        bound = default_search_bound(A1, A2, budget) if schedule == "joint" else max(A1.input_bound, A2.input_bound)
    alphabet = sig.alphabet

    if schedule == "left":
        inner = _constructive(A1, A2, J, P, bound, alphabet)

        def responder(state, inp):
            for action, t1, t2 in inner(state[0], state[1], inp):
                yield action, (t1, t2)
    elif schedule == "right":
        inner = _constructive(A2, A1, P, J, bound, alphabet)

        def responder(state, inp):
            for action, t2, t1 in inner(state[1], state[0], inp):
                yield action, (t1, t2)
    else:
        inner = _joint(A1, A2, J, P, bound, alphabet)

        def responder(state, inp):
            for action, t1, t2 in inner(state[0], state[1], inp):
                yield action, (t1, t2)

    product = Product(
        sig,
        lambda: itertools.product(A1.states, A2.states),
        (A1.start, A2.start),
        responder=responder,
        input_bound=min(A1.input_bound, A2.input_bound),
        name=name or f"({A1.name or 'A1'} (x) {A2.name or 'A2'})",
    )
    product.left, product.right = A1, A2
    product.schedule, product.verdict, product.bound = schedule, verdict, bound
    if check:
        witness = check_reactive(product, horizon=check_horizon, budget=budget)
        if witness is not None:
            raise EmptyComposition(witness.state, witness.input, bound)
    return product


def describe_schedule(product: Product) -> str:
    J, P = feedback_channels(product.left.signature, product.right.signature)
    jp = f"(J={_fmt(J)},P={_fmt(P)})"
    if product.verdict is not None and product.schedule != "joint":
        return product.verdict.render()
    if product.schedule == "left":
        return f"WELL-DEFINED via J empty {jp}" if not J else f"WELL-DEFINED via A1 first {jp}"
    if product.schedule == "right":
        return f"WELL-DEFINED via P empty {jp}" if not P else f"WELL-DEFINED via A2 first {jp}"
    return f"WELL-DEFINED via joint search {jp} bound={product.bound}"


def hide(A: Automaton, P: Iterable[str], name: str | None = None) -> Automaton:
    """``nu P : A`` -- move outputs P to the hidden channels; the transitions are untouched."""
    P = frozenset(P)
    for c in sorted(P):
        if c not in A.outputs:
            raise NotAnOutput(c)
    sig = A.signature
    new_sig = PortSignature(sig.alphabet, sig.inputs, sig.outputs - P, sig.hidden | P)
    name = name or (A.name if not P else f"hide {_fmt(P)} {A.name}")
    if A.is_table:
        hidden = Automaton(new_sig, A.states, A.start, transitions=A.transitions,
                           input_bound=A.input_bound, name=name)
    else:
        hidden = Automaton(new_sig, lambda: A.states, A.start, responder=A.step,
                           input_bound=A.input_bound, name=name)
    hidden._reactive_upto = A._reactive_upto
    return hidden


# -- decomposition oracle: product runs versus joined factor runs ----------------------

@dataclass(frozen=True)
class DecompositionCounterexample:
    claim: str  # execs | scheds | behs
    direction: str  # "product-not-decomposable" | "join-not-in-product"
    witness: object

    def render(self) -> str:
        body = self.witness.render()
        return f"{self.claim}: {self.direction}\n{body}"


def _project_execution(e: Execution, k: int, chans: frozenset) -> Execution:
    return Execution(tuple(s[k] for s in e.states), e.actions.project(chans))


def _join(left: Iterable, right: Iterable, key_left, key_right, combine):
    index: dict = {}
    for r in right:
        index.setdefault(key_right(r), []).append(r)
    for l in sorted(left, key=_sort_key):
        for r in sorted(index.get(key_left(l), ()), key=_sort_key):
            yield combine(l, r)


def _sort_key(x):
    if isinstance(x, Execution):
        return (tuple(render_state(s) for s in x.states), x.actions.ticks)
    return x.ticks


def decomposition_oracle(A1: Automaton, A2: Automaton, T: int, product: Automaton | None = None, *,
                         budget: int = DEFAULT_BUDGET) -> DecompositionCounterexample | None:
    """Check that executions, schedules and behaviors of the product are exactly
    the pairs of component runs that agree on shared channels, at horizon ``T``.

    Product runs are enumerated and each projection is replayed against the
    factor; factor runs are enumerated, joined on their shared channels and
    replayed against the product.  Returns the first counterexample, if any.
    """
    if product is None:
        product = compose(A1, A2, check_horizon=T, budget=budget)
    C1, C2 = A1.channels, A2.channels
    shared = C1 & C2
    E1, E2 = A1.signature.external, A2.signature.external
    shared_ext = E1 & E2

    p_execs = executions(product, T, budget=budget)
    for e in sorted(p_execs, key=_sort_key):
        if not (is_execution(A1, _project_execution(e, 0, C1)) and is_execution(A2, _project_execution(e, 1, C2))):
            return DecompositionCounterexample("execs", "product-not-decomposable", e)

    def join_exec(e1, e2):
        states = tuple(zip(e1.states, e2.states))
        return Execution(states, e1.actions + e2.actions.project(C2 - C1))

    for e in _join(executions(A1, T, budget=budget), executions(A2, T, budget=budget),
                   lambda e: e.actions.project(shared), lambda e: e.actions.project(shared), join_exec):
        if not is_execution(product, e):
            return DecompositionCounterexample("execs", "join-not-in-product", e)

    for s in sorted(schedules(product, T, budget=budget), key=_sort_key):
        if not (accepts(A1, s.project(C1)) and accepts(A2, s.project(C2))):
            return DecompositionCounterexample("scheds", "product-not-decomposable", s)
    for s in _join(schedules(A1, T, budget=budget), schedules(A2, T, budget=budget),
                   lambda h: h.project(shared), lambda h: h.project(shared),
                   lambda a, b: a + b.project(C2 - C1)):
        if not accepts(product, s):
            return DecompositionCounterexample("scheds", "join-not-in-product", s)

    for b in sorted(behaviors(product, T, budget=budget), key=_sort_key):
        if not (accepts(A1, b.project(E1)) and accepts(A2, b.project(E2))):
            return DecompositionCounterexample("behs", "product-not-decomposable", b)
    for b in _join(behaviors(A1, T, budget=budget), behaviors(A2, T, budget=budget),
                   lambda h: h.project(shared_ext), lambda h: h.project(shared_ext),
                   lambda a, b: a + b.project(E2 - E1)):
        if not accepts(product, b):
            return DecompositionCounterexample("behs", "join-not-in-product", b)
    return None
