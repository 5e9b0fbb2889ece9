"""Timed port automata at bounded horizons.

An automaton reacts to one input slice per tick with a transition labelled by
a slice over all of its channels.  The transition relation is either an
explicit finite table or a *responder*, a deterministic procedure that lists
every (action, target) pair for a given state and input.  Responders let the
infinite, schema-defined relations of the fair merge and the buffer be used
exactly on any finite input space.

Reactiveness, executions and pulse-drivenness are all decided by exhaustive
enumeration of inputs whose per-channel sequences are at most ``input_bound``
long.  Every verdict is therefore relative to that bound and to the horizon.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .errors import (
    CapacityExceeded,
    ConfigurationError,
    DomainMismatch,
    ExplosionGuard,
    NotReactive,
    OverlapError,
    UnknownState,
)
from .history import History, Slice, render_seq, render_state, state_key

DEFAULT_BUDGET = 2_000_000

Action = tuple  # (Slice over C, target state)


@dataclass(frozen=True)
class PortSignature:
    alphabet: tuple
    inputs: frozenset = frozenset()
    outputs: frozenset = frozenset()
    hidden: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        for name in ("inputs", "outputs", "hidden"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def channels(self) -> frozenset:
        return self.inputs | self.outputs | self.hidden

    @property
    def external(self) -> frozenset:
        return self.inputs | self.outputs

    def render(self) -> str:
        def cs(x):
            return "{" + ",".join(sorted(x)) + "}"
        return f"({cs(self.alphabet)}, {cs(self.inputs)}, {cs(self.outputs)}, {cs(self.hidden)})"


def check_signature(sig: PortSignature) -> None:
    """Raise :class:`OverlapError` unless I, O and H are pairwise disjoint."""
    roles = (("input", sig.inputs), ("output", sig.outputs), ("hidden", sig.hidden))
    for (r1, a), (r2, b) in itertools.combinations(roles, 2):
        clash = a & b
        if clash:
            raise OverlapError(min(clash), (r1, r2))
    if len(set(sig.alphabet)) != len(sig.alphabet):
        raise ConfigurationError("alphabet has duplicate symbols")


@dataclass(frozen=True)
class Transition:
    source: Hashable
    action: Slice
    target: Hashable

    def render(self) -> str:
        return f"{render_state(self.source)} -[{self.action.render()}]-> {render_state(self.target)}"


class Word(tuple):
    """Finite message sequence used as a state (buffer contents)."""

    def render(self) -> str:
        return render_seq(self)

    def __repr__(self):
        return f"Word({render_seq(self)})"


@lru_cache(maxsize=None)
def enumerate_sequences(alphabet: tuple, bound: int) -> tuple:
    """All sequences of length <= bound in shortlex order."""
    seqs = []
    for k in range(bound + 1):
        seqs.extend(itertools.product(alphabet, repeat=k))
    return tuple(seqs)


@lru_cache(maxsize=None)
def _enumerate_slices(alphabet: tuple, chans: tuple, bound: int) -> tuple:
    seqs = enumerate_sequences(alphabet, bound)
    return tuple(Slice(zip(chans, combo)) for combo in itertools.product(seqs, repeat=len(chans)))


def enumerate_slices(alphabet: Iterable, chans: Iterable[str], bound: int) -> tuple[Slice, ...]:
    return _enumerate_slices(tuple(sorted(alphabet)), tuple(sorted(chans)), bound)


def enumerate_inputs(sig: PortSignature, bound: int = 1) -> tuple[Slice, ...]:
    """Every input slice of ``sig`` with sequences no longer than ``bound``.

    There are ``(sum_{k<=L} |D|**k) ** |I|`` of them; for ``I = {}`` exactly
    the single empty slice.
    """
    return enumerate_slices(sig.alphabet, sig.inputs, bound)


def enumerate_histories(alphabet, chans, bound: int, length: int) -> Iterator[History]:
    slices = enumerate_slices(alphabet, chans, bound)
    dom = frozenset(chans)
    for combo in itertools.product(slices, repeat=length):
        yield History(dom, combo)


def canonical(pairs: Iterable[tuple[Slice, Hashable]]) -> tuple:
    """Deduplicate (action, target) pairs and sort them canonically."""
    uniq = {}
    for action, target in pairs:
        uniq[(action, target)] = None
    return tuple(sorted(uniq, key=lambda p: (p[0].items(), state_key(p[1]))))


Responder = Callable[[Hashable, Slice], Iterable[tuple[Slice, Hashable]]]


class Automaton:
    """A timed port automaton ``(signature, states, start, delta)``.

    Exactly one of ``transitions`` (explicit table) and ``responder`` must be
    given.  ``states`` may be a callable producing the state set lazily, which
    matters for responders over large truncated state spaces.
    """

    def __init__(
        self,
        signature: PortSignature,
        states,
        start,
        *,
        transitions: Iterable[Transition] | None = None,
        responder: Responder | None = None,
        input_bound: int = 1,
        name: str = "",
    ):
        check_signature(signature)
        if (transitions is None) == (responder is None):
            raise ConfigurationError("give exactly one of transitions= or responder=")
        if input_bound < 0:
            raise ConfigurationError("input_bound must be >= 0")
        self.signature = signature
        self.start = start
        self.input_bound = input_bound
        self.name = name
        self._states_src = states
        self._responder = responder
        self._cache: dict = {}
        self._table = None
        self._reactive_upto = -1  # horizon through which reactiveness is verified
        if transitions is not None:
            self._build_table(transitions)
        if not callable(states) and start not in self.states:
            raise UnknownState(start)

    def _build_table(self, transitions):
        table: dict = {}
        chans = self.signature.channels
        trans = tuple(transitions)
        for t in trans:
            if t.action.domain != chans:
                raise DomainMismatch(
                    f"transition {t.render()} must label all channels {sorted(chans)}"
                )
            for s in (t.source, t.target):
                if s not in self.states:
                    raise UnknownState(s)
            key = (t.source, t.action.project(self.signature.inputs))
            table.setdefault(key, []).append((t.action, t.target))
        self._table = {k: canonical(v) for k, v in table.items()}
        self.transitions = tuple(
            sorted(set(trans), key=lambda t: (state_key(t.source), t.action.items(), state_key(t.target)))
        )

    def _mark_reactive(self, horizon):
        upto = float("inf") if horizon is None else horizon
        self._reactive_upto = max(self._reactive_upto, upto)

    def _reactive_verified(self, horizon) -> bool:
        return self._reactive_upto >= (float("inf") if horizon is None else horizon)

    @cached_property
    def states(self) -> frozenset:
        src = self._states_src
        return frozenset(src() if callable(src) else src)

    @property
    def is_table(self) -> bool:
        return self._table is not None

    @property
    def alphabet(self) -> tuple:
        return self.signature.alphabet

    @property
    def inputs(self) -> frozenset:
        return self.signature.inputs

    @property
    def outputs(self) -> frozenset:
        return self.signature.outputs

    @property
    def hidden(self) -> frozenset:
        return self.signature.hidden

    @property
    def channels(self) -> frozenset:
        return self.signature.channels

    def step(self, state, inp: Slice) -> tuple:
        """All (action, target) pairs leaving ``state`` whose input part is ``inp``."""
        key = (state, inp)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if inp.domain != self.signature.inputs:
            raise DomainMismatch(
                f"input ranges over {sorted(inp.domain)}, automaton inputs are {sorted(self.inputs)}"
            )
        if state not in self.states:
            raise UnknownState(state)
        if self._table is not None:
            result = self._table.get(key, ())
        else:
            result = canonical(self._responder(state, inp))
            chans = self.signature.channels
            for action, _ in result:
                if action.domain != chans or action.project(self.inputs) != inp:
                    raise ConfigurationError(
                        f"responder of {self.name or 'automaton'} produced ill-formed action {action!r}"
                    )
        self._cache[key] = result
        return result

    def __repr__(self):
        kind = "table" if self.is_table else "responder"
        return f"<Automaton {self.name or '?'} {self.signature.render()} {kind}>"


def step(A: Automaton, state, inp: Slice) -> tuple:
    return A.step(state, inp)


# -- reactiveness --------------------------------------------------------------

@dataclass(frozen=True)
class ReactiveWitness:
    state: Hashable
    input: Slice
    bound: int

    def __str__(self):
        return f"state={render_state(self.state)} input={{{self.input.render()}}} (inputs bounded by L={self.bound})"


def reachable_states(A: Automaton, bound: int | None = None, horizon: int | None = None,
                     budget: int = DEFAULT_BUDGET) -> list:
    """States reachable from the start under bounded inputs, in BFS order."""
    bound = A.input_bound if bound is None else bound
    inputs = enumerate_inputs(A.signature, bound)
    seen = {A.start: 0}
    order = [A.start]
    queue = deque([A.start])
    while queue:
        s = queue.popleft()
        depth = seen[s]
        if horizon is not None and depth >= horizon:
            continue
        for inp in inputs:
            for _, t in A.step(s, inp):
                if t not in seen:
                    seen[t] = depth + 1
                    order.append(t)
                    queue.append(t)
                    if len(order) > budget:
                        raise ExplosionGuard("reachable state exploration", budget)
    return order


def check_reactive(A: Automaton, bound: int | None = None, horizon: int | None = None,
                   budget: int = DEFAULT_BUDGET) -> ReactiveWitness | None:
    """Return ``None`` if every reachable state answers every bounded input.

    Otherwise the first failing (state, input) pair in BFS/canonical order is
    returned.  The check only covers inputs of length <= ``bound`` (default
    the automaton's ``input_bound``) and, with ``horizon``, states reachable
    within that many ticks.
    """
    bound = A.input_bound if bound is None else bound
    inputs = enumerate_inputs(A.signature, bound)
    seen = {A.start: 0}
    queue = deque([A.start])
    while queue:
        s = queue.popleft()
        depth = seen[s]
        for inp in inputs:
            options = A.step(s, inp)
            if not options:
                return ReactiveWitness(s, inp, bound)
            if horizon is not None and depth >= horizon:
                continue
            for _, t in options:
                if t not in seen:
                    seen[t] = depth + 1
                    queue.append(t)
                    if len(seen) > budget:
                        raise ExplosionGuard("reactiveness check", budget)
    if bound >= A.input_bound:
        A._mark_reactive(horizon)
    return None


def require_reactive(A: Automaton, horizon: int | None = None) -> None:
    """Raise :class:`NotReactive` unless ``A`` answers every bounded input
    in every state reachable within ``horizon`` ticks (all reachable states
    when ``horizon`` is None)."""
    if A._reactive_verified(horizon):
        return
    witness = check_reactive(A, horizon=horizon)
    if witness is not None:
        raise NotReactive(witness)


# -- executions, schedules, behaviors ------------------------------------------

@dataclass(frozen=True)
class Execution:
    states: tuple
    actions: History

    def __post_init__(self):
        if len(self.states) != len(self.actions) + 1:
            raise ValueError("an execution of length n has n+1 states")

    def render(self) -> str:
        lines = []
        for k, tick in enumerate(self.actions):
            lines.append(f"t={k} state={render_state(self.states[k])} {tick.render()}".rstrip())
        lines.append(f"final state={render_state(self.states[-1])}")
        return "\n".join(lines)


class _Budget:
    __slots__ = ("left", "what", "limit")

    def __init__(self, what, limit):
        self.what, self.limit, self.left = what, limit, limit

    def spend(self, n=1):
        self.left -= n
        if self.left < 0:
            raise ExplosionGuard(self.what, self.limit)


def _explore(A: Automaton, input_seq, keep_states: bool, chans: frozenset, budget: _Budget):
    """Frontier of (state, states-so-far, projected actions) after feeding ``input_seq``.

    ``input_seq`` is a sequence of per-tick collections of input slices.
    """
    frontier = {(A.start, (A.start,) if keep_states else (), ())}
    for options in input_seq:
        nxt = set()
        for state, path, acts in frontier:
            for inp in options:
                for action, target in A.step(state, inp):
                    nxt.add((target, path + (target,) if keep_states else (), acts + (action.project(chans),)))
        budget.spend(len(nxt))
        frontier = nxt
    return frontier


def executions(A: Automaton, T: int, bound: int | None = None, budget: int = DEFAULT_BUDGET) -> frozenset:
    require_reactive(A, T)
    inputs = enumerate_inputs(A.signature, A.input_bound if bound is None else bound)
    chans = A.channels
    front = _explore(A, [inputs] * T, True, chans, _Budget("execution enumeration", budget))
    return frozenset(Execution(path, History(chans, acts)) for _, path, acts in front)


def schedules(A: Automaton, T: int, bound: int | None = None, budget: int = DEFAULT_BUDGET) -> frozenset:
    require_reactive(A, T)
    inputs = enumerate_inputs(A.signature, A.input_bound if bound is None else bound)
    chans = A.channels
    front = _explore(A, [inputs] * T, False, chans, _Budget("schedule enumeration", budget))
    return frozenset(History(chans, acts) for _, _, acts in front)


def behaviors(A: Automaton, T: int, bound: int | None = None, budget: int = DEFAULT_BUDGET) -> frozenset:
    """The behavior set of ``A`` at horizon ``T``: histories over I and O."""
    require_reactive(A, T)
    inputs = enumerate_inputs(A.signature, A.input_bound if bound is None else bound)
    chans = A.signature.external
    front = _explore(A, [inputs] * T, False, chans, _Budget("behavior enumeration", budget))
    return frozenset(History(chans, acts) for _, _, acts in front)


def behaviors_for_input(A: Automaton, iota: History, budget: int = DEFAULT_BUDGET) -> frozenset:
    """``A[iota]``: the behaviors whose input part is ``iota``."""
    require_reactive(A, len(iota))
    if iota.domain != A.inputs:
        raise DomainMismatch(f"input history over {sorted(iota.domain)}, expected {sorted(A.inputs)}")
    chans = A.signature.external
    front = _explore(A, [(t,) for t in iota], False, chans, _Budget("behavior enumeration", budget))
    return frozenset(History(chans, acts) for _, _, acts in front)


def behavior_table(A: Automaton, T: int, chans: Iterable[str] | None = None,
                   bound: int | None = None, budget: int = DEFAULT_BUDGET) -> dict:
    """Map every bounded input history of length ``T`` to its behaviors projected on ``chans``.

    Keys are tuples of input slices (in canonical enumeration order);
    values are frozensets of tuples of projected slices.  Shared input
    prefixes are explored once.
    """
    require_reactive(A, T)
    chans = A.signature.external if chans is None else frozenset(chans)
    inputs = enumerate_inputs(A.signature, A.input_bound if bound is None else bound)
    guard = _Budget("behavior enumeration", budget)
    level = {(): {(A.start, ())}}
    for _ in range(T):
        nxt = {}
        for pre, runs in level.items():
            for inp in inputs:
                bucket = set()
                for state, acts in runs:
                    for action, target in A.step(state, inp):
                        bucket.add((target, acts + (action.project(chans),)))
                guard.spend(len(bucket))
                nxt[pre + (inp,)] = bucket
        level = nxt
    return {pre: frozenset(acts for _, acts in runs) for pre, runs in level.items()}


def is_execution(A: Automaton, e: Execution) -> bool:
    if not e.states or e.states[0] != A.start or e.actions.domain != A.channels:
        return False
    for k, action in enumerate(e.actions):
        s, t = e.states[k], e.states[k + 1]
        if s not in A.states:
            return False
        if (action, t) not in A.step(s, action.project(A.inputs)):
            return False
    return True


def accepts(A: Automaton, h: History) -> bool:
    """Is ``h`` the projection of some execution of ``A`` onto ``h.domain``?

    ``h.domain`` must contain every input channel and lie within the
    automaton's channels; channels outside it are existentially quantified.
    """
    if not (A.inputs <= h.domain <= A.channels):
        return False
    current = {A.start}
    for tick in h:
        inp = tick.project(A.inputs)
        nxt = set()
        for s in current:
            for action, t in A.step(s, inp):
                if action.project(h.domain) == tick:
                    nxt.add(t)
        if not nxt:
            return False
        current = nxt
    return True


# -- pulse-drivenness -------------------------------------------------------------

@dataclass(frozen=True)
class PulseWitness:
    """Two inputs agreeing where required whose behavior prefixes differ at depth ``depth``."""

    iota: History
    kappa: History
    n: int
    depth: int
    feedback_in: frozenset = frozenset()
    feedback_out: frozenset = frozenset()

    def __str__(self):
        return (f"inputs agree on their first {self.n} ticks (n={self.n}) but behavior prefixes "
                f"of length {self.depth} differ:\n"
                f"iota:\n{self.iota.render()}\nkappa:\n{self.kappa.render()}")


def _history(chans, ticks) -> History:
    return History(chans, ticks)


def check_weak_pulse(A: Automaton, T: int, *, bound: int | None = None,
                     current_tick: bool = True, budget: int = DEFAULT_BUDGET) -> PulseWitness | None:
    """Check ``iota|n = kappa|n  =>  A[iota]|n = A[kappa]|n`` for all bounded inputs.

    With ``current_tick=False`` the stricter reading is used in which output
    through tick n may only depend on input before tick n (this coincides
    with the strong condition).
    """
    require_reactive(A, T)
    if not current_tick:
        return check_strong_pulse_modulo(A, A.inputs, A.outputs, T, bound=bound, budget=budget)
    table = behavior_table(A, T, A.signature.external, bound=bound, budget=budget)
    keys = list(table)
    for n in range(T + 1):
        groups: dict = {}
        for iota in keys:
            pref = frozenset(b[:n] for b in table[iota])
            key = iota[:n]
            if key in groups:
                first, fpref = groups[key]
                if fpref != pref:
                    return PulseWitness(_history(A.inputs, first), _history(A.inputs, iota), n, n)
            else:
                groups[key] = (iota, pref)
    return None


def check_strong_pulse_modulo(A: Automaton, J: Iterable[str], P: Iterable[str], T: int, *,
                              bound: int | None = None, budget: int = DEFAULT_BUDGET) -> PulseWitness | None:
    """Strong pulse-drivenness with respect to feedback inputs J and outputs P.

    For all bounded inputs iota, kappa and n < T: if they agree on J through
    n ticks and agree on I\\J everywhere, the P-projections of their behavior
    sets must agree through n+1 ticks.
    """
    J, P = frozenset(J), frozenset(P)
    if not J <= A.inputs:
        raise ConfigurationError(f"J={sorted(J)} is not a subset of the inputs")
    if not P <= A.outputs:
        raise ConfigurationError(f"P={sorted(P)} is not a subset of the outputs")
    require_reactive(A, T)
    if not P or T == 0:
        return None
    rest = A.inputs - J
    table = behavior_table(A, T, P, bound=bound, budget=budget)
    keys = list(table)
    for n in range(T):
        groups: dict = {}
        for iota in keys:
            key = (tuple(s.project(J) for s in iota[:n]), tuple(s.project(rest) for s in iota))
            pref = frozenset(b[: n + 1] for b in table[iota])
            if key in groups:
                first, fpref = groups[key]
                if fpref != pref:
                    return PulseWitness(_history(A.inputs, first), _history(A.inputs, iota), n, n + 1, J, P)
            else:
                groups[key] = (iota, pref)
    return None


def check_strong_pulse(A: Automaton, T: int, *, bound: int | None = None,
                       budget: int = DEFAULT_BUDGET) -> PulseWitness | None:
    """Strong pulse-drivenness: outputs through n+1 are fixed by inputs through n.

    Behavior sets are compared on their output part; comparing the input
    part at tick n would make the condition fail for every automaton with
    inputs, since iota and kappa may differ exactly there.
    """
    return check_strong_pulse_modulo(A, A.inputs, A.outputs, T, bound=bound, budget=budget)


# -- seeded runs -------------------------------------------------------------------

def simulate(A: Automaton, inputs: History, seed: int = 0) -> Execution:
    """One execution driven by ``inputs``; choices drawn from a seeded RNG."""
    require_reactive(A, len(inputs))
    if inputs.domain != A.inputs:
        raise DomainMismatch(f"input script over {sorted(inputs.domain)}, expected {sorted(A.inputs)}")
    rng = random.Random(seed)
    state = A.start
    states, acts = [state], []
    for inp in inputs:
        options = A.step(state, inp)
        if not options:
            raise NotReactive(ReactiveWitness(state, inp, inp.max_len()))
        action, state = options[rng.randrange(len(options))] if len(options) > 1 else options[0]
        states.append(state)
        acts.append(action)
    return Execution(tuple(states), History(A.channels, acts))


# -- renaming ------------------------------------------------------------------------

def rename(A: Automaton, mapping: Mapping[str, str], name: str | None = None) -> Automaton:
    """Rename channels of ``A``; used to wire automata by name before composing."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    for old in mapping:
        if old not in A.channels:
            raise ConfigurationError(f"cannot rename unknown channel {old!r}")
    new_names = [mapping.get(c, c) for c in A.channels]
    if len(set(new_names)) != len(new_names):
        raise OverlapError(next(n for n in new_names if new_names.count(n) > 1), ("rename",))
    inverse = {v: k for k, v in mapping.items()}
    sig = A.signature
    new_sig = PortSignature(
        sig.alphabet,
        {mapping.get(c, c) for c in sig.inputs},
        {mapping.get(c, c) for c in sig.outputs},
        {mapping.get(c, c) for c in sig.hidden},
    )
    name = A.name if name is None else name
    if A.is_table:
        trans = [Transition(t.source, t.action.rename(mapping), t.target) for t in A.transitions]
        return Automaton(new_sig, A.states, A.start, transitions=trans, input_bound=A.input_bound, name=name)

    def responder(state, inp):
        for action, target in A.step(state, inp.rename(inverse)):
            yield action.rename(mapping), target

    return Automaton(new_sig, lambda: A.states, A.start, responder=responder,
                     input_bound=A.input_bound, name=name)


# -- builtins --------------------------------------------------------------------------

def _merges(a: tuple, b: tuple) -> set:
    """All interleavings of a and b that preserve the order within each."""
    if not a:
        return {b}
    if not b:
        return {a}
    return {(a[0],) + m for m in _merges(a[1:], b)} | {(b[0],) + m for m in _merges(a, b[1:])}


def builtin_fair_merge(D: Iterable, input_bound: int = 1) -> Automaton:
    """One-state fair merge of channels i and j onto o, within the same tick."""
    sig = PortSignature(tuple(D), {"i", "j"}, {"o"})
    if not sig.alphabet:
        raise ConfigurationError("alphabet must be nonempty")

    def responder(state, inp):
        a, b = inp["i"], inp["j"]
        for c in _merges(a, b):
            yield Slice({"i": a, "j": b, "o": c}), state

    return Automaton(sig, {"s"}, "s", responder=responder, input_bound=input_bound, name="fair_merge")


def builtin_buffer(D: Iterable, capacity: int = 8, input_bound: int = 1) -> Automaton:
    """Order-preserving buffer from i to o that emits something whenever nonempty.

    States are buffer contents (:class:`Word`) of at most ``capacity``
    messages; a transition that would exceed it raises
    :class:`CapacityExceeded`.
    """
    sig = PortSignature(tuple(D), {"i"}, {"o"})
    if not sig.alphabet:
        raise ConfigurationError("alphabet must be nonempty")
    if capacity < 1:
        raise ConfigurationError("buffer capacity must be >= 1")

    def states():
        return [Word(w) for w in enumerate_sequences(sig.alphabet, capacity)]

    def responder(state, inp):
        if len(state) > capacity:
            raise CapacityExceeded(capacity, len(state))
        b = inp["i"]
        cuts = [0] if not state else range(1, len(state) + 1)
        for k in cuts:
            target = Word(state[k:] + b)
            if len(target) > capacity:
                raise CapacityExceeded(capacity, len(target))
            yield Slice({"i": b, "o": tuple(state[:k])}), target

    return Automaton(sig, states, Word(), responder=responder, input_bound=input_bound,
                     name=f"buffer({capacity})")


def builtin_blocking_pair(D: Iterable, input_bound: int = 1) -> tuple[Automaton, Automaton]:
    """Two one-state automata that each echo their input with a symbol prepended.

    Wired against each other they block: no slice satisfies both
    ``o = x & i`` and ``i = x & o``.
    """
    alphabet = tuple(sorted(set(D)))
    if not alphabet:
        raise ConfigurationError("alphabet must be nonempty")
    first = alphabet[0]

    def echo(src, dst):
        def responder(state, inp):
            a = inp[src]
            yield Slice({src: a, dst: (first,) + a}), state
        return responder

    a1 = Automaton(PortSignature(alphabet, {"i"}, {"o"}), {"s1"}, "s1",
                   responder=echo("i", "o"), input_bound=input_bound, name="blocking_a")
    a2 = Automaton(PortSignature(alphabet, {"o"}, {"i"}), {"s2"}, "s2",
                   responder=echo("o", "i"), input_bound=input_bound, name="blocking_b")
    return a1, a2


BUILTINS = ("fair_merge", "buffer", "blocking_a", "blocking_b")
