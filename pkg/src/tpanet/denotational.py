"""History-based semantics: pulse-driven stream functions and components.

A :class:`StepFun` is a deterministic stream transformer given tick by tick:
``emit(n, prefix)`` returns the output slice at tick ``n`` from the part of
the input it is allowed to see.  A :class:`Component` is a nonempty set of
step functions, represented by a ``realize`` procedure that turns a
:class:`Resolver` (a choice policy) into one member.  Explicit finite sets
and the function sets generated from automata share that representation,
so composition and hiding never need to materialise member sets.

Choice points are keyed by the input history seen so far, which makes every
resolver define a genuine function.  :func:`explore` enumerates all choice
combinations a computation actually touches, so the set of outputs a
component can produce for one input is computed exactly without
enumerating whole members.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Callable, Iterable

from .automata import (
    DEFAULT_BUDGET,
    Automaton,
    accepts,
    enumerate_histories,
    require_reactive,
)
from .composition import Product, compose, feedback_channels
from .errors import (
    CausalityViolation,
    DomainMismatch,
    ExplosionGuard,
    FixpointInconsistent,
    NoConvergence,
    NotAnOutput,
    PrecondViolated,
)
from .history import DyadicDistance, History, Slice, baire_distance


def _fmt(chans) -> str:
    return "{" + ",".join(sorted(chans)) + "}"


@dataclass(frozen=True)
class Mode:
    """Causality class of a step function.

    ``weak``: output at tick n may read input through tick n.
    ``strong``: output at tick n reads input before tick n only.
    ``strong_modulo``: the outputs in ``P`` read the inputs in ``J``
    before tick n only; everything else is weak.
    """

    kind: str
    J: frozenset = frozenset()
    P: frozenset = frozenset()

    def covers(self, J: Iterable[str], P: Iterable[str]) -> bool:
        """Is a function of this mode strongly pulse-driven wrt (J, P)?"""
        J, P = frozenset(J), frozenset(P)
        if not J or not P or self.kind == "strong":
            return True
        if self.kind == "strong_modulo":
            return J <= self.J and P <= self.P
        return False

    def render(self) -> str:
        if self.kind == "strong_modulo":
            return f"strong_modulo({_fmt(self.J)},{_fmt(self.P)})"
        return self.kind


WEAK = Mode("weak")
STRONG = Mode("strong")


def strong_modulo(J: Iterable[str], P: Iterable[str]) -> Mode:
    return Mode("strong_modulo", frozenset(J), frozenset(P))


class StepFun:
    """A causal stream transformer from histories over ``inputs`` to histories over ``outputs``.

    ``emit(n, prefix)`` receives the input through tick n (weak and
    strong-modulo modes) or before tick n (strong mode).  For strong-modulo
    functions ``emit_part(n, prefix)`` must produce the P-part of the
    emission with the J-channels of tick n blanked; :func:`apply` checks it
    against the full emission.
    """

    def __init__(self, inputs, outputs, emit: Callable[[int, History], Slice], mode: Mode = WEAK,
                 name: str = "", emit_part: Callable[[int, History], Slice] | None = None):
        self.inputs = frozenset(inputs)
        self.outputs = frozenset(outputs)
        self.mode = mode
        self.name = name
        self._emit = emit
        self._emit_part = emit_part
        if mode.kind == "strong_modulo":
            if not mode.J <= self.inputs or not mode.P <= self.outputs:
                raise PrecondViolated(f"mode {mode.render()} does not fit interface")

    def emit(self, n: int, prefix: History) -> Slice:
        return self._emit(n, prefix)

    def emit_part(self, n: int, blinded: History) -> Slice:
        if self._emit_part is not None:
            return self._emit_part(n, blinded)
        return self._emit(n, blinded).project(self.mode.P)

    def verify(self, iota: History, out: History) -> None:
        """Hook for post-hoc consistency checks run by :func:`apply`."""

    def __call__(self, iota: History) -> History:
        return apply(self, iota)

    def __repr__(self):
        return f"<StepFun {self.name or '?'} {_fmt(self.inputs)}->{_fmt(self.outputs)} {self.mode.render()}>"


def _visible_prefix(f: StepFun, hist: History, n: int) -> History:
    return hist[:n] if f.mode.kind == "strong" else hist[: n + 1]


def _blind(tick: Slice, J: frozenset) -> Slice:
    return tick.project(tick.domain - J) + Slice.empty(J)


def apply(f: StepFun, iota: History) -> History:
    """Run ``f`` on ``iota`` tick by tick, showing it only the permitted prefix."""
    if iota.domain != f.inputs:
        raise DomainMismatch(f"{f!r} applied to history over {_fmt(iota.domain)}")
    outs = []
    modulo = f.mode.kind == "strong_modulo" and f.mode.J and f.mode.P
    for n in range(len(iota)):
        visible = _visible_prefix(f, iota, n)
        try:
            out = f.emit(n, visible)
        except IndexError as exc:
            raise CausalityViolation(f"{f!r} read beyond its causal prefix at tick {n}") from exc
        if out.domain != f.outputs:
            raise DomainMismatch(f"{f!r} emitted {out!r} at tick {n}")
        if modulo:
            blinded = iota[:n].append(_blind(iota[n], f.mode.J))
            part = f.emit_part(n, blinded)
            if part != out.project(f.mode.P):
                raise CausalityViolation(
                    f"{f!r}: output on {_fmt(f.mode.P)} at tick {n} depends on same-tick input on {_fmt(f.mode.J)}"
                )
        outs.append(out)
    result = History(f.outputs, outs)
    f.verify(iota, result)
    return result


# -- simple step functions -------------------------------------------------------------

def copy_fun(inputs: Iterable[str], rename: dict | None = None, name: str = "copy") -> StepFun:
    """Identity (optionally renaming channels): weakly but not strongly pulse-driven."""
    rename = dict(rename or {})
    outputs = {rename.get(c, c) for c in inputs}
    return StepFun(inputs, outputs, lambda n, pre: pre[n].rename(rename), WEAK, name)


def delay_fun(inputs: Iterable[str], rename: dict | None = None, first: Slice | None = None,
              name: str = "delay") -> StepFun:
    """Unit delay: tick 0 emits ``first`` (default silence), tick n emits input n-1."""
    rename = dict(rename or {})
    outputs = frozenset(rename.get(c, c) for c in inputs)
    first = Slice.empty(outputs) if first is None else first

    def emit(n, pre):
        return first if n == 0 else pre[n - 1].rename(rename)

    return StepFun(inputs, outputs, emit, STRONG, name)


# -- pulse classification and contraction -----------------------------------------------

@dataclass(frozen=True)
class PulseClass:
    kind: str  # strong | weak | none
    strong_witness: tuple | None = None  # (iota, kappa, n)
    weak_witness: tuple | None = None

    def render(self) -> str:
        if self.kind == "strong":
            return "strong"
        iota, kappa, n = self.strong_witness
        return f"{self.kind}; not strong: inputs agree on their first {n} ticks, outputs differ within the first {n + 1}"


def classify_pulse(f: StepFun, T: int, alphabet: Iterable, bound: int = 1, *,
                   budget: int = DEFAULT_BUDGET) -> PulseClass:
    """Test the weak and strong prefix implications over all bounded inputs of length T."""
    alphabet = tuple(sorted(set(alphabet)))
    inputs = list(enumerate_histories(alphabet, f.inputs, bound, T))
    if len(inputs) > budget:
        raise ExplosionGuard("pulse classification", budget)
    outs = {iota: apply(f, iota) for iota in inputs}

    def first_witness(n_range, depth):
        for n in n_range:
            groups = {}
            for iota in inputs:
                key = iota.ticks[:n]
                pref = outs[iota].ticks[:depth(n)]
                if key in groups:
                    other, opref = groups[key]
                    if opref != pref:
                        return (other, iota, n)
                else:
                    groups[key] = (iota, pref)
        return None

    weak_w = first_witness(range(T + 1), lambda n: n)
    strong_w = first_witness(range(T), lambda n: n + 1)
    if strong_w is None:
        return PulseClass("strong")
    return PulseClass("weak" if weak_w is None else "none", strong_w, weak_w)


@dataclass(frozen=True)
class ContractionReport:
    factor: object
    pairs: int
    violations: tuple  # (iota, kappa, d_in, d_out)
    tight: int  # pairs where the bound holds with equality


def check_contraction(f: StepFun, T: int, alphabet: Iterable, factor, bound: int = 1) -> ContractionReport:
    """Compare ``d(f iota, f kappa)`` with ``factor * d(iota, kappa)`` on all input pairs.

    Only pairs at an exact distance are compared.  An output distance that is
    only an upper bound is compared through that bound, which is sound.
    """
    from fractions import Fraction

    factor = Fraction(factor)
    alphabet = tuple(sorted(set(alphabet)))
    inputs = list(enumerate_histories(alphabet, f.inputs, bound, T))
    outs = [apply(f, i) for i in inputs]
    violations, tight, pairs = [], 0, 0
    for a in range(len(inputs)):
        for b in range(a + 1, len(inputs)):
            d_in = baire_distance(inputs[a], inputs[b])
            if not d_in.exact:
                continue
            pairs += 1
            d_out = baire_distance(outs[a], outs[b])
            limit = factor * d_in.value
            if d_out.value > limit:
                violations.append((inputs[a], inputs[b], d_in, d_out))
            elif d_out.exact and d_out.value == limit:
                tight += 1
    return ContractionReport(factor, pairs, tuple(violations), tight)


# -- resolvers and exploration -----------------------------------------------------------

class Resolver:
    """Choice policy: always the canonically first option."""

    def choose(self, node, k: int) -> int:
        return 0

    def scoped(self, tag) -> "Resolver":
        return _Scoped(self, tag)


class _Scoped(Resolver):
    def __init__(self, base: Resolver, tag):
        self.base, self.tag = base, tag

    def choose(self, node, k):
        return self.base.choose((self.tag, node), k)


class TableResolver(Resolver):
    """Fixed choices for listed nodes, canonical-first elsewhere."""

    def __init__(self, choices: dict | None = None):
        self.choices = dict(choices or {})

    def choose(self, node, k):
        c = self.choices.get(node, 0)
        if c >= k:
            raise FixpointInconsistent(f"choice {c} out of range for node with {k} options")
        return c


class RecordingResolver(TableResolver):
    """Canonical-first on unseen nodes, remembering them in discovery order."""

    def __init__(self, forced: dict):
        super().__init__(forced)
        self.discovered: list = []

    def choose(self, node, k):
        if k <= 1:
            return 0
        if node not in self.choices:
            self.choices[node] = 0
            self.discovered.append((node, k))
        return self.choices[node]


class SeededResolver(Resolver):
    """Pseudo-random choices that depend only on (seed, node)."""

    def __init__(self, seed: int):
        self.seed = seed

    def choose(self, node, k):
        if k <= 1:
            return 0
        digest = hashlib.sha256(f"{self.seed}|{node!r}".encode()).digest()
        return random.Random(digest).randrange(k)


def explore(run: Callable[[Resolver], object], budget: int | None = DEFAULT_BUDGET) -> list:
    """Run ``run`` once per combination of choices it touches.

    Returns ``[(result, choices), ...]`` in a deterministic depth-first
    order; ``choices`` reproduces the run through :class:`TableResolver`.
    """
    results = []
    pending = [{}]
    while pending:
        forced = pending.pop()
        rec = RecordingResolver(forced)
        results.append((run(rec), dict(rec.choices)))
        if budget is not None and len(results) > budget:
            raise ExplosionGuard("resolver exploration", budget)
        fixed = dict(forced)
        for node, k in rec.discovered:
            for c in range(k - 1, 0, -1):
                alt = dict(fixed)
                alt[node] = c
                pending.append(alt)
            fixed[node] = 0
    return results


# -- components ------------------------------------------------------------------------------

class Component:
    """A nonempty set of weakly pulse-driven functions over a fixed (I, O) interface.

    ``realize(resolver)`` returns the member selected by the resolver; every
    resolver selects some member and every member is selected by some
    resolver.
    """

    def __init__(self, inputs, outputs, realize: Callable[[Resolver], StepFun], mode: Mode = WEAK,
                 name: str = ""):
        self.inputs = frozenset(inputs)
        self.outputs = frozenset(outputs)
        self.mode = mode
        self.name = name
        self._realize = realize

    @classmethod
    def of(cls, members: Iterable[StepFun], name: str = "") -> "Component":
        members = tuple(members)
        if not members:
            raise PrecondViolated("a component needs at least one function")
        I, O = members[0].inputs, members[0].outputs
        for f in members:
            if f.inputs != I or f.outputs != O:
                raise PrecondViolated(f"{f!r} does not share the interface {_fmt(I)}->{_fmt(O)}")
        modes = {f.mode for f in members}
        mode = modes.pop() if len(modes) == 1 else WEAK
        if len(members) == 1:
            return cls(I, O, lambda r: members[0], mode, name)
        return cls(I, O, lambda r: members[r.choose(("member",), len(members))], mode, name)

    def realize(self, resolver: Resolver | None = None) -> StepFun:
        return self._realize(resolver or Resolver())

    def outputs_for(self, iota: History, budget: int | None = DEFAULT_BUDGET) -> frozenset:
        """``{f(iota) | f in self}`` computed by exploring the choices on iota's path."""
        return frozenset(out for out, _ in explore(lambda r: apply(self._realize(r), iota), budget))

    def members(self, T: int, alphabet: Iterable, bound: int = 1,
                budget: int | None = DEFAULT_BUDGET) -> list[StepFun]:
        """Members that differ somewhere on bounded inputs of length ``T``."""
        inputs = list(enumerate_histories(tuple(sorted(set(alphabet))), self.inputs, bound, T))

        def tabulate(r):
            f = self._realize(r)
            return tuple(apply(f, i) for i in inputs)

        seen = {}
        for table, choices in explore(tabulate, budget):
            seen.setdefault(table, choices)
        return [self._realize(TableResolver(c)) for c in seen.values()]

    def sample(self, seed: int, count: int) -> list[StepFun]:
        return [self._realize(SeededResolver(seed * 1_000_003 + k)) for k in range(count)]

    def __repr__(self):
        return f"<Component {self.name or '?'} {_fmt(self.inputs)}->{_fmt(self.outputs)} {self.mode.render()}>"


class ResolvedStepFun(StepFun):
    """One function of the set generated by an automaton, fixed by a resolver.

    Without ``modulo`` the resolver picks a transition per input prefix.  With
    ``modulo=(J, P)`` it first picks the P-output from the state and the
    non-J input alone, then a transition carrying that output; the function
    is then strongly pulse-driven wrt (J, P) provided the automaton is.
    """

    def __init__(self, A: Automaton, resolver: Resolver, modulo: tuple | None = None):
        if modulo is None:
            mode = WEAK
        else:
            J, P = frozenset(modulo[0]), frozenset(modulo[1])
            mode = STRONG if (J == A.inputs and P == A.outputs) else strong_modulo(J, P)
        super().__init__(A.inputs, A.outputs, self._emit_full, mode, name=A.name,
                         emit_part=self._emit_p)
        self.automaton = A
        self.resolver = resolver
        self.modulo = None if modulo is None else (frozenset(modulo[0]), frozenset(modulo[1]))
        self._states = {(): A.start}
        self._chosen = {}
        self._popts = {}

    def _p_options(self, state, outside: Slice) -> tuple:
        key = (state, outside)
        hit = self._popts.get(key)
        if hit is None:
            J, P = self.modulo
            blind = outside + Slice.empty(J)
            hit = tuple(sorted({a.project(P) for a, _ in self.automaton.step(state, blind)}))
            self._popts[key] = hit
        return hit

    def _p_choice(self, state, before: tuple, outside: Slice) -> Slice:
        opts = self._p_options(state, outside)
        if not opts:
            raise CausalityViolation(f"{self.automaton.name}: no transition at state {state!r}")
        return opts[self.resolver.choose(("p", before, outside), len(opts))]

    def _choose(self, state, ticks: tuple):
        """Transition taken at tick len(ticks)-1 after input ``ticks``."""
        hit = self._chosen.get(ticks)
        if hit is not None:
            return hit
        A = self.automaton
        opts = A.step(state, ticks[-1])
        if self.modulo is None:
            choice = opts[self.resolver.choose(("t", ticks), len(opts))]
        else:
            J, P = self.modulo
            p = self._p_choice(state, ticks[:-1], ticks[-1].project(A.inputs - J))
            rest = [o for o in opts if o[0].project(P) == p]
            if not rest:
                raise CausalityViolation(
                    f"{A.name}: output {p!r} on {_fmt(P)} is not available once {_fmt(J)} is known"
                )
            choice = rest[self.resolver.choose(("r", ticks), len(rest))]
        self._chosen[ticks] = choice
        return choice

    def state_after(self, ticks: tuple):
        hit = self._states.get(ticks)
        if hit is None:
            before = self.state_after(ticks[:-1])
            hit = self._choose(before, ticks)[1]
            self._states[ticks] = hit
        return hit

    def _emit_full(self, n: int, prefix: History) -> Slice:
        ticks = prefix.ticks
        state = self.state_after(ticks[:n])
        if len(ticks) == n:
            # strong mode: the whole output is the P-choice, no tick-n input needed
            return self._p_choice(state, ticks, Slice())
        action, _ = self._choose(state, ticks[: n + 1])
        return action.project(self.outputs)

    def _emit_p(self, n: int, blinded: History) -> Slice:
        J, _ = self.modulo
        ticks = blinded.ticks
        state = self.state_after(ticks[:n])
        return self._p_choice(state, ticks[:n], ticks[n].project(self.inputs - J))


def automaton_to_component(A: Automaton, T: int | None = None, modulo: tuple | None = None,
                           name: str | None = None) -> Component:
    """The set of functions generated by ``A``, one per resolver.

    ``modulo=(J, P)`` restricts to resolvers that fix the P-output before the
    same-tick J-input is known, yielding functions strongly pulse-driven wrt
    (J, P).  ``T`` bounds the reactiveness check.
    """
    require_reactive(A, T)
    probe = ResolvedStepFun(A, Resolver(), modulo)
    return Component(A.inputs, A.outputs, lambda r: ResolvedStepFun(A, r, modulo), probe.mode,
                     name or f"[{A.name}]")


# -- composition and hiding of components -----------------------------------------------------

def _tick(hist: History, chans, n: int) -> Slice:
    return hist[n].project(chans)


class CompositeStepFun(StepFun):
    """``f1 (x) f2``: the unique solution of o = f1((i+q)|I1), q = f2((i+o)|I2).

    Per tick the side that is strong on the feedback channels emits its
    feedback output first from a J-blinded prefix, then the other side runs
    on the now complete input, then the first side completes.  ``verify``
    re-checks both equations on whole histories.
    """

    def __init__(self, f1: StepFun, f2: StepFun, first: int, name: str = ""):
        I = (f1.inputs - f2.outputs) | (f2.inputs - f1.outputs)
        O = f1.outputs | f2.outputs
        mode = STRONG if (f1.mode.kind == "strong" and f2.mode.kind == "strong") else WEAK
        super().__init__(I, O, self._emit_tick, mode, name or f"({f1.name} (x) {f2.name})")
        self.f1, self.f2, self.first = f1, f2, first
        self._runs = {(): ((), ())}

    def _run(self, ticks: tuple):
        """Per-tick outputs (of the first-scheduled side, of the other side) for input ``ticks``."""
        hit = self._runs.get(ticks)
        if hit is not None:
            return hit
        n = len(ticks) - 1
        xo, yo = self._run(ticks[:-1])
        X, Y = (self.f1, self.f2) if self.first == 1 else (self.f2, self.f1)
        JX = X.inputs & Y.outputs
        PX = Y.inputs & X.outputs
        iota = ticks[n]
        x_prev = tuple((ticks[k].project(X.inputs - JX) + yo[k].project(JX)) for k in range(n))
        y_prev = tuple((ticks[k].project(Y.inputs - PX) + xo[k].project(PX)) for k in range(n))
        xh = History(X.inputs, x_prev)
        yh = History(Y.inputs, y_prev)
        known = iota.project(X.inputs - JX)
        if X.mode.kind == "strong":
            ox = X.emit(n, xh)
            px = ox.project(PX)
        elif not JX:
            ox = X.emit(n, xh.append(known))
            px = ox.project(PX)
        else:
            ox = None
            px = X.emit_part(n, xh.append(known + Slice.empty(JX))).project(PX)
        y_in = iota.project(Y.inputs - PX) + px
        oy = Y.emit(n, yh if Y.mode.kind == "strong" else yh.append(y_in))
        if ox is None:
            ox = X.emit(n, xh.append(known + oy.project(JX)))
            if ox.project(PX) != px:
                raise FixpointInconsistent(
                    f"{X!r} changed its output on {_fmt(PX)} at tick {n} after seeing {_fmt(JX)}"
                )
        result = (xo + (ox,), yo + (oy,))
        self._runs[ticks] = result
        return result

    def _emit_tick(self, n: int, prefix: History) -> Slice:
        if len(prefix) == n:
            return self._emit_strong(n, prefix)
        xo, yo = self._run(prefix.ticks[: n + 1])
        return xo[n] + yo[n]

    def _emit_strong(self, n: int, prefix: History) -> Slice:
        # both factors strong: tick n needs only ticks before n
        X, Y = (self.f1, self.f2) if self.first == 1 else (self.f2, self.f1)
        JX, PX = X.inputs & Y.outputs, Y.inputs & X.outputs
        ticks = prefix.ticks
        xo, yo = self._run(ticks) if n else ((), ())
        xh = History(X.inputs, (ticks[k].project(X.inputs - JX) + yo[k].project(JX) for k in range(n)))
        yh = History(Y.inputs, (ticks[k].project(Y.inputs - PX) + xo[k].project(PX) for k in range(n)))
        return X.emit(n, xh) + Y.emit(n, yh)

    def verify(self, iota: History, out: History) -> None:
        f1, f2 = self.f1, self.f2
        o, q = out.project(f1.outputs), out.project(f2.outputs)
        if apply(f1, (iota + q.project(q.domain - iota.domain)).project(f1.inputs)) != o:
            raise FixpointInconsistent(f"{self!r}: o != f1((i+p)|I1)")
        if apply(f2, (iota + o.project(o.domain - iota.domain)).project(f2.inputs)) != q:
            raise FixpointInconsistent(f"{self!r}: p != f2((i+o)|I2)")


def _composition_order(I1, O1, I2, O2, mode1: Mode, mode2: Mode) -> int:
    if I1 & O1 or I2 & O2 or O1 & O2:
        raise PrecondViolated("components must satisfy I1&O1 = I2&O2 = O1&O2 = {}")
    J, P = I1 & O2, I2 & O1
    if not J:
        return 1
    if not P:
        return 2
    if mode1.covers(J, P):
        return 1
    if mode2.covers(P, J):
        return 2
    raise PrecondViolated(
        f"neither side is strongly pulse-driven on the feedback channels (J={_fmt(J)}, P={_fmt(P)})"
    )


def compose_stepfuns(f1: StepFun, f2: StepFun) -> CompositeStepFun:
    first = _composition_order(f1.inputs, f1.outputs, f2.inputs, f2.outputs, f1.mode, f2.mode)
    return CompositeStepFun(f1, f2, first)


def compose_components(F1: Component, F2: Component, name: str | None = None) -> Component:
    """``F1 (x) F2``: pairs of members solved for their feedback fixed point."""
    first = _composition_order(F1.inputs, F1.outputs, F2.inputs, F2.outputs, F1.mode, F2.mode)
    I = (F1.inputs - F2.outputs) | (F2.inputs - F1.outputs)
    O = F1.outputs | F2.outputs
    mode = STRONG if (F1.mode.kind == "strong" and F2.mode.kind == "strong") else WEAK

    def realize(r: Resolver) -> StepFun:
        return CompositeStepFun(F1.realize(r.scoped(1)), F2.realize(r.scoped(2)), first)

    return Component(I, O, realize, mode, name or f"({F1.name} (x) {F2.name})")


class HiddenStepFun(StepFun):
    def __init__(self, inner: StepFun, P: frozenset):
        mode = inner.mode
        if mode.kind == "strong_modulo":
            mode = strong_modulo(mode.J, mode.P - P)
        super().__init__(inner.inputs, inner.outputs - P, self._emit_visible, mode,
                         name=f"hide {_fmt(P)} {inner.name}", emit_part=inner.emit_part)
        self.inner, self.hidden = inner, P

    def _emit_visible(self, n, prefix):
        return self.inner.emit(n, prefix).project(self.outputs)

    def verify(self, iota, out):
        if apply(self.inner, iota).project(self.outputs) != out:
            raise FixpointInconsistent(f"{self!r}: projection mismatch")


def hide_component(F: Component, P: Iterable[str], name: str | None = None) -> Component:
    """``nu P : F`` -- every member with the outputs in P projected away."""
    P = frozenset(P)
    for c in sorted(P):
        if c not in F.outputs:
            raise NotAnOutput(c)
    if not P:
        return F
    mode = F.mode
    if mode.kind == "strong_modulo":
        mode = strong_modulo(mode.J, mode.P - P)
    return Component(F.inputs, F.outputs - P, lambda r: HiddenStepFun(F.realize(r), P), mode,
                     name or f"hide {_fmt(P)} {F.name}")


# -- fixed points ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class FixConfig:
    horizon: int
    seed: History | None = None
    max_iterations: int | None = None

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    @property
    def iteration_limit(self) -> int:
        return self.horizon + 1 if self.max_iterations is None else self.max_iterations


FILLER = "*"


def iterate_fix(f: Callable[[History], History], seed: History, max_iterations: int) -> tuple[History, int]:
    """Iterate ``z -> f(z)`` from ``seed`` until it is stable.

    Returns ``(z, k)`` with ``z = f^k(seed) = f(z)``; ``k`` counts the
    applications needed to reach the fixed point.
    """
    z = seed
    for k in range(max_iterations + 1):
        nz = f(z)
        if nz.domain != z.domain or len(nz) != len(z):
            raise DomainMismatch("transformer must map histories to histories of the same shape")
        if nz == z:
            return z, k
        z = nz
    raise NoConvergence(f"no fixed point within {max_iterations} iterations")


def banach_fix(f: Callable[[History], History], domain: Iterable[str], cfg: FixConfig,
               alt_seed: History | None = None, filler: str = FILLER) -> History:
    """Unique fixed point of a contractive history transformer through ``cfg.horizon`` ticks.

    The iteration is repeated from a second, different seed (``filler`` on
    every channel and tick unless ``alt_seed`` is given); a result that
    depends on the seed means ``f`` is not contractive and raises
    :class:`NoConvergence`.
    """
    domain = frozenset(domain)
    T = cfg.horizon
    seed = cfg.seed if cfg.seed is not None else History.silent(domain, T)
    result, _ = iterate_fix(f, seed, cfg.iteration_limit)
    if alt_seed is None:
        alt_seed = History(domain, [Slice({c: (filler,) for c in domain})] * T)
        if alt_seed == seed:
            alt_seed = History.silent(domain, T)
    other, _ = iterate_fix(f, alt_seed, cfg.iteration_limit)
    if other != result:
        raise NoConvergence("fixed point depends on the seed: transformer is not contractive")
    return result


def param_fix(g: Callable[[History, History], History], x_domain: Iterable[str], horizon: int | None,
              filler: str = FILLER):
    """``mu g``: maps a parameter history y to the fixed point of ``x -> g(x, y)``."""
    x_domain = frozenset(x_domain)

    def mu(y: History) -> History:
        T = len(y) if horizon is None else min(horizon, len(y))
        return banach_fix(lambda x: g(x, y), x_domain, FixConfig(T), filler=filler)

    return mu


def loop_stepfun(f1: StepFun, f2: StepFun, filler: str = FILLER) -> StepFun:
    """Composite of f1 and f2 obtained by Banach iteration on the loop channels.

    Computes q = mu(q -> f2((i + f1((i+q)|I1))|I2)) and emits f1(...) + q.
    Used to cross-check the per-tick schedule of :class:`CompositeStepFun`.
    ``filler`` must be a message both functions accept.
    """
    _composition_order(f1.inputs, f1.outputs, f2.inputs, f2.outputs, f1.mode, f2.mode)
    I = (f1.inputs - f2.outputs) | (f2.inputs - f1.outputs)
    O = f1.outputs | f2.outputs

    def outer(iota: History, q: History) -> History:
        return apply(f1, (iota + q.project(q.domain - iota.domain)).project(f1.inputs))

    def g(q: History, iota: History) -> History:
        o = outer(iota, q)
        return apply(f2, (iota + o.project(o.domain - iota.domain)).project(f2.inputs))

    mu = param_fix(g, f2.outputs, None, filler)

    def emit(n, prefix):
        q = mu(prefix)
        return (outer(prefix, q) + q)[n]

    return StepFun(I, O, emit, WEAK, f"mu({f1.name},{f2.name})")


# -- equivalence of the two semantics ------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceVerdict:
    ok: bool
    exhaustive: bool
    horizon: int
    inputs_checked: int
    counterexample: tuple | None = None  # (iota, left outputs, right outputs)
    note: str = ""

    def render(self) -> str:
        if self.ok:
            how = "exhaustive" if self.exhaustive else f"sampled: no counterexample found ({self.note})"
            return f"EQUIVALENT at T={self.horizon} over {self.inputs_checked} inputs ({how})"
        iota, left, right = self.counterexample
        lines = [f"COUNTEREXAMPLE at T={self.horizon}", "input:", iota.render() or "(empty)"]
        for title, outs in (("[A1 (x) A2] outputs:", left), ("[A1] (x) [A2] outputs:", right)):
            lines.append(title)
            for h in sorted(outs):
                lines.append("  " + h.render().replace("\n", "\n  "))
        lines.append("symmetric difference:")
        for h in sorted(left ^ right):
            side = "left-only" if h in left else "right-only"
            lines.append(f"  {side}: " + repr(h))
        return "\n".join(lines)


def _feedback_modulo(product: Product):
    A1, A2 = product.left, product.right
    J, P = feedback_channels(A1.signature, A2.signature)
    if product.schedule == "joint":
        raise PrecondViolated(
            f"composition is not known to be well defined: neither side strong on (J={_fmt(J)}, P={_fmt(P)})"
        )
    if not J or not P:
        return None, None
    if product.schedule == "left":
        return (J, P), None
    return None, (P, J)


def check_equivalence(A1: Automaton, A2: Automaton, T: int, *, product: Product | None = None,
                      left: Component | None = None, right: Component | None = None,
                      budget: int = 200_000, sampling: bool = True, samples: int = 16,
                      seed: int = 0) -> EquivalenceVerdict:
    """Compare ``[A1 (x) A2]`` with ``[A1] (x) [A2]`` input by input at horizon ``T``.

    For every bounded input history both components' output sets are
    computed exactly by exploring resolver choices.  If that exceeds
    ``budget`` runs and ``sampling`` is on, seeded resolvers are sampled
    instead and every sampled output is checked for membership on the other
    side; the verdict then only says no counterexample was found.
    """
    if product is None:
        product = compose(A1, A2, check_horizon=T)
    if left is None:
        left = automaton_to_component(product, T)
    if right is None:
        m1, m2 = _feedback_modulo(product)
        right = compose_components(automaton_to_component(A1, T, m1), automaton_to_component(A2, T, m2))
    inputs = list(enumerate_histories(product.alphabet, product.inputs, product.input_bound, T))
    try:
        for iota in inputs:
            lo = left.outputs_for(iota, budget)
            ro = right.outputs_for(iota, budget)
            if lo != ro:
                return EquivalenceVerdict(False, True, T, len(inputs), (iota, lo, ro))
        return EquivalenceVerdict(True, True, T, len(inputs))
    except ExplosionGuard:
        if not sampling:
            raise
    E1, E2 = A1.signature.external, A2.signature.external
    for iota in inputs:
        lo = {apply(f, iota) for f in left.sample(seed, samples)}
        ro = {apply(f, iota) for f in right.sample(seed, samples)}
        for out in lo:
            alpha = iota + out.project(out.domain - iota.domain)
            if not (accepts(A1, alpha.project(E1)) and accepts(A2, alpha.project(E2))):
                return EquivalenceVerdict(False, False, T, len(inputs), (iota, frozenset(lo), frozenset(ro)))
        for out in ro:
            alpha = iota + out.project(out.domain - iota.domain)
            if not accepts(product, alpha.project(product.signature.external)):
                return EquivalenceVerdict(False, False, T, len(inputs), (iota, frozenset(lo), frozenset(ro)))
    return EquivalenceVerdict(True, False, T, len(inputs), note=f"{samples} resolvers per side, seed {seed}")
