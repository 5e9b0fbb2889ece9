"""Seeded random automata for property tests and benchmarks.

Every generator takes a :class:`random.Random` (or an int seed) so a test
can name its instances by seed and replay them.  Generated tables are
reactive by construction: every state has at least one transition for every
bounded input slice.
"""
from __future__ import annotations

import random

from .automata import Automaton, PortSignature, Transition, enumerate_slices


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_automaton(seed, inputs=("i",), outputs=("o",), alphabet=("a", "b"), *, max_states: int = 3,
                     max_branch: int = 2, input_bound: int = 1, output_bound: int = 1, strong: bool = False,
                     name: str = "R") -> Automaton:
    """A random reactive table automaton.

    With ``strong=True`` every state fixes a set of output slices that it
    may emit whatever the current input is (Moore style), which makes the
    automaton strongly pulse-driven.
    """
    rng = _rng(seed)
    alphabet = tuple(sorted(alphabet))
    sig = PortSignature(alphabet, inputs, outputs, ())
    states = [f"s{k}" for k in range(rng.randint(1, max_states))]
    in_slices = list(enumerate_slices(alphabet, sig.inputs, input_bound))
    out_slices = list(enumerate_slices(alphabet, sig.outputs, output_bound))
    table = []
    for s in states:
        menu = rng.sample(out_slices, rng.randint(1, min(max_branch, len(out_slices))))
        for x in in_slices:
            if strong:
                picks = [(o, rng.choice(states)) for o in menu]
            else:
                k = rng.randint(1, max_branch)
                picks = [(rng.choice(out_slices), rng.choice(states)) for _ in range(k)]
            for o, t in picks:
                table.append(Transition(s, x + o, t))
    return Automaton(sig, set(states), states[0], transitions=table, input_bound=input_bound, name=name)


def random_acyclic_pair(seed, alphabet=("a", "b"), *, strong: bool = False, **kw):
    """A1: x -> m, A2: m, z -> w.  Only A2 reads from A1."""
    rng = _rng(seed)
    a1 = random_automaton(rng, ("x",), ("m",), alphabet, strong=strong, name="A1", **kw)
    a2 = random_automaton(rng, ("m", "z"), ("w",), alphabet, strong=strong, name="A2", **kw)
    return a1, a2


def random_loop_pair(seed, alphabet=("a", "b"), *, both_strong: bool = False, **kw):
    """A1: x, q -> m and A2: m -> q closing a feedback loop; A2 is always strong."""
    rng = _rng(seed)
    a1 = random_automaton(rng, ("x", "q"), ("m",), alphabet, strong=both_strong, name="A1", **kw)
    a2 = random_automaton(rng, ("m",), ("q",), alphabet, strong=True, name="A2", **kw)
    return a1, a2


def random_pair(seed, alphabet=("a", "b"), *, strong: bool = False, **kw):
    """Either wiring, chosen by the seed; compositions are always well defined."""
    rng = _rng(seed)
    if rng.random() < 0.5:
        return random_acyclic_pair(rng, alphabet, strong=strong, **kw)
    return random_loop_pair(rng, alphabet, both_strong=strong, **kw)
