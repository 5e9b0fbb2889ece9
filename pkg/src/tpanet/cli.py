"""Command line front end: ``tpanet <command> [options] FILE...``.

Exit codes: 0 ok, 1 witness or counterexample found, 2 usage or parse
error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .automata import (
    behaviors,
    check_reactive,
    check_strong_pulse,
    check_weak_pulse,
    enumerate_inputs,
    reachable_states,
    simulate,
)
from .composition import compose, describe_schedule
from .denotational import check_equivalence
from .errors import (
    EmptyComposition,
    ExplosionGuard,
    NetError,
    NotReactive,
    PrecondViolated,
    TPAError,
)
from .history import baire_distance, parse_history, render_state
from .netdesc import Compose, Elaboration, parse

EXIT_OK, EXIT_WITNESS, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULTS = {"horizon": 2, "bound": None, "seed": 0, "budget": 200_000}


@dataclass
class Verdict:
    command: str
    status: str  # ok | witness | error
    payload: list = field(default_factory=list)  # (key, value) pairs, in order
    text: str = ""

    @property
    def exit_code(self) -> int:
        if self.status == "ok":
            return EXIT_OK
        if self.status == "witness":
            return EXIT_WITNESS
        return EXIT_BUDGET if dict(self.payload).get("reason") == "budget" else EXIT_USAGE

    def machine(self) -> str:
        lines = ["--- verdict", f"command={self.command}", f"status={self.status}"]
        for k, v in self.payload:
            lines.append(f"{k}={_one_line(v)}")
        lines.append("---")
        return "\n".join(lines)


def _one_line(v) -> str:
    return str(v).replace("\\", "\\\\").replace("\n", "\\n")


class _Session:
    def __init__(self, args, desc):
        self.desc = desc
        self.settings = {}
        for key, default in DEFAULTS.items():
            value = getattr(args, key, None)
            self.settings[key] = value if value is not None else desc.setting(key, default)
        self.net_name = args.net
        self.elab = Elaboration(desc, self._compose)

    def _compose(self, A1, A2):
        T = self.settings["horizon"]
        return compose(A1, A2, horizon=T, bound=self.settings["bound"], check_horizon=T,
                       budget=self.settings["budget"])

    @property
    def horizon(self) -> int:
        return self.settings["horizon"]

    def bound(self, A) -> int:
        b = self.settings["bound"]
        return A.input_bound if b is None else b

    def top(self):
        return self.elab.build(self.desc.net(self.net_name))


def _cmd_check(s: _Session) -> Verdict:
    T = s.horizon
    lines, payload, failed = [], [], False
    names = [d.name for d in s.desc.automata] + [n for n, _ in s.desc.nets]
    for name in names:
        try:
            A = s.elab.build(s.desc.net(name))
        except EmptyComposition as exc:
            lines.append(f"{name}: {exc}")
            payload.append((f"{name}.reactive", "no"))
            failed = True
            continue
        lines.append(f"{name}: signature {A.signature.render()}")
        payload.append((f"{name}.signature", A.signature.render()))
        w = check_reactive(A, s.bound(A), T, budget=s.settings["budget"])
        if w is not None:
            lines.append(f"  reactive: NO at state={render_state(w.state)} input={w.input.render() or '{}'}")
            payload.append((f"{name}.reactive", "no"))
            failed = True
            continue
        lines.append(f"  reactive: yes (T={T})")
        payload.append((f"{name}.reactive", "yes"))
        weak = check_weak_pulse(A, T, bound=s.bound(A), budget=s.settings["budget"])
        strong = check_strong_pulse(A, T, bound=s.bound(A), budget=s.settings["budget"])
        lines.append(f"  weakly pulse-driven: {'yes' if weak is None else 'NO: ' + str(weak)}")
        lines.append(f"  strongly pulse-driven: {'yes' if strong is None else 'no: ' + str(strong)}")
        payload.append((f"{name}.weak", "yes" if weak is None else "no"))
        payload.append((f"{name}.strong", "yes" if strong is None else "no"))
        failed = failed or weak is not None
    return Verdict("check", "witness" if failed else "ok", payload, "\n".join(lines))


def _cmd_compose(s: _Session) -> Verdict:
    expr = s.desc.net(s.net_name)
    try:
        A = s.elab.build(expr)
    except EmptyComposition as exc:
        return Verdict("compose", "witness", [("verdict", str(exc))], str(exc))
    lines = [f"net: {A.name}", f"signature: {A.signature.render()}"]
    payload = [("signature", A.signature.render())]
    for node in s.elab.compose_nodes(expr):
        p = s.elab.build(node)
        lines.append(f"{p.name}: {describe_schedule(p)}")
        payload.append(("verdict", describe_schedule(p)))
    states = reachable_states(A, s.bound(A), s.horizon, budget=s.settings["budget"])
    lines.append(f"reachable states within T={s.horizon}: {len(states)}")
    rows = set()
    inputs = enumerate_inputs(A.signature, s.bound(A))
    for st in states:
        for inp in inputs:
            for action, target in A.step(st, inp):
                rows.add((render_state(st), action.render(), render_state(target)))
    for src, act, dst in sorted(rows):
        lines.append(f"  {src} -> {dst} {act}")
    payload.append(("states", len(states)))
    payload.append(("transitions", len(rows)))
    return Verdict("compose", "ok", payload, "\n".join(lines))


def _cmd_run(s: _Session) -> Verdict:
    A = s.top()
    iota = s.elab.script_history(A)
    e = simulate(A, iota, s.settings["seed"])
    text = e.render()
    return Verdict("run", "ok", [("seed", s.settings["seed"]), ("ticks", len(iota)), ("final", render_state(e.states[-1]))],
                   text)


def _cmd_behaviors(s: _Session) -> Verdict:
    A = s.top()
    bs = sorted(behaviors(A, s.horizon, s.bound(A), budget=s.settings["budget"]))
    blocks = [f"# behavior {k}\n{b.render()}" for k, b in enumerate(bs)]
    text = f"# {len(bs)} behaviors at T={s.horizon}\n" + "\n".join(blocks)
    return Verdict("behaviors", "ok", [("count", len(bs)), ("horizon", s.horizon)], text)


def _cmd_equiv(s: _Session) -> Verdict:
    expr = s.desc.net(s.net_name)
    if not isinstance(expr, Compose):
        return Verdict("equiv", "error", [("reason", "usage")], "equiv needs a net whose top operator is (x)")
    A1, A2 = s.elab.build(expr.left), s.elab.build(expr.right)
    product = s._compose(A1, A2)
    v = check_equivalence(A1, A2, s.horizon, product=product, budget=s.settings["budget"],
                          seed=s.settings["seed"])
    payload = [("horizon", s.horizon), ("inputs", v.inputs_checked),
               ("mode", "exhaustive" if v.exhaustive else "sampled")]
    return Verdict("equiv", "ok" if v.ok else "witness", payload, v.render())


def _cmd_dist(paths) -> Verdict:
    if len(paths) != 2:
        return Verdict("dist", "error", [("reason", "usage")], "dist needs exactly two trace files")
    hs = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            hs.append(parse_history(fh.read()))
    d = baire_distance(*hs)
    return Verdict("dist", "ok", [("distance", d.render()), ("exact", "yes" if d.exact else "no")], d.render())


COMMANDS = {"check": _cmd_check, "compose": _cmd_compose, "run": _cmd_run,
            "behaviors": _cmd_behaviors, "equiv": _cmd_equiv}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tpanet", description="Timed port automata networks at bounded horizons.")
    ap.add_argument("command", choices=sorted(list(COMMANDS) + ["dist"]))
    ap.add_argument("files", nargs="+", metavar="FILE")
    ap.add_argument("--horizon", "-T", type=int, help="number of ticks (default 2)")
    ap.add_argument("--bound", "-L", type=int, help="max messages per channel per input tick")
    ap.add_argument("--seed", type=int, help="seed for run and sampled checks (default 0)")
    ap.add_argument("--budget", type=int, help="enumeration budget (default 200000)")
    ap.add_argument("--net", help="net or automaton to use (default: last net)")
    ap.add_argument("--machine", action="store_true", help="append a key=value verdict block")
    return ap


def _error(command, reason, message) -> Verdict:
    return Verdict(command, "error", [("reason", reason), ("message", message)], f"error: {message}")


def run(argv=None) -> tuple[Verdict, bool]:
    ap = build_parser()
    args = ap.parse_args(argv)
    for key in ("horizon", "budget"):
        value = getattr(args, key)
        if value is not None and value < (0 if key == "horizon" else 1):
            ap.error(f"--{key} out of range")
    if args.command == "dist":
        try:
            return _cmd_dist(args.files), args.machine
        except (OSError, ValueError) as exc:
            return _error("dist", "usage", str(exc)), args.machine
    if len(args.files) != 1:
        return _error(args.command, "usage", f"{args.command} takes exactly one FILE"), args.machine
    try:
        with open(args.files[0], encoding="utf-8") as fh:
            text = fh.read()
        desc = parse(text)
        session = _Session(args, desc)
        return COMMANDS[args.command](session), args.machine
    except OSError as exc:
        return _error(args.command, "usage", str(exc)), args.machine
    except NetError as exc:
        return _error(args.command, "parse", f"{args.files[0]}: {exc}"), args.machine
    except ExplosionGuard as exc:
        return _error(args.command, "budget", str(exc)), args.machine
    except EmptyComposition as exc:
        return Verdict(args.command, "witness", [("verdict", str(exc))], str(exc)), args.machine
    except NotReactive as exc:
        return Verdict(args.command, "witness", [("verdict", str(exc))], str(exc)), args.machine
    except (PrecondViolated, TPAError) as exc:
        return _error(args.command, "usage", str(exc)), args.machine


def main(argv=None) -> int:
    verdict, machine = run(argv)
    stream = sys.stderr if verdict.status == "error" else sys.stdout
    if verdict.text:
        print(verdict.text, file=stream)
    if machine:
        print(verdict.machine())
    return verdict.exit_code


if __name__ == "__main__":
    sys.exit(main())
