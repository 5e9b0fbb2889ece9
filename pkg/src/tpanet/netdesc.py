"""Text format for networks of automata.

Example::

    alphabet a b;
    automaton Echo {
      sig in(i) out(o) hid();
      state s0 start;
      trans s0 -> s0 on i:<a> out o:<a>;
      trans s0 -> s0 on i:<> out o:<>;
      bound 1;
    }
    builtin FM = fair_merge;
    builtin BUF = buffer(4);
    rename BUF.i -> o, BUF.o -> q;
    net N = hide {q} (FM (x) BUF);
    input { t0 i:<a> j:<>; t1 i:<> j:<b>; }
    config horizon 3 bound 1 seed 7;

Channels left out of a ``trans`` section or an input tick carry ``<>``.
The pairs of one ``rename`` statement are applied simultaneously, so
channels can be swapped.
Statements may only refer to names declared above them.  ``(x)`` is the
composition operator (``⊗`` is accepted too) and associates to the left.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .automata import (
    Automaton,
    PortSignature,
    Transition,
    builtin_blocking_pair,
    builtin_buffer,
    builtin_fair_merge,
    rename,
)
from .composition import compose_signatures, hide
from .errors import (
    IncompatibleSignatures,
    NetNameError,
    NetSyntaxError,
    NetTypeError,
    OverlapError,
    TPAError,
)
from .history import History, Slice, parse_seq, render_seq

CONFIG_KEYS = ("horizon", "bound", "seed", "budget")
BUILTIN_PARAMS = {"fair_merge": 0, "buffer": 1, "blocking_a": 0, "blocking_b": 0}


# -- syntax tree --------------------------------------------------------------------------

@dataclass(frozen=True)
class TableDef:
    name: str
    inputs: tuple
    outputs: tuple
    hidden: tuple
    states: tuple  # state names in declaration order
    start: str
    transitions: tuple  # (source, Slice over all channels, target)
    bound: int = 1


@dataclass(frozen=True)
class BuiltinDef:
    name: str
    kind: str
    params: tuple = ()


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Compose:
    left: object
    right: object


@dataclass(frozen=True)
class Hide:
    channels: tuple
    body: object


@dataclass(frozen=True)
class NetworkDescription:
    alphabet: tuple = ()
    automata: tuple = ()  # TableDef | BuiltinDef, declaration order
    renames: tuple = ()  # one tuple of (automaton, old, new) per statement
    nets: tuple = ()  # (name, expr)
    script: tuple | None = None  # input slices, one per tick
    config: tuple = ()  # sorted (key, value)
    _sigs: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def setting(self, key, default=None):
        return dict(self.config).get(key, default)

    def net(self, name: str | None = None):
        """The named net, or the last declared one (falling back to the last automaton)."""
        if name is not None:
            for n, expr in self.nets:
                if n == name:
                    return expr
            if any(d.name == name for d in self.automata):
                return Ref(name)
            raise NetNameError(f"no net or automaton named {name!r}")
        if self.nets:
            return self.nets[-1][1]
        if self.automata:
            return Ref(self.automata[-1].name)
        raise NetNameError("the description declares no automaton")


# -- tokens ----------------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<entry>[A-Za-z_][A-Za-z0-9_']*:<[^<>\n]*>)
  | (?P<otimes>\(x\)|⊗)
  | (?P<arrow>->)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[{}();.=,])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise NetSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None, cls=NetSyntaxError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col)

    def take(self, kind=None, text=None) -> Token:
        t = self.tok
        if (kind and t.kind != kind) or (text and t.text != text):
            want = repr(text) if text else kind
            got = repr(t.text) if t.text else "end of input"
            raise self.error(f"expected {want}, got {got}")
        self.i += 1
        return t

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind in ("name", "punct", "arrow", "otimes")

    def names_until(self, close: str) -> list[Token]:
        out = []
        while not self.at(close):
            out.append(self.take("name"))
            if self.at(","):
                self.take()
        self.take(text=close)
        return out

    def entries(self) -> list[tuple[Token, str, tuple]]:
        out = []
        while self.tok.kind == "entry":
            t = self.take()
            chan, body = t.text.split(":", 1)
            out.append((t, chan, parse_seq(body[1:-1])))
        return out


def _slice_for(entries, chans, role, parser, alphabet) -> dict:
    got = {}
    for tok, chan, seq in entries:
        if chan not in chans:
            raise parser.error(f"{chan!r} is not an {role} channel", tok, NetNameError)
        if chan in got:
            raise parser.error(f"channel {chan!r} given twice", tok)
        for m in seq:
            if m not in alphabet:
                raise parser.error(f"message {m!r} is not in the alphabet", tok, NetNameError)
        got[chan] = seq
    return {c: got.get(c, ()) for c in chans}


def _parse_automaton(p: _Parser, alphabet) -> TableDef:
    name = p.take("name").text
    p.take(text="{")
    sig_tok = p.take("name", "sig")
    groups = {}
    for role in ("in", "out", "hid"):
        if p.at(role):
            p.take()
            p.take(text="(")
            groups[role] = [t.text for t in p.names_until(")")]
    p.take(text=";")
    inputs, outputs, hidden = (tuple(groups.get(r, ())) for r in ("in", "out", "hid"))
    seen = set()
    for c in inputs + outputs + hidden:
        if c in seen:
            raise p.error(f"channel {c!r} appears more than once in the signature", sig_tok, NetTypeError)
        seen.add(c)
    states, start, trans, bound = [], None, [], 1
    while not p.at("}"):
        kw = p.take("name")
        if kw.text == "state":
            st = p.take("name")
            if st.text in states:
                raise p.error(f"state {st.text!r} declared twice", st, NetNameError)
            states.append(st.text)
            if p.at("start"):
                p.take()
                if start is not None:
                    raise p.error("more than one start state", st, NetTypeError)
                start = st.text
        elif kw.text == "trans":
            src = p.take("name")
            p.take("arrow")
            dst = p.take("name")
            for st in (src, dst):
                if st.text not in states:
                    raise p.error(f"undeclared state {st.text!r}", st, NetNameError)
            sections = {}
            while p.tok.kind == "name" and p.tok.text in ("on", "out", "hid"):
                sec = p.take().text
                if sec in sections:
                    raise p.error(f"section {sec!r} given twice")
                sections[sec] = p.entries()
            action = {}
            for sec, chans, role in (("on", inputs, "input"), ("out", outputs, "output"), ("hid", hidden, "hidden")):
                action.update(_slice_for(sections.get(sec, []), chans, role, p, alphabet))
            trans.append((src.text, Slice(action), dst.text))
        elif kw.text == "bound":
            bound = int(p.take("num").text)
        else:
            raise p.error(f"expected 'state', 'trans' or 'bound', got {kw.text!r}", kw)
        p.take(text=";")
    p.take(text="}")
    if start is None:
        raise p.error(f"automaton {name!r} has no start state", sig_tok, NetTypeError)
    return TableDef(name, inputs, outputs, hidden, tuple(states), start, tuple(trans), bound)


def _parse_expr(p: _Parser):
    left = _parse_unary(p)
    while p.tok.kind == "otimes":
        p.take()
        left = Compose(left, _parse_unary(p))
    return left


def _parse_unary(p: _Parser):
    if p.at("hide"):
        p.take()
        p.take(text="{")
        chans = tuple(t.text for t in p.names_until("}"))
        return Hide(chans, _parse_unary(p))
    if p.at("("):
        p.take()
        inner = _parse_expr(p)
        p.take(text=")")
        return inner
    return Ref(p.take("name").text)


def parse(text: str) -> NetworkDescription:
    """Parse and type-check a network description."""
    p = _Parser(text)
    alphabet, automata, renames, nets, script, config = None, [], [], [], None, {}
    checker = _Checker()
    while p.tok.kind != "eof":
        kw = p.take("name")
        if kw.text == "alphabet":
            if alphabet is not None:
                raise p.error("alphabet declared twice", kw)
            alphabet = tuple(t.text for t in p.names_until(";"))
            if not alphabet:
                raise p.error("alphabet must be nonempty", kw, NetTypeError)
            checker.alphabet = alphabet
            continue
        if alphabet is None and kw.text != "config":
            raise p.error("the alphabet must be declared first", kw)
        if kw.text == "automaton":
            name_tok = p.tok
            d = _parse_automaton(p, alphabet)
            checker.define(d, name_tok)
            automata.append(d)
            continue
        if kw.text == "builtin":
            name_tok = p.take("name")
            p.take(text="=")
            kind_tok = p.take("name")
            if kind_tok.text not in BUILTIN_PARAMS:
                raise p.error(f"unknown builtin {kind_tok.text!r}", kind_tok, NetNameError)
            params = ()
            if p.at("("):
                p.take()
                params = (int(p.take("num").text),)
                p.take(text=")")
            if len(params) > BUILTIN_PARAMS[kind_tok.text]:
                raise p.error(f"builtin {kind_tok.text!r} takes no parameter", kind_tok, NetTypeError)
            d = BuiltinDef(name_tok.text, kind_tok.text, params)
            checker.define(d, name_tok)
            automata.append(d)
        elif kw.text == "rename":
            group = []
            while True:
                a = p.take("name")
                p.take(text=".")
                old = p.take("name")
                p.take("arrow")
                new = p.take("name")
                group.append((a, old, new))
                if not p.at(","):
                    break
                p.take()
            checker.rename(group)
            renames.append(tuple((a.text, old.text, new.text) for a, old, new in group))
        elif kw.text == "net":
            name_tok = p.take("name")
            p.take(text="=")
            expr_tok = p.tok
            expr = _parse_expr(p)
            checker.net(name_tok, expr, expr_tok)
            nets.append((name_tok.text, expr))
        elif kw.text == "input":
            if script is not None:
                raise p.error("input script given twice", kw)
            p.take(text="{")
            ticks = []
            while not p.at("}"):
                label = p.take("name")
                if label.text != f"t{len(ticks)}":
                    raise p.error(f"expected tick label t{len(ticks)}, got {label.text!r}", label)
                entries = p.entries()
                chans = [c for _, c, _ in entries]
                ticks.append(Slice(_slice_for(entries, chans, "input", p, alphabet)))
                p.take(text=";")
            p.take(text="}")
            script = tuple(ticks)
            continue
        elif kw.text == "config":
            while not p.at(";"):
                key = p.take("name")
                if key.text not in CONFIG_KEYS:
                    raise p.error(f"unknown config key {key.text!r}", key, NetNameError)
                config[key.text] = int(p.take("num").text)
        else:
            raise p.error(f"unknown statement {kw.text!r}", kw)
        p.take(text=";")
    if alphabet is None:
        raise NetSyntaxError("the description declares no alphabet", 1, 1)
    desc = NetworkDescription(alphabet, tuple(automata), tuple(renames), tuple(nets), script,
                              tuple(sorted(config.items())))
    desc._sigs.update(checker.sigs)
    return desc


# -- type checking and elaboration ----------------------------------------------------------

def build_automaton(d, alphabet) -> Automaton:
    if isinstance(d, TableDef):
        sig = PortSignature(alphabet, d.inputs, d.outputs, d.hidden)
        trans = [Transition(s, a, t) for s, a, t in d.transitions]
        return Automaton(sig, set(d.states), d.start, transitions=trans, input_bound=d.bound, name=d.name)
    if d.kind == "fair_merge":
        A = builtin_fair_merge(alphabet)
    elif d.kind == "buffer":
        A = builtin_buffer(alphabet, *d.params)
    else:
        pair = builtin_blocking_pair(alphabet)
        A = pair[0] if d.kind == "blocking_a" else pair[1]
    A.name = d.name
    return A


class _Checker:
    """Tracks signatures while parsing so errors point at the offending statement."""

    def __init__(self):
        self.alphabet = ()
        self.sigs = {}
        self.kinds = {}

    def define(self, d, tok):
        if d.name in self.sigs:
            raise NetNameError(f"{d.name!r} already defined", tok.line, tok.col)
        try:
            A = build_automaton(d, self.alphabet)
        except TPAError as exc:
            raise NetTypeError(str(exc), tok.line, tok.col) from exc
        self.sigs[d.name] = A.signature
        self.kinds[d.name] = "automaton"

    def rename(self, group):
        maps = {}
        for a, old, new in group:
            sig = self.sigs.get(a.text)
            if sig is None or self.kinds[a.text] != "automaton":
                raise NetNameError(f"undefined automaton {a.text!r}", a.line, a.col)
            if old.text not in sig.channels:
                raise NetNameError(f"{a.text!r} has no channel {old.text!r}", old.line, old.col)
            m = maps.setdefault(a.text, {})
            if old.text in m:
                raise NetTypeError(f"channel {old.text!r} renamed twice", old.line, old.col)
            m[old.text] = new.text
        for a, m in maps.items():
            sig = self.sigs[a]
            names = [m.get(c, c) for c in sig.channels]
            if len(set(names)) != len(names):
                tok = group[-1][2]
                raise NetTypeError(f"renaming gives {a!r} two channels with one name", tok.line, tok.col)
            self.sigs[a] = PortSignature(
                sig.alphabet, {m.get(c, c) for c in sig.inputs}, {m.get(c, c) for c in sig.outputs},
                {m.get(c, c) for c in sig.hidden},
            )

    def net(self, name_tok, expr, tok):
        if name_tok.text in self.sigs:
            raise NetNameError(f"{name_tok.text!r} already defined", name_tok.line, name_tok.col)
        self.sigs[name_tok.text] = self.signature(expr, tok)
        self.kinds[name_tok.text] = "net"

    def signature(self, expr, tok) -> PortSignature:
        if isinstance(expr, Ref):
            if expr.name not in self.sigs:
                raise NetNameError(f"undefined automaton or net {expr.name!r}", tok.line, tok.col)
            return self.sigs[expr.name]
        if isinstance(expr, Compose):
            s1, s2 = self.signature(expr.left, tok), self.signature(expr.right, tok)
            try:
                return compose_signatures(s1, s2)
            except (IncompatibleSignatures, OverlapError) as exc:
                raise NetTypeError(str(exc), tok.line, tok.col) from exc
        sig = self.signature(expr.body, tok)
        for c in expr.channels:
            if c not in sig.outputs:
                raise NetTypeError(f"cannot hide {c!r}: not an output of the operand", tok.line, tok.col)
        P = frozenset(expr.channels)
        return PortSignature(sig.alphabet, sig.inputs, sig.outputs - P, sig.hidden | P)


class Elaboration:
    """Automata of a description with renames applied, and nets built on demand."""

    def __init__(self, desc: NetworkDescription, compose_fn):
        self.desc = desc
        self.compose_fn = compose_fn
        self.automata = {}
        for d in desc.automata:
            self.automata[d.name] = build_automaton(d, desc.alphabet)
        for group in desc.renames:
            maps = {}
            for a, old, new in group:
                maps.setdefault(a, {})[old] = new
            for a, m in maps.items():
                self.automata[a] = rename(self.automata[a], m)
        self.nets = dict(desc.nets)
        self._built = {}

    def build(self, expr) -> Automaton:
        hit = self._built.get(expr)
        if hit is None:
            hit = self._built[expr] = self._build(expr)
        return hit

    def _build(self, expr) -> Automaton:
        if isinstance(expr, Ref):
            if expr.name in self.automata:
                return self.automata[expr.name]
            return self.build(self.nets[expr.name])
        if isinstance(expr, Compose):
            return self.compose_fn(self.build(expr.left), self.build(expr.right))
        return hide(self.build(expr.body), expr.channels)

    def compose_nodes(self, expr) -> list:
        """Composition nodes of ``expr`` (following net references), outermost first."""
        if isinstance(expr, Ref):
            return self.compose_nodes(self.nets[expr.name]) if expr.name in self.nets else []
        if isinstance(expr, Compose):
            return [expr] + self.compose_nodes(expr.left) + self.compose_nodes(expr.right)
        return self.compose_nodes(expr.body)

    def script_history(self, A: Automaton) -> History:
        if self.desc.script is None:
            raise NetNameError("the description has no input script")
        ticks = []
        for k, tick in enumerate(self.desc.script):
            extra = tick.domain - A.inputs
            if extra:
                raise NetNameError(f"input tick t{k} names non-input channel(s) {', '.join(sorted(extra))}")
            ticks.append(tick + Slice.empty(A.inputs - tick.domain))
        return History(A.inputs, ticks)


# -- rendering ---------------------------------------------------------------------------------

def _entries(tick: Slice, chans) -> str:
    return " ".join(f"{c}:{render_seq(tick[c])}" for c in sorted(chans))


def render_expr(expr, top=True) -> str:
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Compose):
        right = render_expr(expr.right, False)
        if isinstance(expr.right, Compose):
            right = f"({right})"
        body = f"{render_expr(expr.left, False)} (x) {right}"
        return body if top else f"({body})"
    body = render_expr(expr.body, False)
    return f"hide {{{' '.join(expr.channels)}}} {body}"


def render(desc: NetworkDescription) -> str:
    """Canonical text for ``desc``; parsing it gives back an equal description."""
    lines = [f"alphabet {' '.join(desc.alphabet)};"]
    for d in desc.automata:
        if isinstance(d, BuiltinDef):
            params = f"({', '.join(map(str, d.params))})" if d.params else ""
            lines.append(f"builtin {d.name} = {d.kind}{params};")
            continue
        lines.append(f"automaton {d.name} {{")
        lines.append(f"  sig in({' '.join(d.inputs)}) out({' '.join(d.outputs)}) hid({' '.join(d.hidden)});")
        for s in d.states:
            lines.append(f"  state {s}{' start' if s == d.start else ''};")
        for s, a, t in d.transitions:
            parts = [f"  trans {s} -> {t}"]
            for sec, chans in (("on", d.inputs), ("out", d.outputs), ("hid", d.hidden)):
                if chans:
                    parts.append(f"{sec} {_entries(a, chans)}")
            lines.append(" ".join(parts) + ";")
        lines.append(f"  bound {d.bound};")
        lines.append("}")
    for group in desc.renames:
        lines.append("rename " + ", ".join(f"{a}.{old} -> {new}" for a, old, new in group) + ";")
    for name, expr in desc.nets:
        lines.append(f"net {name} = {render_expr(expr)};")
    if desc.script is not None:
        body = " ".join(f"t{k} {_entries(t, t.domain)};".replace(" ;", ";") for k, t in enumerate(desc.script))
        lines.append(f"input {{ {body} }}" if body else "input { }")
    if desc.config:
        lines.append("config " + " ".join(f"{k} {v}" for k, v in desc.config) + ";")
    return "\n".join(lines) + "\n"
