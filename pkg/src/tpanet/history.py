"""Timed communication histories.

A :class:`Slice` is what a set of channels carries during one tick: a map
from channel names to finite message sequences.  A :class:`History` is a
finite prefix of a timed stream, i.e. a sequence of slices over a fixed
channel set.  Histories are compared with the Baire metric, which at a finite
horizon can only report an upper bound once the two prefixes agree
everywhere.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import DomainMismatch, HorizonExceeded, LengthMismatch, OverlappingDomains

Message = str


def channel_set(names: Iterable[str] = ()) -> frozenset[str]:
    """Build a channel set, rejecting duplicate names."""
    names = list(names)
    result = frozenset(names)
    if len(result) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ValueError(f"duplicate channel names: {', '.join(dupes)}")
    return result


def render_seq(seq: tuple) -> str:
    return "<" + ",".join(str(m) for m in seq) + ">"


def render_state(state) -> str:
    """Human readable state id; products render as ``(s1,s2)``."""
    render = getattr(state, "render", None)
    if render is not None:
        return render()
    if isinstance(state, tuple):
        return "(" + ",".join(render_state(s) for s in state) + ")"
    return str(state)


def state_key(state) -> str:
    return render_state(state)


class Slice:
    """One tick of named communication, immutable and hashable.

    Entries are kept sorted by channel name so that equality, hashing,
    ordering and rendering are all canonical.
    """

    __slots__ = ("_items", "_map", "_hash", "_dom", "_proj")

    def __init__(self, entries: Mapping[str, Iterable[Message]] | Iterable = ()):
        if isinstance(entries, dict) or isinstance(entries, Mapping):
            pairs = entries.items()
        else:
            pairs = entries
        mapping = {}
        for chan, msgs in pairs:
            if chan in mapping:
                raise ValueError(f"channel {chan!r} given twice")
            mapping[chan] = tuple(msgs)
        self._items = tuple(sorted(mapping.items()))
        self._map = mapping
        self._hash = None
        self._dom = None
        self._proj = None

    @classmethod
    def _from_sorted(cls, items: tuple) -> "Slice":
        # items must already be sorted by channel with tuple values
        self = object.__new__(cls)
        self._items = items
        self._map = dict(items)
        self._hash = None
        self._dom = None
        self._proj = None
        return self

    @classmethod
    def empty(cls, domain: Iterable[str] = ()) -> "Slice":
        """The slice that carries no message on any channel of ``domain``."""
        return cls({c: () for c in domain})

    @property
    def domain(self) -> frozenset[str]:
        if self._dom is None:
            self._dom = frozenset(self._map)
        return self._dom

    @property
    def channels(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self._items)

    def items(self):
        return self._items

    def __getitem__(self, chan: str) -> tuple:
        return self._map[chan]

    def __contains__(self, chan) -> bool:
        return chan in self._map

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other):
        if not isinstance(other, Slice):
            return NotImplemented
        return self._items == other._items

    def __lt__(self, other: "Slice"):
        return self._items < other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __add__(self, other: "Slice") -> "Slice":
        return sum_slice(self, other)

    def project(self, chans: Iterable[str]) -> "Slice":
        return project_slice(self, chans)

    def rename(self, mapping: Mapping[str, str]) -> "Slice":
        return Slice({mapping.get(c, c): m for c, m in self._items})

    def max_len(self) -> int:
        return max((len(m) for _, m in self._items), default=0)

    def render(self) -> str:
        return " ".join(f"{c}:{render_seq(m)}" for c, m in self._items)

    def __repr__(self):
        return "{" + self.render() + "}"


def sum_slice(phi: Slice, psi: Slice) -> Slice:
    overlap = phi.domain & psi.domain
    if overlap:
        raise OverlappingDomains(overlap)
    return Slice._from_sorted(tuple(sorted(phi._items + psi._items)))


def project_slice(theta: Slice, chans: Iterable[str]) -> Slice:
    keep = chans if isinstance(chans, frozenset) else frozenset(chans)
    cache = theta._proj
    if cache is None:
        cache = theta._proj = {}
    hit = cache.get(keep)
    if hit is None:
        hit = cache[keep] = Slice._from_sorted(tuple(e for e in theta._items if e[0] in keep))
    return hit


class History:
    """A finite prefix of a named timed stream.

    ``domain`` is stored explicitly so that the empty prefix still knows
    which channels it ranges over.
    """

    __slots__ = ("domain", "ticks", "_hash")

    def __init__(self, domain: Iterable[str], ticks: Iterable[Slice] = ()):
        self.domain = frozenset(domain)
        self.ticks = tuple(ticks)
        self._hash = None
        for k, tick in enumerate(self.ticks):
            if tick.domain != self.domain:
                raise DomainMismatch(
                    f"tick {k} ranges over {sorted(tick.domain)}, history over {sorted(self.domain)}"
                )

    @classmethod
    def silent(cls, domain: Iterable[str], length: int) -> "History":
        """``length`` ticks with no messages on any channel."""
        domain = frozenset(domain)
        return cls(domain, (Slice.empty(domain),) * length)

    @classmethod
    def from_ticks(cls, ticks: Iterable[Slice], domain: Iterable[str] | None = None) -> "History":
        ticks = tuple(ticks)
        if domain is None:
            domain = ticks[0].domain if ticks else ()
        return cls(domain, ticks)

    @property
    def length(self) -> int:
        return len(self.ticks)

    def __len__(self) -> int:
        return len(self.ticks)

    def __iter__(self) -> Iterator[Slice]:
        return iter(self.ticks)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return History(self.domain, self.ticks[k])
        return self.ticks[k]

    def __eq__(self, other):
        if not isinstance(other, History):
            return NotImplemented
        return self.domain == other.domain and self.ticks == other.ticks

    def __lt__(self, other: "History"):
        return (sorted(self.domain), self.ticks) < (sorted(other.domain), other.ticks)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.domain, self.ticks))
        return self._hash

    def __add__(self, other: "History") -> "History":
        return sum_history(self, other)

    def append(self, tick: Slice) -> "History":
        return History(self.domain, self.ticks + (tick,))

    def prefix(self, j: int) -> "History":
        return prefix(self, j)

    def project(self, chans: Iterable[str]) -> "History":
        return project_history(self, chans)

    def rename(self, mapping: Mapping[str, str]) -> "History":
        return History({mapping.get(c, c) for c in self.domain}, (t.rename(mapping) for t in self.ticks))

    def channel(self, chan: str) -> tuple[tuple, ...]:
        """The per-tick message sequences of one channel."""
        return tuple(t[chan] for t in self.ticks)

    def render(self) -> str:
        lines = []
        for k, tick in enumerate(self.ticks):
            body = tick.render()
            lines.append(f"t={k} {body}" if body else f"t={k}")
        return "\n".join(lines)

    def __repr__(self):
        return "History[" + "; ".join(t.render() for t in self.ticks) + "]"


def sum_history(alpha: History, beta: History) -> History:
    overlap = alpha.domain & beta.domain
    if overlap:
        raise OverlappingDomains(overlap)
    if len(alpha) != len(beta):
        raise LengthMismatch(len(alpha), len(beta))
    return History(alpha.domain | beta.domain, (a + b for a, b in zip(alpha.ticks, beta.ticks)))


def project_history(alpha: History, chans: Iterable[str]) -> History:
    keep = frozenset(chans)
    return History(alpha.domain & keep, (project_slice(t, keep) for t in alpha.ticks))


def prefix(alpha: History, j: int) -> History:
    if j < 0 or j > len(alpha):
        raise HorizonExceeded(j, len(alpha))
    return History(alpha.domain, alpha.ticks[:j])


def prefix_set(histories: Iterable[History], j: int) -> frozenset[History]:
    """Point-wise prefix of a set of histories (duplicates collapse)."""
    return frozenset(prefix(h, j) for h in histories)


def project_set(histories: Iterable[History], chans: Iterable[str]) -> frozenset[History]:
    chans = frozenset(chans)
    return frozenset(project_history(h, chans) for h in histories)


@dataclass(frozen=True, order=False)
class DyadicDistance:
    """A Baire distance ``2**-exponent`` measured on finite prefixes.

    When ``exact`` is false the two prefixes agreed over the whole compared
    horizon; the true distance of any continuation is then at most
    ``2**-exponent`` and may be zero.
    """

    exponent: int
    exact: bool = True

    @property
    def value(self) -> Fraction:
        return Fraction(1, 2 ** self.exponent)

    @property
    def is_upper_bound(self) -> bool:
        return not self.exact

    def __le__(self, other):
        if isinstance(other, DyadicDistance):
            other = other.value
        return self.value <= other

    def __lt__(self, other):
        if isinstance(other, DyadicDistance):
            other = other.value
        return self.value < other

    def render(self) -> str:
        return f"{'' if self.exact else '<='}2^-{self.exponent}"

    def __str__(self):
        return self.render()


def baire_distance(s: History, t: History) -> DyadicDistance:
    if s.domain != t.domain:
        raise DomainMismatch(f"cannot compare histories over {sorted(s.domain)} and {sorted(t.domain)}")
    if len(s) != len(t):
        raise LengthMismatch(len(s), len(t))
    for j, (a, b) in enumerate(zip(s.ticks, t.ticks)):
        if a != b:
            return DyadicDistance(j, exact=True)
    return DyadicDistance(len(s), exact=False)


# -- canonical text format ------------------------------------------------------

_ENTRY = re.compile(r"([A-Za-z_][A-Za-z0-9_'.]*):<([^<>]*)>")
_TICK = re.compile(r"t=(\d+)\s*(.*)$")


def parse_seq(body: str) -> tuple:
    body = body.strip()
    if not body:
        return ()
    return tuple(m.strip() for m in body.split(","))


def parse_slice(text: str) -> Slice:
    text = text.strip()
    entries = []
    pos = 0
    for m in _ENTRY.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"unexpected text in slice: {text[pos:m.start()]!r}")
        entries.append((m.group(1), parse_seq(m.group(2))))
        pos = m.end()
    if text[pos:].strip():
        raise ValueError(f"unexpected text in slice: {text[pos:]!r}")
    return Slice(entries)


def parse_history(text: str, domain: Iterable[str] | None = None) -> History:
    """Parse the one-tick-per-line ``t=<k> chan:<...>`` format.

    Blank lines and ``#`` comments are ignored.  Ticks must be numbered
    consecutively from zero.
    """
    ticks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _TICK.match(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 't=<k> ...', got {raw!r}")
        if int(m.group(1)) != len(ticks):
            raise ValueError(f"line {lineno}: expected tick {len(ticks)}, got {m.group(1)}")
        ticks.append(parse_slice(m.group(2)))
    return History.from_ticks(ticks, domain)
