import pytest
from hypothesis import strategies as st

from tpanet.automata import builtin_buffer, builtin_fair_merge, rename
from tpanet.history import History, Slice

ALPHABET = ("a", "b")


def seqs(alphabet=ALPHABET, max_len=2):
    return st.lists(st.sampled_from(alphabet), max_size=max_len).map(tuple)


def slices(chans, alphabet=ALPHABET, max_len=2):
    chans = sorted(chans)
    return st.tuples(*[seqs(alphabet, max_len) for _ in chans]).map(lambda ms: Slice(dict(zip(chans, ms))))


def histories(chans, length=None, alphabet=ALPHABET, max_len=2, max_ticks=4):
    n = st.just(length) if length is not None else st.integers(0, max_ticks)
    return n.flatmap(lambda k: st.lists(slices(chans, alphabet, max_len), min_size=k, max_size=k)
                     .map(lambda ts: History(chans, ts)))


def S(**entries):
    """Slice from keyword arguments; strings are split into one message per character."""
    return Slice({c: tuple(v) for c, v in entries.items()})


def H(*ticks, domain=None):
    return History.from_ticks(ticks, domain)


@pytest.fixture
def fm1():
    return builtin_fair_merge(("a",))


@pytest.fixture
def fm2():
    return builtin_fair_merge(ALPHABET)


@pytest.fixture
def buf1():
    return builtin_buffer(("a",), capacity=8)


@pytest.fixture
def fm_into_buf():
    """Acyclic: FM merges i, j onto o; the buffer reads o and writes q."""
    fm = builtin_fair_merge(("a",))
    buf = rename(builtin_buffer(("a",), capacity=8), {"i": "o", "o": "q"}, name="BUF")
    return fm, buf


@pytest.fixture
def fm_buf_loop():
    """Cycle: FM merges i with the buffer's output j; the buffer stores FM's output o."""
    fm = builtin_fair_merge(("a",))
    buf = rename(builtin_buffer(("a",), capacity=8), {"i": "o", "o": "j"}, name="BUF")
    return fm, buf


ACCEPTANCE_LINES = []  # (criterion number, line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
