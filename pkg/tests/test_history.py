from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpanet.errors import DomainMismatch, HorizonExceeded, LengthMismatch, OverlappingDomains
from tpanet.history import (
    DyadicDistance,
    History,
    Slice,
    baire_distance,
    channel_set,
    parse_history,
    parse_slice,
    prefix,
    prefix_set,
    project_history,
    sum_history,
)

from .conftest import H, S, histories, slices


def test_sum_slice_pointwise():
    assert S(i="a") + S(j="bc") == Slice({"i": ("a",), "j": ("b", "c")})
    assert Slice() + S(j="b") == S(j="b")


def test_sum_slice_overlap_rejected():
    with pytest.raises(OverlappingDomains) as exc:
        S(i="a") + S(i="b")
    assert exc.value.channels == ("i",)


def test_sum_history():
    assert H(S(i="a")) + H(S(j="")) == H(S(i="a", j=""))
    empty = History({"i"}) + History({"j"})
    assert len(empty) == 0 and empty.domain == {"i", "j"}
    with pytest.raises(LengthMismatch):
        History.silent({"i"}, 2) + History.silent({"j"}, 3)


def test_projection():
    assert S(i="a", o="b").project({"o"}) == S(o="b")
    # projecting onto unrelated channels gives the empty named sequence
    assert S(i="a").project({"z"}) == Slice()
    theta = S(i="a", o="")
    assert theta.project(theta.domain) == theta
    alpha = H(S(i="a", o="b"), S(i="", o="c"))
    assert alpha.project({"o"}) == H(S(o="b"), S(o="c"))
    assert alpha.project(()) == History((), [Slice(), Slice()])


def test_prefix_bounds():
    alpha = History.silent({"i"}, 3)
    assert prefix(alpha, 0) == History({"i"})
    assert prefix(alpha, 3) == alpha
    with pytest.raises(HorizonExceeded):
        prefix(alpha, 4)


def test_prefix_set_collapses_duplicates():
    a = H(S(o="a"), S(o="a"))
    b = H(S(o="a"), S(o="b"))
    assert prefix_set([a, b], 1) == {H(S(o="a"))}


def test_distance_examples():
    s = History.silent({"i"}, 5)
    assert baire_distance(s, s) == DyadicDistance(5, exact=False)
    t = History({"i"}, list(s.ticks[:3]) + [S(i="a"), S(i="")])
    d = baire_distance(s, t)
    assert d.exact and d.exponent == 3 and d.value == Fraction(1, 8)
    u = History({"i"}, [S(i="b")] + list(s.ticks[1:]))
    assert baire_distance(s, u).value == 1
    assert baire_distance(s, s).render() == "<=2^-5"


def test_distance_preconditions():
    with pytest.raises(DomainMismatch):
        baire_distance(History.silent({"i"}, 1), History.silent({"j"}, 1))
    with pytest.raises(LengthMismatch):
        baire_distance(History.silent({"i"}, 1), History.silent({"i"}, 2))


def test_history_rejects_mixed_domains():
    with pytest.raises(DomainMismatch):
        History({"i"}, [S(i="a"), S(j="a")])


def test_channel_set_rejects_duplicates():
    assert channel_set(["b", "a"]) == {"a", "b"}
    with pytest.raises(ValueError):
        channel_set(["a", "a"])


def test_render_and_parse():
    alpha = H(S(j="", i="ab"), S(i="", j="b"))
    text = alpha.render()
    assert text == "t=0 i:<a,b> j:<>\nt=1 i:<> j:<b>"
    assert parse_history(text) == alpha
    assert parse_history("# comment\n\nt=0 i:<a>\n") == H(S(i="a"))
    assert parse_slice("o:<> i:<a>") == S(i="a", o="")
    with pytest.raises(ValueError):
        parse_history("t=1 i:<a>")


def test_slice_order_is_canonical():
    assert Slice({"b": (), "a": ("x",)}).channels == ("a", "b")
    assert repr(S(o="ab")) == "{o:<a,b>}"


# -- properties ---------------------------------------------------------------

@given(histories({"i", "j"}, length=3), histories({"o"}, length=3), st.integers(0, 3))
def test_sum_commutes_with_prefix(alpha, beta, n):
    assert (alpha + beta).prefix(n) == alpha.prefix(n) + beta.prefix(n)


@given(histories({"i", "j", "o"}), st.sets(st.sampled_from("ijoz")), st.sets(st.sampled_from("ijoz")))
def test_projection_laws(alpha, O, P):
    assert alpha.project(O).project(P) == alpha.project(set(O) & set(P))
    for n in range(len(alpha) + 1):
        assert alpha.project(O).prefix(n) == alpha.prefix(n).project(O)


@given(slices({"i"}), slices({"j"}), slices({"o"}))
def test_sum_associative_commutative(x, y, z):
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert (x + y).project({"i"}) == x


@settings(max_examples=200)
@given(st.integers(0, 4).flatmap(lambda n: st.tuples(*[histories({"i"}, length=n, alphabet=("a",), max_len=1)] * 3)))
def test_ultrametric(triple):
    x, y, z = triple
    dxy, dyz, dxz = baire_distance(x, y), baire_distance(y, z), baire_distance(x, z)
    assert dxy == baire_distance(y, x)
    assert dxy.exact == (x != y)
    assert dxz.value <= max(dxy.value, dyz.value)


@given(histories({"i", "o"}, max_len=2))
def test_render_round_trip(alpha):
    assert parse_history(alpha.render(), alpha.domain) == alpha
