import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpanet.automata import behaviors, check_reactive, is_execution
from tpanet.cli import main, run
from tpanet.composition import compose
from tpanet.errors import NetNameError, NetSyntaxError, NetTypeError
from tpanet.generate import random_automaton
from tpanet.history import parse_history
from tpanet.netdesc import Compose, Elaboration, Hide, Ref, TableDef, parse, render

from .conftest import S

FMBUF = """\
# buffer feeding the merge, wired by renaming
alphabet a;
builtin FM = fair_merge;
builtin BUF = buffer(4);
rename BUF.o -> i, BUF.i -> x;
net N = BUF (x) FM;
input { t0 x:<a> j:<a>; t1 x:<> j:<a>; }
config horizon 2;
"""

TABLE = """\
alphabet a b;
automaton ECHO {
  sig in(i) out(o) hid(h);
  state s0 start;
  state s1;
  trans s0 -> s0 on i:<> out o:<> hid h:<>;
  trans s0 -> s1 on i:<a> out o:<> hid h:<a>;
  trans s0 -> s0 on i:<b> out o:<b> hid h:<>;
  trans s1 -> s0 on i:<> out o:<a> hid h:<>;
  trans s1 -> s1 on i:<a> out o:<a> hid h:<>;
  trans s1 -> s0 on i:<b> out o:<a,b> hid h:<>;
}
net E = hide {o} ECHO;
"""

BLOCKING = """\
alphabet a b;
builtin A = blocking_a;
builtin B = blocking_b;
net N = A (x) B;
"""


@pytest.fixture
def netfile(tmp_path):
    def write(text, name="net.tpa"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def machine_block(out):
    block = out[out.index("--- verdict"):].splitlines()[1:-1]
    return dict(line.split("=", 1) for line in block)


# -- parsing -------------------------------------------------------------------------------

def test_parse_builtin_merge():
    d = parse("alphabet a b;\nbuiltin FM = fair_merge;\n")
    A = Elaboration(d, compose).build(d.net())
    assert A.signature.render() == "({a,b}, {i,j}, {o}, {})"


def test_parse_table_automaton():
    d = parse(TABLE)
    [t] = d.automata
    assert isinstance(t, TableDef) and t.start == "s0" and len(t.transitions) == 6
    assert d.net() == Hide(("o",), Ref("ECHO"))
    A = Elaboration(d, compose).build(d.net())
    assert A.signature.hidden == {"h", "o"} and A.outputs == set()
    assert check_reactive(A) is None


def test_parse_expression_shapes():
    d = parse("alphabet a;\nbuiltin A = buffer(2);\nbuiltin B = buffer;\nbuiltin C = buffer;\n"
              "rename A.o -> m; rename B.i -> m, B.o -> n; rename C.i -> n, C.o -> p;\n"
              "net N = hide {m} (A (x) B) (x) C;\nnet H = hide {m} A;\nnet M = A ⊗ (B (x) C);\n")
    # hiding binds tighter than composition, which associates to the left
    assert dict(d.nets)["N"] == Compose(Hide(("m",), Compose(Ref("A"), Ref("B"))), Ref("C"))
    assert dict(d.nets)["H"] == Hide(("m",), Ref("A"))
    with pytest.raises(NetTypeError):
        parse("alphabet a;\nbuiltin A = buffer;\nbuiltin B = buffer;\nrename A.o -> m; rename B.i -> m;\n"
              "net N = hide {m} A (x) B;\n")
    assert dict(d.nets)["M"] == Compose(Ref("A"), Compose(Ref("B"), Ref("C")))


def test_partial_table_parses_then_fails_reactiveness():
    text = "alphabet a;\nautomaton P {\n sig in(i) out(o);\n state s start;\n trans s -> s on i:<a> out o:<a>;\n}\n"
    d = parse(text)
    A = Elaboration(d, compose).build(d.net())
    w = check_reactive(A)
    assert w.state == "s" and w.input == S(i="")
    # the witness is re-checkable: no transition exists for it
    assert not A.step(w.state, w.input)


@pytest.mark.parametrize("text, exc, where", [
    ("alphabet a;\nbuiltin FM = fair_merge\nnet N = FM;\n", NetSyntaxError, "line 3, col 1"),
    ("alphabet a;\nnet N = FM;\n", NetNameError, "line 2, col 9"),
    ("alphabet a;\nbuiltin FM = fair_merge;\nnet N = hide {i} FM;\n", NetTypeError, "line 3, col 9"),
    ("alphabet a;\nbuiltin A = fair_merge;\nbuiltin B = fair_merge;\nnet N = A (x) B;\n", NetTypeError, "line 4"),
    ("alphabet a;\nautomaton P { sig in(i) out(o); state s start; trans s -> q on i:<> out o:<>; }\n",
     NetNameError, "line 2"),
    ("alphabet a;\nautomaton P { sig in(i) out(o); state s start; trans s -> s on i:<c> out o:<>; }\n",
     NetNameError, "line 2"),
    ("alphabet a;\nbuiltin X = nonsense;\n", NetNameError, "line 2, col 13"),
    ("alphabet a;\nbuiltin A = buffer;\nrename A.z -> y;\n", NetNameError, "line 3"),
])
def test_parse_errors_carry_positions(text, exc, where):
    with pytest.raises(exc) as info:
        parse(text)
    assert str(info.value).startswith(where)


def test_parse_errors_are_python_error_kinds():
    with pytest.raises(SyntaxError):
        parse("alphabet a")
    with pytest.raises(NameError):
        parse("alphabet a;\nnet N = X;\n")
    with pytest.raises(TypeError):
        parse("alphabet a;\nbuiltin FM = fair_merge;\nnet N = hide {i} FM;\n")


# -- round trip ------------------------------------------------------------------------------

def test_round_trip_examples():
    for text in (FMBUF, TABLE, BLOCKING):
        d = parse(text)
        assert parse(render(d)) == d
        assert render(parse(render(d))) == render(d)


def _table_text(A):
    names = {s: f"q{k}" for k, s in enumerate(sorted(A.states, key=repr))}
    lines = [f"alphabet {' '.join(A.alphabet)};", "automaton R {",
             f"  sig in({' '.join(sorted(A.inputs))}) out({' '.join(sorted(A.outputs))});"]
    for s, n in names.items():
        lines.append(f"  state {n}{' start' if s == A.start else ''};")
    for t in A.transitions:
        ins = " ".join(f"{c}:<{','.join(t.action[c])}>" for c in sorted(A.inputs))
        outs = " ".join(f"{c}:<{','.join(t.action[c])}>" for c in sorted(A.outputs))
        lines.append(f"  trans {names[t.source]} -> {names[t.target]} on {ins} out {outs};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_round_trip_random_tables(seed):
    A = random_automaton(seed, ("i", "j"), ("o",))
    d = parse(_table_text(A))
    assert parse(render(d)) == d
    B = Elaboration(d, compose).build(d.net())
    assert behaviors(B, 2) == behaviors(A, 2)


# -- commands --------------------------------------------------------------------------------

def test_check_command(capsys, netfile):
    code, out, _ = cli(capsys, "check", netfile(FMBUF), "--machine")
    assert code == 0
    assert "FM: signature ({a}, {i,j}, {o}, {})" in out
    assert "strongly pulse-driven: no" in out
    m = machine_block(out)
    assert m["status"] == "ok" and m["BUF.strong"] == "yes"


def test_check_reports_non_reactive(capsys, netfile):
    text = "alphabet a;\nautomaton P {\n sig in(i) out(o);\n state s start;\n trans s -> s on i:<a> out o:<a>;\n}\n"
    code, out, _ = cli(capsys, "check", netfile(text))
    assert code == 1
    assert "reactive: NO at state=s input=i:<>" in out


def test_compose_command(capsys, netfile):
    code, out, _ = cli(capsys, "compose", netfile(FMBUF), "--machine")
    assert code == 0
    assert "WELL-DEFINED via J empty" in out
    m = machine_block(out)
    assert m["signature"] == "({a}, {j,x}, {i,o}, {})" and m["transitions"] == "8"


def test_compose_blocking_pair(capsys, netfile):
    code, out, _ = cli(capsys, "compose", netfile(BLOCKING), "--machine")
    assert code == 1
    assert "EMPTY-COMPOSITION at state=(s1,s2)" in out
    assert machine_block(out)["status"] == "witness"


def test_run_trace_is_an_execution(capsys, netfile):
    path = netfile(FMBUF)
    code, out, _ = cli(capsys, "run", path, "--seed", "3")
    assert code == 0
    d = parse(FMBUF)
    A = Elaboration(d, compose).build(d.net())
    trace = [line for line in out.splitlines() if line.startswith("t=")]
    assert len(trace) == 2
    acts = parse_history("\n".join(line.replace(line.split()[1] + " ", "", 1) for line in trace))
    assert acts.project(A.inputs) == Elaboration(d, compose).script_history(A)
    assert any(is_execution(A, e) for e in _executions_with(A, acts))


def _executions_with(A, acts):
    from tpanet.automata import executions
    return [e for e in executions(A, len(acts)) if e.actions == acts]


def test_run_is_deterministic(capsys, netfile):
    text = "alphabet a b;\nbuiltin FM = fair_merge;\ninput { t0 i:<a> j:<b>; t1 i:<b> j:<a>; }\n"
    path = netfile(text)
    first = cli(capsys, "run", path, "--seed", "1", "--machine")
    second = cli(capsys, "run", path, "--seed", "1", "--machine")
    assert first == second and first[0] == 0


def test_run_without_script_is_usage_error(capsys, netfile):
    code, _, err = cli(capsys, "run", netfile(BLOCKING.replace("net N = A (x) B;\n", "")))
    assert code == 2 and "input script" in err


def test_behaviors_command(capsys, netfile):
    code, out, _ = cli(capsys, "behaviors", netfile(FMBUF), "-T", "2")
    assert code == 0
    assert out.startswith("# 16 behaviors at T=2")
    blocks = out.split("# behavior ")[1:]
    texts = [b.split("\n", 1)[1].strip() for b in blocks]
    parsed = [parse_history(t) for t in texts]
    assert len(parsed) == 16 and parsed == sorted(parsed)
    d = parse(FMBUF)
    A = Elaboration(d, compose).build(d.net())
    assert {parse_history(t) for t in texts} == behaviors(A, 2)


def test_behaviors_budget_exit(capsys, netfile):
    code, _, err = cli(capsys, "behaviors", netfile(FMBUF), "--budget", "3", "--machine")
    assert code == 3


def test_equiv_command(capsys, netfile):
    code, out, _ = cli(capsys, "equiv", netfile(FMBUF), "--machine")
    assert code == 0 and out.startswith("EQUIVALENT at T=2")
    assert machine_block(out)["mode"] == "exhaustive"


def test_equiv_needs_composition(capsys, netfile):
    code, _, _ = cli(capsys, "equiv", netfile("alphabet a;\nbuiltin FM = fair_merge;\n"))
    assert code == 2


def test_dist_command(capsys, netfile):
    a = netfile("t=0 i:<a>\nt=1 i:<>\nt=2 i:<>\n", "a.trace")
    b = netfile("t=0 i:<a>\nt=1 i:<a>\nt=2 i:<>\n", "b.trace")
    code, out, _ = cli(capsys, "dist", a, b, "--machine")
    assert code == 0 and "2^-1" in out
    code, out, _ = cli(capsys, "dist", a, a)
    assert code == 0 and "<=2^-3" in out


def test_usage_errors(capsys, netfile, tmp_path):
    code, _, err = cli(capsys, "check", str(tmp_path / "missing.net"))
    assert code == 2
    code, _, err = cli(capsys, "check", netfile("alphabet a;\nnet N = FM;\n"), "--machine")
    assert code == 2 and "line 2, col 9" in err
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "x"])
    assert exc.value.code == 2


def test_verdicts_are_stable(netfile):
    path = netfile(FMBUF)
    for cmd in ("check", "compose", "behaviors", "equiv"):
        v1, _ = run([cmd, path])
        v2, _ = run([cmd, path])
        assert v1.text == v2.text and v1.machine() == v2.machine()
