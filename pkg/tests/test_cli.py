import json
import subprocess
import sys

import pytest

from cgmeek.cli import main
from cgmeek.io import parse_graph, parse_trace
from cgmeek.meek import verify_trace

COLLIDER = "A -> B\nB -- C\nD -> C\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestValidate:
    def test_chain_graph(self, capsys, files):
        code, out, _ = run(capsys, "validate", files("g.txt", "A -> B\nB -- C\n"))
        assert code == 0
        assert "components: {A} {B,C}" in out
        assert "chain: {A} {B,C}" in out

    def test_opposite_arcs(self, capsys, files):
        code, _, err = run(capsys, "validate", files("g.txt", "A -> B\nB -> A\n"))
        assert code == 1 and "line 2" in err

    def test_empty_file(self, capsys, files):
        code, out, _ = run(capsys, "validate", files("g.txt", ""))
        assert code == 0 and "chain graph: yes" in out

    def test_not_a_chain_graph(self, capsys, files):
        code, out, _ = run(capsys, "validate", files("g.txt", "A -> B\nB -- C\nC -> A\n"))
        assert code == 1 and "chain graph: no" in out

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "validate", tmp_path / "nope.txt")
        assert code == 1 and "error" in err


@pytest.mark.parametrize(
    "graph, x, y, z, expected",
    [
        (COLLIDER, "A", "D", "", "true"),
        ("A -- B\n", "A", "B", "", "false"),
        (COLLIDER, "A", "D", "B", "false"),
    ],
)
@pytest.mark.parametrize("oracle", ["reach", "brute", "moral", "all"])
def test_separate(capsys, files, graph, x, y, z, expected, oracle):
    code, out, _ = run(capsys, "separate", files("g.txt", graph), "--x", x, "--y", y, "--z", z, "--oracle", oracle)
    assert code == 0 and out.strip() == expected


def test_separate_engine_disagreement(capsys, files, monkeypatch):
    from cgmeek import cli

    monkeypatch.setitem(cli.ENGINES, "moral", lambda *a: False)
    code, _, err = run(capsys, "separate", files("g.txt", COLLIDER), "--x", "A", "--y", "D", "--oracle", "all")
    assert code == 2 and "disagree" in err


def test_components_and_model(capsys, files):
    path = files("g.txt", COLLIDER)
    assert run(capsys, "components", path)[1] == "A\nB C\nD\n"
    assert run(capsys, "model", path)[1] == "A ; C | B D\nA ; D |\nB ; D | A C\n"


def test_model_bound(capsys, files):
    code, _, err = run(capsys, "model", files("g.txt", COLLIDER), "--max-nodes", "3")
    assert code == 1 and "4 nodes" in err


class TestImapCheck:
    def test_self(self, capsys, files):
        p = files("g.txt", COLLIDER)
        assert run(capsys, "imap-check", p, p)[1].strip() == "true"

    def test_against_model(self, capsys, files):
        h = files("h.txt", "node A\nnode B\n")
        m = files("m.txt", "A ; B |\n")
        assert run(capsys, "imap-check", h, "--model", m)[1].strip() == "true"
        m2 = files("m2.txt", "")
        assert run(capsys, "imap-check", h, "--model", m2)[1].strip() == "false"

    def test_needs_second_argument(self, capsys, files):
        assert run(capsys, "imap-check", files("h.txt", "node A\n"))[0] == 1


def test_fbsplit_writes_graph_and_ops(capsys, files, tmp_path):
    out, ops = tmp_path / "out.txt", tmp_path / "ops.jsonl"
    code, _, _ = run(capsys, "fbsplit", files("g.txt", "A -- B\nB -- C\n"), "--block", "A,B,C", "--part", "B",
                     "--out", out, "--trace", ops)
    assert code == 0
    assert parse_graph(out.read_text()) == parse_graph("A -- C\nA -> B\nC -> B\n")
    kinds = [json.loads(line)["kind"] for line in ops.read_text().splitlines()]
    assert kinds == ["add-undirected", "split"]


def test_fbmerge(capsys, files):
    code, out, _ = run(capsys, "fbmerge", files("g.txt", "A -> B\n"), "--left", "A", "--right", "B")
    assert code == 0 and parse_graph(out) == parse_graph("A -- B\n")


def test_fbsplit_bad_block(capsys, files):
    code, _, err = run(capsys, "fbsplit", files("g.txt", "A -> B\n"), "--block", "A,B", "--part", "A")
    assert code == 1 and "not a block" in err


def test_b3(capsys, files, tmp_path):
    trace = tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "b3", files("g.txt", "A -- B\n"), files("c.txt", "A\nB\n"), "--trace", trace)
    assert code == 0 and parse_graph(out) == parse_graph("A -> B\n")
    assert parse_trace(trace.read_text()).final == parse_graph("A -> B\n")


def test_g2h_then_verify(capsys, files, tmp_path):
    trace = tmp_path / "t.jsonl"
    h = files("h.txt", "A -- B\n")
    code, _, _ = run(capsys, "g2h", files("g.txt", "A -> B\n"), h, "--trace", trace)
    assert code == 0
    recs = [json.loads(line) for line in trace.read_text().splitlines()]
    assert [r["kind"] for r in recs if r["type"] == "op"] == ["merge"]
    code, out, _ = run(capsys, "verify-trace", trace, h)
    assert code == 0 and out.strip() == "valid"


def test_g2h_not_imap(capsys, files):
    code, _, err = run(capsys, "g2h", files("g.txt", "A -> B\n"), files("h.txt", "node A\nnode B\n"))
    assert code == 1 and "not an independence map" in err


def test_verify_trace_invalid(capsys, files, tmp_path):
    trace = tmp_path / "t.jsonl"
    run(capsys, "g2h", files("g.txt", "A -> B\n"), files("h.txt", "A -- B\n"), "--trace", trace)
    code, out, _ = run(capsys, "verify-trace", trace, files("h2.txt", "A -> B\n"))
    assert code == 1 and "at" in out


def test_verify_trace_corrupt(capsys, files):
    code, _, err = run(capsys, "verify-trace", files("t.jsonl", "garbage\n"), files("h.txt", "A -> B\n"))
    assert code == 1 and "JSON" in err


class TestMimap:
    def test_from_model(self, capsys, files):
        code, out, _ = run(capsys, "mimap", files("c.txt", "A\nB\n"), "--model", files("m.txt", "A ; B |\n"))
        assert code == 0 and parse_graph(out) == parse_graph("node A\nnode B\n")

    def test_from_graph(self, capsys, files):
        code, out, _ = run(capsys, "mimap", files("c.txt", "A\nD\nB C\n"), "--graph", files("g.txt", COLLIDER),
                           "--workers", "2")
        assert code == 0 and parse_graph(out) == parse_graph(COLLIDER)

    def test_not_graphoid(self, capsys, files):
        code, _, err = run(capsys, "mimap", files("c.txt", "A\nB\nC\n"),
                           "--model", files("m.txt", "B ; C | A\nA ; C | B\n"))
        assert code == 1 and "graphoid" in err


class TestRandom:
    def test_single_node(self, capsys):
        assert run(capsys, "random", "--seed", "1", "-n", "1")[1] == "node A\n"

    def test_deterministic(self, capsys):
        a = run(capsys, "random", "--seed", "42", "-n", "5", "--kind", "imap-pair")[1]
        b = run(capsys, "random", "--seed", "42", "-n", "5", "--kind", "imap-pair")[1]
        assert a == b and "# H" in a

    def test_pair_to_directory(self, capsys, tmp_path):
        from cgmeek.separation import is_imap

        code, _, _ = run(capsys, "random", "--seed", "9", "-n", "4", "--kind", "imap-pair", "--out", tmp_path / "pair")
        assert code == 0
        G = parse_graph((tmp_path / "pair" / "G.txt").read_text())
        H = parse_graph((tmp_path / "pair" / "H.txt").read_text())
        assert is_imap(H, G)

    @pytest.mark.parametrize("argv", [["--seed", "-1", "-n", "2"], ["--seed", str(2**64), "-n", "2"], ["-n", "0"]])
    def test_rejects_bad_arguments(self, capsys, argv):
        with pytest.raises(SystemExit) as info:
            main(["random", *argv])
        assert info.value.code == 2


def test_no_partial_output_on_error(capsys, files, tmp_path):
    out = tmp_path / "out.txt"
    out.write_text("previous\n")
    code, _, _ = run(capsys, "fbmerge", files("g.txt", "A -> B\n"), "--left", "B", "--right", "A", "--out", out)
    assert code == 1
    assert out.read_text() == "previous\n"
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".")] == []


def test_module_entry_point(files, tmp_path):
    g, h, trace = files("g.txt", "A -> B\n"), files("h.txt", "A -- B\n"), tmp_path / "t.jsonl"
    subprocess.run([sys.executable, "-m", "cgmeek", "g2h", g, h, "--trace", str(trace)], check=True,
                   capture_output=True)
    res = subprocess.run([sys.executable, "-m", "cgmeek", "verify-trace", str(trace), h], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "valid"
    assert verify_trace(parse_trace(trace.read_text()), parse_graph("A -- B\n")).valid
