import random
import re

import pytest

from arclapcs.arcseq import serialize
from arclapcs.cli import main
from arclapcs.witness import parse_certificate

from conftest import EXAMPLE_CNF, UNSAT_CNF, random_sequence


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write


@pytest.fixture
def example_dir(tmp_path, files, capsys):
    cnf = files("example.cnf", EXAMPLE_CNF)
    out = tmp_path / "inst"
    assert run(capsys, "reduce", cnf, "--out-dir", out)[0] == 0
    return cnf, out


def test_classify(files, capsys, example_dir):
    assert run(capsys, "classify", files("p.aas", "seq: a b c\n")) == (0, "PLAIN\n", "")
    assert run(capsys, "classify", example_dir[1] / "s1.aas")[1] == "STEM\n"
    code, _, err = run(capsys, "classify", files("bad.aas", "seq: a b\narc: 1 9\n"))
    assert code == 2 and "line 2" in err


def test_occurs(files, capsys, tmp_path):
    s = files("s.aas", "seq: a b c\narc: 1 3\n")
    assert run(capsys, "occurs", s, s) == (0, "map: 1 2 3\n", "")
    plain = files("plain.aas", "seq: a b\n")
    arced = files("arced.aas", "seq: a b\narc: 1 2\n")
    assert run(capsys, "occurs", arced, plain) == (1, "no\n", "")
    assert run(capsys, "occurs", tmp_path / "missing.aas", s)[0] == 2


def _length(out):
    return int(re.search(r"^length: (\d+)$", out, re.M).group(1))


def test_lapcs_identical_inputs(files, capsys):
    s = files("s.aas", "seq: a b c a\narc: 1 4\n")
    code, out, _ = run(capsys, "lapcs", s, s, "--solver", "bf")
    assert code == 0 and _length(out) == 4 and "optimal: true" in out


def test_lapcs_solvers_agree(files, capsys):
    rng = random.Random(12)
    for i in range(15):
        a = files(f"a{i}.aas", serialize(random_sequence(rng, 8, "abc")))
        b = files(f"b{i}.aas", serialize(random_sequence(rng, 8, "abc")))
        lengths = set()
        for solver in ("bf", "param", "bnb"):
            code, out, _ = run(capsys, "lapcs", a, b, "--solver", solver)
            assert code == 0
            lengths.add(_length(out))
        assert len(lengths) == 1


def test_lapcs_decisions(files, capsys):
    a = files("a.aas", "seq: a b\narc: 1 2\n")
    b = files("b.aas", "seq: a b\n")
    for solver in ("bf", "param", "bnb"):
        assert run(capsys, "lapcs", a, b, "--solver", solver, "--k", 0)[0] == 0
        code, out, _ = run(capsys, "lapcs", a, b, "--solver", solver, "--k", 2)
        assert code == 1 and out.startswith("NO")
        code, out, _ = run(capsys, "lapcs", a, b, "--solver", solver, "--k", 1)
        assert code == 0 and out.startswith("YES")


def test_lapcs_guard_and_budget(files, capsys):
    long = files("long.aas", "seq: " + " ".join("ab" * 10) + "\n")
    code, _, err = run(capsys, "lapcs", long, long, "--solver", "bf")
    assert code == 2 and "error:" in err
    rng = random.Random(8)
    a = files("a.aas", serialize(random_sequence(rng, 60, "ab", min_len=60)))
    b = files("b.aas", serialize(random_sequence(rng, 60, "ab", min_len=60)))
    code, out, _ = run(capsys, "lapcs", a, b, "--node-limit", 30)
    assert code == 3 and "optimal: false" in out
    assert run(capsys, "lapcs", a, b, "--node-limit", 0)[0] == 2


def test_reduce_running_example(capsys, example_dir):
    _, out_dir = example_dir
    assert "kprime: 2020" in (out_dir / "meta.txt").read_text()
    s1 = (out_dir / "s1.aas").read_text().splitlines()[0]
    assert len(s1.split()) - 1 == 2126
    code, out, _ = run(capsys, "audit", out_dir)
    assert code == 0 and "FAIL" not in out


def test_reduce_rejects_two_literal_clause(files, capsys, tmp_path):
    cnf = files("bad.cnf", "p cnf 3 1\n1 2 0\n")
    code, _, err = run(capsys, "reduce", cnf, "--out-dir", tmp_path / "o")
    assert code == 2 and "literals" in err


def test_reduce_with_small_padding_warns(files, capsys, tmp_path):
    cnf = files("one.cnf", "p cnf 3 1\n1 2 -3 0\n")
    code, out, _ = run(capsys, "reduce", cnf, "--out-dir", tmp_path / "o", "--padding", 10)
    assert code == 0 and out.startswith("warning:")
    assert (tmp_path / "o" / "s2.aas").exists()


def test_witness_commands(files, capsys, tmp_path):
    cnf = files("example.cnf", EXAMPLE_CNF)
    cert = tmp_path / "cert.txt"
    code, out, _ = run(capsys, "witness", cnf, "--assignment", "1,-2,3,-4", "--out", cert)
    assert code == 0 and "length: 2020" in out
    assert parse_certificate(cert.read_text()).length == 2020
    code, out, _ = run(capsys, "witness", files("unsat.cnf", UNSAT_CNF), "--solve")
    assert (code, out) == (1, "UNSAT\n")
    assert run(capsys, "witness", cnf, "--assignment", "-1,-2,3,-4")[0] == 2
    assert run(capsys, "witness", cnf, "--solve", "--out", tmp_path / "c2.txt")[0] == 0


def test_verify_commands(files, capsys, tmp_path, example_dir):
    cnf, out_dir = example_dir
    cert_path = tmp_path / "cert.txt"
    run(capsys, "witness", cnf, "--assignment", "1,-2,3,-4", "--out", cert_path)
    code, out, _ = run(capsys, "verify", out_dir, cert_path)
    assert code == 0 and out.count("PASS") == len(out.splitlines())

    cert = parse_certificate(cert_path.read_text())
    provenance = (out_dir / "provenance.txt").read_text().splitlines()
    pad = next(int(line.split()[0]) for line in provenance if line.endswith(" W_1"))
    deleted = tuple(sorted(set(cert.deleted1) | {pad}))
    mutated = cert_path.read_text().replace(
        "del1: " + " ".join(map(str, cert.deleted1)), "del1: " + " ".join(map(str, deleted))
    )
    bad = files("bad.txt", mutated)
    code, out, _ = run(capsys, "verify", out_dir, bad)
    assert code == 1 and "CHECK padding_conserved: FAIL" in out
    assert run(capsys, "verify", out_dir, tmp_path / "nope.txt")[0] == 2
    assert run(capsys, "verify", tmp_path / "nodir", cert_path)[0] == 2


def test_commands_are_deterministic(files, capsys, tmp_path):
    cnf = files("example.cnf", EXAMPLE_CNF)
    first = run(capsys, "reduce", cnf, "--out-dir", tmp_path / "a")
    second = run(capsys, "reduce", cnf, "--out-dir", tmp_path / "b")
    assert first == second
    for name in ("s1.aas", "s2.aas", "meta.txt", "provenance.txt", "instance.cnf"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    w1 = run(capsys, "witness", cnf, "--solve")
    w2 = run(capsys, "witness", cnf, "--solve")
    assert w1 == w2 and w1[0] == 0
