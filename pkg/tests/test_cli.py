import random
import subprocess
import sys

import pytest

from conftest import complete, complete_bipartite, prism, random_perm
from genusiso.cli import main
from genusiso.embedding import min_euler_genus
from genusiso.fixtures import flip_torus


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj.to_text())
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_iso_identical(files, capsys):
    a = files("a.txt", complete(5))
    code, out, _ = run(capsys, "iso", a, a)
    assert code == 0 and out.startswith("isomorphic")


def test_iso_k33_prism(files, capsys):
    code, out, _ = run(capsys, "iso", files("a", complete_bipartite(3, 3)), files("b", prism()))
    assert code == 1 and out == "not isomorphic\n"


def test_iso_witness_lines(files, capsys):
    g = prism()
    h = g.relabel(random_perm(6, random.Random(1)))
    code, out, _ = run(capsys, "iso", files("a", g), files("b", h), "--witness")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 7 and lines[1].startswith("0 -> ")


def test_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("graph 2 1\n0 x\n")
    code, _, err = run(capsys, "iso", str(bad), str(bad))
    assert code == 2 and "line 2" in err


def test_missing_file_and_bad_flags(tmp_path, capsys):
    assert run(capsys, "iso", str(tmp_path / "nope"), str(tmp_path / "nope"))[0] == 2
    assert run(capsys, "iso", "--bogus")[0] == 2
    assert run(capsys, "genus", "x", "--budget", "0")[0] == 2


def test_genus_k5(files, capsys):
    code, out, _ = run(capsys, "genus", files("k5", complete(5)))
    assert code == 0 and out == "euler-genus 1\n"


def test_genus_over_bound(files, capsys):
    code, out, _ = run(capsys, "genus", files("k6", complete(6)), "--max-genus", "0")
    assert code == 1 and out == "euler-genus > 0\n"


def test_facewidth_k6(files, capsys):
    m = min_euler_genus(complete(6), 1)[1]
    code, out, _ = run(capsys, "facewidth", files("k6map", m))
    assert code == 0 and out == "3\n"


def test_embed_then_facewidth(files, capsys, tmp_path):
    code, out, _ = run(capsys, "embed", files("k5", complete(5)))
    assert code == 0 and out.startswith("map 5 10")
    p = tmp_path / "m.txt"
    p.write_text(out)
    assert run(capsys, "facewidth", str(p))[1] in ("1\n", "2\n", "3\n")


def test_canon_is_relabel_invariant(files, capsys):
    g = flip_torus(1)
    h = g.relabel(random_perm(g.n, random.Random(3)))
    _, a, _ = run(capsys, "canon", files("a", g))
    _, b, _ = run(capsys, "canon", files("b", h))
    assert a == b and all(ch in "0123456789abcdef" for ch in a.strip())


def test_canon_map_modes(files, capsys):
    m = min_euler_genus(complete(5), 1)[1]
    f = files("m", m)
    _, free, _ = run(capsys, "canon", f)
    _, oriented, _ = run(capsys, "canon", f, "--mode", "oriented")
    assert free.strip() and oriented.strip()


def test_decompose_dump(files, capsys):
    code, out, _ = run(capsys, "decompose", files("t", flip_torus(1)), "--code")
    assert code == 0
    assert out.splitlines()[0].startswith("tree triconnected")
    assert any(line.startswith("adh ") for line in out.splitlines())
    assert out.splitlines()[-1].startswith("code ")


def test_oracle_command(files, capsys):
    code, out, _ = run(capsys, "oracle", files("a", complete_bipartite(3, 3)), files("b", prism()))
    assert code == 1 and out == "not isomorphic\n"


def test_gen_figa_then_iso(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "figa", "--k", "2")
    assert code == 0
    from genusiso.graph import parse_graph

    g = parse_graph(out)
    a, b = tmp_path / "a", tmp_path / "b"
    a.write_text(out)
    b.write_text(g.relabel(random_perm(g.n, random.Random(7))).to_text())
    assert run(capsys, "iso", str(a), str(b))[0] == 0


@pytest.mark.parametrize("family", ["figa", "fige", "algotorus", "fw1", "mobius", "triangulation", "crosscap"])
def test_gen_families_parse(capsys, family):
    code, out, _ = run(capsys, "gen", family)
    assert code == 0 and out.startswith("graph ")


def test_gen_bad_parameter(capsys):
    assert run(capsys, "gen", "algotorus", "--L", "2")[0] == 2


def test_output_is_byte_identical(files):
    f = files("g", flip_torus(1))
    cmd = [sys.executable, "-m", "genusiso.cli", "iso", f, f, "--witness", "--trace"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
