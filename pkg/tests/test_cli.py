import io
import json
import subprocess
import sys

import pytest

from jsjtri.cli import run
from jsjtri.triangulation import read_triangulation


def call(argv, stdin: str = "", monkeypatch=None, capsys=None):
    if monkeypatch is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_block(capsys):
    code, out, _ = call(["block", "3"], capsys=capsys)
    assert code == 0
    assert read_triangulation(out).size == 33


def test_block_boundary_sidecar(tmp_path, capsys):
    side = tmp_path / "b.json"
    code, _, _ = call(["block", "2", "-o", str(tmp_path / "b.tri"), "--boundary", str(side)], capsys=capsys)
    doc = json.loads(side.read_text())
    assert code == 0 and doc["k"] == 2 and len(doc["boundary"]) == 2
    assert doc["fiber_slope"] == [0, 1]


def test_grid_width_pipe(monkeypatch, capsys):
    _, graph, _ = call(["gen-graph", "grid", "3"], capsys=capsys)
    code, out, _ = call(["width", "--exact"], stdin=graph, monkeypatch=monkeypatch, capsys=capsys)
    assert code == 0 and out.strip() == "tw=3 pw=3"


def test_build_and_verify(tmp_path, capsys):
    g = tmp_path / "p2.graph"
    g.write_text("0 1\n")
    tri = tmp_path / "p2.tri"
    assert call(["build", str(g), "-o", str(tri)], capsys=capsys)[0] == 0
    meta = tmp_path / "p2.tri.meta.json"
    assert meta.exists()
    code, out, _ = call(["verify", str(g), str(tri), str(meta)], capsys=capsys)
    assert code == 0 and "overall: PASS" in out
    code, out, _ = call(["verify", str(g), str(tri), str(meta), "--json"], capsys=capsys)
    assert json.loads(out)["passed"]


def test_verify_failure_exit_code(tmp_path, capsys):
    g = tmp_path / "c3.graph"
    g.write_text("0 1\n1 2\n2 0\n")
    other = tmp_path / "p3.graph"
    other.write_text("0 1\n1 2\n")
    tri = tmp_path / "c3.tri"
    call(["build", str(g), "-o", str(tri)], capsys=capsys)
    code, out, _ = call(["verify", str(other), str(tri), str(tri) + ".meta.json"], capsys=capsys)
    assert code == 2 and "[FAIL]" in out
    mismatched = tmp_path / "one.tri"
    call(["block", "1", "-o", str(mismatched)], capsys=capsys)
    code, _, err = call(["verify", str(g), str(mismatched), str(tri) + ".meta.json"], capsys=capsys)
    assert code == 2 and "verification failed" in err


def test_deterministic_output(tmp_path, capsys):
    g = tmp_path / "g.graph"
    g.write_text("0 1\n1 1\n")
    outs = []
    for name in ("a", "b"):
        path = tmp_path / f"{name}.tri"
        call(["build", str(g), "-o", str(path), "--seed", "3"], capsys=capsys)
        outs.append((path.read_bytes(), (tmp_path / f"{name}.tri.meta.json").read_bytes()))
    assert outs[0] == outs[1]


def test_export_round_trip(tmp_path, capsys):
    path = tmp_path / "b.tri"
    call(["block", "1", "-o", str(path)], capsys=capsys)
    code, out, _ = call(["export", str(path)], capsys=capsys)
    assert code == 0 and out == path.read_text()
    code, out, _ = call(["export", str(path), "--dual"], capsys=capsys)
    assert out.startswith("p 15\n")


def test_width_bounds_on_triangulation(tmp_path, capsys):
    path = tmp_path / "b.tri"
    call(["block", "2", "-o", str(path)], capsys=capsys)
    code, out, _ = call(["width", str(path), "--bounds"], capsys=capsys)
    assert code == 0 and out.startswith("tw>=")


@pytest.mark.parametrize("argv", [["block", "0"], ["nope"], ["block"], ["gen-graph", "grid", "x"],
                                  ["build", "/nonexistent/graph"], ["width", "--exact", "/nonexistent"]])
def test_usage_errors(argv, capsys):
    code, _, err = call(argv, capsys=capsys)
    assert code == 1 and err


def test_width_over_budget(tmp_path, capsys):
    path = tmp_path / "big.graph"
    path.write_text("".join(f"{i} {i + 1}\n" for i in range(40)))
    code, _, err = call(["width", str(path)], capsys=capsys)
    assert code == 1 and "--bounds" in err


def test_build_rejects_isolated_node(tmp_path, capsys):
    path = tmp_path / "g.graph"
    path.write_text("p 3\n0 1\n")
    code, _, err = call(["build", str(path)], capsys=capsys)
    assert code == 1 and "degree 0" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jsjtri", "block", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("tri 15\n")
