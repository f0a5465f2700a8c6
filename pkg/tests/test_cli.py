from __future__ import annotations

import json

import pytest

from zykovsat import bench
from zykovsat.cli import main
from zykovsat.graph_io import complete_graph, cycle_graph, erdos_renyi, petersen_graph, write_dimacs


def put(tmp_path, name, g):
    path = tmp_path / name
    path.write_text(write_dimacs(g))
    return str(path)


def test_solve_petersen(tmp_path, capsys):
    path = put(tmp_path, "pet.col", petersen_graph())
    assert main(["solve", path, "--print-coloring"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "chromatic number: 3"
    assert out[1] == "bounds: 3 3"
    colors = [line.split() for line in out if line.startswith("v ")]
    assert len(colors) == 10 and {c[2] for c in colors} == {"1", "2", "3"}


@pytest.mark.parametrize("mode", ["zykov", "assignment", "full", "transitivity-only"])
def test_solve_modes_json(tmp_path, capsys, mode):
    path = put(tmp_path, "c5.col", cycle_graph(5))
    assert main(["solve", path, "--mode", mode, "--stats-json", "--debug"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "chromatic number: 3"
    stats = json.loads(out[-1])
    assert stats["n"] == 5 and "conflicts" in stats


def test_decide_exit_codes(tmp_path, capsys):
    path = put(tmp_path, "c5.col", cycle_graph(5))
    assert main(["decide", path, "--k", "2"]) == 20
    assert main(["decide", path, "--k", "3", "--print-coloring"]) == 10
    out = capsys.readouterr().out
    assert "UNSAT" in out and "SAT" in out
    assert main(["decide", path, "--k", "0"]) == 2


def test_decide_dump_cnf(tmp_path):
    path = put(tmp_path, "k4.col", complete_graph(4))
    for mode in ("assignment", "full"):
        cnf = tmp_path / f"{mode}.cnf"
        assert main(["decide", path, "--k", "3", "--mode", mode, "--dump-cnf", str(cnf)]) == 20
        header = [l for l in cnf.read_text().splitlines() if l.startswith("p cnf")]
        assert len(header) == 1


def test_timeout_exit(tmp_path, capsys):
    path = put(tmp_path, "er.col", erdos_renyi(45, 0.5, 1))
    assert main(["solve", path, "--mode", "full", "--conflict-limit", "20"]) == 30
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "timeout" and out[1].startswith("bounds: ")


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 3 1\ne 1\n")
    assert main(["solve", str(bad)]) == 2
    assert main(["solve", str(tmp_path / "missing.col")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", str(bad), "--mode", "nope"])
    assert exc.value.code == 2
    assert main(["bench", "--dir", str(tmp_path / "nodir"), "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["bench", "--n", "6", "--seeds", "1", "--configs", "zykov+bogus",
                 "--out", str(tmp_path / "y.csv")]) == 2
    capsys.readouterr()


def test_generate_roundtrip(tmp_path, capsys):
    out = tmp_path / "g.col"
    assert main(["generate", "--n", "10", "--p", "0.5", "--seed", "7", "-o", str(out)]) == 0
    assert main(["solve", str(out)]) == 0
    assert capsys.readouterr().out.startswith("chromatic number:")


def test_bench_deterministic(tmp_path, capsys):
    args = ["bench", "--n", "8..10", "--p", "0.3,0.6", "--seeds", "2",
            "--configs", "modes", "--conflict-limit", "100000"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    summary = tmp_path / "s.csv"
    assert main(args + ["--out", str(a), "--summary", str(summary)]) == 0
    assert main(args + ["--out", str(b), "--jobs", "2"]) == 0
    ra, rb = bench.read_rows(a), bench.read_rows(b)
    assert len(ra) == 3 * 2 * 2 * 4
    assert bench.strip_time(ra) == bench.strip_time(rb)
    assert list(ra[0]) == bench.COLUMNS
    assert all(r["outcome"] == "solved" and r["schema_version"] == "1" for r in ra)
    srows = bench.read_rows(summary)
    assert {r["mode"] for r in srows} == set(bench.PRESETS["modes"])
    assert all(r["solved"] == "12" for r in srows)
    capsys.readouterr()


def test_bench_empty_dir_and_append(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    out = tmp_path / "r.csv"
    assert main(["bench", "--dir", str(empty), "--out", str(out)]) == 0
    assert out.read_text().splitlines() == [",".join(bench.COLUMNS)]
    inst = tmp_path / "inst"
    inst.mkdir()
    put(inst, "c5.col", cycle_graph(5))
    (inst / "broken.col").write_text("p edge x\n")
    assert main(["bench", "--dir", str(inst), "--out", str(out)]) == 0
    assert main(["bench", "--dir", str(inst), "--out", str(out)]) == 0
    rows = bench.read_rows(out)
    assert len(rows) == 4
    assert [r["outcome"] for r in rows] == ["error", "solved"] * 2
    assert out.read_text().count("schema_version") == 1
    capsys.readouterr()


def test_config_spec_parsing():
    cfg = bench.config_from_spec("zykov+top-down+no-mnts")
    assert cfg.search == "top-down" and not cfg.mnts
    assert bench.config_from_spec("zykov+default").flags() == "default"
    assert bench.parse_int_spec("70..110:10") == [70, 80, 90, 100, 110]
    assert bench.parse_int_spec("6..8,12") == [6, 7, 8, 12]
    assert len(bench.er_instances([70], [0.1, 0.2], 3)) == 6
