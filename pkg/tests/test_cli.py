import io
import json
import subprocess
import sys

import pytest

from k3lattice import cli
from k3lattice.selftest import GOLDEN_N

V6 = "3,1,0,0,0,0,0,0"


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_qp_json(capsys, tmp_path):
    code, out, _ = run(["qp", "--g", "6", "--v", V6, "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    d = json.loads(out)
    assert list(d) == ["g", "v_chart", "v_basis", "gram_K", "r", "k", "n", "root_type", "is_cusp", "disc_order", "crosscheck"]
    assert (d["r"], d["n"], d["root_type"]) == (60, 23, "D6")
    assert d["crosscheck"] == {"theta_over_delta_q0": 84, "two_k": 84, "passed": True}
    assert (tmp_path / "shells.json").exists()


def test_qp_half_integer_input(capsys):
    code, out, _ = run(["qp", "--g", "5", "--v", "5/2,1/2,1/2,1/2,1/2,1/2,1/2,1/2"], capsys)
    assert code == 0 and json.loads(out)["root_type"] == "A7"


@pytest.mark.parametrize("argv,code,needle", [
    (["qp", "--g", "6", "--v", "2,0,0,0,0,0,0,0"], 2, "wrong norm"),
    (["qp", "--g", "6"], 2, "needs --g and --v"),
    (["qp", "--g", "2", "--v", "1,1,0"], 2, "8 entries"),
    (["orbits"], 2, "needs --g"),
    (["qp", "--g", "6", "--v", V6, "--budget", "5"], 3, "budget"),
    (["search", "--g", "40"], 3, "budget"),
])
def test_exit_codes(capsys, argv, code, needle):
    got, _, err = run(argv, capsys)
    assert got == code
    assert needle in err


def test_table_json_round_trip_is_byte_identical(capsys):
    code, out, _ = run(["table", "--threads", "4"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert [r["n"] for r in rows] == [GOLDEN_N[g] for g in range(2, 23)]
    assert cli.dumps(rows) + "\n" == out
    code, out1, _ = run(["table", "--threads", "1"], capsys)
    assert out1 == out


def test_table_markdown(capsys):
    code, out, _ = run(["table", "--format", "markdown"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("| g | 2 | 3 |")
    assert lines[2] == "| n(g) | " + " | ".join(str(GOLDEN_N[g]) for g in range(2, 23)) + " |"


def test_heegner_and_orbits(capsys):
    code, out, _ = run(["heegner", "--g", "3", "--v", "2,0,0,0,0,0,0,0"], capsys)
    d = json.loads(out)
    assert code == 0 and d["entries"] == [{"lambda": [2], "q_lambda": "1/2", "x": "-1/2", "multiplicity": 14}]
    code, out, _ = run(["heegner", "--g", "2", "--v", "1,1,0,0,0,0,0,0", "--side", "Lambda"], capsys)
    assert json.loads(out)["entries"][0]["multiplicity"] == 56
    code, out, _ = run(["orbits", "--g", "6"], capsys)
    assert json.loads(out) == {"g": 6, "divisibilities": [1, 2], "count": 2}
    code, out, _ = run(["orbits", "--g", "7", "--format", "markdown"], capsys)
    assert "| count | 1 |" in out


def test_search(capsys):
    code, out, _ = run(["search", "--g", "5", "--maximize"], capsys)
    d = json.loads(out)
    assert code == 0 and d["objective"] == "maximize"
    rs = [c["r"] for c in d["candidates"]]
    assert rs == sorted(rs, reverse=True) and 56 in rs


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"g": 3, "threads": 2, "format": "markdown", "budget": 7}))
    args = cli.build_parser().parse_args(["table", "--config", str(cfg), "--threads", "5"])
    rc = cli.resolve_config(args, environ={"BLL_THREADS": "3", "BLL_BUDGET": "11"})
    assert (rc.g, rc.threads, rc.format, rc.budget) == (3, 5, "markdown", 11)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(Exception, match="unknown config keys"):
        cli.resolve_config(cli.build_parser().parse_args(["table", "--config", str(bad)]), environ={})


def test_env_config_path(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"v": "3,1,0,0,0,0,0,0", "g": 6}))
    args = cli.build_parser().parse_args(["qp"])
    rc = cli.resolve_config(args, environ={"BLL_CONFIG": str(cfg)})
    assert rc.v == ["3", "1", "0", "0", "0", "0", "0", "0"]
    assert cli.run(rc, io.StringIO()) == 0


def test_selftest_small():
    from k3lattice.selftest import run_selftest

    s = run_selftest(seed=3, cases=20)
    assert s["oracle_shells_disagree"] == 0 and s["golden_rows_fail"] == 0
    assert s["failed"] == 0 and s["passed"] >= 60 + 21


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k3lattice.cli", "orbits", "--g", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 2
