import io
import json

import pytest

from disjoint_spca.cli import build_parser, main


def call(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_solve_json():
    code, out = call("solve", "appendix:0.1,0.1", "--k", "2", "--s", "2", "--eps", "0.9")
    assert code == 0
    rep = json.loads(out)
    assert rep["objective"] == pytest.approx(2.0) and rep["spec"]["polish"] is True


def test_solve_csv():
    code, out = call("solve", "appendix:0.1,0.1", "--eps", "0.9", "--algorithm", "DeflateExact", "--format", "csv")
    assert code == 0 and out.splitlines()[-1].startswith("2,1.2")


def test_oracle():
    code, out = call("oracle", "appendix:0.1,0.1")
    assert code == 0 and json.loads(out)["supports"] == [[0, 1], [2, 3]]


def test_compare_csv(tmp_path):
    code, out = call("compare", "appendix:0.1,0.1", "--eps", "0.9", "--algorithms", "Joint,Oracle",
                     "--format", "csv", "--output", str(tmp_path / "c.csv"))
    assert code == 0 and len(out.splitlines()) == 3
    assert (tmp_path / "c.csv").exists()


def test_netinfo():
    code, out = call("netinfo", "--r", "2", "--eps", "0.6", "--trials", "2000")
    info = json.loads(out)
    assert code == 0 and info["violations"] == 0 and info["points"] == 2 * info["points_reduced"]


def test_topics():
    code, out = call("topics", "synthetic:60,12,1", "--k", "2", "--s", "3", "--algorithm", "DeflateExact")
    assert code == 0 and out.startswith("Topic 1: w")


def test_exit_config():
    assert call("oracle", "appendix:0.5,0.5")[0] == 2
    assert call("solve", "appendix:0.1,0.1", "--eps", "1.5")[0] == 2


def test_exit_parse(tmp_path):
    (tmp_path / "bad.csv").write_text("1,2\n3\n")
    assert call("solve", str(tmp_path / "bad.csv"))[0] == 2


def test_exit_missing_file(tmp_path):
    assert call("solve", str(tmp_path / "nope.csv"))[0] == 2


def test_exit_capacity():
    assert call("oracle", "synthetic:20,50,0", "--k", "4", "--s", "5")[0] == 3


def test_argparse_error():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["solve"])
    assert exc.value.code == 2


def test_workers_env(monkeypatch):
    monkeypatch.setenv("SPCA_WORKERS", "3")
    args = build_parser().parse_args(["solve", "x.csv"])
    assert args.workers == 3


def test_center_flag():
    args = build_parser().parse_args(["solve", "x.csv", "--no-center"])
    assert args.center is False


def test_module_entry():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "disjoint_spca", "netinfo", "--r", "1", "--eps", "0.5",
                        "--trials", "10"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["points"] == 2
