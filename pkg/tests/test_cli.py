from __future__ import annotations

import json
import subprocess
import sys

import pytest

from walkpatterns.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestClasses:
    def test_n3_table(self, capsys):
        code, out, _ = run(capsys, "classes", "--n", "3")
        assert code == 0
        assert out == "123\t1\t123\n132\t2\t132\t213\n231\t2\t231\t312\n321\t1\t321\n"

    def test_n1(self, capsys):
        assert run(capsys, "classes", "--n", "1")[1] == "1\t1\t1\n"

    @pytest.mark.parametrize("n", ["12", "0"])
    def test_budget_and_range(self, capsys, n):
        code, out, err = run(capsys, "classes", "--n", n)
        assert code == 2 and out == "" and "error" in err and "Traceback" not in err

    def test_csv_and_json_to_file(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        assert run(capsys, "classes", "--n", "4", "--format", "json", "--out", str(path))[0] == 0
        doc = json.loads(path.read_text())
        assert doc["count"] == 14 and doc["classes"][0]["members"] == ["1234"]
        code, out, _ = run(capsys, "classes", "--n", "3", "--format", "csv")
        assert out.splitlines()[0] == "representative,size,members"
        assert out.splitlines()[2] == "132,2,132 213"


class TestCheck:
    def test_equivalent_with_witness(self, capsys):
        code, out, _ = run(capsys, "check", "54621873", "73218465", "--witness")
        assert code == 0 and out.splitlines() == ["EQUIVALENT", "flip [2,8]: 54621873 -> 73218465"]

    def test_not_equivalent(self, capsys):
        assert run(capsys, "check", "132", "231")[:2] == (1, "NOT EQUIVALENT\n")

    def test_identical(self, capsys):
        assert run(capsys, "check", "132", "132", "--witness")[:2] == (0, "EQUIVALENT\n(no flips needed)\n")

    def test_comma_form(self, capsys):
        code, out, _ = run(capsys, "check", "2,1,3,5,4,6,9,7,8,10", "1,3,2,4,6,7,5,8,10,9")
        assert code == 0 and out == "EQUIVALENT\n"

    @pytest.mark.parametrize(
        "pi, tau", [("54621873", "73218463"), ("12", "123"), ("abc", "123"), ("1,2,3,4,5,6,7,8,9,10,11,12,13", "1,2,3,4,5,6,7,8,9,10,11,12,13")]
    )
    def test_bad_input(self, capsys, pi, tau):
        code, out, err = run(capsys, "check", pi, tau)
        assert code == 2 and out == "" and err.startswith("error")


class TestStructure:
    def test_cohesive_example(self, capsys):
        code, out, _ = run(capsys, "structure", "197862435")
        assert code == 0
        line = next(l for l in out.splitlines() if l.startswith("cohesive"))
        assert "[2,6]" in line and "[1,9]" in line
        assert "irreducible borders: 1,2,5,6,9" in out

    def test_borders(self, capsys):
        assert "irreducible borders: 1,4,7" in run(capsys, "structure", "1327564")[1]

    def test_trivial(self, capsys):
        code, out, _ = run(capsys, "structure", "12")
        assert code == 0 and "irreducible borders: 1,2" in out
        assert run(capsys, "structure", "1")[1].endswith("irreducible borders: 1\n")

    def test_budget_skips_cohesive_scan(self, capsys):
        code, out, _ = run(capsys, "structure", ",".join(str(i) for i in range(1, 12)))
        assert code == 0 and "cohesive intervals: skipped" in out

    def test_malformed(self, capsys):
        assert run(capsys, "structure", "1224")[0] == 2


class TestSimulate:
    def test_gaussian_frequency(self, capsys, tmp_path):
        out_path = tmp_path / "f.csv"
        code, _, err = run(
            capsys, "simulate", "--n", "3", "--dist", "gaussian:0,1", "--trials", "1000000", "--seed", "7",
            "--out", str(out_path),
        )
        assert code == 0 and "all 4 classes pass" in err
        rows = {l.split(",")[0]: l.split(",") for l in out_path.read_text().splitlines()[2:]}
        assert abs(float(rows["123"][2]) - 0.25) < 0.002
        assert (tmp_path / "f.classes.csv").exists()

    def test_positive_steps(self, capsys):
        code, out, _ = run(capsys, "simulate", "--n", "4", "--dist", "shifted-uniform:1,2", "--trials", "1000")
        assert code == 0
        table = out.split("\n\n")[0].splitlines()[2:]
        observed = [l.split(",")[0] for l in table if int(l.split(",")[1]) > 0]
        assert observed == ["1234"]

    @pytest.mark.parametrize(
        "args",
        [
            ["--trials", "0"],
            ["--dist", "gaussian:0"],
            ["--dist", "weibull:1,1"],
            ["--n", "9"],
            ["--workers", "0"],
            ["--alpha", "1.5"],
        ],
    )
    def test_invalid(self, capsys, args):
        base = {"--n": "3", "--dist": "gaussian:0,1", "--trials": "100"}
        for k, v in zip(args[::2], args[1::2]):
            base[k] = v
        argv = ["simulate"] + [x for kv in base.items() for x in kv]
        code, _, err = run(capsys, *argv)
        assert code == 2 and "Traceback" not in err

    def test_missing_required(self, capsys):
        assert run(capsys, "simulate", "--n", "3")[0] == 2

    def test_homogeneity_failure_exit_code(self, capsys):
        code, _, err = run(
            capsys, "simulate", "--n", "4", "--dist", "gaussian:0,1", "--trials", "20000", "--alpha", "0.999"
        )
        assert code == 1 and "fail homogeneity" in err

    def test_json_and_plot_data(self, capsys, tmp_path):
        out, plot = tmp_path / "f.json", tmp_path / "plot.csv"
        code, _, _ = run(
            capsys, "simulate", "--n", "3", "--dist", "cauchy:0,1", "--trials", "5000", "--format", "json",
            "--out", str(out), "--plot-data", str(plot),
        )
        assert code == 0
        assert json.loads(out.read_text())["trials"] == 5000
        assert json.loads((tmp_path / "f.classes.json").read_text())["homogeneous"] is True
        lines = plot.read_text().splitlines()
        assert lines[0] == "pattern,frequency,class_representative" and len(lines) == 7

    def test_worker_count_gives_identical_bytes(self, capsys, tmp_path):
        paths = []
        for w in ("1", "4"):
            p = tmp_path / f"w{w}.csv"
            run(capsys, "simulate", "--n", "5", "--dist", "gaussian:0,1", "--trials", "200000", "--seed", "3",
                "--workers", w, "--out", str(p))
            paths.append(p)
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestConfig:
    def test_config_supplies_options(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"n": 3, "dist": "uniform:-1,1", "trials": 2000, "seed": 1}))
        code, out, _ = run(capsys, "--config", str(cfg), "simulate")
        assert code == 0 and "trials=2000; seed=1; dist=uniform:-1,1" in out

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"n": 3, "dist": "uniform:-1,1", "trials": 2000}))
        code, out, _ = run(capsys, "--config", str(cfg), "simulate", "--trials", "300")
        assert code == 0 and "trials=300;" in out

    @pytest.mark.parametrize("doc", ['{"n": 3, "colour": 1}', "[1]", "{not json"])
    def test_bad_config(self, capsys, tmp_path, doc):
        cfg = tmp_path / "run.json"
        cfg.write_text(doc)
        code, _, err = run(capsys, "--config", str(cfg), "simulate")
        assert code == 2 and err.startswith("error")

    def test_missing_config_file(self, capsys, tmp_path):
        assert run(capsys, "--config", str(tmp_path / "none.json"), "classes", "--n", "2")[0] == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "walkpatterns.cli", "check", "132", "213"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "EQUIVALENT\n"
