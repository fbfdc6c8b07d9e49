import csv
import io
import json
import subprocess
import sys

import pytest

from bidcodes.cli import main, parse_grid
from bidcodes.codes import CodeSpec, bid_generator
from bidcodes.gf2 import gf2_same_span
from reference_tables import DISTANCE_TABLE


def run_cli(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, out


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestInfo:
    def test_worked_example_522(self, capsys):
        rc, out = run_cli(["info", "5", "2", "2"], capsys)
        assert rc == 0
        header, rows = parse_csv(out)
        row = dict(zip(header, rows[0]))
        assert row["N"] == "243"
        assert row["K"] == "40"
        assert row["dmin_lower"] == "48"
        assert row["dmin_upper"] == "54"
        assert row["exact"] == "false"

    def test_worked_example_101(self, capsys):
        rc, out = run_cli(["info", "1", "0", "1"], capsys)
        assert rc == 0
        header, rows = parse_csv(out)
        row = dict(zip(header, rows[0]))
        assert row["N"] == "3"
        assert row["K"] == "3"
        assert row["dmin_lower"] == row["dmin_upper"] == "1"
        assert row["exact"] == "true"

    def test_rate_matches_k_over_n(self, capsys):
        rc, out = run_cli(["info", "3", "1", "2"], capsys)
        _, rows = parse_csv(out)
        assert float(rows[0][5]) == pytest.approx(18 / 27)


class TestTables:
    def test_matches_frozen_rows(self, capsys):
        rc, out = run_cli(["tables", "--max-m", "4"], capsys)
        assert rc == 0
        _, rows = parse_csv(out)
        got = [tuple(int(v) for v in r) for r in rows]
        want = [
            (m, r1, r2, k, lo, up)
            for m in (2, 3, 4)
            for r1, r2, (lo, up), k in DISTANCE_TABLE[m]
        ]
        assert got == want


class TestTree:
    def test_json_shape(self, capsys):
        rc, out = run_cli(["tree", "3", "1", "2"], capsys)
        assert rc == 0
        doc = json.loads(out)
        assert doc["name"] == "(3,{1,2})"
        assert doc["lower"] == doc["upper"] == 4
        rules = {c["rule"] for c in doc["children"]}
        assert rules <= {"W", "W_{0,-1}", "W_{-1,0}", "W_{-1,-1}"}

        def leaves(node):
            if not node["children"]:
                yield node
            for c in node["children"]:
                yield from leaves(c["node"])

        for leaf in leaves(doc):
            assert leaf["base_case"] in ("Berman", "DualBerman")

    def test_deterministic(self, capsys):
        _, a = run_cli(["tree", "4", "2", "3"], capsys)
        _, b = run_cli(["tree", "4", "2", "3"], capsys)
        assert a == b


class TestScatter:
    def test_rows(self, capsys):
        rc, out = run_cli(["scatter", "2"], capsys)
        assert rc == 0
        header, rows = parse_csv(out)
        assert header == ["m", "r1", "r2", "rate", "norm_log_dmin"]
        assert len(rows) == 6
        by_pair = {(int(r[1]), int(r[2])): r for r in rows}
        assert float(by_pair[(0, 0)][4]) == pytest.approx(1.0)
        assert float(by_pair[(0, 2)][4]) == pytest.approx(0.0)
        assert float(by_pair[(1, 1)][3]) == pytest.approx(4 / 9)


class TestGenMatrix:
    def test_json_static_spans_code(self, capsys):
        rc, out = run_cli(["gen-matrix", "2", "1", "2", "--kernel", "A3"], capsys)
        assert rc == 0
        doc = json.loads(out)
        assert doc["kernel"] == "A3"
        assert not doc["dynamic"]
        rows = [int(h, 16) for h in doc["rows"]]
        assert gf2_same_span(rows, bid_generator(CodeSpec(2, 1, 2)).rows)

    def test_text_format(self, capsys):
        rc, out = run_cli(["gen-matrix", "2", "1", "1", "--format", "text"], capsys)
        assert rc == 0
        lines = out.strip().split("\n")
        assert len(lines) == 4
        assert all(len(l) == 9 and set(l) <= {"0", "1"} for l in lines)

    def test_dynamic_records_seed(self, capsys):
        rc, out = run_cli(
            ["gen-matrix", "2", "1", "2", "--dynamic", "--seed", "11"], capsys
        )
        doc = json.loads(out)
        assert doc["dynamic"] and doc["seed"] == 11
        _, again = run_cli(
            ["gen-matrix", "2", "1", "2", "--dynamic", "--seed", "11"], capsys
        )
        assert json.loads(again) == doc
        _, other = run_cli(
            ["gen-matrix", "2", "1", "2", "--dynamic", "--seed", "12"], capsys
        )
        assert json.loads(other)["rows"] != doc["rows"]


class TestVerify:
    def test_passes(self, capsys):
        rc, out = run_cli(["verify", "--max-m", "2"], capsys)
        assert rc == 0
        lines = out.strip().split("\n")
        assert all(l.startswith("ok") for l in lines[:-1])
        assert lines[-1].startswith("PASS")


class TestSimulate:
    def test_bec_csv(self, capsys):
        rc, out = run_cli(
            ["simulate-bec", "2", "1", "2", "--epsilon", "0.2", "--trials", "400",
             "--seed", "3"],
            capsys,
        )
        assert rc == 0
        header, rows = parse_csv(out)
        assert header[0] == "code" and header[7] == "param"
        assert rows[0][0] == "BiD(2,1,2)"
        assert int(rows[0][8]) == 400

    def test_awgn_grid_and_determinism(self, capsys):
        argv = ["simulate-awgn", "2", "1", "1", "--ebn0", "2:4:1",
                "--trials", "200", "--seed", "5"]
        rc, a = run_cli(argv, capsys)
        assert rc == 0
        _, rows = parse_csv(a)
        assert [r[7] for r in rows] == ["2", "3", "4"]
        _, b = run_cli(argv, capsys)
        assert a == b

    def test_out_file_matches_stdout(self, tmp_path, capsys):
        argv = ["simulate-bec", "2", "1", "1", "--epsilon", "0.3",
                "--trials", "300", "--seed", "8"]
        rc, streamed = run_cli(argv, capsys)
        target = tmp_path / "rows.csv"
        rc = main(argv + ["--out", str(target)])
        capsys.readouterr()
        assert rc == 0
        assert target.read_text() == streamed


class TestGrid:
    def test_single_value(self):
        assert parse_grid("0.25") == [0.25]

    def test_inclusive_range(self):
        got = parse_grid("1:2:0.5")
        assert got == pytest.approx([1.0, 1.5, 2.0])

    def test_bad_step(self):
        with pytest.raises(ValueError):
            parse_grid("1:2:0")
        with pytest.raises(ValueError):
            parse_grid("2:1:0.5")

    def test_endpoint_must_land(self):
        with pytest.raises(ValueError):
            parse_grid("0:1:0.3")


class TestExitCodes:
    def test_usage_errors(self, capsys):
        assert main(["info", "2"]) == 2
        capsys.readouterr()
        assert main(["no-such-command"]) == 2
        capsys.readouterr()

    def test_domain_error(self, capsys):
        assert main(["info", "2", "3", "1"]) == 2
        err = capsys.readouterr().err
        assert "error:" in err

    def test_bad_grid_is_usage_error(self, capsys):
        rc = main(["simulate-bec", "2", "1", "1", "--epsilon", "0.5:0.1:0.1",
                   "--trials", "10"])
        capsys.readouterr()
        assert rc == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        capsys.readouterr()


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "bidcodes.cli", "info", "2", "1", "1"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "4,4" in proc.stdout
