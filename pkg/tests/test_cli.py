import json
import random
import socket

import jsonschema
import pytest
from click.testing import CliRunner

from autoviz.cli import main
from autoviz.schemas import CHART_SPEC_SCHEMA, REPORT_SCHEMA
from helpers import random_mixed_table, to_csv_bytes

CSV = (b"alpha,beta,label\n"
       b"1,2.5,a\n2,3.5,b\n3,,a\n4,5.5,b\n5,6.5,a\n6,7.5,b\n")


@pytest.fixture()
def runner():
    return CliRunner()


def write_input(tmp_path, data=CSV, name="input.csv"):
    path = tmp_path / name
    path.write_bytes(data)
    return str(path)


class TestAnalyze:
    def test_outputs_written(self, runner, tmp_path):
        out = tmp_path / "out"
        res = runner.invoke(main, ["analyze", write_input(tmp_path),
                                   "--out", str(out)])
        assert res.exit_code == 0, res.output
        report = json.loads((out / "report.json").read_text())
        jsonschema.validate(report, REPORT_SCHEMA)
        assert (out / "cleaned.csv").exists()
        assert (out / "timings.json").exists()
        charts = sorted((out / "charts").glob("chart_*.json"))
        assert charts and charts[0].name == "chart_01.json"
        for path in charts:
            jsonschema.validate(json.loads(path.read_text()),
                                CHART_SPEC_SCHEMA)

    def test_summary_printed(self, runner, tmp_path):
        out = tmp_path / "out"
        res = runner.invoke(main, ["analyze", write_input(tmp_path),
                                   "--out", str(out)])
        assert "rows: 6" in res.output
        assert "columns: 3" in res.output
        assert "top charts:" in res.output

    def test_rerun_byte_identical(self, runner, tmp_path):
        data = to_csv_bytes(random_mixed_table(random.Random(3), 50, 3, 2,
                                               missing_rate=0.1))
        inp = write_input(tmp_path, data)
        blobs = []
        for d in ("a", "b"):
            out = tmp_path / d
            res = runner.invoke(main, ["analyze", inp, "--out", str(out)])
            assert res.exit_code == 0, res.output
            blobs.append((out / "report.json").read_bytes())
        assert blobs[0] == blobs[1]

    def test_target_option(self, runner, tmp_path):
        out = tmp_path / "out"
        res = runner.invoke(main, ["analyze", write_input(tmp_path),
                                   "--out", str(out), "--target", "alpha"])
        assert res.exit_code == 0, res.output
        report = json.loads((out / "report.json").read_text())
        assert report["feature_importance"]["mode"] == "supervised"

    def test_unknown_target_exits_1(self, runner, tmp_path):
        res = runner.invoke(main, ["analyze", write_input(tmp_path),
                                   "--out", str(tmp_path / "o"),
                                   "--target", "zzz"])
        assert res.exit_code == 1
        assert "unknown_target" in res.output

    def test_unparseable_input_exits_1(self, runner, tmp_path):
        inp = write_input(tmp_path, b"\n\n\n", name="blank.csv")
        res = runner.invoke(main, ["analyze", inp,
                                   "--out", str(tmp_path / "o")])
        assert res.exit_code == 1
        assert "error [" in res.output

    def test_missing_input_exits_2(self, runner, tmp_path):
        res = runner.invoke(main, ["analyze", str(tmp_path / "absent.csv"),
                                   "--out", str(tmp_path / "o")])
        assert res.exit_code == 2

    def test_bad_weights_exits_2(self, runner, tmp_path):
        res = runner.invoke(main, ["analyze", write_input(tmp_path),
                                   "--out", str(tmp_path / "o"),
                                   "--weights", "bogus"])
        assert res.exit_code == 2

    def test_top_charts_limit(self, runner, tmp_path):
        out = tmp_path / "out"
        res = runner.invoke(main, ["analyze", write_input(tmp_path),
                                   "--out", str(out), "--top-charts", "1"])
        assert res.exit_code == 0
        assert len(list((out / "charts").glob("*.json"))) == 1


class TestProfile:
    def test_table_output(self, runner, tmp_path):
        res = runner.invoke(main, ["profile", write_input(tmp_path)])
        assert res.exit_code == 0
        assert "column" in res.output
        lines = res.output.splitlines()
        alpha = next(line for line in lines if line.startswith("alpha"))
        assert "numeric" in alpha
        assert "3.5" in alpha  # mean of 1..6
        beta = next(line for line in lines if line.startswith("beta"))
        assert "0.833" in beta  # completeness 5/6

    def test_unparseable_exits_1(self, runner, tmp_path):
        inp = write_input(tmp_path, b"", name="empty.csv")
        res = runner.invoke(main, ["profile", inp])
        assert res.exit_code == 1


class TestServe:
    def test_port_in_use_exits_1(self, runner, tmp_path):
        blocker = socket.socket()
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        try:
            res = runner.invoke(main, [
                "serve", "--port", str(port),
                "--store-dir", str(tmp_path / "jobs")])
            assert res.exit_code == 1
            assert "cannot bind" in res.output
        finally:
            blocker.close()


class TestGroup:
    def test_version(self, runner):
        res = runner.invoke(main, ["--version"])
        assert res.exit_code == 0

    def test_unknown_command_exits_2(self, runner):
        assert runner.invoke(main, ["nope"]).exit_code == 2
