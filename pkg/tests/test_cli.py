import csv
import io
import json

import pytest

from ioha.cli import main


def _run(capsysbinary, *argv) -> bytes:
    code = main(list(argv))
    out = capsysbinary.readouterr().out
    assert code == 0, out
    return out


def _csv_rows(data: bytes) -> list[list[str]]:
    return list(csv.reader(io.StringIO(data.decode())))


class TestSummary:
    def test_lists_datasets(self, golden_zip, capsysbinary):
        rows = _csv_rows(_run(capsysbinary, "summary", str(golden_zip)))
        assert rows[0] == ["algId", "funcId", "DIM", "runs", "budget", "best reached"]
        assert len(rows) == 5
        assert ["self_GA", "19", "16", "5", "16001", "32"] in rows


class TestOverview:
    def test_columns_and_values(self, golden_dir, capsysbinary):
        rows = _csv_rows(
            _run(capsysbinary, "overview", str(golden_dir), "--func", "19", "--dim", "16")
        )
        header, body = rows[0], rows[1:]
        assert header[:5] == ["algId", "runs", "worst recorded", "worst reached", "best reached"]
        ga = next(r for r in body if r[0] == "self_GA")
        assert ga[3] == "28" and ga[4] == "32"
        assert ga[header.index("succ")] == "4"


class TestStats:
    def test_target_sequence_from_flags(self, golden_dir, capsysbinary):
        out = _run(
            capsysbinary,
            "stats", str(golden_dir),
            "--func", "19", "--dim", "16", "--alg", "self_GA",
            "--fmin", "4", "--fmax", "16", "--step", "1.33",
        )
        rows = _csv_rows(out)
        assert rows[0] == [
            "target", "mean", "median", "sd",
            "Q2%", "Q5%", "Q10%", "Q25%", "Q50%", "Q75%", "Q90%", "Q95%", "Q98%",
            "ERT", "runs", "succ",
        ]
        targets = [float(r[0]) for r in rows[1:]]
        assert targets[0] == 4 and abs(targets[1] - 5.33) < 1e-9
        assert targets[-1] == 16

    def test_alg_column_added_for_multiple(self, golden_dir, capsysbinary):
        rows = _csv_rows(
            _run(capsysbinary, "stats", str(golden_dir), "--func", "19", "--dim", "16")
        )
        assert rows[0][0] == "algId"

    def test_json_payload(self, golden_dir, capsysbinary):
        out = _run(
            capsysbinary,
            "stats", str(golden_dir), "--func", "19", "--dim", "16", "--format", "json",
        )
        payload = json.loads(out)
        assert payload["perspective"] == "target"
        assert len(payload["anchors"]) == 10
        assert {row["algId"] for row in payload["rows"]} == {"RLS", "self_GA"}

    def test_budget_perspective_has_no_ert(self, golden_dir, capsysbinary):
        rows = _csv_rows(
            _run(
                capsysbinary,
                "stats", str(golden_dir),
                "--func", "19", "--dim", "16", "--alg", "RLS",
                "--perspective", "budget",
            )
        )
        assert "ERT" not in rows[0]
        assert rows[0][0] == "budget"

    def test_samples_layouts(self, golden_dir, capsysbinary):
        long_rows = _csv_rows(
            _run(
                capsysbinary,
                "stats", str(golden_dir), "--func", "19", "--dim", "16",
                "--alg", "self_GA", "--count", "4", "--fmin", "28", "--fmax", "32",
                "--layout", "long",
            )
        )
        assert long_rows[0] == ["target", "run", "value"]
        assert len(long_rows) == 1 + 4 * 5


class TestEcdfAndAuc:
    def test_ecdf_json(self, golden_dir, capsysbinary):
        payload = json.loads(
            _run(capsysbinary, "ecdf", str(golden_dir), "--func", "19", "--dim", "16")
        )
        assert payload["scope"] == "multi-target"
        assert len(payload["targets"]) == 10
        curves = {c["algId"]: c for c in payload["curves"]}
        assert set(curves) == {"RLS", "self_GA"}
        for curve in curves.values():
            props = curve["proportion"]
            assert all(0 <= p <= 1 for p in props)
            assert all(a <= b for a, b in zip(props, props[1:]))

    def test_ecdf_multi_function(self, golden_dir, tmp_path, capsysbinary):
        targets = tmp_path / "targets.csv"
        targets.write_text("funcId,target\n19,30\n19,32\n")
        payload = json.loads(
            _run(
                capsysbinary,
                "ecdf", str(golden_dir), "--dim", "16", "--targets-file", str(targets),
            )
        )
        assert payload["scope"] == "multi-function"
        assert payload["targets"] == {"19": [30.0, 32.0]}

    def test_auc_table(self, golden_dir, capsysbinary):
        rows = _csv_rows(
            _run(capsysbinary, "auc", str(golden_dir), "--func", "19", "--dim", "16")
        )
        assert rows[0] == ["algId", "auc"]
        values = {r[0]: float(r[1]) for r in rows[1:]}
        assert 0 <= values["RLS"] <= 1 and 0 <= values["self_GA"] <= 1


class TestHypothesisTest:
    def test_json_matrix(self, golden_dir, capsysbinary):
        payload = json.loads(
            _run(capsysbinary, "test", str(golden_dir), "--func", "19", "--dim", "16")
        )
        assert payload["algorithms"] == ["RLS", "self_GA"]
        assert payload["pairs"] == 1
        assert payload["pRaw"][0][1] == payload["pRaw"][1][0]
        assert payload["pCorrected"][0][1] >= payload["pRaw"][0][1]

    def test_explicit_target(self, golden_dir, capsysbinary):
        payload = json.loads(
            _run(
                capsysbinary,
                "test", str(golden_dir), "--func", "19", "--dim", "16", "--target", "31",
            )
        )
        assert payload["target"] == 31


class TestRank:
    def test_table_and_reproducibility(self, golden_dir, capsysbinary):
        args = ("rank", str(golden_dir), "--target-source", "radar", "--rounds", "25", "--seed", "1")
        first = _run(capsysbinary, *args)
        second = _run(capsysbinary, *args)
        assert first == second
        rows = _csv_rows(first)
        assert rows[0] == ["rank", "algId", "rating", "deviation", "volatility"]
        assert {r[1] for r in rows[1:]} == {"RLS", "self_GA"}
        assert rows[1][1] == "self_GA"  # dominates on every function


class TestParams:
    def test_parameter_statistics(self, golden_dir, capsysbinary):
        rows = _csv_rows(
            _run(
                capsysbinary,
                "params", str(golden_dir), "--func", "19", "--dim", "16", "--alg", "self_GA",
            )
        )
        assert rows[0][:3] == ["algId", "param", "target"]
        assert {r[1] for r in rows[1:]} == {"parameter"}


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("summary",),
            ("overview", "--func", "19", "--dim", "16"),
            ("stats", "--func", "19", "--dim", "16"),
            ("stats", "--func", "19", "--dim", "16", "--perspective", "budget"),
            ("ecdf", "--func", "19", "--dim", "16"),
            ("auc", "--func", "19", "--dim", "16"),
            ("test", "--func", "19", "--dim", "16"),
            ("rank", "--rounds", "5", "--seed", "7"),
            ("params", "--func", "19", "--dim", "16"),
        ],
    )
    def test_byte_identical_reruns(self, golden_zip, capsysbinary, argv):
        cmd = [argv[0], str(golden_zip), *argv[1:]]
        assert _run(capsysbinary, *cmd) == _run(capsysbinary, *cmd)


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert main(["stats", "/nonexistent.zip", "--dim", "16"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_data_error(self, tmp_path, capsys):
        assert main(["summary", str(tmp_path)]) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_archive(self, capsys):
        assert main(["summary", "/no/such/path"]) == 2

    def test_output_file(self, golden_dir, tmp_path):
        out = tmp_path / "table.csv"
        assert main(["summary", str(golden_dir), "--out", str(out)]) == 0
        assert out.read_bytes().startswith(b"algId,")
