"""Tests for main.py: commands run end to end on small groups; the campaign runner is mocked."""

import json
import sys
from unittest.mock import AsyncMock, MagicMock, patch

import pytest

from main import EXIT_BUDGET, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main, parse_tuple
from src.errors import ParameterConstraintError
from src.metacyclic import GroupElement

D8 = ["--family", "dihedral", "--p", "2", "--n", "2"]
Q8 = ["--family", "quaternion", "--p", "2", "--n", "2"]


def _stdout_json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestParseTuple:
    def test_pairs_are_reduced(self, q8):
        assert parse_tuple("(1,0); (0,2)", q8) == [GroupElement(1, 0), GroupElement(2, 0)]

    def test_empty(self, q8):
        assert parse_tuple("", q8) == []

    def test_malformed(self, q8):
        with pytest.raises(ParameterConstraintError):
            parse_tuple("(1,0);1,0", q8)


class TestCommands:
    async def test_eval_commutator(self, capsys):
        code = await main(["eval", *D8, "--word", "[x1,x2]", "--tuple", "(1,0);(0,1)"])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["value"] == "(2,0)"
        assert (payload["alpha"], payload["beta"]) == (2, 0)

    async def test_verify_q8_square(self, capsys):
        code = await main(["verify", *Q8, "--word", "x1^2", "--k", "2"])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["pass"] is True
        assert payload["min_probability"] == {"num": 1, "den": 4}
        assert payload["polynomial_detail"]["degree"] == 2
        assert {c["name"]: c["status"] for c in payload["checks"]}["z_probability_bound"] == "pass"

    async def test_dist_identity_word_is_uniform(self, capsys):
        code = await main(["dist", *D8, "--word", "x1", "--k", "1"])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        assert [row["n"] for row in payload["counts"]] == [1] * 8

    async def test_dist_writes_out_and_csv(self, tmp_path, capsys):
        out, csv_path = tmp_path / "reports" / "dist.json", tmp_path / "dist.csv"
        code = await main(["dist", *Q8, "--word", "x1^2", "--out", str(out), "--csv", str(csv_path)])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text())["word"] == "x1^2"
        assert csv_path.read_text().splitlines()[1] == "0,0,2"

    async def test_group_info(self, capsys):
        code = await main(["group-info", "--family", "dihedral", "--p", "2", "--n", "3"])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["label"] == "D16"
        assert payload["class"] == 3
        assert payload["center_Z"] == "(4,0)"
        assert payload["presentation_type"] == {"sign": "-", "delta": 0}

    async def test_custom_group(self, capsys):
        code = await main(["group-info", "--p", "3", "--n", "2", "--m", "1", "--epsilon", "0", "--r", "4"])
        assert code == EXIT_OK
        assert _stdout_json(capsys)["class"] == 2

    async def test_formulas_on_one_group(self, capsys):
        code = await main(["formulas", *D8])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["pass"] is True
        assert [o["name"] for o in payload["outcomes"]] == ["formula_agreement", "special_power"]

    async def test_interp(self, capsys):
        code = await main(["interp", *Q8, "--word", "x1^2", "--exhaustive-lifts"])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["degree"] == 2
        assert payload["well_defined"] is True

    async def test_cw_explicit_polynomial(self, capsys):
        poly = json.dumps([{"exps": [1, 0, 0], "coeff": 1}, {"exps": [0, 1, 1], "coeff": 1}])
        code = await main(["cw", "--p", "2", "--poly", poly])
        assert code == EXIT_OK
        report = _stdout_json(capsys)["reports"][0]
        assert [row["solutions"] for row in report["rows"]] == [4, 4]

    async def test_cw_random(self, capsys):
        code = await main(["cw", "--random", "6", "--seed", "2"])
        assert code == EXIT_OK
        assert len(_stdout_json(capsys)["reports"]) == 6


class TestExitCodes:
    async def test_no_command(self, capsys):
        assert await main([]) == EXIT_USAGE

    async def test_bad_word(self):
        assert await main(["verify", *D8, "--word", "[x1"]) == EXIT_USAGE

    async def test_custom_group_missing_parameters(self):
        assert await main(["group-info", "--p", "2", "--n", "3"]) == EXIT_USAGE

    async def test_budget_exceeded(self):
        argv = ["dist", *D8, "--word", "x1 x2", "--k", "2", "--method", "exhaustive", "--max-evals", "10"]
        assert await main(argv) == EXIT_BUDGET

    async def test_group_above_order_budget(self, monkeypatch):
        monkeypatch.setenv("WORDMAP_MAX_ORDER", "8")
        argv = ["dist", "--family", "dihedral", "--p", "2", "--n", "3", "--word", "x1"]
        assert await main(argv) == EXIT_BUDGET

    async def test_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            await main(["verify", *D8, "--word", "x1", "--bogus"])
        assert exc.value.code == 2

    async def test_interp_outside_z_is_usage_error(self):
        assert await main(["interp", *D8, "--word", "x1"]) == EXIT_USAGE


class TestScan:
    @patch("main.scan_campaign", new_callable=AsyncMock)
    async def test_dispatches_to_campaign(self, mock_scan, tmp_path, capsys):
        config_path = tmp_path / "scan.json"
        config_path.write_text(json.dumps({"groups": [{"family": "dihedral", "p": 2, "n": 2}]}))
        report = MagicMock()
        report.to_dict.return_value = {"pass": True}
        report.summary_lines.return_value = ["amit_ashurst pass=1"]
        report.passed = True
        mock_scan.return_value = report

        with patch.object(sys, "argv", ["main", "scan", "--config", str(config_path), "--seed", "9"]):
            code = await main()

        assert code == EXIT_OK
        config = mock_scan.call_args.args[0]
        assert all(spec.seed == 9 for spec in config.words)
        assert config.method == "coset_split"
        assert _stdout_json(capsys) == {"pass": True}

    @patch("main.scan_campaign", new_callable=AsyncMock)
    async def test_failed_campaign_exits_one(self, mock_scan, tmp_path):
        config_path = tmp_path / "scan.json"
        config_path.write_text(json.dumps({"groups": [{"family": "dihedral", "p": 2, "n": 2}]}))
        report = MagicMock()
        report.to_dict.return_value = {"pass": False}
        report.summary_lines.return_value = []
        report.passed = False
        mock_scan.return_value = report

        assert await main(["scan", "--config", str(config_path), "--method", "exhaustive"]) == EXIT_CHECK_FAILED
        assert mock_scan.call_args.args[0].method == "exhaustive"

    async def test_bad_config_is_usage_error(self, tmp_path):
        config_path = tmp_path / "scan.json"
        config_path.write_text(json.dumps({"groups": [], "checks": ["nope"]}))
        assert await main(["scan", "--config", str(config_path)]) == EXIT_USAGE

    @patch("main.scan_campaign", new_callable=AsyncMock)
    async def test_zero_workers_is_usage_error(self, mock_scan, tmp_path):
        config_path = tmp_path / "scan.json"
        config_path.write_text(json.dumps({"groups": [{"family": "dihedral", "p": 2, "n": 2}]}))
        assert await main(["scan", "--config", str(config_path), "--workers", "0"]) == EXIT_USAGE
        mock_scan.assert_not_called()

    async def test_real_scan_writes_csv(self, tmp_path, capsys):
        config_path = tmp_path / "scan.toml"
        config_path.write_text(
            'checks = ["amit_ashurst", "dichotomy"]\n'
            "[[groups]]\n"
            'family = "quaternion"\n'
            "p = 2\n"
            "n = 2\n"
            "[words]\n"
            "k_max = 1\n"
            "len_max = 2\n"
        )
        csv_path = tmp_path / "scan.csv"
        code = await main(["scan", "--config", str(config_path), "--csv", str(csv_path)])
        assert code == EXIT_OK
        assert _stdout_json(capsys)["grid_points"] == 4
        assert len(csv_path.read_text().splitlines()) == 5
