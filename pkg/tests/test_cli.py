"""Command-line interface: exit codes, output formats, configuration file
handling, report-directory resolution, and byte-determinism."""

import json
import os

import pytest

from susy2d import cli
from susy2d.cli import ConfigError, main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerifySymbolic:
    def test_default_run_passes(self, capsys):
        code, out, _ = run(["verify-symbolic", "--format", "text"], capsys)
        assert code == 0
        assert "overall: PASS" in out
        # the default run includes the variable-change checks at four zetas
        assert out.count("gen.transform.") == 4

    def test_system_filter(self, capsys):
        code, out, _ = run(
            ["verify-symbolic", "--system", "ho", "--format", "text"], capsys
        )
        assert code == 0
        assert "ha." not in out and "gen." not in out

    def test_single_identity_json(self, capsys):
        code, out, _ = run(
            ["verify-symbolic", "--identity", "ho.su2.pm", "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert [r["name"] for r in payload["reports"]] == ["ho.su2.pm"]

    def test_unknown_identity_is_config_error(self, capsys):
        code, _, err = run(["verify-symbolic", "--identity", "nope"], capsys)
        assert code == 2
        assert "unknown" in err


class TestVerifyNumeric:
    def test_single_op_single_state(self, capsys):
        code, out, _ = run(
            ["verify-numeric", "--system", "ho", "--op", "a2",
             "--state", "1,1", "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        (report,) = payload["ladder"]
        assert report["pass"]
        assert abs(abs(complex(*report["constant"])) - 1.0) <= 1e-6

    def test_zero_energy_section(self, capsys):
        code, out, _ = run(
            ["verify-numeric", "--system", "gen", "--zeta", "1", "--A", "2",
             "--level", "2", "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        (report,) = payload["zero_energy"]
        assert report["pass"] and report["max_relative_residual"] <= 1e-4

    def test_unknown_op_is_config_error(self, capsys):
        code, _, err = run(
            ["verify-numeric", "--system", "ho", "--op", "Q9"], capsys
        )
        assert code == 2 and "error" in err

    def test_coarse_grid_warns_and_strict_escalates(self, capsys):
        argv = ["verify-numeric", "--system", "gen", "--zeta", "2",
                "--level", "0", "--grid", "30,1000"]
        code, _, err = run(argv, capsys)
        assert "warning" in err
        code_strict, _, _ = run(argv + ["--strict"], capsys)
        assert code_strict == 1


class TestSpectrum:
    def test_oscillator_levels(self, capsys):
        code, out, _ = run(
            ["spectrum", "--system", "ho", "--level", "2", "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        energies = {(e["n"], e["m"]): e for e in payload["levels"]}
        assert set(energies) == {(0, 0), (1, 1), (2, 0), (2, 2)}
        for e in energies.values():
            assert e["abs_delta"] <= 1e-4

    def test_hydrogen_levels_within_tolerance(self, capsys):
        code, out, _ = run(
            ["spectrum", "--system", "ha", "--level", "3", "--format", "json"],
            capsys,
        )
        assert code == 0
        for e in json.loads(out)["levels"]:
            assert e["abs_delta"] <= 1e-4

    def test_gen_zeta2_reproduces_oscillator_table(self, capsys):
        code, out, _ = run(
            ["spectrum", "--system", "gen", "--zeta", "2", "--A", "1/2",
             "--B", "1", "--level", "2", "--format", "json"],
            capsys,
        )
        assert code == 0
        refs = {(e["n"], e["m"]): e["E_reference"]
                for e in json.loads(out)["levels"]}
        # E = sqrt(2A)(n+1) - B = n at these parameters
        assert refs == {(0, 0): 0.0, (1, 1): 1.0, (2, 0): 2.0, (2, 2): 2.0}

    def test_gen_needs_parameters(self, capsys):
        code, _, err = run(["spectrum", "--system", "gen"], capsys)
        assert code == 2 and "zeta" in err


class TestLadderDiagram:
    def test_arrows_match_semantics(self, capsys):
        code, out, _ = run(
            ["ladder-diagram", "--system", "ho", "--level", "4",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        by_name = {a["operator"]: a for a in payload["arrows"]}
        assert (by_name["Dn+"]["dn"], by_name["Dn+"]["dm"]) == (2, 0)
        assert (by_name["a1"]["dn"], by_name["a1"]["dm"]) == (-1, 1)
        for a in payload["arrows"]:
            for e in a["edges"]:
                assert e["to"][0] - e["from"][0] == a["dn"]
                assert e["to"][1] - e["from"][1] == a["dm"]

    def test_empty_lattice(self, capsys):
        code, out, _ = run(
            ["ladder-diagram", "--system", "ha", "--level", "0",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["nodes"] == []
        assert all(a["edges"] == [] for a in payload["arrows"])


class TestConfiguration:
    def test_file_values_and_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("system = ho\nformat = json\n# comment\nlevel = 1\n")
        code, out, _ = run(
            ["spectrum", "--config", str(cfg), "--level", "2"], capsys
        )
        assert code == 0
        payload = json.loads(out)
        # flag wins over the file's level = 1
        assert max(e["n"] for e in payload["levels"]) == 2

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("colour = blue\n")
        code, _, err = run(["spectrum", "--config", str(cfg)], capsys)
        assert code == 2 and "unknown key" in err

    def test_malformed_line_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("just some words\n")
        code, _, err = run(["spectrum", "--config", str(cfg)], capsys)
        assert code == 2

    def test_bad_flag_values(self, capsys):
        for argv in (
            ["spectrum", "--system", "ho", "--grid", "banana"],
            ["verify-numeric", "--system", "ho", "--tol", "-1"],
            ["spectrum", "--system", "gen", "--zeta", "-2", "--B", "1"],
        ):
            code, _, _ = run(argv, capsys)
            assert code == 2, argv


class TestOutput:
    def test_report_dir_env_var(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv(cli.REPORT_DIR_ENV, str(tmp_path))
        code, out, _ = run(
            ["verify-symbolic", "--system", "ho", "--format", "json",
             "--out", "sym.json"],
            capsys,
        )
        assert code == 0 and out == ""
        payload = json.loads((tmp_path / "sym.json").read_text())
        assert payload["pass"]

    def test_absolute_out_ignores_report_dir(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv(cli.REPORT_DIR_ENV, str(tmp_path / "elsewhere"))
        target = tmp_path / "direct.json"
        code, _, _ = run(
            ["ladder-diagram", "--system", "ho", "--format", "json",
             "--out", str(target)],
            capsys,
        )
        assert code == 0 and target.exists()

    def test_json_output_is_byte_identical(self, tmp_path, capsys):
        argv = ["verify-symbolic", "--format", "json"]
        _, out1, _ = run(argv, capsys)
        _, out2, _ = run(argv, capsys)
        assert out1 == out2

    def test_csv_output_has_header(self, capsys):
        code, out, _ = run(
            ["spectrum", "--system", "ho", "--level", "1", "--format", "csv"],
            capsys,
        )
        assert code == 0
        header = out.splitlines()[0].split(",")
        assert {"n", "m", "E_numeric", "E_reference"} <= set(header)


def test_parse_helpers_reject_garbage():
    with pytest.raises(ConfigError):
        cli.parse_fraction("one half")
    with pytest.raises(ConfigError):
        cli.parse_grid("60;4000")
    with pytest.raises(ConfigError):
        cli.parse_state("3")
