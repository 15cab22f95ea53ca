import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from dataclasses import replace

import pytest

from satrelay import cli
from satrelay.cli import CSV_HEADER, RunRow, emit_csv, emit_svg, run
from satrelay.mcsim import MCConfig, OutageEstimate
SVG_NS = "{http://www.w3.org/2000/svg}"


def analytic_spec(preset, csv_path, svg_path=None):
    spec = cli._preset_spec(preset)
    return replace(spec, mc=None, csv_path=str(csv_path), svg_path=svg_path and str(svg_path))


class TestSpecValidation:
    def test_preset_fig3_cardinality(self, tmp_path):
        rows = run(analytic_spec("fig3", tmp_path / "f3.csv"))
        assert len(rows) == 40  # 2 schemes x 4 conditions x 5 K values

    def test_bad_names_rejected(self):
        base = cli._preset_spec("fig1")
        with pytest.raises(ValueError):
            replace(base, schemes=("XX",))
        with pytest.raises(ValueError):
            replace(base, conditions=("HZ",))
        with pytest.raises(ValueError):
            replace(base, k_values=())

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            cli._preset_spec("fig9")


class TestRun:
    def test_fig1_scheme_ordering(self, tmp_path):
        rows = run(analytic_spec("fig1", tmp_path / "f1.csv"))
        by_point = {}
        for r in rows:
            by_point.setdefault((r.condition, r.snr_db), {})[r.scheme] = r.op_analytic
        assert len(by_point) == 22
        for ops in by_point.values():
            # strict below saturation; at the lowest SNRs the SS/SC values
            # round to exactly 1.0 in double precision and can only tie
            assert ops["MRC"] <= ops["SC"] <= ops["SS"]
            if ops["SS"] < 1.0:
                assert ops["MRC"] < ops["SC"] < ops["SS"]

    def test_mc_columns_optional(self, tmp_path):
        rows = run(analytic_spec("fig3", tmp_path / "f3.csv"))
        assert all(r.mc is None for r in rows)
        assert all(r.op_asymptotic is not None for r in rows)

    def test_ss_rows_have_no_asymptote(self, tmp_path):
        rows = run(analytic_spec("fig1", tmp_path / "f1.csv"))
        assert all(r.op_asymptotic is None for r in rows if r.scheme == "SS")

    def test_worker_pool_matches_serial(self, tmp_path):
        spec = replace(
            analytic_spec("fig3", tmp_path / "a.csv"),
            mc=MCConfig(trials=20_000, seed=5),
        )
        assert run(spec, workers=1) == run(spec, workers=3)


class TestCsv:
    def test_header_and_shape(self, tmp_path):
        path = tmp_path / "out.csv"
        spec = replace(analytic_spec("fig3", path), mc=MCConfig(trials=10_000, seed=1))
        emit_csv(run(spec), str(path))
        data = path.read_bytes()
        lines = data.decode("utf-8").split("\n")
        assert lines[0] == CSV_HEADER
        assert len([l for l in lines if l]) == 41
        assert b"\r" not in data

    def test_byte_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        spec = replace(analytic_spec("fig3", a), mc=MCConfig(trials=10_000, seed=77))
        emit_csv(run(spec, workers=1), str(a))
        emit_csv(run(replace(spec, csv_path=str(b)), workers=2), str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_empty_fields_without_mc(self, tmp_path):
        path = tmp_path / "no_mc.csv"
        emit_csv(run(analytic_spec("fig3", path)), str(path))
        row = path.read_text().split("\n")[1].split(",")
        assert len(row) == 11
        assert row[6:] == ["", "", "", "", ""]

    def test_scientific_notation(self, tmp_path):
        path = tmp_path / "sci.csv"
        emit_csv(run(analytic_spec("fig3", path)), str(path))
        cell = path.read_text().split("\n")[1].split(",")[4]
        assert "e" in cell and len(cell.split("e")[0]) >= 18


class TestSvg:
    def _mc(self, p):
        return OutageEstimate(p_hat=p, ci_low=p * 0.9, ci_high=min(1.0, p * 1.1), trials=1000)

    def test_valid_xml_and_series_count(self, tmp_path):
        path = tmp_path / "chart.svg"
        spec = replace(analytic_spec("fig3", path), mc=MCConfig(trials=10_000, seed=3))
        rows = run(spec)
        emit_svg(rows, str(path))
        root = ET.parse(path).getroot()
        polylines = root.findall(f".//{SVG_NS}polyline")
        # 8 (scheme, condition) groups x (analytic, asymptotic, mc)
        assert len(polylines) == 24

    def test_y_mapping_tracks_log_op(self, tmp_path):
        rows = [
            RunRow("SS", "HH", 5, 0.0, 1e-1, None, None),
            RunRow("SS", "HH", 5, 5.0, 1e-2, None, None),
            RunRow("SS", "HH", 5, 10.0, 1e-3, None, None),
        ]
        path = tmp_path / "three.svg"
        emit_svg(rows, str(path))
        root = ET.parse(path).getroot()
        pts = root.find(f".//{SVG_NS}polyline").get("points").split()
        ys = [float(p.split(",")[1]) for p in pts]
        # decades span the plot height uniformly: 1e-1 at the top edge,
        # 1e-3 at the bottom, 1e-2 exactly between
        assert ys[0] == pytest.approx(40.0)
        assert ys[2] == pytest.approx(480.0)
        assert ys[1] == pytest.approx((ys[0] + ys[2]) / 2.0)
        assert ys[0] < ys[1] < ys[2]

    def test_k_axis_chosen_for_k_sweeps(self, tmp_path):
        path = tmp_path / "k.svg"
        emit_svg(run(analytic_spec("fig3", path)), str(path))
        text = path.read_text()
        assert "satellites in LoS" in text

    def test_empty_table_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_svg([], str(tmp_path / "x.svg"))


class TestConfigFile:
    def test_parse(self):
        cfg = cli.parse_config_text(
            """
            # experiment
            preset = custom
            schemes = SS, SC
            k_values = 1, 5
            trials = 1000
            """
        )
        assert cfg["preset"] == "custom"
        assert cli._split_list(cfg["schemes"]) == ["SS", "SC"]

    def test_bad_line_rejected(self):
        with pytest.raises(ValueError):
            cli.parse_config_text("schemes: SS")

    def test_custom_run_from_config(self, tmp_path):
        conf = tmp_path / "exp.conf"
        out = tmp_path / "exp.csv"
        conf.write_text(
            "schemes = SS\nconditions = HH\nk_values = 1\n"
            "snr_db = 5, 10\nrate_r = 0.5\ntrials = 5000\nseed = 2\n"
            f"csv = {out}\n"
        )
        assert cli.main(["run", "--config", str(conf)]) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 3

    def test_flag_overrides_config(self, tmp_path):
        conf = tmp_path / "exp.conf"
        out = tmp_path / "o.csv"
        conf.write_text(
            "schemes = SS\nconditions = HH\nk_values = 1\nsnr_db = 5\n"
            "trials = 5000\nseed = 2\n"
        )
        assert cli.main(["run", "--config", str(conf), "--no-mc", "--csv", str(out)]) == 0
        row = out.read_text().strip().split("\n")[1].split(",")
        assert row[6] == ""  # --no-mc wins over config trials


class TestMain:
    def test_run_preset_exit_zero(self, tmp_path):
        csv = tmp_path / "f3.csv"
        svg = tmp_path / "f3.svg"
        rc = cli.main(
            [
                "run",
                "--preset",
                "fig3",
                "--no-mc",
                "--csv",
                str(csv),
                "--svg",
                str(svg),
            ]
        )
        assert rc == 0
        assert csv.exists() and svg.exists()

    def test_error_is_machine_readable(self, tmp_path, capsys):
        conf = tmp_path / "bad.conf"
        conf.write_text("schemes = WHAT\nconditions = HH\nk_values = 1\nsnr_db = 5\n")
        rc = cli.main(["run", "--config", str(conf), "--no-mc"])
        captured = capsys.readouterr()
        assert rc == 1
        payload = json.loads(captured.err.strip().split("\n")[-1])
        assert payload["error"] == "ValueError"
        assert "scheme" in payload["message"]

    def test_linkbudget_subcommand(self, capsys):
        assert cli.main(["linkbudget"]) == 0
        out = capsys.readouterr().out
        assert "snr_db_min=" in out and "snr_db_max=" in out
        values = {
            line.split("=")[0]: float(line.split("=")[1])
            for line in out.strip().split("\n")
            if "=" in line and " " not in line.split("=")[0]
        }
        assert values["snr_db_min"] < values["snr_db_max"]
        assert abs(values["snr_db_min"] - (-9.0)) < 6.0
        assert abs(values["snr_db_max"] - 20.0) < 6.0

    def test_module_entrypoint_subprocess(self, tmp_path):
        csv = tmp_path / "cli.csv"
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "satrelay",
                "run",
                "--preset",
                "fig3",
                "--no-mc",
                "--csv",
                str(csv),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert csv.exists()

    def test_validate_subcommand(self, capsys):
        assert cli.main(["validate"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert out.count("PASS") >= 14
