from __future__ import annotations

import io
import os
import tempfile
from pathlib import Path
import unittest
from unittest.mock import patch

import numpy as np

from mixmeter.cli import EXIT_CONVERGENCE, EXIT_IO, EXIT_OK, EXIT_VALIDATION, main
from mixmeter.config import AppConfig
from mixmeter.density_file import write_density_file
from mixmeter.errors import ConvergenceError
from mixmeter.models import EigenMethod
from mixmeter.scenarios import ScenarioKind


def build_config(base_dir: Path) -> AppConfig:
    return AppConfig(output_dir=base_dir / "output")


class CliTests(unittest.TestCase):
    def test_two_level_writes_csv_and_summary(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config = build_config(Path(tmpdir))
            with patch("mixmeter.cli.load_config", return_value=config):
                stdout = io.StringIO()
                with patch("sys.stdout", new=stdout):
                    rc = main(["two-level", "--steps", "8", "--gnuplot"])

            self.assertEqual(rc, EXIT_OK)
            output = stdout.getvalue()
            self.assertIn("Scenario: two-level", output)
            self.assertIn("Rows: 9", output)
            self.assertIn("Script: ", output)
            self.assertTrue((Path(tmpdir) / "output" / "two-level.csv").exists())

    def test_flags_reach_scenario_spec(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config = build_config(Path(tmpdir))
            out = Path(tmpdir) / "cat3.csv"
            with patch("mixmeter.cli.load_config", return_value=config):
                with patch("mixmeter.cli.run_scenario") as run_mock:
                    run_mock.return_value = type(
                        "Result",
                        (),
                        {"kind": ScenarioKind.CAT3, "rows": 0, "csv_path": out, "script_path": None},
                    )()
                    with patch("sys.stdout", new=io.StringIO()):
                        rc = main(
                            [
                                "cat3",
                                "--alpha",
                                "2.5",
                                "--mode",
                                "paper",
                                "--out",
                                str(out),
                                "--solver",
                                "lapack",
                            ]
                        )

            self.assertEqual(rc, EXIT_OK)
            spec, passed_config = run_mock.call_args.args
            self.assertEqual(spec.kind, ScenarioKind.CAT3)
            self.assertEqual(spec.parameters, {"alpha_max": 2.5, "mode": "paper"})
            self.assertEqual(spec.output_path, out)
            self.assertFalse(spec.gnuplot)
            self.assertEqual(passed_config.eigen_method, EigenMethod.LAPACK)

    def test_trunc_flag_beats_environment(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "missing.toml"
            with patch.dict(os.environ, {"MIXMETER_TRUNC": "40", "MIXMETER_OUTPUT_DIR": tmpdir}):
                with patch("mixmeter.cli.run_scenario") as run_mock:
                    run_mock.side_effect = ConvergenceError("stop here")
                    with patch("sys.stderr", new=io.StringIO()):
                        rc = main(["--config", str(config_path), "jcm", "--trunc", "80"])

            self.assertEqual(rc, EXIT_CONVERGENCE)
            spec, passed_config = run_mock.call_args.args
            self.assertEqual(spec.parameters["truncation"], 80)
            self.assertEqual(passed_config.truncation_override, 40)

    def test_validation_error_exit_code(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config = build_config(Path(tmpdir))
            path = write_density_file(Path(tmpdir) / "rho.txt", np.diag([0.6, 0.6]))
            with patch("mixmeter.cli.load_config", return_value=config):
                stderr = io.StringIO()
                with patch("sys.stderr", new=stderr):
                    rc = main(["analyze", str(path)])

            self.assertEqual(rc, EXIT_VALIDATION)
            self.assertTrue(stderr.getvalue().startswith("error: "))
            self.assertEqual(len(stderr.getvalue().strip().splitlines()), 1)

    def test_out_of_range_thermal_tolerance_is_validation_error(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "missing.toml"
            env = {"MIXMETER_THERMAL_TAIL_TOL": "0", "MIXMETER_OUTPUT_DIR": tmpdir}
            with patch.dict(os.environ, env):
                stderr = io.StringIO()
                with patch("sys.stderr", new=stderr):
                    rc = main(["--config", str(config_path), "thermal"])

            self.assertEqual(rc, EXIT_VALIDATION)
            self.assertIn("tail tolerance", stderr.getvalue())

    def test_undecodable_density_file_is_validation_error(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config = build_config(Path(tmpdir))
            path = Path(tmpdir) / "bad.txt"
            path.write_bytes(b"dim 1\n1 0 \xff\n")
            with patch("mixmeter.cli.load_config", return_value=config):
                stderr = io.StringIO()
                with patch("sys.stderr", new=stderr):
                    rc = main(["analyze", str(path)])

            self.assertEqual(rc, EXIT_VALIDATION)
            self.assertIn("line 2, column 5", stderr.getvalue())

    def test_missing_file_is_io_error(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config = build_config(Path(tmpdir))
            with patch("mixmeter.cli.load_config", return_value=config):
                with patch("sys.stderr", new=io.StringIO()):
                    rc = main(["analyze", str(Path(tmpdir) / "absent.txt")])

            self.assertEqual(rc, EXIT_IO)

    def test_analyze_reports_reference_dimension(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config = build_config(Path(tmpdir))
            path = write_density_file(Path(tmpdir) / "rho.txt", np.eye(5) / 5)
            with patch("mixmeter.cli.load_config", return_value=config):
                with patch("sys.stdout", new=io.StringIO()):
                    rc = main(["analyze", str(path), "--ref-dim", "5"])

            self.assertEqual(rc, EXIT_OK)
            header = (Path(tmpdir) / "output" / "analyze.csv").read_text(encoding="utf-8").splitlines()[0]
            self.assertEqual(header, "dim,S,xi,dS2,q_s,S_normalized,xi_normalized")

    def test_malformed_config_file(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "mixmeter.toml"
            config_path.write_text("output_dir = [unclosed\n", encoding="utf-8")
            with patch("sys.stderr", new=io.StringIO()):
                rc = main(["--config", str(config_path), "ledger"])

            self.assertEqual(rc, EXIT_VALIDATION)


if __name__ == "__main__":
    unittest.main()
