from __future__ import annotations

import os
import tempfile
from pathlib import Path
import unittest
from unittest.mock import patch

from mixmeter.config import AppConfig, load_config
from mixmeter.models import Cat3Mode, EigenMethod

CONFIG_TEXT = """
output_dir = "runs"
truncation = 96
eigen_method = "lapack"
cat3_mode = "paper"
workers = 4
log_level = "info"

[jcm]
alpha = 3.0
tmax = 10.0

[damped]
beta = 6.0
dt = 0.01
"""


class LoadConfigTests(unittest.TestCase):
    def test_defaults_without_file_or_environment(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            with patch.dict(os.environ, {}, clear=True):
                config = load_config(Path(tmpdir) / "absent.toml")

        self.assertEqual(config, AppConfig())
        self.assertIsNone(config.truncation_override)
        self.assertEqual(config.jcm.truncation, 64)
        self.assertEqual(config.damped.dt, 0.005)

    def test_reads_toml_sections(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "mixmeter.toml"
            path.write_text(CONFIG_TEXT, encoding="utf-8")
            with patch.dict(os.environ, {}, clear=True):
                config = load_config(path)

        self.assertEqual(config.output_dir, Path("runs"))
        self.assertEqual(config.truncation_override, 96)
        self.assertEqual(config.eigen_method, EigenMethod.LAPACK)
        self.assertEqual(config.cat3_mode, Cat3Mode.PAPER)
        self.assertEqual(config.workers, 4)
        self.assertEqual(config.log_level, "INFO")
        self.assertEqual(config.jcm.alpha, 3.0)
        self.assertEqual(config.jcm.tmax, 10.0)
        self.assertEqual(config.jcm.dt, 0.01)
        self.assertEqual(config.damped.beta, 6.0)
        self.assertEqual(config.damped.alpha, 2.0)

    def test_environment_overrides_file(self) -> None:
        env = {
            "MIXMETER_TRUNC": "48",
            "MIXMETER_EIGEN_METHOD": "JACOBI",
            "MIXMETER_JCM_ALPHA": "5.5",
            "MIXMETER_DAMPED_GAMMA": "0.5",
            "MIXMETER_OUTPUT_DIR": "elsewhere",
        }
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "mixmeter.toml"
            path.write_text(CONFIG_TEXT, encoding="utf-8")
            with patch.dict(os.environ, env, clear=True):
                config = load_config(path)

        self.assertEqual(config.truncation_override, 48)
        self.assertEqual(config.eigen_method, EigenMethod.JACOBI)
        self.assertEqual(config.jcm.alpha, 5.5)
        self.assertEqual(config.damped.gamma, 0.5)
        self.assertEqual(config.output_dir, Path("elsewhere"))

    def test_unparseable_environment_values_fall_back(self) -> None:
        env = {
            "MIXMETER_TRUNC": "lots",
            "MIXMETER_EIGEN_TOL": "tiny",
            "MIXMETER_CAT3_MODE": "printed",
            "MIXMETER_WORKERS": "0",
        }
        with tempfile.TemporaryDirectory() as tmpdir:
            with patch.dict(os.environ, env, clear=True):
                config = load_config(Path(tmpdir) / "absent.toml")

        self.assertIsNone(config.truncation_override)
        self.assertEqual(config.eigen_tol, 1e-13)
        self.assertEqual(config.cat3_mode, Cat3Mode.RECOMPUTED)
        self.assertEqual(config.workers, 1)


if __name__ == "__main__":
    unittest.main()
