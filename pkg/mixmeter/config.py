from __future__ import annotations

import os
import tomllib
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import TypeVar

from .models import Cat3Mode, EigenMethod

DEFAULT_CONFIG_PATH = Path("mixmeter.toml")

_E = TypeVar("_E", bound=StrEnum)


@dataclass(slots=True)
class JcmSettings:
    """Atom-field sweep defaults: field amplitude 4, lambda*t in [0, 20] step 0.01."""

    alpha: float = 4.0
    truncation: int = 64
    tmax: float = 20.0
    dt: float = 0.01


@dataclass(slots=True)
class DampedSettings:
    """Decaying-cat sweep defaults: amplitudes 2 and 7, gamma*t in [0, 5] step 0.005."""

    alpha: float = 2.0
    beta: float = 7.0
    gamma: float = 1.0
    tmax: float = 5.0
    dt: float = 0.005


@dataclass(slots=True)
class AppConfig:
    output_dir: Path = Path("output")
    truncation_override: int | None = None
    eigen_tol: float = 1e-13
    eigen_method: EigenMethod = EigenMethod.JACOBI
    cat3_mode: Cat3Mode = Cat3Mode.RECOMPUTED
    thermal_tail_tol: float = 1e-12
    workers: int = 1
    log_level: str = "WARNING"
    jcm: JcmSettings = field(default_factory=JcmSettings)
    damped: DampedSettings = field(default_factory=DampedSettings)


def _int_env(name: str, fallback: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        return fallback


def _optional_int_env(name: str, fallback: int | None) -> int | None:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return fallback
    try:
        return int(raw)
    except ValueError:
        return fallback


def _float_env(name: str, fallback: float) -> float:
    raw = os.getenv(name)
    if raw is None:
        return fallback
    try:
        return float(raw)
    except ValueError:
        return fallback


def _enum_value(enum_type: type[_E], value: object, fallback: _E) -> _E:
    if value is None:
        return fallback
    try:
        return enum_type(str(value).strip().lower())
    except ValueError:
        return fallback


def _enum_env(name: str, enum_type: type[_E], fallback: _E) -> _E:
    return _enum_value(enum_type, os.getenv(name), fallback)


def _read_toml(path: Path) -> dict:
    if not path.exists():
        return {}
    with path.open("rb") as handle:
        return tomllib.load(handle)


def load_config(config_path: Path | None = None) -> AppConfig:
    """Merge defaults, an optional TOML file and ``MIXMETER_*`` environment variables.

    Environment values win over the file. Unparseable environment values are ignored
    and the file (or default) value is kept.
    """

    file_path = config_path or DEFAULT_CONFIG_PATH
    raw = _read_toml(file_path)
    defaults = AppConfig()

    output_dir = Path(os.getenv("MIXMETER_OUTPUT_DIR", raw.get("output_dir", str(defaults.output_dir))))
    file_truncation = raw.get("truncation")
    truncation_override = _optional_int_env(
        "MIXMETER_TRUNC", int(file_truncation) if file_truncation is not None else None
    )
    eigen_tol = _float_env("MIXMETER_EIGEN_TOL", float(raw.get("eigen_tol", defaults.eigen_tol)))
    eigen_method = _enum_env(
        "MIXMETER_EIGEN_METHOD",
        EigenMethod,
        _enum_value(EigenMethod, raw.get("eigen_method"), defaults.eigen_method),
    )
    cat3_mode = _enum_env(
        "MIXMETER_CAT3_MODE",
        Cat3Mode,
        _enum_value(Cat3Mode, raw.get("cat3_mode"), defaults.cat3_mode),
    )
    thermal_tail_tol = _float_env(
        "MIXMETER_THERMAL_TAIL_TOL", float(raw.get("thermal_tail_tol", defaults.thermal_tail_tol))
    )
    workers = _int_env("MIXMETER_WORKERS", int(raw.get("workers", defaults.workers)))
    log_level = os.getenv("MIXMETER_LOG_LEVEL", raw.get("log_level", defaults.log_level)).upper()

    jcm_section = raw.get("jcm", {})
    jcm_defaults = JcmSettings()
    jcm = JcmSettings(
        alpha=_float_env("MIXMETER_JCM_ALPHA", float(jcm_section.get("alpha", jcm_defaults.alpha))),
        truncation=_int_env(
            "MIXMETER_JCM_TRUNC", int(jcm_section.get("truncation", jcm_defaults.truncation))
        ),
        tmax=float(jcm_section.get("tmax", jcm_defaults.tmax)),
        dt=float(jcm_section.get("dt", jcm_defaults.dt)),
    )

    damped_section = raw.get("damped", {})
    damped_defaults = DampedSettings()
    damped = DampedSettings(
        alpha=_float_env(
            "MIXMETER_DAMPED_ALPHA", float(damped_section.get("alpha", damped_defaults.alpha))
        ),
        beta=_float_env(
            "MIXMETER_DAMPED_BETA", float(damped_section.get("beta", damped_defaults.beta))
        ),
        gamma=_float_env(
            "MIXMETER_DAMPED_GAMMA", float(damped_section.get("gamma", damped_defaults.gamma))
        ),
        tmax=float(damped_section.get("tmax", damped_defaults.tmax)),
        dt=float(damped_section.get("dt", damped_defaults.dt)),
    )

    return AppConfig(
        output_dir=output_dir,
        truncation_override=truncation_override,
        eigen_tol=eigen_tol,
        eigen_method=eigen_method,
        cat3_mode=cat3_mode,
        thermal_tail_tol=thermal_tail_tol,
        workers=max(workers, 1),
        log_level=log_level,
        jcm=jcm,
        damped=damped,
    )
