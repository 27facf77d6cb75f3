"""Scenario parameters and the plain-text (INI) configuration format.

A config file holds up to three sections::

    [scenario]        any ScenarioConfig field
    [sweep]           variable, start, stop, steps, configs, method
    [montecarlo]      samples, master_seed, batch_size

Keys are snake_case field names; unknown sections or keys are errors.
"""
from __future__ import annotations

import configparser
import dataclasses
import io
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .atmosphere import FOG_CLASSES


class ConfigError(ValueError):
    """Invalid scenario, sweep or Monte Carlo configuration."""


@dataclass(frozen=True)
class ScenarioConfig:
    wavelength_nm: float = 1550.0
    threshold_db: float = 3.0
    nakagami_m: int = 4
    oe_ratio: float = 1.0
    interference_db: float = 5.0
    interference_gain: float = 1.0
    horizontal_m: float = 2500.0
    urn_altitude_m: float = 200.0
    haps_altitude_m: float = 19000.0
    carrier_hz: float = 2e9
    pl_exponent: float = 2.32
    # number per km, or a fog class label
    attenuation: float | str | None = 4.5859
    visibility_km: float | None = None
    attenuation_convention: str = "literal"
    wind_speed_mps: float = 21.0
    ground_cn2: float = 1.7e-14
    tx_power_dbm: float = 32.0
    noise_power_dbm: float = -100.0
    parallel_branches: int = 2
    equal_mean_snr: bool = True
    atg_mode: str = "fso"
    wave: str = "spherical"
    ew_alpha: float | None = None
    ew_beta: float | None = None
    ew_eta: float | None = None

    def __post_init__(self):
        if isinstance(self.nakagami_m, float) and self.nakagami_m.is_integer():
            object.__setattr__(self, "nakagami_m", int(self.nakagami_m))
        if not isinstance(self.nakagami_m, int) or isinstance(self.nakagami_m, bool) \
                or self.nakagami_m < 1:
            raise ConfigError(f"nakagami_m must be an integer >= 1, got {self.nakagami_m!r}")
        if not isinstance(self.parallel_branches, int) or self.parallel_branches < 1:
            raise ConfigError("parallel_branches must be an integer >= 1")
        positive = ("wavelength_nm", "oe_ratio", "interference_gain", "haps_altitude_m",
                    "carrier_hz", "ground_cn2")
        for name in positive:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive, got {value!r}")
        for name in ("horizontal_m", "urn_altitude_m", "pl_exponent", "interference_db",
                     "wind_speed_mps"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ConfigError(f"{name} must be non-negative, got {value!r}")
        if self.urn_altitude_m >= self.haps_altitude_m:
            raise ConfigError("urn_altitude_m must be below haps_altitude_m")
        if (self.attenuation is None) == (self.visibility_km is None):
            raise ConfigError("set exactly one of attenuation and visibility_km")
        if isinstance(self.attenuation, str) and self.attenuation.lower() not in FOG_CLASSES:
            raise ConfigError(f"unknown fog class {self.attenuation!r}")
        if self.attenuation_convention not in ("db", "literal"):
            raise ConfigError("attenuation_convention must be 'db' or 'literal'")
        if self.atg_mode not in ("fso", "hybrid"):
            raise ConfigError("atg_mode must be 'fso' or 'hybrid'")
        if self.wave not in ("plane", "spherical"):
            raise ConfigError("wave must be 'plane' or 'spherical'")
        ew = (self.ew_alpha, self.ew_beta, self.ew_eta)
        if any(v is None for v in ew) and any(v is not None for v in ew):
            raise ConfigError("ew_alpha, ew_beta and ew_eta must be given together")

    @property
    def wavelength_m(self) -> float:
        return self.wavelength_nm * 1e-9


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int
    configs: tuple = ("fig2a", "fig2b", "fig2c", "fig2d")
    method: str = "analytical"

    VARIABLES = ("horizontal_m", "urn_altitude_m", "interference_db", "threshold_db")
    METHODS = ("analytical", "montecarlo", "both")

    def __post_init__(self):
        from .relaying import PRESETS

        object.__setattr__(self, "configs", tuple(self.configs))
        if self.variable not in self.VARIABLES:
            raise ConfigError(f"unknown sweep variable {self.variable!r}")
        if not self.start < self.stop:
            raise ConfigError("sweep start must be below stop")
        if not isinstance(self.steps, int) or self.steps < 2:
            raise ConfigError("sweep steps must be an integer >= 2")
        if not self.configs:
            raise ConfigError("sweep needs at least one preset")
        for c in self.configs:
            if c not in PRESETS:
                raise ConfigError(f"unknown preset {c!r}")
        if self.method not in self.METHODS:
            raise ConfigError(f"unknown method {self.method!r}")

    def values(self):
        step = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * step for i in range(self.steps - 1)] + [self.stop]


_MC_KEYS = {"samples": int, "master_seed": int, "batch_size": int}


def _parse_value(name: str, text: str, default):
    text = text.strip()
    if text.lower() == "none":
        return None
    if name == "attenuation":
        try:
            return float(text)
        except ValueError:
            return text
    if isinstance(default, bool):
        if text.lower() in ("true", "yes", "1", "on"):
            return True
        if text.lower() in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"{name}: expected a boolean, got {text!r}")
    if isinstance(default, int):
        try:
            return int(text, 0)
        except ValueError:
            raise ConfigError(f"{name}: expected an integer, got {text!r}") from None
    if isinstance(default, str):
        return text
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{name}: expected a number, got {text!r}") from None


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ", ".join(value)
    return str(value)


def parse_scenario(section) -> ScenarioConfig:
    defaults = {f.name: f.default for f in fields(ScenarioConfig)}
    kwargs = {}
    for key, text in section.items():
        if key not in defaults:
            raise ConfigError(f"unknown scenario key {key!r}")
        kwargs[key] = _parse_value(key, text, defaults[key])
    return ScenarioConfig(**kwargs)


def scenario_items(scenario: ScenarioConfig) -> dict:
    return {f.name: _format_value(getattr(scenario, f.name)) for f in fields(scenario)}


def apply_overrides(scenario: ScenarioConfig, assignments) -> ScenarioConfig:
    """Apply ``key=value`` strings on top of a scenario."""
    defaults = {f.name: f.default for f in fields(ScenarioConfig)}
    changes = {}
    for item in assignments:
        key, sep, text = item.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"expected key=value, got {item!r}")
        if key not in defaults:
            raise ConfigError(f"unknown scenario key {key!r}")
        changes[key] = _parse_value(key, text, defaults[key])
    return dataclasses.replace(scenario, **changes)


def parse_sweep(section) -> SweepSpec:
    known = {"variable", "start", "stop", "steps", "configs", "method"}
    for key in section:
        if key not in known:
            raise ConfigError(f"unknown sweep key {key!r}")
    missing = sorted({"variable", "start", "stop", "steps"} - set(section))
    if missing:
        raise ConfigError(f"sweep section is missing: {', '.join(missing)}")
    kwargs = {
        "variable": section["variable"].strip(),
        "start": _parse_value("start", section["start"], 0.0),
        "stop": _parse_value("stop", section["stop"], 0.0),
        "steps": _parse_value("steps", section["steps"], 0),
    }
    if "configs" in section:
        kwargs["configs"] = tuple(c.strip() for c in section["configs"].split(",") if c.strip())
    if "method" in section:
        kwargs["method"] = section["method"].strip().lower()
    return SweepSpec(**kwargs)


@dataclass
class ConfigFile:
    scenario: ScenarioConfig = dataclasses.field(default_factory=ScenarioConfig)
    sweep: SweepSpec | None = None
    montecarlo: dict = dataclasses.field(default_factory=dict)


def loads(text: str) -> ConfigFile:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    out = ConfigFile()
    for name in parser.sections():
        section = parser[name]
        if name == "scenario":
            out.scenario = parse_scenario(section)
        elif name == "sweep":
            out.sweep = parse_sweep(section)
        elif name == "montecarlo":
            for key, text in section.items():
                if key not in _MC_KEYS:
                    raise ConfigError(f"unknown montecarlo key {key!r}")
                out.montecarlo[key] = _parse_value(key, text, 0)
        else:
            raise ConfigError(f"unknown config section [{name}]")
    return out


def load(path) -> ConfigFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return loads(text)


def dumps(config: ConfigFile) -> str:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser["scenario"] = scenario_items(config.scenario)
    if config.sweep is not None:
        s = config.sweep
        parser["sweep"] = {k: _format_value(getattr(s, k))
                           for k in ("variable", "start", "stop", "steps", "configs", "method")}
    if config.montecarlo:
        parser["montecarlo"] = {k: str(v) for k, v in config.montecarlo.items()}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
