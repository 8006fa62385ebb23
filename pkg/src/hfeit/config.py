"""Run configuration: flat dotted key = value files.

The format is one `key = value` pair per line, blank lines and
full-line `#` comments allowed.  Keys are dotted paths; unknown or
duplicate keys are hard errors, because a silently ignored typo in a
physics parameter is worse than a crash.  All frequencies are linear
MHz (angular = 2pi x value).

A config names either a preset scenario

    scenario = full

or an inline one

    scenario = inline
    scenario.nuclear_spin = 7/2
    scenario.ground.label = 6S1/2
    scenario.ground.j = 1/2
    scenario.ground.f = 4
    ...                       # same keys per role, m_max optional

plus the drive, decay, scan, and reporting sections (see DEFAULTS).
``write_config`` emits a file that reparses to an equal RunConfig.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .angular import HalfInteger
from .couplings import FieldSpec
from .errors import ConfigError
from .model import ROLE_ORDER, FineLevel, Scenario, scenario_full, scenario_truncated
from .spectrum import DecayModel, DriveConfig

__all__ = ["ScanSpec", "RunConfig", "parse_config", "load_config", "write_config",
           "default_config", "PRESETS"]

PRESETS = {"full": scenario_full, "truncated": scenario_truncated}

DEFAULTS = {
    "scenario": "full",
    "probe.rabi_mhz": 0.5,
    "probe.polarization": (0.0, 0.0, 1.0),
    "coupling.rabi_mhz": 20.0,
    "coupling.polarization": (0.0, 0.0, 1.0),
    "rf.rabi_mhz": 200.0,
    "rf.polarization": (0.0, 0.0, 1.0),
    "detuning.probe_mhz": 0.0,
    "detuning.rf_mhz": 0.0,
    "decay.intermediate_mhz": 5.2,
    "decay.rydberg_mhz": 0.01,
    "decay.extra_dephasing_mhz": 0.0,
    "scan.start_mhz": -300.0,
    "scan.stop_mhz": 300.0,
    "scan.points": 601,
    "scan.optical_depth": 1.0,
    "peaks.min_prominence": 0.05,
    "cluster.tolerance_mhz": None,
    "output.format": "csv",
}

_SCENARIO_ROLE_KEYS = ("label", "j", "f", "m_max")


@dataclass(frozen=True)
class ScanSpec:
    """Coupling-detuning grid plus the transmission optical depth."""

    start_mhz: float
    stop_mhz: float
    points: int
    optical_depth: float

    def grid(self):
        import numpy as np

        if self.points < 1:
            raise ConfigError("scan.points must be at least 1")
        if self.stop_mhz <= self.start_mhz:
            raise ConfigError("scan.stop_mhz must exceed scan.start_mhz")
        return np.linspace(self.start_mhz, self.stop_mhz, self.points)


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs: scenario, drives, decay, reporting."""

    scenario_name: str
    scenario: Scenario
    drive: DriveConfig
    decay: DecayModel
    scan: ScanSpec
    cluster_tolerance_mhz: float | None
    min_prominence: float
    output_format: str


def _parse_half(key: str, raw: str) -> HalfInteger:
    try:
        return HalfInteger.coerce(Fraction(raw))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{key}: not a half-integer: {raw!r}") from exc


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: not a number: {raw!r}") from exc


def _parse_polarization(key: str, raw: str) -> tuple[complex, ...]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"{key}: polarization needs three comma-separated components")
    try:
        return tuple(complex(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{key}: bad component in {raw!r}") from exc


def _read_pairs(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def _build_inline_scenario(pairs: dict[str, str]) -> Scenario:
    if "scenario.nuclear_spin" not in pairs:
        raise ConfigError("inline scenario requires scenario.nuclear_spin")
    ispin = _parse_half("scenario.nuclear_spin", pairs.pop("scenario.nuclear_spin"))
    levels = []
    for role in ROLE_ORDER:
        prefix = f"scenario.{role}."
        got = {k[len(prefix):]: pairs.pop(k) for k in list(pairs) if k.startswith(prefix)}
        for k in got:
            if k not in _SCENARIO_ROLE_KEYS:
                raise ConfigError(f"unknown key {prefix}{k}")
        for req in ("label", "j", "f"):
            if req not in got:
                raise ConfigError(f"inline scenario requires {prefix}{req}")
        fs = tuple(
            _parse_half(prefix + "f", part.strip()) for part in got["f"].split(",")
        )
        m_max = _parse_half(prefix + "m_max", got["m_max"]) if "m_max" in got else None
        levels.append(FineLevel(role, got["label"], _parse_half(prefix + "j", got["j"]),
                                fs, m_max))
    try:
        return Scenario("inline", ispin, tuple(levels))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(text: str) -> RunConfig:
    """Parse config text into a RunConfig; any unknown key is an error."""
    pairs = _read_pairs(text)

    scenario_name = pairs.pop("scenario", DEFAULTS["scenario"])
    if scenario_name in PRESETS:
        scenario = PRESETS[scenario_name]()
    elif scenario_name == "inline":
        scenario = _build_inline_scenario(pairs)
    else:
        raise ConfigError(
            f"scenario must be one of {sorted(PRESETS)} or 'inline', got {scenario_name!r}"
        )

    known = {k: v for k, v in DEFAULTS.items() if k != "scenario"}
    values: dict[str, object] = dict(known)
    for key, raw in pairs.items():
        if key not in known:
            raise ConfigError(f"unknown key {key!r}")
        if key.endswith(".polarization"):
            values[key] = _parse_polarization(key, raw)
        elif key == "scan.points":
            try:
                values[key] = int(raw)
            except ValueError as exc:
                raise ConfigError(f"{key}: not an integer: {raw!r}") from exc
        elif key == "output.format":
            if raw not in ("csv", "json"):
                raise ConfigError(f"{key}: must be csv or json, got {raw!r}")
            values[key] = raw
        elif key == "cluster.tolerance_mhz":
            values[key] = None if raw == "auto" else _parse_float(key, raw)
        else:
            values[key] = _parse_float(key, raw)

    prominence = float(values["peaks.min_prominence"])
    if not 0.0 < prominence < 1.0:
        raise ConfigError("peaks.min_prominence must lie in (0, 1)")
    tol = values["cluster.tolerance_mhz"]
    if tol is not None and tol <= 0:
        raise ConfigError("cluster.tolerance_mhz must be positive (or 'auto')")

    try:
        drive = DriveConfig(
            probe=FieldSpec("probe", ("ground", "intermediate"),
                            float(values["probe.rabi_mhz"]), values["probe.polarization"]),
            coupling=FieldSpec("coupling", ("intermediate", "rydberg_lower"),
                               float(values["coupling.rabi_mhz"]),
                               values["coupling.polarization"]),
            rf=FieldSpec("rf", ("rydberg_lower", "rydberg_upper"),
                         float(values["rf.rabi_mhz"]), values["rf.polarization"]),
            probe_detuning_mhz=float(values["detuning.probe_mhz"]),
            rf_detuning_mhz=float(values["detuning.rf_mhz"]),
        )
        decay = DecayModel(
            gamma_mhz={
                "ground": 0.0,
                "intermediate": float(values["decay.intermediate_mhz"]),
                "rydberg_lower": float(values["decay.rydberg_mhz"]),
                "rydberg_upper": float(values["decay.rydberg_mhz"]),
            },
            extra_dephasing_mhz=float(values["decay.extra_dephasing_mhz"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    scan = ScanSpec(float(values["scan.start_mhz"]), float(values["scan.stop_mhz"]),
                    int(values["scan.points"]), float(values["scan.optical_depth"]))
    if scan.optical_depth <= 0:
        raise ConfigError("scan.optical_depth must be positive")

    return RunConfig(scenario_name, scenario, drive, decay, scan,
                     tol, prominence, str(values["output.format"]))


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _format_value(key: str, config: RunConfig) -> str:
    drive, decay, scan = config.drive, config.decay, config.scan
    fields = {"probe": drive.probe, "coupling": drive.coupling, "rf": drive.rf}
    section, _, leaf = key.partition(".")
    if key.endswith(".polarization"):
        comps = []
        for c in fields[section].polarization:
            comps.append(repr(c.real) if c.imag == 0 else repr(complex(c)).strip("()"))
        return ",".join(comps)
    if key.endswith(".rabi_mhz"):
        return repr(fields[section].rabi_radial_mhz)
    mapping = {
        "detuning.probe_mhz": drive.probe_detuning_mhz,
        "detuning.rf_mhz": drive.rf_detuning_mhz,
        "decay.intermediate_mhz": decay.gamma_mhz["intermediate"],
        "decay.rydberg_mhz": decay.gamma_mhz["rydberg_lower"],
        "decay.extra_dephasing_mhz": decay.extra_dephasing_mhz,
        "scan.start_mhz": scan.start_mhz,
        "scan.stop_mhz": scan.stop_mhz,
        "scan.points": scan.points,
        "scan.optical_depth": scan.optical_depth,
        "peaks.min_prominence": config.min_prominence,
        "output.format": config.output_format,
    }
    if key == "cluster.tolerance_mhz":
        tol = config.cluster_tolerance_mhz
        return "auto" if tol is None else repr(tol)
    value = mapping[key]
    return value if isinstance(value, str) else repr(value)


def write_config(config: RunConfig) -> str:
    """Serialize a RunConfig to config text that reparses equal.

    Inline scenarios are written back key by key; preset scenarios by
    name.
    """
    lines = ["# frequencies are linear MHz (angular = 2*pi*value)"]
    lines.append(f"scenario = {config.scenario_name}")
    if config.scenario_name == "inline":
        lines.append(f"scenario.nuclear_spin = {config.scenario.nuclear_spin}")
        for level in config.scenario.levels:
            prefix = f"scenario.{level.role}."
            lines.append(f"{prefix}label = {level.label}")
            lines.append(f"{prefix}j = {level.j}")
            lines.append(f"{prefix}f = {','.join(str(f) for f in level.included_f)}")
            if level.m_max is not None:
                lines.append(f"{prefix}m_max = {level.m_max}")
    for key in DEFAULTS:
        if key == "scenario":
            continue
        lines.append(f"{key} = {_format_value(key, config)}")
    return "\n".join(lines) + "\n"


def default_config(preset: str = "full") -> RunConfig:
    """The defaults with one of the preset scenarios."""
    if preset not in PRESETS:
        raise ConfigError(f"unknown preset {preset!r}")
    return parse_config(f"scenario = {preset}\n")
