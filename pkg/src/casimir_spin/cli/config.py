"""Run configuration: flat ``key = value`` files plus command-line overrides."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np
from scipy import constants

from ..errors import ConfigError

UNIT_SYSTEMS = ("natural", "gaussian")
FAULTS = ("none", "prefactor", "sign")
QUANTITIES = ("depol", "mode-torque", "vacuum")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self):
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def to_text(self):
        return f"{self.name}:{self.start!r}:{self.stop!r}:{self.count}:{self.spacing}"

    @classmethod
    def parse(cls, text):
        parts = [p.strip() for p in text.split(":")]
        if len(parts) not in (4, 5):
            raise ConfigError(f"sweep axis must be name:start:stop:count[:linear|log], got {text!r}")
        name = parts[0]
        if name not in SWEEPABLE:
            raise ConfigError(f"cannot sweep {name!r}; choose from {', '.join(SWEEPABLE)}")
        try:
            start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise ConfigError(f"bad sweep axis {text!r}: {exc}") from None
        spacing = parts[4] if len(parts) == 5 else "linear"
        if spacing not in ("linear", "log"):
            raise ConfigError(f"sweep spacing must be linear or log, got {spacing!r}")
        if count < 1 or not (math.isfinite(start) and math.isfinite(stop)):
            raise ConfigError(f"sweep axis {name} needs finite bounds and count >= 1")
        if spacing == "log" and (start <= 0 or stop <= 0):
            raise ConfigError(f"log sweep of {name} needs positive bounds")
        return cls(name, start, stop, count, spacing)


@dataclass(frozen=True)
class RunConfig:
    # ellipsoid
    a: float = 1.0
    b: float = 1.0
    c: float = 2.0
    eps: float = 1.0
    eps1: float = 5.0
    # overrides the ellipsoid-derived anisotropic polarizability when set
    alpha: float | None = None
    # spin
    Omega: float = 0.01
    theta: float = math.pi / 4
    # incident mode
    omega: float = 1.0
    Ex: float = 1.0
    Ez: float = 1.0
    Ey: float = 0.0
    # vacuum spectrum; cutoff None means c / max(a, b, c)
    cutoff: float | None = None
    cutoff_shape: str = "sharp"
    volume: float = 1.0
    quadrature_points: int = 64
    spectrum_samples: int = 65
    tol: float = 1e-10
    # units: scale of one length/time/mass unit in cm/s/g
    units_system: str = "natural"
    units_length: float = 1.0
    units_time: float = 1.0
    units_mass: float = 1.0
    # sweep
    sweep: tuple = ()
    quantity: str = "mode-torque"
    # verification harness
    inject_fault: str = "none"
    seed: int = 12345

    def __post_init__(self):
        if self.units_system not in UNIT_SYSTEMS:
            raise ConfigError(f"units.system must be one of {UNIT_SYSTEMS}, got {self.units_system!r}")
        if self.inject_fault not in FAULTS:
            raise ConfigError(f"inject_fault must be one of {FAULTS}, got {self.inject_fault!r}")
        if self.quantity not in QUANTITIES:
            raise ConfigError(f"quantity must be one of {QUANTITIES}, got {self.quantity!r}")
        if len(self.sweep) > 2:
            raise ConfigError("at most two sweep axes are supported")
        for name in ("units_length", "units_time", "units_mass"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name.replace('_', '.', 1)} must be positive")

    @property
    def speed_of_light(self):
        if self.units_system == "natural":
            return 1.0
        return constants.c * 100.0 * self.units_time / self.units_length

    @property
    def hbar(self):
        if self.units_system == "natural":
            return 1.0
        return constants.hbar * 1e7 * self.units_time / (self.units_mass * self.units_length**2)

    def to_dict(self):
        """Flat, JSON-friendly view; keys match the config-file keys."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            key = _ATTR_TO_KEY.get(f.name, f.name)
            if f.name == "sweep":
                v = ", ".join(ax.to_text() for ax in v)
            out[key] = v
        return out

    def to_text(self):
        lines = []
        for k, v in self.to_dict().items():
            if v is None or v == "":
                continue
            lines.append(f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}")
        return "\n".join(lines) + "\n"


_ATTR_TO_KEY = {
    "units_system": "units.system",
    "units_length": "units.length",
    "units_time": "units.time",
    "units_mass": "units.mass",
}
_KEY_TO_ATTR = {v: k for k, v in _ATTR_TO_KEY.items()}
_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
SWEEPABLE = ("a", "b", "c", "eps", "eps1", "alpha", "Omega", "theta", "omega",
             "Ex", "Ez", "Ey", "cutoff", "volume")


def _coerce(attr, raw):
    kind = _FIELD_TYPES[attr]
    if isinstance(raw, str):
        raw = raw.strip()
    if attr == "sweep":
        if isinstance(raw, (list, tuple)):
            items = raw
        else:
            items = [s for s in raw.split(",") if s.strip()]
        return tuple(ax if isinstance(ax, SweepAxis) else SweepAxis.parse(ax) for ax in items)
    if raw is None or raw == "" or raw == "None":
        if "None" in kind:
            return None
        raise ConfigError(f"{attr} may not be empty")
    if kind.startswith("float"):
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{attr} must be a number, got {raw!r}") from None
    if kind == "int":
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{attr} must be an integer, got {raw!r}") from None
    return str(raw)


def parse_keyvalue(text, source="<config>"):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        attr = _KEY_TO_ATTR.get(key, key)
        if attr not in _FIELD_TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[attr] = _coerce(attr, val)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    return values


def load_config(path):
    """Read a key-value file, or the embedded ``config`` of a JSON report."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
        data = data.get("config", data)
        values = {}
        for key, val in data.items():
            attr = _KEY_TO_ATTR.get(key, key)
            if attr not in _FIELD_TYPES:
                raise ConfigError(f"{path}: unknown key {key!r}")
            values[attr] = _coerce(attr, val)
        return values
    return parse_keyvalue(text, source=str(path))


def build_config(file_values=None, overrides=None):
    """Merge file values with overrides (overrides win) into a RunConfig."""
    merged = dict(file_values or {})
    for k, v in (overrides or {}).items():
        if v is not None:
            merged[k] = _coerce(k, v) if isinstance(v, str) else v
    return RunConfig(**merged)


def with_values(cfg: RunConfig, **values):
    return replace(cfg, **values)
