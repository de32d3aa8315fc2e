"""Run configurations and JSON manifests for the CLI.

Configs round-trip exactly through JSON (parse(serialize(c)) == c) and every
tolerance a run uses is written into its manifest, so a rerun from a manifest
reproduces the output byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from . import __version__

__all__ = [
    "ConfigError",
    "SimulateConfig",
    "ScatterConfig",
    "FormConfig",
    "load_config",
    "write_manifest",
]


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


def _take(data: dict, fields: dict, kind: str) -> dict:
    unknown = set(data) - set(fields)
    if unknown:
        raise ConfigError(f"unknown {kind} config keys: {sorted(unknown)}")
    out = {}
    for key, (required, default) in fields.items():
        if key in data:
            out[key] = data[key]
        elif required:
            raise ConfigError(f"missing {kind} config key: {key!r}")
        else:
            out[key] = default
    return out


@dataclass(frozen=True)
class SimulateConfig:
    """Trajectory run: either an explicit initial state or a planar seed.

    kind = "planar": initial conditions come from the closed-form planar
    trajectory (m2, z0, z1) at slope z_start, integrated until slope z_stop.
    kind = "state": explicit (l, r1, r2, v0, v1, v2) plus duration t_end.
    """

    kind: str
    g: float = 1.0
    tol: float = 1e-10
    seed: int = 0
    max_step: float | None = None
    m2: float | None = None
    z0: float | None = None
    z1: float | None = None
    z_start: float | None = None
    z_stop: float | None = None
    state: list[float] | None = None
    t_end: float | None = None

    def __post_init__(self):
        if self.kind == "planar":
            for key in ("m2", "z0", "z1", "z_start", "z_stop"):
                if getattr(self, key) is None:
                    raise ConfigError(f"planar simulate config needs {key!r}")
        elif self.kind == "state":
            if self.state is None or len(self.state) != 6:
                raise ConfigError("state simulate config needs a 6-component 'state'")
            if self.t_end is None:
                raise ConfigError("state simulate config needs 't_end'")
        else:
            raise ConfigError(f"simulate kind must be 'planar' or 'state', got {self.kind!r}")

    @staticmethod
    def from_dict(data: dict) -> "SimulateConfig":
        fields = {
            "kind": (True, None),
            "g": (False, 1.0),
            "tol": (False, 1e-10),
            "seed": (False, 0),
            "max_step": (False, None),
            "m2": (False, None),
            "z0": (False, None),
            "z1": (False, None),
            "z_start": (False, None),
            "z_stop": (False, None),
            "state": (False, None),
            "t_end": (False, None),
        }
        return SimulateConfig(**_take(data, fields, "simulate"))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ScatterConfig:
    """Scattering table over an (M1, M2) grid at fixed incoming data."""

    g: float
    y1: float
    z1: float
    v1_inf: float
    m1_grid: list[float]
    m2_grid: list[float]
    seed: int = 0

    def __post_init__(self):
        if not self.m1_grid or not self.m2_grid:
            raise ConfigError("scatter config needs non-empty m1_grid and m2_grid")

    @staticmethod
    def from_dict(data: dict) -> "ScatterConfig":
        fields = {
            "g": (True, None),
            "y1": (True, None),
            "z1": (True, None),
            "v1_inf": (True, None),
            "m1_grid": (True, None),
            "m2_grid": (True, None),
            "seed": (False, 0),
        }
        got = _take(data, fields, "scatter")
        for key in ("m1_grid", "m2_grid"):
            got[key] = _expand_grid(got[key], key)
        return ScatterConfig(**got)

    def to_dict(self) -> dict:
        return asdict(self)


def _expand_grid(spec, key) -> list[float]:
    if isinstance(spec, dict):
        missing = {"start", "stop", "num"} - set(spec)
        if missing:
            raise ConfigError(f"{key} range spec needs start/stop/num, missing {sorted(missing)}")
        num = int(spec["num"])
        if num < 1:
            raise ConfigError(f"{key} num must be >= 1")
        start, stop = float(spec["start"]), float(spec["stop"])
        if num == 1:
            return [start]
        step = (stop - start) / (num - 1)
        return [start + i * step for i in range(num)]
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    raise ConfigError(f"{key} must be a list or a start/stop/num range")


@dataclass(frozen=True)
class FormConfig:
    """Differential-form integration: a preset domain plus a field name.

    kinds: line (presets: trisectrice-loop, segment), surface (cubic-band,
    polar-band, sphere), volume (box).  Fields: one, identity, reciprocal,
    inverse-conjugate.
    """

    kind: str
    preset: str
    field_name: str = "inverse-conjugate"
    tol: float = 1e-9
    params: dict = field(default_factory=dict)

    KINDS = ("line", "surface", "volume")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigError(f"form kind must be one of {self.KINDS}, got {self.kind!r}")

    @staticmethod
    def from_dict(data: dict) -> "FormConfig":
        fields = {
            "kind": (True, None),
            "preset": (True, None),
            "field_name": (False, "inverse-conjugate"),
            "tol": (False, 1e-9),
            "params": (False, {}),
        }
        return FormConfig(**_take(data, fields, "integrate-form"))

    def to_dict(self) -> dict:
        return asdict(self)


_CONFIG_TYPES = {
    "simulate": SimulateConfig,
    "scatter": ScatterConfig,
    "integrate-form": FormConfig,
}


def load_config(path, command: str):
    """Parse a config file; a manifest written by a previous run also works
    (its embedded config is extracted), which is what makes reruns exact."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    if "config" in data:  # manifest rerun
        if data.get("command") not in (None, command):
            raise ConfigError(
                f"manifest {path} was written by {data.get('command')!r}, not {command!r}"
            )
        data = data["config"]
    return _CONFIG_TYPES[command].from_dict(data)


def write_manifest(path, command: str, config, outputs: dict, status: str, extras: dict | None = None):
    doc = {
        "tool": "ternion",
        "version": __version__,
        "command": command,
        "config": config.to_dict(),
        "outputs": outputs,
        "status": status,
    }
    if extras:
        doc.update(extras)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc
