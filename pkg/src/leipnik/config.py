"""Scenario configuration: presets, flat key=value files, CLI overrides.

A scenario is fully described by a flat mapping of string keys; values are
layered defaults < preset < config file < command-line flags.  Initial
conditions are per-component (base, wavenumber) pairs realized as
base * (1 + 0.3*cos(omega*x)); a wavenumber whose cosine is not
Neumann-compatible with the grid length triggers a warning, not an error.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .model import Params
from .pde import Field3, Grid1D, StepperConfig

__all__ = ["ICSpec", "ScenarioConfig", "PRESETS", "parse_config_file", "build_scenario"]

MODULATION = 0.3


@dataclass(frozen=True)
class ICSpec:
    """Initial condition: one (base, omega) pair per component."""

    components: tuple

    def point(self) -> np.ndarray:
        """Spatially uniform reading (the base amplitudes)."""
        return np.array([b for b, _ in self.components], dtype=float)

    def field(self, grid: Grid1D) -> Field3:
        x = grid.x
        rows = [b * (1.0 + MODULATION * np.cos(w * x)) for b, w in self.components]
        return Field3(grid, np.stack(rows))

    def wavenumbers(self):
        return [w for _, w in self.components]


def _parse_omega(text: str, key: str) -> float:
    """Accept plain floats or 'pi'-forms like pi/2, 3pi/5, 0.7pi."""
    t = text.strip().lower()
    m = re.fullmatch(r"([+-]?\d*\.?\d*)\s*pi\s*(?:/\s*(\d*\.?\d+))?", t)
    if m:
        coeff = float(m.group(1)) if m.group(1) not in ("", "+", "-") else float(m.group(1) + "1")
        val = coeff * math.pi
        if m.group(2):
            val /= float(m.group(2))
        return val
    try:
        return float(t)
    except ValueError:
        raise ConfigError(key, f"cannot parse wavenumber {text!r}") from None


def parse_ic(text: str, key: str) -> ICSpec:
    """Parse 'base:omega, base:omega, base:omega'."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(key, "expected three comma-separated components")
    comps = []
    for part in parts:
        base_s, _, omega_s = part.partition(":")
        try:
            base = float(base_s)
        except ValueError:
            raise ConfigError(key, f"cannot parse amplitude {base_s!r}") from None
        omega = _parse_omega(omega_s, key) if omega_s else 0.0
        comps.append((base, omega))
    return ICSpec(tuple(comps))


@dataclass
class ScenarioConfig:
    """Everything a command needs to run: parameters, grid, stepper, ICs."""

    params: Params = field(default_factory=Params)
    grid: Grid1D = field(default_factory=Grid1D)
    stepper: StepperConfig = field(default_factory=StepperConfig)
    master_ic: ICSpec = ICSpec(((0.349, 0.0), (0.0, 0.0), (-0.3, 0.0)))
    slave_ic: ICSpec = ICSpec(((0.7, 0.0), (0.15, 0.0), (0.7, 0.0)))
    t_end: float = 100.0
    out: str | None = None
    snapshot_count: int = 200
    controls: bool = True
    u3_sup: float | None = None
    preset: str | None = None

    def warn_incompatible_wavenumbers(self, stream=None) -> list[float]:
        """Emit a warning for wavenumbers without zero flux at x = length."""
        stream = stream or sys.stderr
        bad = []
        for w in self.master_ic.wavenumbers() + self.slave_ic.wavenumbers():
            if abs(math.sin(w * self.grid.length)) > 1e-9:
                bad.append(w)
        for w in sorted(set(bad)):
            print(
                f"warning: wavenumber {w:g} is not Neumann-compatible with length {self.grid.length:g} "
                f"(sin(omega*L) = {math.sin(w * self.grid.length):.3e})",
                file=stream,
            )
        return bad

    def as_flat_dict(self) -> dict:
        def ic_str(ic: ICSpec) -> str:
            return ", ".join(f"{b:g}:{w:.17g}" for b, w in ic.components)

        return {
            "a": self.params.a,
            "alpha": self.params.alpha,
            "k": self.params.k,
            "d1": self.params.d1,
            "d2": self.params.d2,
            "d3": self.params.d3,
            "length": self.grid.length,
            "grid_n": self.grid.n,
            "dt": self.stepper.dt,
            "scheme": self.stepper.scheme,
            "t_end": self.t_end,
            "snapshot_count": self.snapshot_count,
            "controls": "on" if self.controls else "off",
            "master_ic": ic_str(self.master_ic),
            "slave_ic": ic_str(self.slave_ic),
            "preset": self.preset or "",
            "u3_sup": self.u3_sup if self.u3_sup is not None else "",
        }


# The two in-repo scenarios: the classic point initial data (0.349, 0, -0.3)
# for the ODE runs, and the spatially modulated master/slave pair on a
# length-10 interval for the synchronized PDE runs.
PRESETS: dict[str, dict[str, str]] = {
    "paper-ode": {
        "a": "0.4",
        "alpha": "0.175",
        "dt": "1e-3",
        "t_end": "100",
        "master_ic": "0.349:0, 0:0, -0.3:0",
    },
    "paper-sync": {
        "a": "0.4",
        "alpha": "0.175",
        "k": "5",
        "d1": "0.1",
        "d2": "0.1",
        "d3": "0.1",
        "length": "10",
        "grid_n": "201",
        "dt": "1e-3",
        "t_end": "40",
        "scheme": "crank-nicolson",
        "master_ic": "0.349:pi/2, 0:0, -0.3:pi/2",
        "slave_ic": "0.7:3pi/5, 0.15:2pi/5, 0.7:7pi/10",
    },
}

_FLOAT_KEYS = ("a", "alpha", "k", "d1", "d2", "d3", "length", "dt", "t_end", "u3_sup")
_INT_KEYS = ("grid_n", "snapshot_count")
_KNOWN_KEYS = set(_FLOAT_KEYS) | set(_INT_KEYS) | {
    "scheme",
    "controls",
    "master_ic",
    "slave_ic",
    "preset",
    "out",
}


def parse_config_file(path: str) -> dict[str, str]:
    """Read a flat key=value file ('#' comments, blank lines ignored)."""
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}", f"expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _KNOWN_KEYS:
                raise ConfigError(key, "unknown key")
            raw[key] = value.strip()
    return raw


def build_scenario(layers: list[dict[str, str]]) -> ScenarioConfig:
    """Merge string-valued layers (later wins) into a typed ScenarioConfig."""
    merged: dict[str, str] = {}
    preset = None
    for layer in layers:
        if "preset" in layer and layer["preset"]:
            name = layer["preset"]
            if name not in PRESETS:
                raise ConfigError("preset", f"unknown preset {name!r} (have {sorted(PRESETS)})")
            preset = name
            merged.update(PRESETS[name])
        merged.update({k: v for k, v in layer.items() if k != "preset" and v is not None})

    def get_float(key: str, default: float) -> float:
        if key not in merged or merged[key] == "":
            return default
        try:
            return float(merged[key])
        except ValueError:
            raise ConfigError(key, f"cannot parse number {merged[key]!r}") from None

    def get_int(key: str, default: int) -> int:
        if key not in merged or merged[key] == "":
            return default
        try:
            return int(merged[key])
        except ValueError:
            raise ConfigError(key, f"cannot parse integer {merged[key]!r}") from None

    try:
        params = Params(
            a=get_float("a", 0.4),
            alpha=get_float("alpha", 0.175),
            k=get_float("k", 5.0),
            d1=get_float("d1", 0.1),
            d2=get_float("d2", 0.1),
            d3=get_float("d3", 0.1),
        )
        grid = Grid1D(length=get_float("length", 10.0), n=get_int("grid_n", 201))
        scheme = merged.get("scheme", "crank-nicolson")
        stepper = StepperConfig(dt=get_float("dt", 1e-3), scheme=scheme)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("params", str(exc)) from None

    controls_s = merged.get("controls", "on")
    if controls_s not in ("on", "off"):
        raise ConfigError("controls", f"expected 'on' or 'off', got {controls_s!r}")

    defaults = ScenarioConfig()
    cfg = ScenarioConfig(
        params=params,
        grid=grid,
        stepper=stepper,
        master_ic=parse_ic(merged["master_ic"], "master_ic") if "master_ic" in merged else defaults.master_ic,
        slave_ic=parse_ic(merged["slave_ic"], "slave_ic") if "slave_ic" in merged else defaults.slave_ic,
        t_end=get_float("t_end", 100.0),
        out=merged.get("out"),
        snapshot_count=get_int("snapshot_count", 200),
        controls=controls_s == "on",
        u3_sup=get_float("u3_sup", None) if merged.get("u3_sup", "") != "" else None,
        preset=preset,
    )
    return cfg
