"""Run configuration: a JSON document with sections context, barrier,
particle, sweep and tolerances, plus top-level command/output/format keys.

Parsing is strict. Unknown keys are rejected with a spelling suggestion, and
every violation is collected before raising.
"""
from __future__ import annotations

import difflib
import json
import math
from dataclasses import dataclass, field

from .errors import ConfigError
from .units import Barrier, PhysicalContext

COMMANDS = ("soliton-verify", "scatter", "tunnel-time", "sweep", "flux", "compare")
SWEEP_PARAMETERS = ("energy", "barrier-width", "barrier-height")
FORMATS = ("csv", "json")

DEFAULT_TOLERANCES = {
    "resonance": 1e-9,
    "singularity": 1e-12,
    "equality": 1e-12,
    "grid_points": 2048,
    "time_step": 1e-4,
}
# free soliton with mu = 1 in natural units
DEFAULT_SOLITON_ENERGY = 0.5

TOP_KEYS = ("command", "context", "barrier", "particle", "sweep", "tolerances",
            "output", "format", "loop_length")
SECTION_KEYS = {
    "context": ("units", "hbar", "mass", "charge"),
    "barrier": ("width", "height", "origin"),
    "particle": ("energy", "speed", "start_x", "start_t"),
    "sweep": ("parameter", "start", "stop", "steps"),
    "tolerances": tuple(DEFAULT_TOLERANCES),
}


@dataclass(frozen=True)
class ParticleSpec:
    energy: float | None = None
    speed: float | None = None
    start_x: float = 0.0
    start_t: float = 0.0


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    start: float
    stop: float
    steps: int

    def values(self):
        step = (self.stop - self.start) / (self.steps - 1)
        vals = [self.start + i * step for i in range(self.steps - 1)]
        return vals + [self.stop]


@dataclass(frozen=True)
class RunConfig:
    command: str
    context: PhysicalContext = field(default_factory=PhysicalContext.natural)
    barrier: Barrier | None = None
    particle: ParticleSpec = field(default_factory=ParticleSpec)
    sweep_axis: SweepAxis | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_path: str = ""
    output_format: str = "csv"
    loop_length: float = 2.0 * math.pi

    def echo(self) -> dict:
        """Plain-data view of the configuration for manifests."""
        ctx = self.context
        out = {
            "command": self.command,
            "context": {"units": ctx.unit_label, "hbar": ctx.hbar, "mass": ctx.mass, "charge": ctx.charge},
            "barrier": None,
            "particle": {
                "energy": self.particle.energy,
                "speed": self.particle.speed,
                "start_x": self.particle.start_x,
                "start_t": self.particle.start_t,
            },
            "sweep": None,
            "tolerances": dict(self.tolerances),
            "output": self.output_path,
            "format": self.output_format,
            "loop_length": self.loop_length,
        }
        if self.barrier is not None:
            b = self.barrier
            out["barrier"] = {"width": b.width_a, "height": b.height_v0, "origin": b.origin}
        if self.sweep_axis is not None:
            s = self.sweep_axis
            out["sweep"] = {"parameter": s.parameter, "start": s.start, "stop": s.stop, "steps": s.steps}
        return out


def _suggest(key, allowed):
    close = difflib.get_close_matches(key, allowed, n=1)
    return f" (did you mean {close[0]!r}?)" if close else ""


def _check_keys(section, where, allowed, problems):
    for key in section:
        if key not in allowed:
            problems.append(f"unknown key {where}{key!r}{_suggest(key, allowed)}")


def _number(section, key, where, problems, *, positive=False, required=False, default=None):
    if key not in section:
        if required:
            problems.append(f"missing {where}{key}")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        problems.append(f"{where}{key} must be a finite number, got {value!r}")
        return default
    if positive and not value > 0:
        problems.append(f"{where}{key} must be > 0, got {value!r}")
        return default
    return float(value)


def _section(doc, name, problems):
    sec = doc.get(name)
    if sec is None:
        return None
    if not isinstance(sec, dict):
        problems.append(f"section {name!r} must be an object")
        return None
    _check_keys(sec, f"{name}.", SECTION_KEYS[name], problems)
    return sec


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse and validate a JSON run configuration.

    ``command`` (from the CLI subcommand) fills in a missing ``command`` key
    and must agree with it when both are present.
    """
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    return config_from_dict(doc, command)


def config_from_dict(doc: dict, command: str | None = None) -> RunConfig:
    problems: list[str] = []
    _check_keys(doc, "", TOP_KEYS, problems)

    cmd = doc.get("command", command)
    if command is not None and cmd != command:
        problems.append(f"command {cmd!r} in config does not match subcommand {command!r}")
    if cmd not in COMMANDS:
        problems.append(f"command must be one of {', '.join(COMMANDS)}, got {cmd!r}")

    ctx = PhysicalContext.natural()
    sec = _section(doc, "context", problems)
    if sec is not None:
        units = sec.get("units", "natural")
        charge = _number(sec, "charge", "context.", problems, positive=True)
        hbar = _number(sec, "hbar", "context.", problems, positive=True)
        mass = _number(sec, "mass", "context.", problems, positive=True)
        if units == "natural":
            if (hbar not in (None, 1.0)) or (mass not in (None, 1.0)):
                problems.append("context: natural units fix hbar = mass = 1")
            ctx = PhysicalContext.natural(charge if charge is not None else 1.0)
        elif units == "SI":
            base = PhysicalContext.si()
            ctx = PhysicalContext(hbar or base.hbar, mass or base.mass, charge or base.charge, "SI")
        else:
            problems.append(f"context.units must be 'natural' or 'SI', got {units!r}")

    barrier = None
    sec = _section(doc, "barrier", problems)
    if sec is not None:
        width = _number(sec, "width", "barrier.", problems, positive=True, required=True)
        height = _number(sec, "height", "barrier.", problems, required=True)
        origin = _number(sec, "origin", "barrier.", problems, default=0.0)
        if width is not None and height is not None:
            barrier = Barrier(width, height, origin)

    particle = ParticleSpec()
    sec = _section(doc, "particle", problems)
    if sec is not None:
        particle = ParticleSpec(
            _number(sec, "energy", "particle.", problems, positive=True),
            _number(sec, "speed", "particle.", problems, positive=True),
            _number(sec, "start_x", "particle.", problems, default=0.0),
            _number(sec, "start_t", "particle.", problems, default=0.0),
        )

    sweep = None
    sec = _section(doc, "sweep", problems)
    if sec is not None:
        param = sec.get("parameter")
        if param not in SWEEP_PARAMETERS:
            problems.append(f"sweep.parameter must be one of {', '.join(SWEEP_PARAMETERS)}, got {param!r}")
        start = _number(sec, "start", "sweep.", problems, required=True)
        stop = _number(sec, "stop", "sweep.", problems, required=True)
        steps = sec.get("steps")
        if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
            problems.append(f"sweep.steps must be an integer >= 2, got {steps!r}")
        if start is not None and stop is not None and not start < stop:
            problems.append(f"sweep.start must be < sweep.stop, got {start!r} >= {stop!r}")
        if param in ("energy", "barrier-width") and start is not None and not start > 0:
            problems.append(f"sweep.start must be > 0 when sweeping {param}")
        if param in ("barrier-width", "barrier-height") and "barrier" not in doc:
            problems.append(f"sweeping {param} needs a barrier section")
        if cmd == "soliton-verify" and param not in (None, "energy"):
            problems.append("soliton-verify can only sweep energy")
        if not any("sweep." in p for p in problems):
            sweep = SweepAxis(param, start, stop, steps)

    tolerances = dict(DEFAULT_TOLERANCES)
    sec = _section(doc, "tolerances", problems)
    if sec is not None:
        for key in sec:
            if key in DEFAULT_TOLERANCES and key != "grid_points":
                value = _number(sec, key, "tolerances.", problems, positive=True)
                if value is not None:
                    tolerances[key] = value
        gp = sec.get("grid_points", DEFAULT_TOLERANCES["grid_points"])
        if isinstance(gp, bool) or not isinstance(gp, int) or gp < 16:
            problems.append(f"tolerances.grid_points must be an integer >= 16, got {gp!r}")
        else:
            tolerances["grid_points"] = gp

    loop_length = _number(doc, "loop_length", "", problems, positive=True, default=2.0 * math.pi)

    fmt = doc.get("format")
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        problems.append("output must be a string path")
        output = None
    if fmt is None:
        fmt = "json" if output and output.endswith(".json") else "csv"
    if fmt not in FORMATS:
        problems.append(f"format must be csv or json, got {fmt!r}")
    if not output and cmd in COMMANDS:
        output = f"{cmd}.{fmt}"

    if cmd in COMMANDS and cmd != "soliton-verify" and barrier is None and "barrier" not in doc:
        problems.append(f"command {cmd} needs a barrier section")
    energy_swept = sweep is not None and sweep.parameter == "energy"
    if cmd == "soliton-verify" and particle.energy is None and not energy_swept:
        particle = ParticleSpec(DEFAULT_SOLITON_ENERGY, particle.speed, particle.start_x, particle.start_t)
    elif (cmd in COMMANDS and particle.energy is None and not energy_swept
          and not any(p.startswith("particle.energy") for p in problems)):
        problems.append(f"command {cmd} needs particle.energy or an energy sweep")
    if cmd == "sweep" and "sweep" not in doc:
        problems.append("command sweep needs a sweep section")

    if problems:
        raise ConfigError(problems)
    return RunConfig(cmd, ctx, barrier, particle, sweep, tolerances, output, fmt, loop_length)
