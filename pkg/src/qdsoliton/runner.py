"""Row evaluation, sweeps and result/manifest writing for the CLI.

Every row is a pure function of (config, parameter point). Rows whose
physics raises a domain error are kept with a non-ok ``status`` instead of
aborting the run. Floats are written in shortest round-trip form, so an
identical config always produces a byte-identical result file.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .chronometry import traversal_time
from .config import RunConfig
from .errors import MatchingSingularityError, QDSolitonError
from .junction import JunctionState, flux_from_quantum_number, junction_momenta, lossless_condition, quantize_loop
from .oracle import compare_report, solve
from .scattering import is_resonant, make_setup, resonance_phase, solve_regions
from .soliton import build_soliton, quantum_potential_numeric, residual_continuity, residual_momentum, sample
from .units import Barrier, ParticleState, Regime

COLUMNS = {
    "soliton-verify": [
        "energy", "mu", "speed", "grid_points", "residual_continuity", "residual_momentum",
        "continuity_ratio", "momentum_ratio", "q_exact", "q_max_deviation", "status",
    ],
    "scatter": [
        "energy", "v0", "a", "regime", "k1", "k2", "k3", "rho1", "rho2", "rho3",
        "resonant", "resonance_n", "status",
    ],
    "tunnel-time": [
        "energy", "v0", "a", "k1", "k2", "arccos_arg", "status", "t3", "tau_paper",
        "tau_wigner", "T_oracle",
    ],
    "sweep": [
        "energy", "v0", "a", "k1", "k2", "regime", "phase_over_pi", "resonance_n",
        "resonance_residual", "resonant", "status",
    ],
    "flux": [
        "energy", "v0", "a", "regime", "p1", "p2", "loop_length", "winding", "n", "residual",
        "flux", "flux_conventional", "lossless", "lossless_lhs", "lossless_rhs", "status",
    ],
    "compare": [
        "energy", "v0", "a", "k1", "k2", "regime", "status", "tau_paper", "tau_wigner",
        "rho_ratio", "T_oracle", "paper_resonance_residual", "oracle_resonance_residual",
        "paper_resonant", "oracle_resonant", "agree",
    ],
}


@dataclass(frozen=True)
class RunManifest:
    config_echo: dict
    tool_version: str
    started: str
    finished: str
    row_count: int
    flagged_rows: int
    result_path: str

    def as_dict(self) -> dict:
        return {
            "config": self.config_echo,
            "tool_version": self.tool_version,
            "started": self.started,
            "finished": self.finished,
            "row_count": self.row_count,
            "flagged_rows": self.flagged_rows,
            "result_path": self.result_path,
        }


def sweep_points(config: RunConfig):
    """(energy, width, height) per row, in axis order."""
    energy = config.particle.energy
    width = config.barrier.width_a if config.barrier else None
    height = config.barrier.height_v0 if config.barrier else None
    axis = config.sweep_axis
    if axis is None:
        return [(energy, width, height)]
    points = []
    for value in axis.values():
        if axis.parameter == "energy":
            points.append((value, width, height))
        elif axis.parameter == "barrier-width":
            points.append((energy, value, height))
        else:
            points.append((energy, width, value))
    return points


def _setup(config: RunConfig, energy, width, height):
    ctx = config.context
    spec = config.particle
    if spec.speed is None:
        particle = ParticleState.from_energy(energy, ctx, spec.start_x, spec.start_t)
    else:
        particle = ParticleState(energy, spec.speed, spec.start_x, spec.start_t)
    origin = config.barrier.origin if config.barrier else 0.0
    return make_setup(particle, Barrier(width, height, origin), ctx)


def _soliton_row(config, energy):
    tol = config.tolerances
    n = int(tol["grid_points"])
    s = build_soliton(energy, 0.0, config.context, speed=config.particle.speed)
    rc = residual_continuity(s, n, tol["time_step"])
    rc2 = residual_continuity(s, 2 * n, tol["time_step"])
    rm = residual_momentum(s, n, config.context)
    rm2 = residual_momentum(s, 2 * n, config.context)
    ctx = config.context
    q_exact = ctx.hbar**2 * s.wavenumber_mu**2 / (2.0 * ctx.mass)
    _, q = quantum_potential_numeric(sample(s, n), ctx)
    return {
        "energy": energy, "mu": s.wavenumber_mu, "speed": s.speed_c, "grid_points": n,
        "residual_continuity": rc, "residual_momentum": rm,
        "continuity_ratio": rc / rc2 if rc2 else None,
        "momentum_ratio": rm / rm2 if rm2 else None,
        "q_exact": q_exact, "q_max_deviation": float(abs(q - q_exact).max()),
        "status": "ok",
    }


def _scatter_row(config, setup, base):
    tol = config.tolerances
    row = dict(base, regime=setup.regime.value, k3=setup.k3, rho1=1.0)
    try:
        sol = solve_regions(setup, 1.0, tol["singularity"], tol["resonance"])
    except MatchingSingularityError:
        return dict(row, status="singular")
    return dict(row, rho2=sol.rho2, rho3=sol.rho3, resonant=sol.resonant,
                resonance_n=sol.resonance_index_n, status="ok")


def _tunnel_row(config, setup, base):
    report = traversal_time(setup, config.tolerances["resonance"])
    oracle = solve(setup.particle.energy_e, setup.barrier, setup.ctx)
    return dict(base, arccos_arg=report.arccos_argument, status=report.status,
                t3=report.total_time_t3, tau_paper=report.tunneling_tau,
                tau_wigner=oracle.wigner_time, T_oracle=oracle.transmission_T)


def _sweep_row(config, setup, base):
    row = dict(base, regime=setup.regime.value, phase_over_pi=resonance_phase(setup) / math.pi)
    if setup.regime is not Regime.ABOVE:
        return dict(row, status="regime_error")
    ok, n, residual = is_resonant(setup, config.tolerances["resonance"])
    return dict(row, resonance_n=n, resonance_residual=residual, resonant=ok, status="ok")


def _flux_row(config, setup, base):
    p1, p2 = junction_momenta(setup)
    rec = quantize_loop(p1, p2, config.loop_length, setup.ctx)
    lossless, (lhs, rhs) = lossless_condition(JunctionState(setup), config.tolerances["resonance"])
    winding = (p1 - p2) * config.loop_length / setup.ctx.hbar
    # conventional flux quantum h/(2q) per unit n
    conventional = rec.n * setup.ctx.planck_h / (2.0 * setup.ctx.charge)
    return dict(base, regime=setup.regime.value, p1=p1, p2=p2, loop_length=config.loop_length,
                winding=winding, n=rec.n, residual=rec.residual,
                flux=flux_from_quantum_number(rec.n, setup.ctx), flux_conventional=conventional,
                lossless=lossless, lossless_lhs=lhs, lossless_rhs=rhs, status="ok")


def _compare_row(config, setup, base):
    rec = compare_report(setup, config.tolerances["resonance"])
    return dict(base, regime=setup.regime.value, status=rec.paper_status, tau_paper=rec.paper_tau,
                tau_wigner=rec.wigner_time, rho_ratio=rec.amplitude_ratio, T_oracle=rec.oracle_T,
                paper_resonance_residual=rec.paper_resonance_residual,
                oracle_resonance_residual=rec.oracle_resonance_residual,
                paper_resonant=rec.paper_resonant, oracle_resonant=rec.oracle_resonant,
                agree=rec.agree)


_HANDLERS = {
    "scatter": _scatter_row,
    "tunnel-time": _tunnel_row,
    "sweep": _sweep_row,
    "flux": _flux_row,
    "compare": _compare_row,
}


def evaluate_row(config: RunConfig, point) -> dict:
    """One output row; never raises for physics domain errors."""
    energy, width, height = point
    columns = COLUMNS[config.command]
    row = dict.fromkeys(columns)
    try:
        if config.command == "soliton-verify":
            row.update(_soliton_row(config, energy))
        else:
            setup = _setup(config, energy, width, height)
            base = {"energy": energy, "v0": height, "a": width, "k1": setup.k1, "k2": setup.k2}
            row.update(_HANDLERS[config.command](config, setup, base))
    except QDSolitonError as exc:
        row.update(energy=energy, status=type(exc).__name__)
    except ValueError:
        row.update(energy=energy, status="invalid")
    return {key: row.get(key) for key in columns}


def _evaluate_star(args):
    return evaluate_row(*args)


def evaluate(config: RunConfig, jobs: int = 1):
    points = sweep_points(config)
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map preserves input order, so rows come back in axis order
            return list(pool.map(_evaluate_star, [(config, p) for p in points]))
    return [evaluate_row(config, p) for p in points]


def format_value(value):
    """CSV text for a cell: shortest round-trip floats, lowercase booleans, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ""
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(rows, columns, fmt: str) -> str:
    if fmt == "json":
        data = [{k: _json_value(row[k]) for k in columns} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[k]) for k in columns])
    return buf.getvalue()


def manifest_path(result_path) -> Path:
    path = Path(result_path)
    return path.with_name(path.stem + ".manifest.json")


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def run(config: RunConfig, jobs: int = 1, output: str | None = None, fmt: str | None = None) -> RunManifest:
    """Evaluate every row, write the result file and its sibling manifest."""
    if output is not None or fmt is not None:
        config = replace(config, output_path=output or config.output_path,
                         output_format=fmt or config.output_format)
    started = _now()
    rows = evaluate(config, jobs)
    text = render(rows, COLUMNS[config.command], config.output_format)
    path = Path(config.output_path)
    path.write_text(text, encoding="utf-8")
    flagged = sum(row["status"] != "ok" for row in rows)
    manifest = RunManifest(config.echo(), __version__, started, _now(), len(rows), flagged, str(path))
    manifest_path(path).write_text(json.dumps(manifest.as_dict(), indent=2) + "\n", encoding="utf-8")
    return manifest
