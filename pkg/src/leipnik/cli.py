"""Command-line entry point with bit-stable CSV/JSON export.

Subcommands: equilibria, ode, lyapunov, sync, stability-check.  Scenario
values are layered defaults < preset < config file < flags.  All numeric
output uses shortest round-trip decimals, so identical configs on the same
build produce byte-identical data files.

Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 numerical blow-up.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ScenarioConfig, build_scenario, parse_config_file
from .errors import BlowUpError, ConfigError
from .linalg3 import hurwitz_certificate
from .model import divergence, find_equilibria
from .ode import integrate_ode, lyapunov_spectrum
from .pde import neumann_eigenvalue
from .sync import check_condition_313, mode_matrix, run_master_slave

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_BLOWUP = 4


def manifest_schema() -> dict:
    """The JSON schema every manifest.json validates against."""
    from importlib.resources import files

    return json.loads(files("leipnik").joinpath("schemas/manifest.schema.json").read_text())


def fmt_num(x: float) -> str:
    """Shortest decimal that round-trips to the same float ('.0' stripped)."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_csv(path: Path, header: str, rows) -> int:
    """Write comma/LF CSV; returns the number of data rows."""
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt_num(v) for v in row) + "\n")
            count += 1
    return count


class _OutputDir:
    """Locked output directory collecting the file list for the manifest."""

    def __init__(self, path: str):
        self.path = Path(path)
        self.files: list[dict] = []
        self.path.mkdir(parents=True, exist_ok=True)
        self._lock = self.path / ".lock"
        try:
            fd = os.open(self._lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise OSError(
                f"output dir {self.path} is locked ({self._lock} exists); "
                "concurrent or crashed run? remove the lock to proceed"
            ) from None
        os.close(fd)

    def csv(self, name: str, header: str, rows, t: float | None = None) -> None:
        n = _write_csv(self.path / name, header, rows)
        entry = {"name": name, "rows": n}
        if t is not None:
            entry["t"] = t
        self.files.append(entry)

    def json(self, name: str, payload) -> None:
        text = _dump_json(payload)
        (self.path / name).write_text(text, encoding="utf-8")
        self.files.append({"name": name, "rows": len(text.splitlines())})

    def manifest(self, command: str, scenario: ScenarioConfig, started: str, **extra) -> None:
        payload = {
            "command": command,
            "version": __version__,
            "config": scenario.as_flat_dict(),
            "started_at": started,
            "finished_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "completed": extra.pop("completed", True),
            "files": self.files,
            **extra,
        }
        (self.path / "manifest.json").write_text(_dump_json(payload), encoding="utf-8")

    def release(self) -> None:
        self._lock.unlink(missing_ok=True)


def _equilibria_payload(scenario: ScenarioConfig) -> dict:
    reports = find_equilibria(scenario.params)
    # Present origin first, then by distance from it (the catalog order).
    ordered = sorted(reports, key=lambda r: (float(np.linalg.norm(r.point)), tuple(r.point)))
    return {
        "command": "equilibria",
        "count": len(ordered),
        "equilibria": [
            {
                "point": [float(v) for v in r.point],
                "eigenvalues": [[z.real, z.imag] for z in r.eigenvalues],
                "stable": r.stable,
                "residual": r.residual,
            }
            for r in ordered
        ],
    }


def _lyapunov_payload(scenario: ScenarioConfig) -> dict:
    if scenario.t_end < 1000:
        print(
            f"warning: t_end={scenario.t_end:g} is short for Lyapunov estimates; "
            "1000+ time units recommended",
            file=sys.stderr,
        )
    spec = lyapunov_spectrum(
        scenario.master_ic.point(), scenario.params, scenario.stepper.dt, scenario.t_end
    )
    return {
        "command": "lyapunov",
        "exponents": [float(v) for v in spec.exponents],
        "horizon": spec.horizon,
        "sum": float(spec.exponents.sum()),
        "divergence": divergence(scenario.params),
    }


def _stability_payload(scenario: ScenarioConfig, u3_sup: float) -> dict:
    report = check_condition_313(u3_sup, scenario.grid, scenario.params)
    modes = []
    for i in range(min(scenario.grid.n - 1, 64) + 1):
        cert_hi = hurwitz_certificate(
            mode_matrix(i, (0.0, 0.0, u3_sup), scenario.grid, scenario.params)
        )
        cert_lo = hurwitz_certificate(
            mode_matrix(i, (0.0, 0.0, -u3_sup), scenario.grid, scenario.params)
        )
        modes.append(
            {
                "i": i,
                "lambda": neumann_eigenvalue(i, scenario.grid),
                "trace": cert_hi.trace,
                "det": cert_hi.det,
                "compound_det": cert_hi.compound_det,
                "stable": cert_hi.stable and cert_lo.stable,
            }
        )
    return {
        "command": "stability-check",
        "u3_sup": u3_sup,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "satisfied": report.satisfied,
        "k_min": report.k_min,
        "modes": modes,
    }


def _run_ode(scenario: ScenarioConfig, out: _OutputDir, started: str) -> int:
    run = integrate_ode(
        scenario.master_ic.point(), scenario.params, scenario.stepper.dt, scenario.t_end
    )
    rows = np.column_stack([run.t, run.states])
    out.csv("states.csv", "t,u1,u2,u3", rows)
    out.manifest("ode", scenario, started)
    return EXIT_OK


def _run_sync(scenario: ScenarioConfig, out: _OutputDir, started: str) -> int:
    scenario.warn_incompatible_wavenumbers()
    master_ic = scenario.master_ic.field(scenario.grid)
    slave_ic = scenario.slave_ic.field(scenario.grid)
    result = run_master_slave(
        master_ic,
        slave_ic,
        scenario.params,
        scenario.stepper,
        scenario.t_end,
        controls_on=scenario.controls,
        snapshot_count=scenario.snapshot_count,
    )
    tr = result.trace
    rows = np.column_stack(
        [tr.t, tr.err_sup, tr.V, tr.I_term, tr.J_term, tr.cond313_lhs, tr.cond313_rhs]
    )
    out.csv("trace.csv", "t,err_sup,V,I_term,J_term,cond313_lhs,cond313_rhs", rows)
    x = scenario.grid.x
    for idx, (t, master, slave) in enumerate(result.snapshots):
        for tag, fld in (("master", master), ("slave", slave)):
            out.csv(
                f"{tag}_{idx:04d}.csv",
                "x,c1,c2,c3",
                np.column_stack([x, fld.values.T]),
                t=t,
            )
    out.manifest(
        "sync",
        scenario,
        started,
        completed=result.completed,
        failed_at=result.failure_time,
        synchronized=result.synchronized,
        u3_sup_observed=result.u3_sup_observed,
    )
    if not result.completed:
        print(f"numerical blow-up at t={result.failure_time:g}; partial outputs kept", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for flag, help_text in [
        ("--config", "flat key=value config file"),
        ("--preset", "named scenario: paper-ode or paper-sync"),
        ("--a", "linear damping coefficient"),
        ("--alpha", "third-equation growth coefficient"),
        ("--k", "controller gain (>= 0)"),
        ("--d1", "diffusion coefficient, component 1"),
        ("--d2", "diffusion coefficient, component 2"),
        ("--d3", "diffusion coefficient, component 3"),
        ("--grid-n", "number of grid nodes"),
        ("--length", "domain length"),
        ("--dt", "time step"),
        ("--t-end", "final time"),
        ("--scheme", "diffusion scheme: crank-nicolson or backward-euler"),
        ("--snapshots", "number of field snapshots to keep"),
        ("--master-ic", "master IC 'base:omega, base:omega, base:omega'"),
        ("--slave-ic", "slave IC 'base:omega, base:omega, base:omega'"),
        ("--u3-sup", "bound on |u3| for the gain condition"),
        ("--out", "output directory"),
    ]:
        common.add_argument(flag, help=help_text)
    common.add_argument("--controls", choices=["on", "off"], help="apply the controllers")

    parser = argparse.ArgumentParser(
        prog="leipnik",
        description="Simulate the Newton-Leipnik system, synchronize its "
        "reaction-diffusion master/slave pair, and check the stability certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("equilibria", parents=[common], help="find and classify all equilibria")
    sub.add_parser("ode", parents=[common], help="integrate the ODE and export states.csv")
    sub.add_parser("lyapunov", parents=[common], help="estimate the Lyapunov spectrum")
    sub.add_parser("sync", parents=[common], help="run the master-slave PDE pair")
    ps = sub.add_parser("stability-check", parents=[common], help="evaluate the gain condition")
    ps.add_argument("--from-run", help="read u3_sup from a previous sync run's manifest")
    return parser


_FLAG_KEYS = {
    "a": "a",
    "alpha": "alpha",
    "k": "k",
    "d1": "d1",
    "d2": "d2",
    "d3": "d3",
    "grid_n": "grid_n",
    "length": "length",
    "dt": "dt",
    "t_end": "t_end",
    "scheme": "scheme",
    "snapshots": "snapshot_count",
    "master_ic": "master_ic",
    "slave_ic": "slave_ic",
    "u3_sup": "u3_sup",
    "controls": "controls",
    "out": "out",
}


def _scenario_from_args(args: argparse.Namespace) -> ScenarioConfig:
    if args.config:
        try:
            file_kv = parse_config_file(args.config)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config!r}: {exc}") from None
    else:
        file_kv = {}
    flag_kv = {
        cfg_key: getattr(args, attr)
        for attr, cfg_key in _FLAG_KEYS.items()
        if getattr(args, attr, None) is not None
    }
    preset = args.preset or file_kv.pop("preset", None)
    layers = []
    if preset:
        layers.append({"preset": preset})
    layers.extend([file_kv, flag_kv])
    return build_scenario(layers)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()

    try:
        scenario = _scenario_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    out = None
    try:
        if args.command in ("ode", "sync") and not scenario.out:
            print(f"error: {args.command} requires --out", file=sys.stderr)
            return EXIT_CONFIG
        if scenario.out:
            out = _OutputDir(scenario.out)

        if args.command == "ode":
            return _run_ode(scenario, out, started)
        if args.command == "sync":
            return _run_sync(scenario, out, started)

        if args.command == "equilibria":
            payload = _equilibria_payload(scenario)
            name = "equilibria.json"
        elif args.command == "lyapunov":
            payload = _lyapunov_payload(scenario)
            name = "lyapunov.json"
        else:  # stability-check
            u3_sup = scenario.u3_sup
            if u3_sup is None and getattr(args, "from_run", None):
                manifest_path = Path(args.from_run) / "manifest.json"
                if not manifest_path.exists():
                    print(f"error: no manifest at {manifest_path}", file=sys.stderr)
                    return EXIT_CONFIG
                prior = json.loads(manifest_path.read_text(encoding="utf-8"))
                u3_sup = prior.get("u3_sup_observed")
            if u3_sup is None:
                print("error: provide --u3-sup or --from-run", file=sys.stderr)
                return EXIT_CONFIG
            payload = _stability_payload(scenario, float(u3_sup))
            name = "stability.json"

        if out is not None:
            out.json(name, payload)
            out.manifest(args.command, scenario, started)
        else:
            sys.stdout.write(_dump_json(payload))
        return EXIT_OK
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        if out is not None:
            out.release()


if __name__ == "__main__":
    sys.exit(main())
