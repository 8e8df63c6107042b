"""Command line front end: reproduce the reference sweeps as CSV datasets.

Subcommands
-----------
steady   stationary Dicke populations over an (Omega, delta) grid
pulse    optimal-pulse duration and fidelity over a distance grid
bell     Bell-inequality value of the pulse-generated states over a grid
trace    time-resolved populations for a single configuration

Every dataset starts with a '#'-prefixed header echoing the tool version,
the backend, the full configuration and the column meanings, so a CSV file
alone identifies the run that produced it.  Identical configurations produce
byte-identical files at any parallelism degree.

Exit codes: 0 success, 2 configuration error, 3 partial solver degeneracy
or failed scan rows, 4 integrator abort.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from ._backend import backend_name
from ._parallel import map_ordered
from .bell import RotationAxis, bell_scan
from .coupling import PHI_MIN, CouplingParams, TransitionType
from .design import fidelity_scan
from .errors import (
    AtomPairError,
    DegenerateSteadyStateError,
    InvariantViolationError,
    StepBudgetError,
    StepUnderflowError,
)
from .evolve import IntegratorSettings, evolve
from .liouville import (
    DriveParams,
    Geometry,
    build_liouvillian,
    stationary_populations_analytic,
    steady_state,
)
from .states import KET_EE, KET_GG, PSI_A, PSI_S, dicke_populations, pure_density

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_INTEGRATOR = 4

PHI_MAX = 20.0

_INITIAL_STATES = {
    "gg": KET_GG,
    "ee": KET_EE,
    "psi-s": PSI_S,
    "psi-a": PSI_A,
}

_COLUMN_DOC = {
    "omega": "Rabi magnitude Omega [gamma]",
    "delta": "laser detuning delta [gamma]",
    "N_e": "population of |ee>",
    "N_s": "population of the symmetric Dicke state",
    "N_a": "population of the antisymmetric Dicke state",
    "N_g": "population of |gg>",
    "method": "analytic (closed form) or numeric (null-space solve)",
    "phi": "dimensionless interatomic distance k*R",
    "geometry": "excitation geometry (sym or anti)",
    "delta_opt": "optimal detuning [gamma]",
    "omega_opt": "optimal Rabi magnitude [gamma]",
    "duration": "optimal pulse duration [1/gamma]",
    "fidelity": "target Dicke population at pulse end",
    "error": "per-row failure message (empty on success)",
    "bell_lhs": "left-hand side of the three-angle Bell inequality",
    "p_diff_1": "P_diff(0, 2pi/3)",
    "p_diff_2": "P_diff(2pi/3, -2pi/3)",
    "p_diff_3": "P_diff(0, -2pi/3)",
    "violated": "true when bell_lhs < 1 (no local classical model)",
    "t": "time since switch-on [1/gamma]",
    "trace": "trace of the density matrix (invariant telemetry)",
    "min_eigenvalue": "smallest density-matrix eigenvalue (invariant telemetry)",
}


class ConfigError(Exception):
    pass


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".15g")
    if value is None:
        return ""
    return str(value)


def _parse_linspace(text: str, flag: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"{flag} expects MIN:MAX:COUNT, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"{flag}: {exc}") from None
    if count < 1:
        raise ConfigError(f"{flag}: COUNT must be >= 1, got {count}")
    return np.linspace(lo, hi, count)


def _parse_phi_grid(text: str) -> np.ndarray:
    if ":" in text:
        grid = _parse_linspace(text, "--phi-grid")
    else:
        try:
            grid = np.array([float(tok) for tok in text.split(",") if tok.strip()])
        except ValueError as exc:
            raise ConfigError(f"--phi-grid: {exc}") from None
        if len(grid) == 0:
            raise ConfigError("--phi-grid: empty grid")
    bad = (grid < PHI_MIN) | (grid > PHI_MAX)
    if np.any(bad):
        raise ConfigError(
            f"--phi-grid: values must lie within [{PHI_MIN}, {PHI_MAX}], "
            f"got {grid[bad][0]:g}"
        )
    return grid


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(
                        f"{path}:{lineno}: expected key=value, got {line!r}"
                    )
                key, _, value = line.partition("=")
                values[key.strip().replace("_", "-")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return values


def _extract_config_path(argv: list[str]) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def _merge_config(argv: list[str], parser, subparsers) -> argparse.Namespace:
    """Parse argv; when --config is given, inject file values first.

    The config file is read before argparse runs, so required flags may be
    supplied by the file; explicit command line flags still win because they
    come later in the merged argument list.
    """
    config_path = _extract_config_path(argv)
    command = next((tok for tok in argv if not tok.startswith("-")), None)
    if config_path is None or command not in subparsers:
        return parser.parse_args(argv)
    values = _load_config_file(config_path)
    sub = subparsers[command]
    options = {}
    for action in sub._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                options[opt[2:]] = action
    pseudo: list[str] = []
    for key, value in values.items():
        if key in ("config", "help"):
            raise ConfigError(f"config file may not set --{key}")
        action = options.get(key)
        if action is None:
            raise ConfigError(
                f"unknown key {key!r} in config file for command {command!r}"
            )
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() in ("1", "true", "yes", "on"):
                pseudo.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no", "off"):
                raise ConfigError(f"config key {key!r}: expected a boolean, got {value!r}")
        else:
            # --key=value survives values with a leading minus sign.
            pseudo.append(f"--{key}={value}")
    merged = [command, *pseudo, *argv[argv.index(command) + 1 :]]
    return parser.parse_args(merged)


def _write_dataset(out, command, config_echo, columns, rows, trailing=()):
    lines = [
        f"# atompair {command} {__version__}",
        f"# backend: {backend_name()}",
    ]
    lines += [f"# config: {key} = {value}" for key, value in config_echo]
    lines += [f"# column {name}: {_COLUMN_DOC[name]}" for name in columns]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    lines += [f"# {note}" for note in trailing]
    text = "\n".join(lines) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _sanitize_message(message: str) -> str:
    """Make an error message safe to embed in a single CSV cell."""
    return message.replace(",", ";").replace("\n", " ")


# ---------------------------------------------------------------- steady ---


def _steady_cell(args):
    omega, delta, phi, transition_value, geometry_value = args
    coupling = CouplingParams(phi=phi, transition=TransitionType(transition_value))
    geometry = Geometry(geometry_value)
    rows = []
    if geometry is Geometry.SYMMETRIC:
        pops = stationary_populations_analytic(omega, delta, coupling)
        rows.append((omega, delta, pops.n_e, pops.n_s, pops.n_a, pops.n_g, "analytic"))
    drive = DriveParams(omega=omega, delta=delta, geometry=geometry)
    liouv = build_liouvillian(drive, coupling)
    try:
        pops = dicke_populations(steady_state(liouv))
        rows.append((omega, delta, pops.n_e, pops.n_s, pops.n_a, pops.n_g, "numeric"))
        degenerate = None
    except DegenerateSteadyStateError as exc:
        nan = math.nan
        rows.append((omega, delta, nan, nan, nan, nan, "numeric"))
        degenerate = f"omega={_fmt(omega)} delta={_fmt(delta)}: {exc}"
    return rows, degenerate


def cmd_steady(args) -> int:
    coupling = CouplingParams(phi=args.phi, transition=TransitionType(args.transition))
    omegas = _parse_linspace(args.omega_grid, "--omega-grid")
    deltas = _parse_linspace(args.delta_grid, "--delta-grid")
    if np.any(omegas < 0.0):
        raise ConfigError("--omega-grid: Rabi magnitudes must be >= 0")
    cells = [
        (float(om), float(de), coupling.phi, args.transition, args.geometry)
        for om in omegas
        for de in deltas
    ]
    chunk = max(1, len(cells) // (max(args.jobs, 1) * 8))
    results = map_ordered(_steady_cell, cells, args.jobs, chunksize=chunk)
    rows = [row for cell_rows, _ in results for row in cell_rows]
    degenerate = [msg for _, msg in results if msg is not None]

    config_echo = [
        ("phi", _fmt(coupling.phi)),
        ("transition", args.transition),
        ("geometry", args.geometry),
        ("omega-grid", args.omega_grid),
        ("delta-grid", args.delta_grid),
    ]
    trailing = []
    if degenerate:
        trailing.append(f"degenerate cells: {len(degenerate)}")
        trailing += [f"degenerate: {msg}" for msg in degenerate]
    columns = ("omega", "delta", "N_e", "N_s", "N_a", "N_g", "method")
    _write_dataset(args.out, "steady", config_echo, columns, rows, trailing)
    if degenerate:
        print(
            f"warning: {len(degenerate)} degenerate grid cell(s); see dataset trailer",
            file=sys.stderr,
        )
        return EXIT_DEGENERATE
    return EXIT_OK


# ----------------------------------------------------------------- pulse ---


def _resolve_phi_grid(args) -> np.ndarray:
    if args.phi is not None and args.phi_grid is not None:
        raise ConfigError("--phi and --phi-grid are mutually exclusive")
    if args.phi is not None:
        if not (PHI_MIN <= args.phi <= PHI_MAX):
            raise ConfigError(f"--phi must lie within [{PHI_MIN}, {PHI_MAX}]")
        return np.array([args.phi])
    return _parse_phi_grid(args.phi_grid or "0.05:1.0:20")


def cmd_pulse(args) -> int:
    phis = _resolve_phi_grid(args)
    settings = IntegratorSettings(step_cap=args.step_cap)
    points = fidelity_scan(
        phis,
        Geometry(args.geometry),
        TransitionType(args.transition),
        settings,
        horizon_periods=args.horizon,
        jobs=args.jobs,
    )
    rows = [
        (
            p.phi,
            args.geometry,
            p.delta_opt,
            p.omega_opt,
            p.duration,
            p.fidelity,
            _sanitize_message(p.error) if p.error else "",
        )
        for p in points
    ]
    config_echo = [
        ("phi-grid", ",".join(_fmt(p) for p in phis)),
        ("transition", args.transition),
        ("geometry", args.geometry),
        ("horizon", _fmt(args.horizon)),
        ("step-cap", _fmt(args.step_cap)),
    ]
    columns = ("phi", "geometry", "delta_opt", "omega_opt", "duration", "fidelity", "error")
    failed = [p for p in points if p.error]
    trailing = [f"failed rows: {len(failed)}"] if failed else ()
    _write_dataset(args.out, "pulse", config_echo, columns, rows, trailing)
    return EXIT_DEGENERATE if failed else EXIT_OK


# ------------------------------------------------------------------ bell ---


def cmd_bell(args) -> int:
    phis = _resolve_phi_grid(args)
    settings = IntegratorSettings(step_cap=args.step_cap)
    axis = RotationAxis(args.axis)
    points = bell_scan(
        phis,
        Geometry(args.geometry),
        TransitionType(args.transition),
        settings,
        horizon_periods=args.horizon,
        axis=axis,
        jobs=args.jobs,
    )
    rows = [
        (
            p.phi,
            args.geometry,
            p.lhs,
            p.p_diffs[0],
            p.p_diffs[1],
            p.p_diffs[2],
            p.violated,
            _sanitize_message(p.error) if p.error else "",
        )
        for p in points
    ]
    config_echo = [
        ("phi-grid", ",".join(_fmt(p) for p in phis)),
        ("transition", args.transition),
        ("geometry", args.geometry),
        ("axis", args.axis),
        ("horizon", _fmt(args.horizon)),
        ("step-cap", _fmt(args.step_cap)),
    ]
    columns = (
        "phi",
        "geometry",
        "bell_lhs",
        "p_diff_1",
        "p_diff_2",
        "p_diff_3",
        "violated",
        "error",
    )
    failed = [p for p in points if p.error]
    trailing = [f"failed rows: {len(failed)}"] if failed else ()
    _write_dataset(args.out, "bell", config_echo, columns, rows, trailing)
    return EXIT_DEGENERATE if failed else EXIT_OK


# ----------------------------------------------------------------- trace ---


def cmd_trace(args) -> int:
    coupling = CouplingParams(phi=args.phi, transition=TransitionType(args.transition))
    geometry = Geometry(args.geometry)
    has_omega, has_delta = args.omega is not None, args.delta is not None
    if has_omega != has_delta:
        raise ConfigError(
            "--omega and --delta must be given together (explicit drive) "
            "or both omitted (optimal drive)"
        )
    if has_omega:
        drive = DriveParams(omega=args.omega, delta=args.delta, geometry=geometry)
        mode = "explicit"
    else:
        from .design import optimal_drive

        drive = optimal_drive(coupling, geometry).drive
        mode = "optimal"
    liouv = build_liouvillian(drive, coupling)
    settings = IntegratorSettings(step_cap=args.step_cap)
    rho0 = pure_density(_INITIAL_STATES[args.initial])

    traj = evolve(rho0, liouv, args.duration, settings, samples=args.samples)
    traces = np.einsum("nii->n", traj.states).real
    min_eigs = np.linalg.eigvalsh(traj.states).min(axis=1)
    pops = traj.populations
    rows = [
        (
            float(traj.times[i]),
            float(pops[i, 0]),
            float(pops[i, 1]),
            float(pops[i, 2]),
            float(pops[i, 3]),
            float(traces[i]),
            float(min_eigs[i]),
        )
        for i in range(len(traj))
    ]
    config_echo = [
        ("phi", _fmt(coupling.phi)),
        ("transition", args.transition),
        ("geometry", args.geometry),
        ("drive-mode", mode),
        ("omega", _fmt(drive.omega)),
        ("delta", _fmt(drive.delta)),
        ("duration", _fmt(args.duration)),
        ("samples", args.samples),
        ("initial", args.initial),
        ("step-cap", _fmt(args.step_cap)),
    ]
    columns = ("t", "N_e", "N_s", "N_a", "N_g", "trace", "min_eigenvalue")
    _write_dataset(args.out, "trace", config_echo, columns, rows)
    return EXIT_OK


# ---------------------------------------------------------------- parser ---


def _add_common(sub, *, phi=False, phi_grid=False, drive=False, integ=False, axis=False):
    sub.add_argument("--transition", choices=("dm0", "dm1"), default="dm1",
                     help="atomic transition type (default dm1)")
    sub.add_argument("--geometry", choices=("sym", "anti"), default="sym",
                     help="excitation geometry (default sym)")
    if phi:
        sub.add_argument("--phi", type=float, default=0.5,
                         help="dimensionless interatomic distance (default 0.5)")
    if phi_grid:
        sub.add_argument("--phi", type=float, default=None,
                         help="single distance (alternative to --phi-grid)")
        sub.add_argument("--phi-grid", default=None,
                         help="distance grid: MIN:MAX:COUNT or comma list "
                              "(default 0.05:1.0:20)")
    if drive:
        sub.add_argument("--omega", type=float, default=None,
                         help="explicit Rabi magnitude [gamma]")
        sub.add_argument("--delta", type=float, default=None,
                         help="explicit detuning [gamma]")
    if integ:
        sub.add_argument("--step-cap", type=float, default=1e-2,
                         help="upper bound on the RK4 step [1/gamma] (default 0.01)")
        sub.add_argument("--horizon", type=float, default=20.0,
                         help="pulse search horizon in transfer Rabi periods "
                              "(default 20)")
    if axis:
        sub.add_argument("--axis", choices=("x", "y"), default="x",
                         help="measurement rotation axis (default x)")
    sub.add_argument("--out", default="-", help="output CSV path (default stdout)")
    sub.add_argument("--jobs", type=int, default=1,
                     help="parallel workers (output independent of this)")
    sub.add_argument("--config", default=None,
                     help="key=value config file; command line flags override it")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="atompair",
        description="Two dipole-coupled atoms: stationary states, entangling "
                    "pulses and Bell-inequality sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"atompair {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    subparsers = {}

    sub = commands.add_parser("steady", help="stationary populations over an "
                              "(Omega, delta) grid")
    _add_common(sub, phi=True)
    sub.add_argument("--omega-grid", default="0:10:101",
                     help="Rabi grid MIN:MAX:COUNT (default 0:10:101)")
    sub.add_argument("--delta-grid", default="-15:15:101",
                     help="detuning grid MIN:MAX:COUNT (default -15:15:101)")
    sub.set_defaults(func=cmd_steady)
    subparsers["steady"] = sub

    sub = commands.add_parser("pulse", help="optimal-pulse fidelity versus distance")
    _add_common(sub, phi_grid=True, integ=True)
    sub.set_defaults(func=cmd_pulse)
    subparsers["pulse"] = sub

    sub = commands.add_parser("bell", help="Bell value of pulse-generated states "
                              "versus distance")
    _add_common(sub, phi_grid=True, integ=True, axis=True)
    sub.set_defaults(func=cmd_bell)
    subparsers["bell"] = sub

    sub = commands.add_parser("trace", help="time-resolved populations for one "
                              "configuration")
    _add_common(sub, phi=True, drive=True)
    sub.add_argument("--duration", type=float, required=True,
                     help="evolution time [1/gamma]")
    sub.add_argument("--samples", type=int, default=501,
                     help="number of output samples (default 501)")
    sub.add_argument("--initial", choices=sorted(_INITIAL_STATES), default="gg",
                     help="initial state (default gg)")
    sub.add_argument("--step-cap", type=float, default=1e-2,
                     help="upper bound on the RK4 step [1/gamma] (default 0.01)")
    sub.set_defaults(func=cmd_trace)
    subparsers["trace"] = sub

    return parser, subparsers


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    try:
        args = _merge_config(argv, parser, subparsers)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, DegenerateSteadyStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvariantViolationError, StepBudgetError, StepUnderflowError) as exc:
        print(f"integrator abort: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR
    except AtomPairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
