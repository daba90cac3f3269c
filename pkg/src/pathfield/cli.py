"""Command-line front end.

Every subcommand maps onto a documented module operation and writes CSV
(and, for `plot`, SVG) artifacts into the output directory.  Outputs are
deterministic: floats are formatted with their shortest round-trip
representation, and SVG files are rendered with a fixed hash salt and no
embedded date.

Exit codes: 0 success, 2 argument parse failure, 3 precondition
violation, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path as FsPath

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import geometry, kgladder, maxwell, modes, paths, propagator, spectral  # noqa: E402
from .errors import NumericalError  # noqa: E402
from .grid import Grid1D  # noqa: E402

plt.rcParams["svg.hashsalt"] = "pathfield"

_TOP_KEYS = {"command", "parameters", "out", "seed"}


def fmt(value) -> str:
    """Shortest round-trip text for CSV cells."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def write_csv(path: FsPath, header: list[str], rows) -> FsPath:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


# ---------------------------------------------------------------- parameters

PARAMS: dict[str, dict[str, dict]] = {
    "spectrum": {
        "scheme": dict(type=str, default="schrodinger",
                       choices=("schrodinger", "kg", "kk"),
                       help="which oscillator spectrum to compute"),
        "eta": dict(type=float, default=1.0, help="oscillator stiffness"),
        "count": dict(type=int, default=5, help="number of levels"),
        "xmin": dict(type=float, default=None, help="grid left edge (optional)"),
        "xmax": dict(type=float, default=None, help="grid right edge (optional)"),
        "points": dict(type=int, default=None, help="grid points (optional)"),
        "negative_branch": dict(flag=True, default=False,
                                help="report the E < 0 branch (kg/kk)"),
        "limit_etas": dict(type=str, default=None,
                           help="comma list of descending etas: emit the "
                                "non-relativistic limit report instead"),
    },
    "modes": {
        "omega": dict(type=float, default=1.0, help="fundamental frequency"),
        "kmax": dict(type=float, default=5.5, help="scan upper bound"),
        "tol": dict(type=float, default=1e-6, help="periodicity tolerance"),
        "kstep": dict(type=float, default=None, help="candidate spacing (default omega/4)"),
        "scheme": dict(type=str, default="present",
                       choices=("present", "standard"), help="energy scheme"),
        "nmax": dict(type=int, default=10, help="highest level"),
        "points": dict(type=int, default=128, help="wave-solver grid points"),
        "steps": dict(type=int, default=1000, help="wave-solver steps"),
        "cfl": dict(type=float, default=0.5, help="dt as a fraction of the CFL bound"),
        "mode_index": dict(type=int, default=3, help="standing-wave index for the wave run"),
    },
    "propagate": {
        "model": dict(type=str, default="oscillator", choices=("free", "oscillator")),
        "m": dict(type=float, default=1.0, help="mass"),
        "eta": dict(type=float, default=1.0, help="oscillator stiffness"),
        "total_time": dict(type=float, default=1.0, help="total imaginary time"),
        "epsilons": dict(type=str, default="0.1,0.05,0.025,0.0125",
                         help="comma list of step sizes"),
        "xmin": dict(type=float, default=-8.0), "xmax": dict(type=float, default=8.0),
        "points": dict(type=int, default=801),
        "sigma": dict(type=float, default=1.0, help="initial Gaussian width"),
    },
    "paths": {
        "count": dict(type=int, default=100, help="ensemble size"),
        "segments": dict(type=int, default=8, help="segments per path"),
        "m": dict(type=float, default=1.0, help="conjugate invariant"),
        "tol": dict(type=float, default=0.1, help="admissibility tolerance"),
        "dim": dict(type=int, default=4, help="spacetime dimension"),
        "envelope": dict(type=float, default=1.0, help="spatial step bound"),
        "save_paths": dict(flag=True, default=False, help="write each path as text"),
    },
    "maxwell": {
        "dim": dict(type=int, default=4, help="spacetime dimension N"),
        "points": dict(type=int, default=8, help="base grid points per axis"),
        "levels": dict(type=int, default=3, help="number of h-halvings"),
        "frames": dict(type=int, default=7, help="time slices"),
        "k": dict(type=str, default="1,1,0", help="integer wavevector components"),
    },
    "ladder": {
        "m": dict(type=float, default=1.0, help="base mass"),
        "nmax": dict(type=int, default=3, help="largest harmonic"),
        "dmax": dict(type=int, default=0, help="also emit the mass lattice up to m/dmax"),
        "convention": dict(type=str, default="eq5", choices=("eq5", "eq12")),
    },
    "plot": {
        "kind": dict(type=str, default="lines", choices=("lines", "stems", "heatmap")),
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathfield",
        description="Path-quantization studies: spectra, kernels, modes, "
                    "field identities, and mass ladders.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, table in PARAMS.items():
        p = sub.add_parser(command)
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="ensemble seed")
        p.add_argument("--config", type=str, default=None, help="JSON run configuration")
        if command == "modes":
            p.add_argument("action", choices=("scan", "energy", "wave"))
        if command == "plot":
            p.add_argument("csv", type=str, help="input CSV file")
        for name, spec in table.items():
            flag = "--" + name.replace("_", "-")
            if spec.get("flag"):
                p.add_argument(flag, dest=name, action="store_const", const=True,
                               default=None, help=spec.get("help"))
            else:
                p.add_argument(flag, dest=name, type=spec["type"], default=None,
                               choices=spec.get("choices"), help=spec.get("help"))
    return parser


def _coerce(name: str, value, spec):
    if spec.get("flag"):
        if not isinstance(value, bool):
            raise ValueError(f"config parameter {name!r} must be a boolean")
        return value
    typ = spec["type"]
    if typ is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if typ is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if typ is str and isinstance(value, str):
        if spec.get("choices") and value not in spec["choices"]:
            raise ValueError(f"config parameter {name!r} must be one of {spec['choices']}")
        return value
    raise ValueError(f"config parameter {name!r} has the wrong type")


def load_config(args) -> dict:
    if not args.config:
        return {}
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValueError("config root must be an object")
    unknown = set(cfg) - _TOP_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "command" in cfg and cfg["command"] != args.command:
        raise ValueError(
            f"config is for command {cfg['command']!r}, invoked {args.command!r}")
    params = cfg.get("parameters", {})
    if not isinstance(params, dict):
        raise ValueError("config 'parameters' must be an object")
    table = PARAMS[args.command]
    unknown = set(params) - set(table)
    if unknown:
        raise ValueError(f"unknown parameters for {args.command}: {sorted(unknown)}")
    return cfg


def resolve(args) -> tuple[dict, FsPath, int]:
    cfg = load_config(args)
    table = PARAMS[args.command]
    cfg_params = cfg.get("parameters", {})
    merged = {}
    for name, spec in table.items():
        cli_val = getattr(args, name)
        if cli_val is not None:
            merged[name] = cli_val
        elif name in cfg_params:
            merged[name] = _coerce(name, cfg_params[name], spec)
        else:
            merged[name] = spec["default"]
    out = args.out if args.out is not None else cfg.get("out", "out")
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ValueError("seed must be an integer")
    return merged, FsPath(out), int(seed)


def _parse_float_list(text: str, name: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ValueError(f"{name} must be a comma-separated number list") from exc
    if not values:
        raise ValueError(f"{name} must be non-empty")
    return values


# ------------------------------------------------------------------ handlers

def run_spectrum(p: dict, out: FsPath, seed: int) -> list[FsPath]:
    if p["limit_etas"]:
        etas = _parse_float_list(p["limit_etas"], "limit-etas")
        rows = spectral.nonrel_limit_report(etas, count=p["count"])
        return [write_csv(out / "limit_report.csv", ["eta", "max_rel_deviation"],
                          [[r.eta, r.max_rel_deviation] for r in rows])]
    scheme, eta = p["scheme"], p["eta"]
    if scheme == "schrodinger":
        grid = Grid1D(p["xmin"] if p["xmin"] is not None else -10.0,
                      p["xmax"] if p["xmax"] is not None else 10.0,
                      p["points"] if p["points"] is not None else 2001)
        spec = spectral.schrodinger_spectrum(eta, grid, p["count"])
    else:
        if p["xmin"] is not None or p["xmax"] is not None:
            if p["xmin"] is None or p["xmax"] is None:
                raise ValueError("give both --xmin and --xmax or neither")
            grid = Grid1D(p["xmin"], p["xmax"],
                          p["points"] if p["points"] is not None else 401)
        else:
            grid = spectral.kg_window_grid(
                eta, p["points"] if p["points"] is not None else 401)
        solver = (spectral.kg_oscillator_spectrum if scheme == "kg"
                  else spectral.kk_oscillator_spectrum)
        spec = solver(eta, grid, p["count"], negative_branch=p["negative_branch"])
    rows = [[n, e, spec.scheme, spec.eta]
            for n, e in enumerate(spec.eigenvalues)]
    return [write_csv(out / "spectrum.csv", ["n", "eigenvalue", "scheme", "eta"], rows)]


def run_modes(p: dict, out: FsPath, seed: int, action: str) -> list[FsPath]:
    if action == "scan":
        rows = modes.quantized_mode_scan(p["omega"], p["kmax"], p["tol"],
                                         k_step=p["kstep"])
        body = [[r.k / p["omega"], r.k, r.residual, r.admissible] for r in rows]
        return [write_csv(out / "modes_scan.csv",
                          ["n", "k", "residual", "admissible"], body)]
    if action == "energy":
        spec = modes.energy_spectrum(p["scheme"], p["omega"], p["nmax"])
        body = [[n, spec.level(n), spec.scheme, spec.omega]
                for n in range(p["nmax"] + 1)]
        return [write_csv(out / "energy_levels.csv",
                          ["n", "energy", "scheme", "omega"], body)]
    # wave: standing-wave run, energy series artifact
    n = p["points"]
    if not 1 <= p["mode_index"] < n // 2:
        raise ValueError("mode_index must lie in [1, points/2)")
    if not 0 < p["cfl"] <= 1.0:
        raise ValueError("cfl must lie in (0, 1]")
    spacing = 2.0 * math.pi / n
    dt = p["cfl"] * spacing
    x = spacing * np.arange(n)
    k = float(p["mode_index"])
    u0 = np.sin(k * x)[None, :]
    fld = modes.wave_solve(u0, np.zeros_like(u0), spacing, dt, p["steps"])
    energy = modes.field_energy(fld)
    body = [[i, i * dt, e] for i, e in enumerate(energy)]
    return [write_csv(out / "wave_energy.csv", ["step", "time", "energy"], body)]


def run_propagate(p: dict, out: FsPath, seed: int) -> list[FsPath]:
    model = (propagator.free(p["m"]) if p["model"] == "free"
             else propagator.oscillator(p["m"], p["eta"]))
    grid = Grid1D(p["xmin"], p["xmax"], p["points"])
    f0 = propagator.gaussian_initial(grid, sigma=p["sigma"])
    eps = _parse_float_list(p["epsilons"], "epsilons")
    rows = propagator.convergence_study(model, grid, f0, p["total_time"], eps)
    body = [[r.eps, r.l2_error, r.order_estimate] for r in rows]
    return [write_csv(out / "convergence.csv",
                      ["epsilon", "l2_error", "order_estimate"], body)]


def run_paths(p: dict, out: FsPath, seed: int) -> list[FsPath]:
    g = geometry.minkowski_metric(p["dim"])
    model = paths.arc_length_action(p["m"])
    ensemble = paths.sample_paths(seed, p["count"], p["segments"], g,
                                  envelope=p["envelope"])
    body = []
    for i, path in enumerate(ensemble):
        s = paths.action(path, model, g)
        rep = paths.is_admissible(path, model, g, p["tol"])
        body.append([i, s, rep.nearest_n, rep.deviation, rep.admissible])
    written = [write_csv(out / "paths_report.csv",
                         ["index", "action", "nearest_n", "deviation", "admissible"],
                         body)]
    if p["save_paths"]:
        pdir = out / "paths"
        pdir.mkdir(parents=True, exist_ok=True)
        for i, path in enumerate(ensemble):
            target = pdir / f"path_{i:05d}.txt"
            target.write_text(paths.path_to_text(path))
            written.append(target)
    if ensemble:
        frac = paths.admissible_fraction(ensemble, model, g, p["tol"])
        print(f"admissible fraction: {fmt(frac)}")
    return written


def run_maxwell(p: dict, out: FsPath, seed: int) -> list[FsPath]:
    g = geometry.minkowski_metric(p["dim"])
    k_ints = tuple(int(v) for v in p["k"].split(","))
    if len(k_ints) != p["dim"] - 1:
        raise ValueError(f"k needs {p['dim'] - 1} integer components")
    if p["levels"] < 1:
        raise ValueError("levels must be >= 1")
    if p["frames"] < 5:
        raise ValueError("need at least 5 frames for the dual divergence")
    rows = []
    for level in range(p["levels"]):
        n = p["points"] * 2**level
        pot = maxwell.plane_wave_potential(g, n, p["frames"], k_ints)
        f = maxwell.field_tensor(pot, g)
        fhat = maxwell.dual_tensor(f, g)
        rows.append(["lorenz_gauge", g.dim, pot.spacing,
                     maxwell.lorenz_gauge_residual(pot, g)])
        rows.append(["jacobi", g.dim, pot.spacing, maxwell.jacobi_residual(fhat)])
        rows.append(["source_free", g.dim, pot.spacing,
                     maxwell.source_free_residual(f, pot, g)])
    return [write_csv(out / "maxwell_residuals.csv",
                      ["identity", "N", "h", "residual"], rows)]


def run_ladder(p: dict, out: FsPath, seed: int) -> list[FsPath]:
    if p["nmax"] < 0:
        raise ValueError("nmax must be >= 0")
    g = geometry.minkowski_metric(4)
    body = []
    for n in range(p["nmax"] + 1):
        mode = kgladder.HarmonicMode(n=n, m=p["m"], convention=p["convention"])
        if p["convention"] == "eq5":
            mom = np.zeros(4)
            mom[0], mom[1] = (n + 1) * p["m"], n * p["m"]
        else:
            mom = kgladder.on_shell_momentum(n, p["m"], 4)
        res = kgladder.stuckelberg_residual(mode, kgladder.PlaneWave(p=mom), g)
        body.append([p["convention"], n, p["m"],
                     kgladder.effective_mass_squared(mode), res])
    written = [write_csv(out / "ladder.csv",
                         ["convention", "n", "m", "effective_mass_squared", "residual"],
                         body)]
    if p["dmax"] >= 1:
        lad = kgladder.mass_ladder(p["m"], max(p["nmax"], 1), p["dmax"])
        rows = [["multiple", n, n * p["m"], lad.period_of_multiple(n)]
                for n in sorted(lad.multiples)]
        rows += [["fraction", d, p["m"] / d, lad.period_of_fraction(d)]
                 for d in sorted(lad.fractions)]
        written.append(write_csv(out / "mass_ladder.csv",
                                 ["kind", "index", "mass", "period"], rows))
    return written


def _read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            table = [row for row in reader if row]
    except OSError as exc:
        raise ValueError(f"cannot read CSV: {exc}") from exc
    if not table:
        raise ValueError("CSV file is empty (no header)")
    header, body = table[0], table[1:]
    if any(len(r) != len(header) for r in body):
        raise ValueError("CSV rows have inconsistent widths")
    return header, body


def _numeric_columns(header, body):
    cols = []
    for j in range(len(header)):
        try:
            vals = [float(r[j]) for r in body]
        except ValueError:
            continue
        cols.append((j, vals))
    return cols


def run_plot(p: dict, out: FsPath, seed: int, csv_path: str) -> list[FsPath]:
    header, body = _read_csv(csv_path)
    out.mkdir(parents=True, exist_ok=True)
    target = out / (FsPath(csv_path).stem + ".svg")
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if not body:
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1] if len(header) > 1 else "value")
        ax.text(0.5, 0.5, "no data", ha="center", va="center",
                transform=ax.transAxes)
    else:
        cols = _numeric_columns(header, body)
        if len(cols) < 2:
            raise ValueError("need at least two numeric columns to plot")
        (jx, xs), rest = cols[0], cols[1:]
        ax.set_xlabel(header[jx])
        if p["kind"] == "stems":
            jy, ys = rest[0]
            ax.stem(xs, ys)
            ax.set_ylabel(header[jy])
        elif p["kind"] == "heatmap":
            mat = np.array([vals for _, vals in rest])
            im = ax.imshow(mat, aspect="auto", origin="lower")
            fig.colorbar(im, ax=ax)
            ax.set_ylabel("column")
        else:
            loglog = all(v > 0 for v in xs) and all(
                v > 0 for _, vals in rest for v in vals)
            for jy, ys in rest:
                if loglog:
                    ax.loglog(xs, ys, marker="o", label=header[jy])
                else:
                    ax.plot(xs, ys, marker="o", label=header[jy])
            ax.set_ylabel(header[rest[0][0]])
            if loglog:
                jy, ys = rest[0]
                slope = np.polyfit(np.log(xs), np.log(ys), 1)[0]
                ax.text(0.05, 0.92, f"slope = {slope:.3f}",
                        transform=ax.transAxes)
            if len(rest) > 1:
                ax.legend()
    fig.savefig(target, format="svg", metadata={"Date": None})
    plt.close(fig)
    return [target]


# ---------------------------------------------------------------- dispatcher

def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params, out, seed = resolve(args)
        if args.command == "spectrum":
            written = run_spectrum(params, out, seed)
        elif args.command == "modes":
            written = run_modes(params, out, seed, args.action)
        elif args.command == "propagate":
            written = run_propagate(params, out, seed)
        elif args.command == "paths":
            written = run_paths(params, out, seed)
        elif args.command == "maxwell":
            written = run_maxwell(params, out, seed)
        elif args.command == "ladder":
            written = run_ladder(params, out, seed)
        else:
            written = run_plot(params, out, seed, args.csv)
    except ValueError as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return 3
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure ({args.command}): {exc}", file=sys.stderr)
        return 4
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
