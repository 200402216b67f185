"""Command-line interface: ``dimhydrogen {spectrum,scan-d,potential,verify}``.

Exit codes: 0 success, 1 solver failure, 2 supercritical problem refused,
64 invalid usage.  Tables are CSV (or JSON with ``--format json``); the
verify command always prints a JSON verdict.  Settings come from flags, then
an optional ``--config`` file of ``key = value`` lines, then built-in defaults.
``DIMHYDROGEN_WORKERS`` sets the number of worker threads; it never changes
the output.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import contextlib
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .eigensolver import (
    DEFAULT_LADDER,
    DEFAULT_POINTS,
    CollapseClass,
    ConvergenceError,
    GridSpec,
    SupercriticalError,
    bracket_critical_charge,
    collapse_diagnostic,
    default_r_max,
    solve_states,
)
from .large_d import classical_limit_scan
from .oracles import analytic_energy_airy_1d, analytic_energy_newtonian
from .potentials import (
    Convention,
    Family,
    PotentialModel,
    electrostatic_potential,
    enclosed_flux,
    poisson_residual,
    potential_energy,
)
from .radial import RadialProblem, StabilityKind, classify_stability

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SUPERCRITICAL = 2
EXIT_USAGE = 64

WORKERS_ENV = "DIMHYDROGEN_WORKERS"

SPECTRUM_HEADER = ["D", "l", "n_r", "Z", "family", "convention", "energy_hartree",
                   "nodes", "grid_points", "extrapolated", "estimated_order"]
SCAN_HEADER = ["D", "l", "Z", "family", "convention", "classification", "numeric_ground",
               "classical_minimum", "harmonic_estimate", "ratio", "predicted_ratio", "status"]
POTENTIAL_HEADER = ["D", "family", "convention", "Z", "r0", "r", "phi", "V"]

DEFAULTS = {
    "family": "newtonian",
    "convention": "gaussian-4pi",
    "z": 1.0,
    "l": 0,
    "r0": 1.0,
    "states": 1,
    "dim": None,
    "dims": None,
    "r_min": None,
    "r_max": None,
    "points": None,
    "rungs": None,
    "r": None,
    "case": None,
    "format": "csv",
    "out": None,
}

VERIFY_CASES = ("poisson", "flux", "flux-d2", "oracle-mini", "airy", "stability",
                "collapse-d5", "collapse-d4", "critical-d4")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ parsing


def _int_list(text):
    try:
        values = [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text):
    try:
        values = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _str_list(text):
    return [v.strip() for v in str(text).split(",") if v.strip()]


CONVERTERS = {
    "z": float, "l": int, "r0": float, "states": int, "dim": _int_list, "dims": _int_list,
    "r_min": float, "r_max": float, "points": int, "rungs": int, "r": _float_list,
    "case": _str_list, "family": str, "convention": str, "format": str, "out": str,
}


def build_parser():
    parser = _Parser(prog="dimhydrogen", description="Hydrogen-like atoms in D dimensions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        s = argparse.SUPPRESS
        p.add_argument("--family", choices=[f.value for f in Family], default=s)
        p.add_argument("--convention", choices=[c.value for c in Convention], default=s)
        p.add_argument("--z", type=float, default=s, help="nuclear charge Z")
        p.add_argument("--l", type=int, default=s, help="angular momentum")
        p.add_argument("--r0", type=float, default=s, help="reference radius of the 2D logarithm")
        p.add_argument("--format", choices=["csv", "json"], default=s)
        p.add_argument("--out", default=s, help="output path (default: standard output)")
        p.add_argument("--config", default=None, help="file of key = value defaults")

    def grid_flags(p):
        s = argparse.SUPPRESS
        p.add_argument("--r-min", dest="r_min", type=float, default=s)
        p.add_argument("--r-max", dest="r_max", type=float, default=s)
        p.add_argument("--points", type=int, default=s, help="interior points of the coarsest grid")
        p.add_argument("--rungs", type=int, default=s, help="grids in the Richardson ladder")

    p = sub.add_parser("spectrum", help="bound-state energies")
    common(p)
    grid_flags(p)
    p.add_argument("--dim", type=_int_list, default=argparse.SUPPRESS,
                   help="dimension, or a comma-separated list")
    p.add_argument("--states", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("scan-d", help="ground state against the classical minimum")
    common(p)
    p.add_argument("--dims", type=_int_list, default=argparse.SUPPRESS)
    p.add_argument("--points", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("potential", help="tabulate phi and V")
    common(p)
    p.add_argument("--dim", type=_int_list, default=argparse.SUPPRESS)
    p.add_argument("--r", type=_float_list, default=argparse.SUPPRESS,
                   help="radius, or a comma-separated list")

    p = sub.add_parser("verify", help="self-checks with a JSON verdict")
    common(p)
    p.add_argument("--case", type=_str_list, default=argparse.SUPPRESS,
                   help=f"comma-separated subset of: {', '.join(VERIFY_CASES)}")
    return parser


def read_config(path):
    """Flat ``key = value`` file; '#' starts a comment, keys may use - or _."""
    settings = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc.strerror}")
    for number, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{number}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in CONVERTERS:
            raise UsageError(f"{path}:{number}: unknown key {key!r}")
        try:
            settings[key] = CONVERTERS[key](value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"{path}:{number}: bad value for {key}: {exc}")
    return settings


def resolve_config(args):
    """Merge defaults < config file < flags into one dict."""
    settings = dict(DEFAULTS)
    flags = vars(args)
    if flags.get("config"):
        settings.update(read_config(flags["config"]))
    settings.update({k: v for k, v in flags.items() if k not in ("config",)})
    try:
        settings["family"] = Family(settings["family"]).value
        settings["convention"] = Convention(settings["convention"]).value
    except ValueError as exc:
        raise UsageError(str(exc))
    if settings["format"] not in ("csv", "json"):
        raise UsageError(f"unknown format {settings['format']!r}")
    if not settings["z"] > 0:
        raise UsageError("--z must be positive")
    if not settings["r0"] > 0:
        raise UsageError("--r0 must be positive")
    if settings["l"] < 0:
        raise UsageError("--l must be non-negative")
    if settings["states"] < 1:
        raise UsageError("--states must be at least 1")
    if settings["points"] is not None and settings["points"] < 3:
        raise UsageError("--points must be at least 3")
    if settings["rungs"] is not None and settings["rungs"] < 1:
        raise UsageError("--rungs must be at least 1")
    return settings


# --------------------------------------------------------------- formatting


def fmt(x):
    """12 significant digits, '.' decimal point, empty for NaN."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x + 0.0, ".12g")  # + 0.0 turns -0.0 into 0.0


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return None if not math.isfinite(x) else float(format(x + 0.0, ".12g"))
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def render_table(header, rows, fmt_name, command):
    if fmt_name == "json":
        records = [dict(zip(header, (_json_value(v) for v in row))) for row in rows]
        return json.dumps({"command": command, "rows": records}, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buffer.getvalue()


def emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def worker_count():
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"{WORKERS_ENV} must be at least 1")
    return value


@contextlib.contextmanager
def _executor():
    n = worker_count()
    if n == 1:
        yield None
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            yield pool


def _ordered_map(fn, items):
    with _executor() as pool:
        if pool is None:
            return [fn(item) for item in items]
        return list(pool.map(fn, items))


# ----------------------------------------------------------------- commands


def _model(cfg, dimension, charge=None):
    return PotentialModel(cfg["family"], dimension, cfg["z"] if charge is None else charge,
                          cfg["convention"], cfg["r0"])


def _problem(cfg, dimension):
    try:
        return RadialProblem(dimension, cfg["l"], _model(cfg, dimension))
    except ValueError as exc:
        raise UsageError(str(exc))


def _grid(cfg, problem):
    if cfg["r_min"] is None and cfg["r_max"] is None and cfg["points"] is None:
        return None
    r_min = 0.0 if cfg["r_min"] is None else cfg["r_min"]
    r_max = cfg["r_max"] if cfg["r_max"] is not None else default_r_max(problem, cfg["states"])
    points = DEFAULT_POINTS if cfg["points"] is None else cfg["points"]
    try:
        return GridSpec(r_min, r_max, points)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_spectrum(cfg):
    dims = cfg["dim"]
    if not dims:
        raise UsageError("spectrum needs --dim")
    problems = [_problem(cfg, d) for d in dims]
    for problem in problems:
        if classify_stability(problem).kind is StabilityKind.SUPERCRITICAL:
            d = problem.dimension
            print(f"dimhydrogen: D={d}, l={problem.angular_momentum} is Supercritical: the "
                  f"spectrum is unbounded below; see `dimhydrogen verify --case collapse-d{d}` "
                  "for the collapse report", file=sys.stderr)
            return EXIT_SUPERCRITICAL
    grids = [_grid(cfg, p) for p in problems]
    ladder = DEFAULT_LADDER if cfg["rungs"] is None else cfg["rungs"]
    points = DEFAULT_POINTS if cfg["points"] is None else cfg["points"]

    def run(job):
        problem, grid = job
        return solve_states(problem, grid, cfg["states"], ladder=ladder, points=points)

    spectra = _ordered_map(run, list(zip(problems, grids)))
    rows = []
    for spectrum in spectra:
        if spectrum.found < spectrum.requested:
            print(f"dimhydrogen: D={spectrum.problem.dimension}: {spectrum.found} of "
                  f"{spectrum.requested} requested states are bound", file=sys.stderr)
        for s in spectrum:
            rows.append([s.problem.dimension, s.problem.angular_momentum, s.index, cfg["z"],
                         cfg["family"], cfg["convention"], s.energy, s.node_count,
                         s.grid.interior_points, s.extrapolated, s.estimated_order])
    emit(render_table(SPECTRUM_HEADER, rows, cfg["format"], "spectrum"), cfg["out"])
    return EXIT_OK


def cmd_scan_d(cfg):
    dims = cfg["dims"]
    if not dims:
        raise UsageError("scan-d needs --dims")
    try:
        with _executor() as pool:
            rows = classical_limit_scan(cfg["family"], cfg["convention"], cfg["z"], cfg["l"],
                                        dims, executor=pool, points=cfg["points"])
    except ValueError as exc:
        raise UsageError(str(exc))
    table = [[r.dimension, cfg["l"], cfg["z"], cfg["family"], cfg["convention"],
              r.classification, r.numeric_ground, r.classical_minimum, r.harmonic_estimate,
              r.ratio, r.predicted_ratio, r.status] for r in rows]
    emit(render_table(SCAN_HEADER, table, cfg["format"], "scan-d"), cfg["out"])
    return EXIT_FAILURE if any(r.status.startswith("solver failure") for r in rows) else EXIT_OK


def cmd_potential(cfg):
    dims, radii = cfg["dim"], cfg["r"]
    if not dims or not radii:
        raise UsageError("potential needs --dim and --r")
    if any(not r > 0 for r in radii):
        raise UsageError("radii must be positive")
    rows = []
    for d in dims:
        try:
            model = _model(cfg, d)
        except ValueError as exc:
            raise UsageError(str(exc))
        for r in radii:
            rows.append([d, cfg["family"], cfg["convention"], cfg["z"], cfg["r0"], r,
                         electrostatic_potential(model, r), potential_energy(model, r)])
    emit(render_table(POTENTIAL_HEADER, rows, cfg["format"], "potential"), cfg["out"])
    return EXIT_OK


# ------------------------------------------------------------------- verify


def _consistent(d, z=1.0, convention=Convention.GAUSSIAN_4PI):
    return PotentialModel(Family.DIMENSION_CONSISTENT, d, z, convention)


def _check_poisson(cfg):
    samples = np.array([1.0, 2.0, 4.0, 8.0])
    worst = {}
    for convention in Convention:
        for d in range(2, 9):
            worst[f"{convention.value}/D={d}"] = poisson_residual(_consistent(d, cfg["z"], convention),
                                                                 samples, 2e-4)
    return {"passed": max(worst.values()) < 1e-5, "tolerance": 1e-5, "residuals": worst}


def _flux_for(dims, cfg):
    radii = np.array([1e-2, 1.0, 1e2])
    detail = {}
    ok = True
    for convention in Convention:
        for d in dims:
            model = _consistent(d, cfg["z"], convention)
            flux = enclosed_flux(model, radii)
            q = model.source_strength
            spread = float(np.max(np.abs(flux - q)) / q)
            ok &= spread <= 1e-13
            detail[f"{convention.value}/D={d}"] = {"source_strength": q,
                                                   "flux": [float(f) for f in flux],
                                                   "relative_deviation": spread}
    return {"passed": bool(ok), "tolerance": 1e-13, "radii": radii.tolist(), "checks": detail}


def _check_oracle_mini(cfg):
    cases = [(2, 0), (2, 1), (3, 0), (3, 1), (5, 0), (8, 2)]
    worst = 0.0
    detail = []
    for d, l in cases:
        problem = RadialProblem(d, l, PotentialModel(Family.NEWTONIAN, d, 1.0))
        spectrum = solve_states(problem, n_states=2)
        tolerance = 1e-3 if (d, l) == (2, 0) else 1e-5
        for s in spectrum:
            exact = analytic_energy_newtonian(d, l, s.index, 1.0)
            err = abs(s.energy - exact) / abs(exact)
            worst = max(worst, err / tolerance)
            detail.append({"D": d, "l": l, "n_r": s.index, "energy": s.energy,
                           "exact": exact, "relative_error": err})
        if spectrum.found < 2:
            worst = math.inf
    return {"passed": worst <= 1.0, "levels": detail}


def _check_airy(cfg):
    detail = []
    ok = True
    for convention in Convention:
        model = _consistent(1, 1.0, convention)
        spectrum = solve_states(RadialProblem(1, 0, model), n_states=3)
        for s in spectrum:
            exact = analytic_energy_airy_1d(convention, 1.0, s.index + 1)
            err = abs(s.energy - exact) / exact
            ok &= err < 1e-5
            detail.append({"convention": convention.value, "n": s.index + 1,
                           "energy": s.energy, "exact": exact, "relative_error": err})
        ok &= spectrum.found == 3
    return {"passed": bool(ok), "levels": detail}


def _check_stability(cfg):
    expected = {1: "Regular", 2: "Marginal", 3: "Regular", 4: "Regular"}
    detail = {}
    ok = True
    for d in range(1, 9):
        kind = classify_stability(RadialProblem(d, 0, _consistent(d))).kind.value
        want = expected.get(d, "Supercritical")
        ok &= kind == want
        detail[f"D={d}"] = kind
    return {"passed": bool(ok), "classification": detail}


def _ladder(report):
    return [{"r_min": g.r_min, "r_max": g.r_max, "interior_points": g.interior_points,
             "ground_energy": e} for g, e in report.ladder]


def _check_collapse(d, z, want):
    problem = RadialProblem(d, 0, _consistent(d, z, Convention.SOLID_ANGLE))
    report = collapse_diagnostic(problem)
    return {"passed": report.classification is want, "D": d, "Z": z,
            "convention": Convention.SOLID_ANGLE.value,
            "classification": report.classification.value, "ladder": _ladder(report)}


def _check_critical(cfg):
    lo, hi = bracket_critical_charge(4, Convention.SOLID_ANGLE)
    return {"passed": 0.9 <= lo and hi <= 1.1, "bracket": [lo, hi], "expected": 1.0}


def _verify_case(name, cfg):
    if name == "poisson":
        return _check_poisson(cfg)
    if name == "flux":
        return _flux_for(range(2, 9), cfg)
    if name == "flux-d2":
        return _flux_for([2], cfg)
    if name == "oracle-mini":
        return _check_oracle_mini(cfg)
    if name == "airy":
        return _check_airy(cfg)
    if name == "stability":
        return _check_stability(cfg)
    if name == "collapse-d5":
        return _check_collapse(5, 1.0, CollapseClass.COLLAPSE)
    if name == "collapse-d4":
        return _check_collapse(4, 0.5, CollapseClass.NO_BOUND_STATES)
    if name == "critical-d4":
        return _check_critical(cfg)
    raise UsageError(f"unknown verify case {name!r}; choose from {', '.join(VERIFY_CASES)}")


def cmd_verify(cfg):
    names = cfg["case"] or list(VERIFY_CASES)
    for name in names:
        if name not in VERIFY_CASES:
            raise UsageError(f"unknown verify case {name!r}; choose from {', '.join(VERIFY_CASES)}")

    def run(name):
        try:
            result = _verify_case(name, cfg)
        except (ArithmeticError, RuntimeError, ValueError) as exc:
            result = {"passed": False, "error": str(exc)}
        return {"case": name, **result}

    results = _ordered_map(run, names)
    verdict = {"passed": all(r["passed"] for r in results), "cases": results}
    emit(json.dumps(_json_value(verdict), indent=2) + "\n", cfg["out"])
    return EXIT_OK if verdict["passed"] else EXIT_FAILURE


COMMANDS = {"spectrum": cmd_spectrum, "scan-d": cmd_scan_d, "potential": cmd_potential,
            "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    del args.command
    try:
        cfg = resolve_config(args)
        return COMMANDS[command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dimhydrogen: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SupercriticalError as exc:
        print(f"dimhydrogen: {exc}", file=sys.stderr)
        return EXIT_SUPERCRITICAL
    except (ConvergenceError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"dimhydrogen: solver failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
