"""Command-line entry point.

Every subcommand resolves its parameters as schema defaults, then the
``--config`` file, then explicit flags.  Tables are written as CSV or JSON
(``--format``), documents always as JSON, each through a temporary file and
a rename.  Next to the data go ``report.json`` and ``manifest.json``.
Without ``--out`` (or SOLITONLAB_OUT) the primary output goes to stdout.

Exit codes: 0 ok, 2 configuration or domain error, 3 numerical abort.
"""

import argparse
from dataclasses import dataclass, field
import os
import sys
import time

import numpy as np

from . import __version__
from . import ambiguity, bohm, bohr, config, constants, dispersion, kg_solver
from . import nonlinear, stationary, zigzag
from .errors import ConfigurationError, DomainError, NumericalAbort
from .grid import Grid1D
from .output import RunManifest, RunReport, atomic_write, canonical_hash, dumps_json, table_text
from .potentials import PotentialSpec, rectangular_barrier

OUT_ENV = "SOLITONLAB_OUT"
REPRO_TARGETS = ("fig5.1", "fig7.2", "width", "planck", "bohr")
REFERENCE_WIDTH = 1.21e-11  # m, reference guide width for the electron


@dataclass
class Result:
    tables: dict = field(default_factory=dict)  # name -> {column: values}
    documents: dict = field(default_factory=dict)  # name -> JSON-ready object
    report: RunReport = field(default_factory=RunReport)


def _u64(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON configuration file")
    shared.add_argument("--out", help=f"output directory, or a file path with a suffix "
                                      f"(default: ${OUT_ENV}, else stdout)")
    shared.add_argument("--seed", type=_u64, default=argparse.SUPPRESS)
    shared.add_argument("--threads", type=_positive_int, default=1)
    shared.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="solitonlab")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    S = argparse.SUPPRESS

    def add(name, help_text):
        return sub.add_parser(name, parents=[shared], help=help_text, argument_default=S)

    add("constants", "dump the constants and derived scales")

    p = add("dispersion", "dispersion table: k, f_kg, f_schrod, f_clock")
    p.add_argument("--kmin", type=float)
    p.add_argument("--kmax", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--fo", dest="f_o", type=float)

    p = add("kg", "leapfrog Klein-Gordon runs")
    p.add_argument("mode", nargs="?", choices=("dispersion", "evolve", "evanescent"),
                   default="dispersion")
    p.add_argument("--k", type=float, nargs="+")
    p.add_argument("--fo", dest="f_o", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--snapshot-every", dest="snapshot_every", type=int)
    p.add_argument("--f-drive", dest="f_drive", type=float)

    p = add("stationary", "scattering and bound states of a 1D potential")
    p.add_argument("mode", choices=("scatter", "bound"))
    p.add_argument("--potential", dest="potential_file")
    p.add_argument("--E", type=float)
    p.add_argument("--n", dest="n_states", type=int)
    p.add_argument("--method", choices=("fd4", "fourier"))

    p = add("bohm", "quantum potential profiles and residuals")
    p.add_argument("mode", choices=("qp", "residuals"))
    p.add_argument("--profile", choices=("sech", "gaussian"))
    p.add_argument("--a", type=float)
    p.add_argument("--run", dest="run_file", help="run configuration for residuals")

    p = add("soliton", "nls, gp or nlq evolution")
    p.add_argument("--eq", dest="equation", choices=("nls", "gp", "nlq"))
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--g", type=float)

    p = add("zigzag", "hidden-phase barrier ensemble")
    p.add_argument("--potential", dest="potential_file")
    p.add_argument("--E", type=float)
    p.add_argument("--n", type=int)

    p = add("ambiguity", "ambiguity surface or uncertainty widths")
    p.add_argument("mode", nargs="?", choices=("surface", "widths"), default="surface")
    p.add_argument("--shape", choices=("gaussian", "sech", "rectangular"))
    p.add_argument("--width", type=float)
    p.add_argument("--chirp", type=float)
    p.add_argument("--duration", type=float)

    p = add("bohr", "Bohr orbit table")
    p.add_argument("--n", help="range a..b, list a,b,c or a single level")

    p = add("repro", "regenerate the figure data and headline numbers")
    p.add_argument("target", nargs="?", choices=REPRO_TARGETS + ("all",), default=None)
    return parser


def _schema_key(args):
    if args.command in ("stationary", "bohm"):
        if args.command == "bohm" and args.mode == "residuals":
            return "bohm-run"
        return f"{args.command}-{args.mode}"
    return args.command


def resolve_config(args):
    kind = _schema_key(args)
    schema = config.SCHEMAS[kind]
    aliases = config.ALIASES.get(kind)
    path = getattr(args, "run_file", None) or args.config
    data = config.read_json(path) if path else {}
    cfg = config.resolve(data, schema, aliases)
    for key in schema:
        if isinstance(schema[key], dict) or not hasattr(args, key):
            continue
        cfg[key] = schema[key].check(getattr(args, key), f"--{key}")
    potential_file = getattr(args, "potential_file", None)
    if potential_file:
        cfg["potential"] = config.read_json(potential_file)
    return kind, cfg


def _potential(data):
    return None if data is None else PotentialSpec.from_dict(data)


def _constants(cfg, args):
    const = constants.CODATA2018
    width = constants.waveguide_width(const.m_e)
    r1 = bohr.orbit_from_n(1).r
    doc = {
        "codata": const.as_dict(),
        "derived": {
            "coulomb_e2": const.coulomb_e2,
            "compton_cutoff_electron": constants.compton_cutoff(const.m_e),
            "waveguide_width_electron": width,
            "bohr_radius": r1,
            "width_over_bohr_radius": width / r1,
            "planck_length": constants.planck_length(),
            "planck_mass": constants.planck_mass(),
        },
    }
    return Result(documents={"constants": doc})


def _dispersion(cfg, args):
    curve = dispersion.dispersion_table(cfg["kmin"], cfg["kmax"], cfg["n"], cfg["f_o"])
    return Result(tables={"dispersion": curve.columns()})


def _kg(cfg, args):
    res = Result()
    f_o = cfg["f_o"]
    ppw = cfg["points_per_wavelength"]
    if args.mode == "dispersion":
        ks = np.array(cfg["k"])
        measured = np.array([kg_solver.measured_dispersion(k, f_o, ppw, cfg["courant"],
                                                           cfg["periods"]) for k in ks])
        exact = dispersion.kg_frequency(ks, f_o)
        rel = np.abs(measured - exact) / exact
        res.tables["kg_dispersion"] = {"k": ks, "f_measured": measured, "f_exact": exact,
                                       "rel_error": rel}
        res.report.add_scalar("max_rel_error", float(rel.max()))
        k = ks[ks > 0][0] if np.any(ks > 0) else 1.0
        grid = Grid1D(0.0, 1.0 / k, ppw)
        dt = cfg["courant"] * grid.dz
        start = kg_solver.plane_wave(grid, k, f_o, dt)
        e0 = kg_solver.energy(start, f_o)
        end = kg_solver.evolve_kg(start, f_o, dt, cfg["energy_steps"])
        res.report.add_scalar("energy_drift", abs(kg_solver.energy(end, f_o) - e0) / e0)
    elif args.mode == "evolve":
        k = cfg["k"][0]
        if not k > 0:
            raise ConfigurationError("kg evolve needs a positive wavenumber")
        every = cfg["snapshot_every"]
        if every < 1 or cfg["steps"] < 1:
            raise ConfigurationError("steps and snapshot_every must be at least 1")
        grid = Grid1D(0.0, 1.0 / k, ppw)
        dt = cfg["courant"] * grid.dz
        fld = kg_solver.plane_wave(grid, k, f_o, dt)
        e0 = kg_solver.energy(fld, f_o)
        snaps = {"t": [], "z": [], "u": []}
        energies = {"t": [0.0], "energy": [e0]}
        done = 0
        while done < cfg["steps"]:
            chunk = min(every, cfg["steps"] - done)
            fld = kg_solver.evolve_kg(fld, f_o, dt, chunk)
            done += chunk
            snaps["t"].extend([fld.t] * grid.n)
            snaps["z"].extend(grid.z.tolist())
            snaps["u"].extend(fld.u.tolist())
            energies["t"].append(fld.t)
            energies["energy"].append(kg_solver.energy(fld, f_o))
        res.tables["kg_snapshots"] = snaps
        res.tables["kg_energy"] = energies
        res.report.add_scalar("energy_drift", max(abs(e - e0) for e in energies["energy"]) / e0)
    else:
        response = kg_solver.driven_decay(cfg["f_drive"], f_o)
        expected = kg_solver.evanescent_decay_rate(cfg["f_drive"], f_o)
        res.tables["kg_evanescent"] = {"z": response.z, "amplitude": response.amplitude}
        res.report.add_scalar("decay_rate", response.decay_rate)
        res.report.add_scalar("decay_rate_expected", expected)
    return res


def _require_potential(cfg):
    spec = _potential(cfg["potential"])
    if spec is None:
        raise ConfigurationError('a potential is required (--potential file.json or "potential")')
    return spec


def _stationary_scatter(cfg, args):
    spec = _require_potential(cfg)
    wave = stationary.solve_scattering(spec, cfg["E"], cfg["mass"], cfg["hbar"])
    z = np.linspace(spec.domain[0], spec.domain[1], cfg["n_points"])
    psi = stationary.scattering_wavefunction(spec, cfg["E"], z, cfg["mass"], cfg["hbar"])
    res = Result(tables={"scatter": {"z": z, "re_psi": psi.real, "im_psi": psi.imag,
                                     "abs2": np.abs(psi) ** 2, "V": spec(z)}})
    res.report.add_scalar("R", wave.R_prob)
    res.report.add_scalar("T", wave.T_prob)
    res.report.add_scalar("R_plus_T", wave.R_prob + wave.T_prob)
    return res


def _stationary_bound(cfg, args):
    spec = _require_potential(cfg)
    found = stationary.solve_bound_states(spec, cfg["n_states"], cfg["n_grid"], cfg["mass"],
                                          cfg["hbar"], method=cfg["method"])
    columns = {"z": found.z, "V": spec(found.z)}
    for j, state in enumerate(found.states):
        columns[f"psi_{j}"] = state
    res = Result(tables={"bound": columns})
    for j, e in enumerate(found.energies):
        res.report.add_scalar(f"E_{j}", float(e))
    if not found.complete:
        res.report.warn(f"only {found.n_found} bound states below the boundary potential")
    return res


def _bohm_qp(cfg, args):
    a, m, hbar = cfg["a"], cfg["mass"], cfg["hbar"]
    z = np.linspace(-cfg["z_max"], cfg["z_max"], cfg["n"])
    scale = hbar * hbar * a * a / (2.0 * m)
    if cfg["profile"] == "sech":
        R = 1.0 / np.cosh(a * z)
        closed = bohm.sech_quantum_potential(a, z, m, hbar)
    else:
        R = np.exp(-0.5 * (a * z) ** 2)
        closed = -scale * (a * a * z * z - 1.0)
    fd = bohm.quantum_potential(R, z[1] - z[0], m, hbar, order=cfg["order"])
    if cfg["normalized"]:
        closed, fd = closed / scale, fd / scale
    res = Result(tables={"qp": {"z": z, "Q": closed, "Q_fd": fd}})
    res.report.add_scalar("max_fd_deviation", float(np.nanmax(np.abs(fd - closed))))
    return res


def _bohm_residuals(cfg, args):
    g = cfg["grid"]
    grid = Grid1D(g["zmin"], g["zmax"], g["n"])
    init = cfg["init"]
    levels = cfg["levels"]
    if levels < 3:
        raise ConfigurationError("levels must be at least 3")
    m, hbar, dt = cfg["mass"], cfg["hbar"], cfg["dt"]
    V = _potential(cfg["potential"])
    fld = nonlinear.gaussian_field(grid, init["width"], init["z0"], init["k0"])
    history = [bohm.decompose(fld.u, grid.z, hbar)]
    for _ in range(levels - 1):
        fld = nonlinear.evolve_gp(fld, V, 0.0, False, dt, 1, m, hbar)
        history.append(bohm.decompose(fld.u, grid.z, hbar))
    hj = bohm.hamilton_jacobi_residual(history, dt, V, m, order=cfg["order"])
    cont = bohm.continuity_residual(history, dt, m)
    row = (levels - 2) // 2
    mid = history[row + 1]
    core = mid.R > 1e-3 * mid.R.max()
    res = Result(tables={"residuals": {"z": grid.z, "R": mid.R, "S": mid.S,
                                       "hj_residual": hj[row], "continuity_residual": cont[row]}})
    res.report.add_scalar("max_hj_residual", float(np.nanmax(np.abs(hj[:, core]))))
    res.report.add_scalar("max_continuity_residual", float(np.nanmax(np.abs(cont[:, core]))))
    return res


def _initial_field(grid, init):
    if init["profile"] == "sech":
        return nonlinear.sech_field(grid, init["a"], init["v"], init["z0"], init["amplitude"],
                                    init["wavenumber"], init["periodic"])
    amplitude = 1.0 if init["amplitude"] is None else init["amplitude"]
    wavenumber = 0.0 if init["wavenumber"] is None else init["wavenumber"]
    return nonlinear.gaussian_field(grid, init["width"], init["z0"], wavenumber, amplitude)


def _soliton(cfg, args):
    eq, dt, t_end = cfg["equation"], cfg["dt"], cfg["t_end"]
    if not dt > 0 or not t_end >= 0:
        raise ConfigurationError("dt must be positive and t_end non-negative")
    steps = int(round(t_end / dt))
    if abs(steps * dt - t_end) > 1e-9 * max(1.0, t_end):
        raise ConfigurationError("t_end must be a whole number of time steps")
    g = cfg["grid"]
    grid = Grid1D(g["zmin"], g["zmax"], g["n"])
    fld = _initial_field(grid, cfg["init"])
    V = _potential(cfg["potential"])
    m, hbar = cfg["mass"], cfg["hbar"]
    rest = m if (eq == "gp" and cfg["include_rest"]) else 0.0
    every = cfg["snapshot_every"]
    if every < 0:
        raise ConfigurationError("snapshot_every must be non-negative")
    sample = every if every > 0 else max(1, steps // 50)
    diag = nonlinear.NLQDiagnostics()

    def advance(f, n):
        if eq == "nls":
            return nonlinear.evolve_nls(f, dt, n)
        if eq == "gp":
            return nonlinear.evolve_gp(f, V, cfg["g"], cfg["include_rest"], dt, n, m, hbar)
        return nonlinear.evolve_nlq(f, V, dt, n, cfg["eps"], m, hbar, diagnostics=diag)

    snaps = {"t": [], "z": [], "re": [], "im": [], "abs2": []}
    series = {"t": [], "norm": [], "momentum": [], "energy": [], "centroid": [],
              "second_moment": []}

    def snapshot(f):
        snaps["t"].extend([f.t] * grid.n)
        snaps["z"].extend(grid.z.tolist())
        snaps["re"].extend(f.u.real.tolist())
        snaps["im"].extend(f.u.imag.tolist())
        snaps["abs2"].extend((np.abs(f.u) ** 2).tolist())

    def record(f):
        cs = nonlinear.conserved_set(f, eq, V, cfg["g"], m, hbar, rest)
        series["t"].append(f.t)
        series["norm"].append(cs.norm)
        series["momentum"].append(cs.momentum)
        series["energy"].append(cs.energy)
        series["centroid"].append(nonlinear.centroid(f))
        series["second_moment"].append(nonlinear.second_moment(f))

    snapshot(fld)
    record(fld)
    done = 0
    while done < steps:
        chunk = min(sample, steps - done)
        fld = advance(fld, chunk)
        done += chunk
        record(fld)
        if every > 0 or done == steps:
            snapshot(fld)

    norms = np.array(series["norm"])
    energies = np.array(series["energy"])
    # an energy near zero (e.g. a pulse centred on a ramp's zero) has no relative scale
    relative = abs(energies[0]) > 1e-8 * max(norms[0], 1e-300)
    e_scale = abs(energies[0]) if relative else 1.0
    summary = {
        "equation": eq,
        "t_end": fld.t,
        "steps": steps,
        "norm_drift": float(np.max(np.abs(norms - norms[0])) / norms[0]) if norms[0] else 0.0,
        "energy_drift": float(np.max(np.abs(energies - energies[0])) / e_scale),
        "energy_drift_kind": "relative" if relative else "absolute",
        "second_moment_growth": series["second_moment"][-1] - series["second_moment"][0],
    }
    if len(series["t"]) >= 3:
        summary["centroid_velocity"] = float(np.polyfit(series["t"], series["centroid"], 1)[0])
    init = cfg["init"]
    if (eq == "nls" and V is None and init["profile"] == "sech" and not init["periodic"]
            and init["amplitude"] is None and init["wavenumber"] is None):
        exact = nonlinear.breather_exact(init["a"], init["v"], init["z0"], grid.z, fld.t)
        summary["breather_error"] = float(np.max(np.abs(fld.u - exact)))
    if eq == "nlq":
        summary["underflow_fraction"] = diag.underflow_fraction
    res = Result(tables={"snapshots": snaps, "conserved": series},
                 documents={"summary": summary})
    for key in ("norm_drift", "energy_drift", "breather_error", "centroid_velocity"):
        if key in summary:
            res.report.add_scalar(key, summary[key])
    return res


def _zigzag(cfg, args):
    spec = _potential(cfg["potential"]) or rectangular_barrier(1.0, 1.0)
    seed = 0 if cfg["seed"] is None else cfg["seed"]
    out = zigzag.ensemble_scatter(cfg["E"], spec, cfg["n"], seed, args.threads, cfg["mass"],
                                  cfg["hbar"], cfg["stream"])
    doc = out.to_dict()
    doc["sigma"] = out.sigma
    doc["within_5_sigma"] = out.within(5.0)
    res = Result(documents={"zigzag": doc})
    res.report.add_scalar("t_hat", out.t_hat)
    res.report.add_scalar("wave_T", out.wave_T)
    if not out.within(5.0):
        res.report.warn("empirical transmission outside 5 sigma of the wave value")
    return res


def _pulse(cfg):
    grid = Grid1D(cfg["zmin"], cfg["zmax"], cfg["n"])
    shape = cfg["shape"]
    if shape == "gaussian":
        return ambiguity.gaussian_pulse(grid, cfg["width"], 0.0, cfg["chirp"])
    if shape == "sech":
        return ambiguity.sech_pulse(grid, cfg["width"])
    return ambiguity.rectangular_pulse(grid, cfg["duration"])


def _ambiguity(cfg, args):
    pulse = _pulse(cfg)
    res = Result()
    if args.mode == "widths":
        w = ambiguity.moment_widths(pulse)
        if cfg["shape"] == "gaussian":
            reference = ambiguity.chirped_gaussian_product(cfg["chirp"] * cfg["width"] ** 2)
        elif cfg["shape"] == "sech":
            reference = ambiguity.SECH_PRODUCT
        else:
            reference = None
        res.documents["widths"] = {"shape": cfg["shape"], "delta_x": w.delta_x,
                                   "delta_k": w.delta_k, "product": w.product,
                                   "divergent": w.divergent, "closed_form_product": reference}
        res.report.add_scalar("product", w.product)
        if w.divergent:
            res.report.warn("exact delta_k diverges; the value is limited by the grid")
        return res
    surf = ambiguity.ambiguity_surface(pulse, cfg["n_delay"], cfg["n_doppler"], cfg["oversample"])
    rows = np.array(list(surf.rows()))
    res.tables["ambiguity"] = {"tau": rows[:, 0], "fd": rows[:, 1], "magnitude": rows[:, 2]}
    res.report.add_scalar("volume", surf.volume)
    if surf.warning:
        res.report.warn("delay-Doppler lattice does not capture the unit volume")
    return res


def parse_levels(text):
    """'a..b', 'a,b,c' or 'a' -> list of positive integers."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            levels = list(range(lo, hi + 1))
        else:
            levels = [int(x) for x in text.split(",")]
    except ValueError:
        raise ConfigurationError(f"cannot read levels from {text!r}") from None
    if not levels or min(levels) < 1:
        raise ConfigurationError(f"levels must be positive integers, got {text!r}")
    return levels


def _bohr_columns(levels):
    rows = bohr.bohr_table(levels)
    return {key: [row[key] for row in rows] for key in rows[0]}


def _bohr(cfg, args):
    return Result(tables={"orbits": _bohr_columns(parse_levels(cfg["n"]))})


def _repro(cfg, args):
    target = args.target
    res = Result()
    targets = REPRO_TARGETS if target == "all" else (target,)
    const = constants.CODATA2018
    for name in targets:
        if name == "fig5.1":
            curve = dispersion.dispersion_table(-3.0, 3.0, 601, 1.0)
            res.tables["fig5_1"] = curve.columns()
        elif name == "fig7.2":
            prof = bohm.sech_profile(a=1.0, z_max=6.0, n=1201, normalized=True)
            res.tables["fig7_2"] = {"z": prof.z, "Q": prof.Q}
        elif name == "width":
            width = constants.waveguide_width(const.m_e)
            r1 = bohr.orbit_from_n(1).r
            rel = width / REFERENCE_WIDTH - 1.0
            res.documents["width"] = {
                "waveguide_width": width,
                "reference_width": REFERENCE_WIDTH,
                "relative_to_reference": rel,
                "bohr_radius": r1,
                "ratio_to_bohr_radius": width / r1,
                "reference_ratio_to_bohr_radius": REFERENCE_WIDTH / r1,
            }
            if abs(rel) > 0.01:
                res.report.warn(f"computed width {width:.4e} m differs from the reference "
                                f"{REFERENCE_WIDTH:.2e} m by {rel:+.1%}")
        elif name == "planck":
            res.documents["planck"] = {"planck_length": constants.planck_length(),
                                       "planck_mass": constants.planck_mass()}
        else:
            res.tables["bohr"] = _bohr_columns(range(1, 11))
    return res


HANDLERS = {
    "constants": _constants,
    "dispersion": _dispersion,
    "kg": _kg,
    "stationary-scatter": _stationary_scatter,
    "stationary-bound": _stationary_bound,
    "bohm-qp": _bohm_qp,
    "bohm-run": _bohm_residuals,
    "soliton": _soliton,
    "zigzag": _zigzag,
    "ambiguity": _ambiguity,
    "bohr": _bohr,
    "repro": _repro,
}


def _rendered(result, fmt):
    """(file name, text) pairs in emission order: tables first, then documents."""
    out = []
    for name, columns in result.tables.items():
        out.append((f"{name}.{fmt}", table_text(columns, fmt)))
    for name, doc in result.documents.items():
        out.append((f"{name}.json", dumps_json(doc)))
    return out


def _targets(out, files):
    """Map file names to paths: ``out`` is a directory unless it has a suffix,
    in which case the first file takes that path and the rest sit beside it."""
    root, ext = os.path.splitext(out)
    if not ext:
        return out, {name: os.path.join(out, name) for name in files}
    directory = os.path.dirname(out) or "."
    stem = os.path.basename(root)
    paths = {}
    for i, name in enumerate(files):
        paths[name] = out if i == 0 else os.path.join(directory, f"{stem}.{name}")
    return directory, paths


def run(argv=None, stdout=None):
    """Execute one command; returns (exit code, manifest or None, report or None)."""
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None, None

    if args.command == "repro" and args.target is None:
        stdout.write("\n".join(REPRO_TARGETS + ("all",)) + "\n")
        return 0, None, None

    start = time.perf_counter()
    try:
        kind, cfg = resolve_config(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"solitonlab: error: {exc}", file=sys.stderr)
        return 2, None, None
    seed = cfg.get("seed", getattr(args, "seed", None))
    resolved = {"mode": getattr(args, "mode", None), "target": getattr(args, "target", None),
                "format": args.format, "parameters": cfg}
    manifest = RunManifest(
        subcommand=kind,
        config_hash=canonical_hash({"subcommand": kind, "config": resolved, "seed": seed,
                                    "version": __version__}),
        seed=seed,
        tool_version=__version__,
        config=resolved,
    )
    out = args.out or os.environ.get(OUT_ENV) or None

    try:
        with np.errstate(over="ignore", under="ignore"):
            result = HANDLERS[kind](cfg, args)
    except (ConfigurationError, DomainError) as exc:
        print(f"solitonlab: error: {exc}", file=sys.stderr)
        return 2, manifest, None
    except NumericalAbort as exc:
        report = RunReport()
        report.abort(str(exc))
        print(f"solitonlab: aborted: {exc}", file=sys.stderr)
        if out:
            _write_records(out, [], manifest, report, start)
        return 3, manifest, report

    files = _rendered(result, args.format)
    if not out:
        if files:
            stdout.write(files[0][1])
        manifest.wall_time = time.perf_counter() - start
        return 0, manifest, result.report
    _write_records(out, files, manifest, result.report, start)
    return 0, manifest, result.report


def _write_records(out, files, manifest, report, start):
    names = [name for name, _ in files] + ["report.json", "manifest.json"]
    directory, paths = _targets(out, names)
    for name, text in files:
        atomic_write(paths[name], text)
        manifest.record(os.path.relpath(paths[name], directory))
    atomic_write(paths["report.json"], dumps_json(report.to_dict()))
    manifest.record(os.path.relpath(paths["report.json"], directory))
    manifest.record(os.path.relpath(paths["manifest.json"], directory))
    manifest.wall_time = time.perf_counter() - start
    atomic_write(paths["manifest.json"], dumps_json(manifest.to_dict()))


def main(argv=None):
    code, _, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
