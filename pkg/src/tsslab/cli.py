"""Command-line front end.  Each subcommand reads a JSON config, applies
``--set`` overrides and writes CSV/JSON into the output directory."""

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import reports
from .driven import DriveSystem, quasi_energies, quasi_energy_spectrum
from .errors import ConvergenceError, ValidationError
from .oracle import (HarmonicHamiltonian, IntegratorSpec, arbitrate_ammonia_factor, choose_dt,
                     integrate_tdse, rescaled, rwa_fidelity)
from .presets import PRESET_NAMES, WaveguideSystem
from .static import StaticSystem, uniform_grid
from .threelevel import (ThreeLevelConfig, coupling_eigenstates, init_label_for, linewidth_study,
                         predicted_centers, sweep_probe)
from .trace import AmplitudeTrace

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_CONVERGENCE = 0, 1, 2, 3


@dataclass
class RunConfig:
    preset: str = None
    params: dict = field(default_factory=dict)
    system: dict = None
    initial_state: object = "canonical:0"
    time_grid: list = field(default_factory=lambda: [0.0, 1e-9, 1001])
    outputs: list = field(default_factory=lambda: ["trace", "probabilities"])
    output_dir: str = None
    sweep: dict = field(default_factory=dict)
    oracle: dict = field(default_factory=dict)
    linewidths: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg = cls(**d)
        if cfg.preset is not None and cfg.preset not in PRESET_NAMES:
            raise ValidationError(f"unknown preset {cfg.preset!r}; valid names: {', '.join(PRESET_NAMES)}")
        if len(cfg.time_grid) != 3:
            raise ValidationError("time_grid must be [t_start, t_end, n]")
        return cfg

    def to_dict(self):
        return asdict(self)


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(doc, assignments):
    for item in assignments or ():
        if "=" not in item:
            raise ValidationError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        node = doc
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ValidationError(f"cannot descend into non-object at {p!r}")
        node[parts[-1]] = _parse_value(value)
    return doc


def load_config(path, overrides, preset=None):
    doc = {}
    if path:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise OSError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path} is not valid JSON: {exc}") from None
    if preset:
        doc["preset"] = preset
    return RunConfig.from_dict(apply_overrides(doc, overrides))


def fmt(x):
    return format(float(x), ".17g")


def write_csv(path, header, rows):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None
    return path


def write_json(path, obj):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None
    return path


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def trace_rows(trace: AmplitudeTrace):
    for t, amps in zip(trace.t, trace.amplitudes):
        row = [t]
        for a in amps:
            row += [a.real, a.imag]
        yield row


def trace_header(dim):
    return ["t"] + [f"{p}_c{i + 1}" for i in range(dim) for p in ("re", "im")]


def output_dir(args, cfg):
    d = args.out or cfg.output_dir or os.environ.get("TSSLAB_OUT") or "tsslab-out"
    return Path(d)


PLOT_STUB = """# Generic plot for {csv}; edit freely.
import csv
import matplotlib.pyplot as plt

with open({csv!r}) as fh:
    rows = list(csv.DictReader(fh))
cols = [c for c in rows[0] if c != {x!r}]
x = [float(r[{x!r}]) for r in rows]
for c in cols:
    try:
        plt.plot(x, [float(r[c]) for r in rows], label=c)
    except ValueError:
        pass
plt.xlabel({x!r})
plt.legend()
plt.show()
"""


def maybe_stub(args, csv_path, xcol):
    if getattr(args, "plot_stub", False):
        stub = csv_path.with_suffix(".plot.py")
        stub.write_text(PLOT_STUB.format(csv=csv_path.name, x=xcol))


def _trace_for(cfg):
    sys_ = reports.build_system(cfg.preset, cfg.params, cfg.system)
    c0 = reports.initial_state(sys_, cfg.initial_state)
    t = uniform_grid(*cfg.time_grid[:2], int(cfg.time_grid[2]))
    return sys_, AmplitudeTrace(t, reports.evolve(sys_, c0, t))


# -- subcommands --------------------------------------------------------------

def cmd_energy_report(args, cfg):
    if cfg.preset is None:
        raise ValidationError(f"energy-report needs a preset; valid names: {', '.join(PRESET_NAMES)}")
    rep = reports.energy_report(cfg.preset, **cfg.params)
    text = json.dumps(rep, indent=2, sort_keys=True, default=_jsonable)
    print(text)
    if args.out or cfg.output_dir or os.environ.get("TSSLAB_OUT"):
        write_json(output_dir(args, cfg) / "energy_report.json", rep)


def cmd_evolve(args, cfg):
    sys_, trace = _trace_for(cfg)
    out = output_dir(args, cfg)
    written = []
    if "trace" in cfg.outputs:
        p = write_csv(out / "trace.csv", trace_header(trace.dim), trace_rows(trace))
        maybe_stub(args, p, "t")
        written.append(p)
    if "probabilities" in cfg.outputs:
        pops = trace.populations
        p = write_csv(out / "probabilities.csv", ["t", "p1", "p2"],
                      ([t, *row] for t, row in zip(trace.t, pops)))
        maybe_stub(args, p, "t")
        written.append(p)
    if "energies" in cfg.outputs and cfg.preset:
        written.append(write_json(out / "energy_report.json", reports.energy_report(cfg.preset, **cfg.params)))
    if "spectrum" in cfg.outputs:
        written += _write_spectrum(sys_, trace, out)
    for p in written:
        print(p)


def _write_spectrum(sys_, trace, out):
    spec = quasi_energy_spectrum(trace)
    p1 = write_csv(out / "spectrum_peaks.csv", ["component", "frequency_rad_s", "magnitude"],
                   ([f"c{pk.component + 1}", pk.frequency, pk.magnitude] for pk in spec.peaks))
    info = {"bin_width_rad_s": spec.bin_width}
    if isinstance(sys_, DriveSystem):
        q = quasi_energies(sys_)
        info["quartet_rad_s"] = {"eP_L": q.eP_L, "eP_H": q.eP_H, "eN_L": q.eN_L, "eN_H": q.eN_H}
    p2 = write_json(out / "spectrum.json", info)
    return [p1, p2]


def cmd_spectrum(args, cfg):
    sys_, trace = _trace_for(cfg)
    for p in _write_spectrum(sys_, trace, output_dir(args, cfg)):
        print(p)


SWEEP_DEFAULTS = {"deltaC": 0.0, "D_C": 1.0, "D_P": 0.05, "scenario": "probe_e",
                  "inits": ["P", "N"], "span": 3.0, "n_points": 600, "n_samples": 2000}


def cmd_sweep_probe(args, cfg):
    unknown = set(cfg.sweep) - set(SWEEP_DEFAULTS)
    if unknown:
        raise ValidationError(f"unknown sweep keys: {', '.join(sorted(unknown))}")
    s = {**SWEEP_DEFAULTS, **cfg.sweep}
    states = coupling_eigenstates(s["deltaC"], s["D_C"])
    centers = predicted_centers(s["deltaC"], s["D_C"], s["scenario"])
    rows, fits = [], {}
    for init in s["inits"]:
        if init in ("P", "N"):
            vec = states[init][1]
            label = init_label_for(vec, init)
            mid = centers[init]
        else:
            vec = reports.initial_state(None, init) if isinstance(init, str) else np.array(
                [complex(*c) if isinstance(c, list) else complex(c) for c in init] + [0.0])
            label = "general"
            mid = 0.5 * (centers["P"] + centers["N"])
        tmpl = ThreeLevelConfig.from_detunings(s["deltaC"], 0.0, s["D_C"], s["D_P"], s["scenario"], tuple(vec))
        x = np.linspace(mid - s["span"], mid + s["span"], int(s["n_points"]))
        res = sweep_probe(tmpl, x, init_label=label, n_samples=int(s["n_samples"]))
        rows += [[d, p, res.scenario, res.init_label] for d, p in zip(res.detunings, res.max_population_r)]
        fits[f"{init}:{label}"] = [f.as_dict() for f in res.fits]
    out = output_dir(args, cfg)
    p = write_csv(out / "sweep.csv", ["detuning_rad_s", "max_pop_r", "scenario", "init_label"], rows)
    maybe_stub(args, p, "detuning_rad_s")
    write_json(out / "fits.json", {"predicted_centers": centers, "fits": fits})
    print(p)
    print(out / "fits.json")


def cmd_oracle_check(args, cfg):
    o = cfg.oracle
    out = output_dir(args, cfg)
    if o.get("arbitrate"):
        res = arbitrate_ammonia_factor(float(o.get("G", 2e6)), float(o.get("deltaC_frac", 0.06)))
        write_json(out / "arbitration.json", res.as_dict())
        print(json.dumps(res.as_dict(), indent=2))
        return
    sys_ = reports.build_system(cfg.preset, cfg.params, cfg.system)
    c0 = reports.initial_state(sys_, cfg.initial_state)
    if isinstance(sys_, DriveSystem):
        ratio = o.get("ratio")
        res = rwa_fidelity(rescaled(sys_, ratio), c0, periods=int(o.get("periods", 10)))
        rep = {"ratio": res.ratio, "max_error": res.max_error, "bound": res.bound,
               "within_bound": res.within_bound, "max_norm_drift": res.max_norm_drift}
    elif isinstance(sys_, StaticSystem):
        H = HarmonicHamiltonian(sys_.hamiltonian)
        t_end = float(cfg.time_grid[1])
        dt = choose_dt(H.omega_max, t_end, float(o.get("tol", 1e-10)))
        n = IntegratorSpec(dt, t_end).n_steps
        spec = IntegratorSpec(dt, t_end, max(1, n // int(cfg.time_grid[2])))
        run = integrate_tdse(H, c0, spec)
        ref = reports.evolve(sys_, c0, run.trace.t)
        write_csv(out / "oracle_trace.csv", trace_header(2), trace_rows(run.trace))
        rep = {"max_abs_error": float(np.max(np.abs(ref - run.trace.amplitudes))),
               "max_norm_drift": run.max_norm_drift, "dt": run.dt}
    else:
        raise ValidationError("oracle-check supports static and driven systems")
    write_json(out / "oracle_report.json", rep)
    print(json.dumps(rep, indent=2))


def cmd_linewidths(args, cfg):
    lw = {"deltaCs": [0.0, 0.4], "D_Cs": [0.5, 1.0, 2.0], "D_Ps": [0.05], "scenario": "probe_e",
          **cfg.linewidths}
    rows = linewidth_study(lw["deltaCs"], lw["D_Cs"], lw["D_Ps"], lw["scenario"])
    cols = ["deltaC", "D_C", "D_P", "init", "init_label", "predicted_center", "center", "Q",
            "amplitude", "residual_rms", "status"]
    out = output_dir(args, cfg)
    p = write_csv(out / "linewidths.csv", cols, ([r[c] for c in cols] for r in rows))
    print(p)


COMMANDS = {
    "energy-report": cmd_energy_report,
    "evolve": cmd_evolve,
    "sweep-probe": cmd_sweep_probe,
    "spectrum": cmd_spectrum,
    "oracle-check": cmd_oracle_check,
    "linewidths": cmd_linewidths,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="tsslab", description="Two-state system dynamics and energy structure.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("preset", nargs="?", help=f"preset name ({', '.join(PRESET_NAMES)})")
        p.add_argument("-c", "--config", help="JSON run configuration")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config field by dotted path; value parsed as JSON when possible")
        p.add_argument("-o", "--out", help="output directory (default: $TSSLAB_OUT or ./tsslab-out)")
        p.add_argument("--plot-stub", action="store_true", help="write a matplotlib script next to each CSV")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.set, args.preset)
        COMMANDS[args.command](args, cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
