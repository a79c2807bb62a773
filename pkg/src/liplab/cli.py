"""Command-line entry point: config parsing, dispatch, and report emission.

Configs are flat dotted-key text (``maximal.levels=8``) so runs can live in
version control and diff cleanly.  Precedence, lowest to highest: built-in
defaults, config file, environment (``LIPLAB_<KEY>`` with dots as
underscores), repeated ``--set KEY=VALUE``, then the dedicated flags.  Exit
code 0 means every verdict in the emitted report passed.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import experiments
from .averaging import MaximalSpec, QuadratureSpec
from .experiments import ExperimentReport, SGrid, Verdict
from .fields import ScalarField, UnitVectorField, field_from_descriptor, scalar_from_name
from .measure import GridSpec, IntervalCollection, check_distortion, greedy_cover_select
from .perturb import PerturbationMap, SolverSpec, roundtrip_error

ENV_PREFIX = "LIPLAB_"

COMMANDS = (
    "invert-check",
    "distortion",
    "norm-convergence",
    "weak-type",
    "pointwise",
    "continuity",
    "h-n-decay",
    "c-alpha",
    "covering-demo",
)


class ConfigError(ValueError):
    pass


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_str_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


# key -> (type tag, default); None defaults resolve per command at dispatch
SCHEMA: dict[str, tuple[str, object]] = {
    "command": ("str", None),
    "field": ("str", "shear:a=1"),
    "dimension": ("int", 2),
    "T": ("float", None),
    "scalars": ("str_list", None),
    "seed": ("int", 0),
    "out": ("str", "report"),
    "format": ("str", "both"),
    "jobs": ("int", 0),
    "window.n": ("float", 2.0),
    "grid.resolution": ("int", None),
    "grid.box": ("float_list", None),
    "sgrid.count": ("int", 17),
    "maximal.levels": ("int", 8),
    "quad.rule": ("str", "midpoint_composite"),
    "quad.nodes": ("int", 64),
    "solver.tolerance": ("float", 1e-10),
    "solver.max_iterations": ("int", 1000),
    "lambdas": ("float_list", None),
    "tvalues": ("float_list", None),
    "p": ("float", 1.0),
    "alpha": ("float", 0.25),
    "nmax": ("int", 64),
    "norm.floor": ("float", None),
    "weak.refine": ("bool", False),
    "pointwise.points": ("int", 1000),
    "pointwise.scount": ("int", 8),
    "invert.qvalues": ("float_list", (0.0, 0.25, 0.5, 0.9)),
    "invert.points": ("int", 10000),
    "distortion.rectangles": ("int", 20),
    "svalues": ("float_list", None),
    "continuity.lambda": ("float", 0.5),
    "continuity.count": ("int", 33),
    "covering.intervals": ("str", ""),
    "covering.c": ("float", None),
}

_PARSERS = {
    "str": lambda s: s.strip(),
    "int": lambda s: int(s.strip()),
    "float": lambda s: float(s.strip()),
    "bool": _parse_bool,
    "float_list": _parse_float_list,
    "str_list": _parse_str_list,
}


def _format_value(kind: str, value) -> str:
    if kind == "float":
        return repr(float(value))
    if kind == "bool":
        return "true" if value else "false"
    if kind == "float_list":
        return ",".join(repr(float(x)) for x in value)
    if kind == "str_list":
        return ",".join(value)
    return str(value)


@dataclass
class RunConfig:
    """Fully materialized run configuration (every schema key present)."""

    values: dict

    def __getitem__(self, key: str):
        return self.values[key]

    @property
    def command(self) -> str:
        return self.values["command"]

    def to_text(self) -> str:
        lines = []
        for key in sorted(SCHEMA):
            value = self.values[key]
            if value is None or (key == "covering.intervals" and not value):
                continue
            lines.append(f"{key}={_format_value(SCHEMA[key][0], value)}")
        return "\n".join(lines) + "\n"


def _read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected KEY=VALUE, got {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _env_overrides(env) -> dict[str, str]:
    out = {}
    for key in SCHEMA:
        name = ENV_PREFIX + key.upper().replace(".", "_")
        if name in env:
            out[key] = env[name]
    return out


def parse_config(
    path: str | None = None,
    sets: tuple[str, ...] = (),
    env=None,
    command: str | None = None,
    out: str | None = None,
    output_format: str | None = None,
    seed: int | None = None,
    jobs: int | None = None,
) -> RunConfig:
    """Build a validated RunConfig; flags override --set, which overrides env and file."""
    values = {key: default for key, (_, default) in SCHEMA.items()}

    def absorb(raw: dict[str, str], origin: str):
        for key, text in raw.items():
            if key not in SCHEMA:
                raise ConfigError(f"unknown config key: {key!r} ({origin})")
            kind = SCHEMA[key][0]
            try:
                values[key] = _PARSERS[kind](text)
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r} ({origin}): {exc}") from exc

    if path is not None:
        absorb(_read_config_file(path), f"file {path}")
    absorb(_env_overrides(env if env is not None else os.environ), "environment")
    for item in sets:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        absorb({key.strip(): value.strip()}, "--set")
    if command is not None:
        values["command"] = command
    if out is not None:
        values["out"] = out
    if output_format is not None:
        values["format"] = output_format
    if seed is not None:
        values["seed"] = int(seed)
    if jobs is not None:
        values["jobs"] = int(jobs)

    config = RunConfig(values)
    _validate(config)
    return config


def _validate(config: RunConfig):
    v = config.values
    if v["command"] is not None and v["command"] not in COMMANDS:
        raise ConfigError(f"unknown command {v['command']!r} (known: {', '.join(COMMANDS)})")
    if v["format"] not in ("json", "csv", "both"):
        raise ConfigError("format must be one of: json, csv, both")
    if v["dimension"] < 2:
        raise ConfigError("dimension invariant violated: need dimension >= 2")
    if v["T"] is not None and not v["T"] > 0:
        raise ConfigError("shift range invariant violated: T must be positive")
    try:
        field = field_from_descriptor(v["field"], v["dimension"])
    except ValueError as exc:
        raise ConfigError(f"field descriptor invalid: {exc}") from exc
    if v["T"] is not None and v["T"] * field.lipschitz_k > 0.95 + 1e-12:
        raise ConfigError(
            f"contraction invariant violated: T*K = {v['T'] * field.lipschitz_k:.6g} > 0.95"
        )
    if v["quad.nodes"] < 8:
        raise ConfigError("quadrature invariant violated: quad.nodes must be at least 8")
    if v["quad.rule"] not in ("midpoint_composite", "gauss_legendre"):
        raise ConfigError("quadrature invariant violated: unknown quad.rule")
    if v["maximal.levels"] < 1:
        raise ConfigError("maximal invariant violated: maximal.levels must be at least 1")
    if not v["solver.tolerance"] > 0:
        raise ConfigError("solver invariant violated: solver.tolerance must be positive")
    if v["solver.max_iterations"] < 1:
        raise ConfigError("solver invariant violated: solver.max_iterations must be at least 1")
    if v["sgrid.count"] < 3:
        raise ConfigError("s-grid invariant violated: sgrid.count must be at least 3")
    if v["grid.resolution"] is not None and v["grid.resolution"] < 16:
        raise ConfigError("grid invariant violated: grid.resolution must be at least 16")
    if not v["window.n"] > 0:
        raise ConfigError("window invariant violated: window.n must be positive")
    if v["grid.box"] is not None and len(v["grid.box"]) != 2:
        raise ConfigError("grid.box must be a lo,hi pair applied to every axis")


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------


def _log(msg: str):
    print(f"[liplab] {msg}", flush=True)


def _resolve_field(config: RunConfig) -> tuple[UnitVectorField, float]:
    field = field_from_descriptor(config["field"], config["dimension"])
    k = field.lipschitz_k
    t_user = config["T"]
    if t_user is None:
        t = 0.5 if k == 0 else min(0.5, 0.95 / k)
    else:
        t = t_user
        if t * k > 0.95 + 1e-12:
            raise ConfigError(f"contraction invariant violated: T*K = {t * k:.6g} > 0.95")
    return field, t


def _solver(config: RunConfig) -> SolverSpec:
    return SolverSpec(config["solver.tolerance"], config["solver.max_iterations"])


def _quad(config: RunConfig) -> QuadratureSpec:
    return QuadratureSpec(config["quad.rule"], config["quad.nodes"])


def _window(config: RunConfig, resolution: int) -> GridSpec:
    n = config["window.n"]
    if config["grid.box"] is not None:
        lo, hi = config["grid.box"]
    else:
        lo, hi = -n, n
    box = [[lo, hi]] * config["dimension"]
    return GridSpec(np.asarray(box, dtype=float), resolution, mask_radius=n)


def _resolution(config: RunConfig, default: int) -> int:
    return config["grid.resolution"] if config["grid.resolution"] is not None else default


def _scalars(config: RunConfig, default_names: tuple[str, ...]) -> list[ScalarField]:
    names = config["scalars"] if config["scalars"] is not None else default_names
    return [scalar_from_name(name, config["dimension"]) for name in names]


def _default_svalues(config: RunConfig, t: float) -> list[float]:
    if config["svalues"] is not None:
        return list(config["svalues"])
    return [t / 4.0, -t / 4.0, 0.45 * t, -0.45 * t]


def _merge_reports(name: str, parts: list[tuple[str, ExperimentReport]]) -> ExperimentReport:
    """Combine per-scalar reports into one, tagging rows and verdicts."""
    rows = []
    verdicts = []
    provenance: list[str] = []
    inputs = {"runs": {}}
    summary = {}
    columns = ["scalar"] + [c for c in parts[0][1].columns if c != "scalar"]
    for tag, report in parts:
        for row in report.rows:
            rows.append({"scalar": tag, **row})
        for verdict in report.verdicts:
            verdicts.append(Verdict(f"{tag}:{verdict.claim}", verdict.passed, verdict.margin))
        for flag in report.provenance:
            if flag not in provenance:
                provenance.append(flag)
        inputs["runs"][tag] = report.inputs
        summary[tag] = report.summary
    return ExperimentReport(name, inputs, columns, rows, verdicts, provenance, summary)


def _cmd_invert_check(config: RunConfig) -> ExperimentReport:
    field, t = _resolve_field(config)
    solver = _solver(config)
    rng = np.random.default_rng([config["seed"], 0x1C])
    points = rng.uniform(-2.0, 2.0, size=(config["invert.points"], field.dimension))
    rows = []
    verdicts = []
    for q in config["invert.qvalues"]:
        k = field.lipschitz_k
        s = 0.3 if k == 0 else q / k
        pmap = PerturbationMap(field, s, solver)
        err = roundtrip_error(pmap, points)
        rows.append({"requested_q": float(q), "s": s, "realized_q": pmap.contraction_q,
                     "points": len(points), "max_roundtrip": err,
                     "tolerance": solver.tolerance})
        verdicts.append(Verdict(f"roundtrip_certificate(q={q:g})",
                                err <= 2.0 * solver.tolerance, 2.0 * solver.tolerance - err))
    inputs = {"field": field.descriptor.to_text(), "T": t, "points": config["invert.points"],
              "qvalues": list(config["invert.qvalues"]), "seed": config["seed"],
              "solver": {"tolerance": solver.tolerance, "max_iterations": solver.max_iterations}}
    return ExperimentReport(
        "invert-check", inputs,
        ["requested_q", "s", "realized_q", "points", "max_roundtrip", "tolerance"],
        rows, verdicts)


def _cmd_distortion(config: RunConfig) -> ExperimentReport:
    field, t = _resolve_field(config)
    solver = _solver(config)
    resolution = _resolution(config, 1024)
    rng = np.random.default_rng([config["seed"], 0xD1])
    n = field.dimension
    rows = []
    margins = []
    for index in range(config["distortion.rectangles"]):
        lo = rng.uniform(-1.5, 0.5, size=n)
        width = rng.uniform(0.2, 1.5, size=n)
        a_box = np.stack([lo, lo + width], axis=1)

        def indicator(pts, box=a_box):
            return np.all((pts >= box[:, 0]) & (pts <= box[:, 1]), axis=1)

        for s in _default_svalues(config, t):
            pmap = PerturbationMap(field, s, solver)
            margin = abs(s) + 0.05
            grid = GridSpec(np.stack([a_box[:, 0] - margin, a_box[:, 1] + margin], axis=1),
                            resolution)
            rep = check_distortion(indicator, pmap, grid, a_box=a_box)
            lower_margin = rep.mu_set.value + rep.slack - rep.lower_factor * rep.mu_image.value
            upper_margin = rep.upper_factor * rep.mu_image.value + rep.slack - rep.mu_set.value
            margins += [lower_margin, upper_margin]
            row = {"rect": index, "s": float(s),
                   "mu_set": rep.mu_set.value, "mu_set_err": rep.mu_set.error_bound,
                   "mu_image": rep.mu_image.value, "mu_image_err": rep.mu_image.error_bound,
                   "lower_factor": rep.lower_factor, "upper_factor": rep.upper_factor,
                   "passed": int(rep.passed)}
            for axis in range(n):
                row[f"lo{axis}"] = float(a_box[axis, 0])
                row[f"hi{axis}"] = float(a_box[axis, 1])
            rows.append(row)
    verdicts = [Verdict("distortion_sandwich", min(margins) >= 0.0, min(margins))]
    columns = (["rect", "s"] + [f"lo{a}" for a in range(n)] + [f"hi{a}" for a in range(n)]
               + ["mu_set", "mu_set_err", "mu_image", "mu_image_err",
                  "lower_factor", "upper_factor", "passed"])
    inputs = {"field": field.descriptor.to_text(), "T": t, "resolution": resolution,
              "rectangles": config["distortion.rectangles"], "seed": config["seed"],
              "svalues": _default_svalues(config, t)}
    return ExperimentReport("distortion", inputs, columns, rows, verdicts)


def _cmd_norm_convergence(config: RunConfig) -> ExperimentReport:
    field, _ = _resolve_field(config)
    quad = _quad(config)
    resolution = _resolution(config, 512)
    t_values = config["tvalues"] if config["tvalues"] is not None else (0.2, 0.1, 0.05, 0.025, 0.0125)
    parts = []
    for scalar in _scalars(config, ("bump",)):
        margin = max(t_values)
        box = np.stack([scalar.support_box[:, 0] - margin, scalar.support_box[:, 1] + margin], axis=1)
        grid = GridSpec(box, resolution)
        parts.append((scalar.name, experiments.run_norm_convergence(
            scalar, field, config["p"], t_values, grid, quad,
            error_floor=config["norm.floor"])))
    return _merge_reports("norm-convergence", parts)


def _cmd_weak_type(config: RunConfig) -> ExperimentReport:
    field, t = _resolve_field(config)
    solver, quad = _solver(config), _quad(config)
    resolution = _resolution(config, 512)
    window = _window(config, resolution)
    s_grid = SGrid(t, config["sgrid.count"])
    mspec = MaximalSpec(t / 2.0, config["maximal.levels"])
    lambdas = config["lambdas"] if config["lambdas"] is not None else (0.5, 1.0, 2.0, 4.0, 8.0)
    parts = []
    for scalar in _scalars(config, ("bump", "indicator")):
        _log(f"weak-type: scalar={scalar.name}")
        report = experiments.run_weak_type(scalar, field, t, lambdas, s_grid, window,
                                           mspec, quad, solver, jobs=config["jobs"])
        if config["weak.refine"]:
            fine_window = GridSpec(window.box, 2 * resolution, window.mask_radius)
            fine = experiments.run_weak_type(scalar, field, t, lambdas, s_grid.doubled(),
                                             fine_window, mspec, quad, solver,
                                             jobs=config["jobs"])
            base_lhs = report.summary["lhs_by_lambda"]
            fine_lhs = fine.summary["lhs_by_lambda"]
            for lam in lambdas:
                a, b = base_lhs[lam], fine_lhs[lam]
                gap = abs(a["lhs"] - b["lhs"])
                allowance = 0.05 * max(a["lhs"], b["lhs"]) + a["slack"] + b["slack"]
                report.verdicts.append(Verdict(f"refinement_stable(lambda={lam:g})",
                                               gap <= allowance, allowance - gap))
            report.summary["refined_lhs_by_lambda"] = fine_lhs
        parts.append((scalar.name, report))
    return _merge_reports("weak-type", parts)


def _cmd_pointwise(config: RunConfig) -> ExperimentReport:
    field, t = _resolve_field(config)
    solver, quad = _solver(config), _quad(config)
    rng = np.random.default_rng([config["seed"], 0xA1])
    points = rng.uniform(-2.0, 2.0, size=(config["pointwise.points"], field.dimension))
    s_values = SGrid(t, config["pointwise.scount"]).values
    t_values = config["tvalues"] if config["tvalues"] is not None else (1e-3,)
    parts = []
    for scalar in _scalars(config, ("bump", "indicator")):
        parts.append((scalar.name, experiments.run_pointwise(
            scalar, field, t, list(s_values), points, t_values, quad, solver,
            seed=config["seed"], jobs=config["jobs"])))
    return _merge_reports("pointwise", parts)


def _cmd_continuity(config: RunConfig) -> ExperimentReport:
    field, t = _resolve_field(config)
    solver, quad = _solver(config), _quad(config)
    window = _window(config, _resolution(config, 256))
    mspec = MaximalSpec(t / 2.0, config["maximal.levels"])
    scalars = [f for f in _scalars(config, ("bump",))
               if f.regularity in ("smooth", "continuous_compact_support")]
    if not scalars:
        raise ConfigError("continuity requires a continuous compactly supported scalar")
    s_grid = SGrid(t, config["continuity.count"])
    parts = [(scalar.name, experiments.run_continuity_in_s(
        scalar, field, t, config["continuity.lambda"], s_grid, window, mspec, quad,
        solver, seed=config["seed"], jobs=config["jobs"])) for scalar in scalars]
    return _merge_reports("continuity", parts)


def _cmd_h_n_decay(config: RunConfig) -> ExperimentReport:
    field, t = _resolve_field(config)
    solver, quad = _solver(config), _quad(config)
    window = _window(config, _resolution(config, 1024))
    mspec = MaximalSpec(t / 2.0, config["maximal.levels"])
    catalog = _scalars(config, ("bump", "indicator", "singularity", "tent"))
    s_values = config["svalues"] if config["svalues"] is not None else SGrid(t, 4).values
    return experiments.run_h_n_decay(catalog, field, t, list(s_values),
                                     list(range(1, config["nmax"] + 1)), window, mspec,
                                     quad, solver, jobs=config["jobs"])


def _cmd_c_alpha(config: RunConfig) -> ExperimentReport:
    field, t = _resolve_field(config)
    solver, quad = _solver(config), _quad(config)
    window = _window(config, _resolution(config, 1024))
    mspec = MaximalSpec(t / 2.0, config["maximal.levels"])
    catalog = _scalars(config, ("bump", "indicator", "singularity", "tent"))
    s_values = config["svalues"] if config["svalues"] is not None else SGrid(t, 4).values
    lambdas = config["lambdas"] if config["lambdas"] is not None else (1.5, 3.5, 7.5)
    return experiments.run_c_alpha(catalog, field, t, list(s_values), config["alpha"],
                                   config["nmax"], lambdas, window, mspec, quad, solver,
                                   jobs=config["jobs"])


_INTERVAL_RE = re.compile(r"\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)")


def parse_intervals(text: str) -> IntervalCollection:
    pairs = [(float(a), float(b)) for a, b in _INTERVAL_RE.findall(text)]
    if not pairs:
        raise ConfigError("covering.intervals must list intervals like (0,2),(1,3)")
    return IntervalCollection(tuple(pairs))


def _cmd_covering_demo(config: RunConfig) -> ExperimentReport:
    collection = parse_intervals(config["covering.intervals"])
    c = config["covering.c"]
    if c is None:
        raise ConfigError("covering.c is required for covering-demo")
    selected = greedy_cover_select(collection, c)
    total = sum(b - a for a, b in selected)
    chosen = set(selected)
    rows = [{"a": a, "b": b, "selected": int((a, b) in chosen)} for a, b in collection.intervals]
    print("selected:", " ".join(f"({a:g},{b:g})" for a, b in selected), flush=True)
    disjoint = all(x[1] <= y[0] for x, y in zip(sorted(selected), sorted(selected)[1:]))
    verdicts = [
        Verdict("selection_disjoint", disjoint, 0.0),
        Verdict("selection_subfamily", all(iv in collection.intervals for iv in selected), 0.0),
        Verdict("total_exceeds_c_over_3", total > c / 3.0, total - c / 3.0),
    ]
    inputs = {"intervals": [list(iv) for iv in collection.intervals], "c": c,
              "union_measure": collection.union_measure()}
    return ExperimentReport("covering-demo", inputs, ["a", "b", "selected"], rows, verdicts,
                            summary={"selected": [list(iv) for iv in selected], "total": total})


_RUNNERS = {
    "invert-check": _cmd_invert_check,
    "distortion": _cmd_distortion,
    "norm-convergence": _cmd_norm_convergence,
    "weak-type": _cmd_weak_type,
    "pointwise": _cmd_pointwise,
    "continuity": _cmd_continuity,
    "h-n-decay": _cmd_h_n_decay,
    "c-alpha": _cmd_c_alpha,
    "covering-demo": _cmd_covering_demo,
}


def write_report(report: ExperimentReport, out: str, output_format: str) -> list[str]:
    written = []
    if out.endswith(".json") or out.endswith(".csv"):
        base = out[: out.rfind(".")]
    else:
        base = out
    if output_format in ("json", "both"):
        path = base + ".json"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_json() + "\n")
        written.append(path)
    if output_format in ("csv", "both"):
        path = base + ".csv"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.csv_text())
        written.append(path)
    return written


def dispatch(config: RunConfig) -> int:
    """Run exactly one command, write its report, and map verdicts to the exit code."""
    if config.command is None:
        raise ConfigError("no command given (positional argument or command= in the config)")
    _log(f"command: {config.command}")
    try:
        report = _RUNNERS[config.command](config)
    except Exception as exc:  # runtime failures become a structured error record
        report = ExperimentReport(config.command, {"config": config.values}, [], [], [],
                                  error={"type": type(exc).__name__, "message": str(exc)})
        write_report(report, config["out"], "json")
        _log(f"error: {type(exc).__name__}: {exc}")
        return 2
    report.inputs.setdefault("config_text", config.to_text())
    written = write_report(report, config["out"], config["format"])
    for path in written:
        _log(f"wrote {path}")
    for verdict in report.verdicts:
        status = "pass" if verdict.passed else "FAIL"
        _log(f"{status}: {verdict.claim} (margin={verdict.margin:.6g})")
    return 0 if report.all_passed() else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="liplab",
        description="Numerical experiments for differentiation along Lipschitz unit vector fields.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS,
                        help="experiment to run (may instead come from the config file)")
    parser.add_argument("--config", metavar="PATH", help="flat dotted-key config file")
    parser.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
    parser.add_argument("--out", metavar="PATH", help="output path base (default: report)")
    parser.add_argument("--format", dest="output_format", choices=("json", "csv", "both"))
    parser.add_argument("--seed", type=int, help="64-bit seed for all sampling")
    parser.add_argument("--jobs", type=int, help="worker threads (0 = available parallelism)")
    args = parser.parse_args(argv)
    try:
        config = parse_config(
            path=args.config,
            sets=tuple(args.sets),
            command=args.command,
            out=args.out,
            output_format=args.output_format,
            seed=args.seed,
            jobs=args.jobs,
        )
        return dispatch(config)
    except ConfigError as exc:
        print(f"[liplab] config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
