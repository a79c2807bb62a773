"""Experiment runners: one per verifiable claim, each emitting a structured report.

Every runner is deterministic given its configuration and seed; fan-out over
shift values runs as independent pure tasks whose results are written by
index, so scheduling cannot change a single output bit.  Suprema over
infinite families (the L1 unit ball, the continuum of scales) are replaced by
catalog maxima and dyadic grids; reports flag every such substitution.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Sequence

import numpy as np

from .averaging import (
    MaximalSpec,
    QuadratureSpec,
    line_average_batch,
    m_t_pushforward_batch,
    m_t_shifted_batch,
)
from .fields import Array, ScalarField, UnitVectorField, unit_ball_volume
from .measure import (
    GridSpec,
    MeasureEstimate,
    maximal_on_lattices,
    threshold_measures,
)
from .perturb import PerturbationMap, SolverSpec


def _parallel_map(fn: Callable, items: Sequence, jobs: int | None) -> list:
    if jobs is None or jobs <= 0:
        jobs = os.cpu_count() or 1
    if jobs == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _format_cell(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


@dataclass
class Verdict:
    claim: str
    passed: bool
    margin: float

    def as_dict(self) -> dict:
        return {"claim": self.claim, "passed": bool(self.passed), "margin": float(self.margin)}


@dataclass
class ExperimentReport:
    """Structured record of one runner's inputs, outputs, and verdicts."""

    name: str
    inputs: dict
    columns: list[str]
    rows: list[dict]
    verdicts: list[Verdict]
    provenance: list[str] = dataclass_field(default_factory=list)
    summary: dict = dataclass_field(default_factory=dict)
    error: dict | None = None

    def all_passed(self) -> bool:
        return self.error is None and all(v.passed for v in self.verdicts)

    def to_json(self) -> str:
        payload = {
            "name": self.name,
            "inputs": self.inputs,
            "columns": self.columns,
            "rows": self.rows,
            "verdicts": [v.as_dict() for v in self.verdicts],
            "provenance": self.provenance,
            "summary": self.summary,
            "error": self.error,
        }
        return json.dumps(payload, indent=2)

    def csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_format_cell(row[c]) for c in self.columns))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SGrid:
    """Midpoints of a uniform partition of [-T/2, T/2]; drives the shift average."""

    T: float
    count: int = 17

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.count < 3:
            raise ValueError("an s-grid needs at least 3 points")

    @property
    def spacing(self) -> float:
        return self.T / self.count

    @property
    def values(self) -> Array:
        return -self.T / 2.0 + (np.arange(self.count) + 0.5) * self.spacing

    def doubled(self) -> "SGrid":
        return SGrid(self.T, 2 * self.count)


def _grid_inputs(grid: GridSpec) -> dict:
    return {
        "box": [[float(a), float(b)] for a, b in grid.box],
        "resolution": grid.resolution,
        "mask_radius": grid.mask_radius,
    }


def _common_inputs(F: ScalarField | None, v: UnitVectorField, quad: QuadratureSpec,
                   solver: SolverSpec | None = None, **extra) -> dict:
    inputs = {
        "field": v.descriptor.to_text(),
        "field_lipschitz": v.lipschitz_k,
        "quadrature": {"rule": quad.rule, "nodes": quad.nodes},
    }
    if F is not None:
        inputs["scalar"] = F.name
        inputs["scalar_regularity"] = F.regularity
    if solver is not None:
        inputs["solver"] = {"tolerance": solver.tolerance, "max_iterations": solver.max_iterations}
    inputs.update(extra)
    return inputs


def scalar_modulus(F: ScalarField, scale: float, seed: int = 0, samples: int = 4000) -> float:
    """Sampled modulus of continuity sup |F(X+h) - F(X)| over |h| <= scale."""
    if scale <= 0:
        return 0.0
    rng = np.random.default_rng([int(seed), 0x40D])
    box = F.support_box
    lo, hi = box[:, 0] - scale, box[:, 1] + scale
    x = rng.uniform(lo, hi, size=(samples, F.dimension))
    direction = rng.standard_normal((samples, F.dimension))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = np.where(rng.random(samples) < 0.5, scale, scale * rng.random(samples))
    y = x + radius[:, None] * direction
    return float(np.max(np.abs(F(y) - F(x)), initial=0.0))


def _lattice_points(grid: GridSpec) -> Array:
    return np.concatenate([pts for pts, _ in grid.iter_lattice("centers")], axis=0)


def weak_type_constant(dimension: int, T: float, K: float) -> float:
    """The stated shift-averaged weak (1,1) constant; 4 pi^2 (1+TK)^2/(1-TK)^2 in 2D."""
    base = unit_ball_volume(dimension) * dimension ** (dimension / 2.0)
    return base ** 2 * (1.0 + T * K) ** dimension / (1.0 - T * K) ** dimension


def intermediate_weak_constant(dimension: int, T: float, K: float) -> float:
    """The proof's intermediate constant before the image-distortion step; 2 pi/(1-TK)^2 in 2D."""
    base = unit_ball_volume(dimension) * dimension ** (dimension / 2.0)
    return base / (1.0 - T * K) ** dimension


def _lp_bound_factor(dimension: int, t: float, K: float) -> float:
    """Exact shift average of the pullback distortion constant over [-t, t].

    (1/2t) * int omega_n n^(n/2) (1-|s|K)^(-n) ds; reduces to 2 pi/(1-tK) in 2D.
    """
    base = unit_ball_volume(dimension) * dimension ** (dimension / 2.0)
    if K == 0.0 or t == 0.0:
        return base
    n = dimension
    return base * ((1.0 - t * K) ** (1 - n) - 1.0) / (t * K * (n - 1))


# --------------------------------------------------------------------------
# norm convergence
# --------------------------------------------------------------------------


def run_norm_convergence(
    F: ScalarField,
    v: UnitVectorField,
    p: float,
    t_values: Sequence[float],
    grid: GridSpec,
    quad: QuadratureSpec,
    error_floor: float | None = None,
) -> ExperimentReport:
    """Check that |M_t F - F|_p decays as t -> 0 and that M_t stays L^p bounded."""
    if not math.isfinite(p) or p < 1:
        raise ValueError("norm convergence is claimed only for finite p >= 1")
    t_values = sorted((float(t) for t in t_values), reverse=True)
    if any(t <= 0 for t in t_values):
        raise ValueError("t values must be positive")

    points = _lattice_points(grid)
    vol = grid.cell_volume
    f_vals = F(points)
    dirs = v(points)
    K = v.lipschitz_k

    if p in F.lp_norms:
        f_norm = F.lp_norms[p][0]
    else:
        f_norm = float((vol * np.sum(np.abs(f_vals) ** p)) ** (1.0 / p))

    rows = []
    errors = []
    for t in t_values:
        mt = line_average_batch(F, dirs, points, t, quad)
        err = float((vol * np.sum(np.abs(mt - f_vals) ** p)) ** (1.0 / p))
        norm = float((vol * np.sum(np.abs(mt) ** p)) ** (1.0 / p))
        bound = _lp_bound_factor(grid.dimension, t, K) ** (1.0 / p) * f_norm
        ratio = errors[-1] / err if errors and err > 0 else float("nan")
        errors.append(err)
        rows.append({"t": t, "error": err, "norm": norm, "step_ratio": ratio, "norm_bound": bound})

    if error_floor is None:
        error_floor = F.lipschitz * min(t_values) * 1.1 if F.lipschitz else errors[0] / 2.0

    # non-strict so the identically-zero field stays trivially green
    decreasing = all(errors[i] >= errors[i + 1] for i in range(len(errors) - 1))
    verdicts = [
        Verdict("error_decreases_to_floor", decreasing and errors[-1] <= error_floor,
                error_floor - errors[-1]),
    ]
    if F.lipschitz is not None:
        slack_lip = min(F.lipschitz * t * 1.1 - e for t, e in zip(t_values, errors))
        verdicts.append(Verdict("lipschitz_linear_bound", slack_lip >= 0.0, slack_lip))
    margin_norm = min(r["norm_bound"] * (1.02) - r["norm"] for r in rows)
    verdicts.append(Verdict("lp_norm_bound", margin_norm >= 0.0, margin_norm))

    inputs = _common_inputs(F, v, quad, p=p, t_values=list(t_values),
                            error_floor=error_floor, grid=_grid_inputs(grid))
    return ExperimentReport(
        "norm-convergence", inputs,
        ["t", "error", "norm", "step_ratio", "norm_bound"], rows, verdicts,
        provenance=["grid_norm_estimate"],
        summary={"errors": errors, "f_norm": f_norm},
    )


# --------------------------------------------------------------------------
# shift-averaged weak-type inequality
# --------------------------------------------------------------------------


def run_weak_type(
    F: ScalarField,
    v: UnitVectorField,
    T: float,
    lambdas: Sequence[float],
    s_grid: SGrid,
    window: GridSpec,
    maximal: MaximalSpec,
    quad: QuadratureSpec,
    solver: SolverSpec = SolverSpec(),
    jobs: int | None = None,
) -> ExperimentReport:
    """Shift-averaged level-set measures of M_*^s against the stated constant."""
    K = v.lipschitz_k
    if not 0 < T < (math.inf if K == 0 else 1.0 / K):
        raise ValueError("T must satisfy 0 < T < 1/K")
    lambdas = [float(l) for l in lambdas]
    if any(l <= 0 for l in lambdas):
        raise ValueError("lambda values must be positive")

    l1 = F.l1_norm()
    rhs_constant = weak_type_constant(window.dimension, T, K)
    inter_constant = intermediate_weak_constant(window.dimension, T, K)

    def one_shift(s: float) -> list[MeasureEstimate]:
        pmap = PerturbationMap(v, float(s), solver)
        lattices = maximal_on_lattices(F, pmap, window, maximal, quad)
        return threshold_measures(lattices, lambdas)

    if K == 0.0:
        # constant direction: v(S_s^{-1} X) = v for every s, so one shift suffices
        per_shift = [one_shift(float(s_grid.values[0]))] * s_grid.count
    else:
        per_shift = _parallel_map(one_shift, list(s_grid.values), jobs)

    rows = []
    for s, estimates in zip(s_grid.values, per_shift):
        for lam, est in zip(lambdas, estimates):
            rows.append({
                "lambda": lam,
                "s": float(s),
                "measure": est.value,
                "error_bound": est.error_bound,
                "method": est.method,
                "cells": est.samples_or_cells,
                "observed_constant": est.value * lam / l1 if l1 > 0 else float("nan"),
            })

    verdicts = []
    lhs_by_lambda = {}
    for j, lam in enumerate(lambdas):
        values = [per_shift[i][j].value for i in range(len(per_shift))]
        slack = float(np.mean([per_shift[i][j].error_bound for i in range(len(per_shift))]))
        lhs = float(np.mean(values))
        rhs = rhs_constant * l1 / lam
        lhs_by_lambda[lam] = {"lhs": lhs, "rhs": rhs, "slack": slack,
                              "observed_constant": lhs * lam / l1 if l1 > 0 else float("nan")}
        verdicts.append(Verdict(f"weak_type_bound(lambda={lam:g})",
                                lhs <= rhs + slack, rhs + slack - lhs))

    inputs = _common_inputs(
        F, v, quad, solver,
        T=T, lambdas=lambdas,
        s_grid={"T": s_grid.T, "count": s_grid.count},
        window=_grid_inputs(window),
        maximal={"t_max": maximal.t_max, "levels": maximal.levels},
        rhs_constant=rhs_constant,
        intermediate_constant=inter_constant,
    )
    return ExperimentReport(
        "weak-type", inputs,
        ["lambda", "s", "measure", "error_bound", "method", "cells", "observed_constant"],
        rows, verdicts,
        provenance=["dyadic_t_grid", "window_mask", "s_grid_midpoint"],
        summary={"lhs_by_lambda": lhs_by_lambda},
    )


# --------------------------------------------------------------------------
# pointwise convergence probe
# --------------------------------------------------------------------------


def run_pointwise(
    F: ScalarField,
    v: UnitVectorField,
    T: float,
    s_values: Sequence[float],
    x_points: Array,
    t_values: Sequence[float],
    quad: QuadratureSpec,
    solver: SolverSpec = SolverSpec(),
    seed: int = 0,
    jobs: int | None = None,
) -> ExperimentReport:
    """Sample the differentiation claim: averages at the finest scale versus F itself.

    The universal shift set is probed, not constructed: shifts are sampled and
    the empirical failure fractions are reported.
    """
    K = v.lipschitz_k
    if T * K > 0.95:
        raise ValueError("T*K must stay at or below 0.95")
    s_values = [float(s) for s in s_values]
    if any(abs(s) > T / 2.0 for s in s_values):
        raise ValueError("shift samples must satisfy |s| <= T/2")
    t_min = min(float(t) for t in t_values)
    if t_min <= 0:
        raise ValueError("t values must be positive")

    if F.regularity in ("smooth", "continuous_compact_support"):
        threshold = 10.0 * scalar_modulus(F, t_min, seed=seed)
        allowed_fraction = 0.0
        kind = "continuous"
    else:
        threshold = 0.01
        allowed_fraction = 0.05
        kind = "jump"

    def one_shift(s: float) -> tuple[Array, Array]:
        pmap = PerturbationMap(v, s, solver)
        push = m_t_pushforward_batch(F, pmap, x_points, t_min, quad)
        err_push = np.abs(push - F(x_points))
        shifted = m_t_shifted_batch(F, v, x_points, s, t_min, quad)
        dirs = v(x_points)
        err_shift = np.abs(shifted - F(x_points + s * dirs))
        return err_push, err_shift

    results = _parallel_map(one_shift, s_values, jobs)

    rows = []
    fractions_push = []
    fractions_shift = []
    for s, (err_push, err_shift) in zip(s_values, results):
        fractions_push.append(float(np.mean(err_push > threshold)))
        fractions_shift.append(float(np.mean(err_shift > threshold)))
        for i in range(len(x_points)):
            row = {"s": s, "err_pushforward": float(err_push[i]), "err_shifted": float(err_shift[i])}
            for k in range(x_points.shape[1]):
                row[f"x{k}"] = float(x_points[i, k])
            rows.append(row)

    worst_push = max(fractions_push)
    worst_shift = max(fractions_shift)
    verdicts = [
        Verdict(f"pointwise_pushforward({kind})", worst_push <= allowed_fraction,
                allowed_fraction - worst_push),
        Verdict(f"pointwise_shifted({kind})", worst_shift <= allowed_fraction,
                allowed_fraction - worst_shift),
    ]

    columns = ["s"] + [f"x{k}" for k in range(x_points.shape[1])] + ["err_pushforward", "err_shifted"]
    inputs = _common_inputs(F, v, quad, solver, T=T, s_values=s_values,
                            t_min=t_min, threshold=threshold, points=len(x_points), seed=seed)
    return ExperimentReport(
        "pointwise", inputs, columns, rows, verdicts,
        provenance=["sampled_shift_probe"],
        summary={"failure_fraction_pushforward": fractions_push,
                 "failure_fraction_shifted": fractions_shift},
    )


# --------------------------------------------------------------------------
# continuity of level-set measures in the shift
# --------------------------------------------------------------------------


def run_continuity_in_s(
    F: ScalarField,
    v: UnitVectorField,
    T: float,
    lam: float,
    s_grid: SGrid,
    window: GridSpec,
    maximal: MaximalSpec,
    quad: QuadratureSpec,
    solver: SolverSpec = SolverSpec(),
    seed: int = 0,
    jobs: int | None = None,
) -> ExperimentReport:
    """Track s -> mu{M_*^s(F) > lambda} across a fine shift grid.

    The uniform estimate |M^s1 - M^s2| <= omega_F(C |s1 - s2|) with
    C = (KT/2)/(1 - TK/2) turns each measured jump into a checkable bound: the
    jump cannot exceed the measure of the shell of width omega around lambda.
    """
    if F.regularity not in ("smooth", "continuous_compact_support"):
        raise ValueError("continuity in s is claimed for continuous compactly supported F")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    K = v.lipschitz_k
    big_c = (K * T / 2.0) / (1.0 - T * K / 2.0)
    omega = scalar_modulus(F, big_c * s_grid.spacing, seed=seed)
    lo = max(lam - omega, 1e-300)
    hi = lam + omega

    def one_shift(s: float):
        pmap = PerturbationMap(v, float(s), solver)
        lattices = maximal_on_lattices(F, pmap, window, maximal, quad)
        at, above, below = threshold_measures(lattices, [lam, hi, lo])
        shell_value = max(below.value - above.value, 0.0)
        shell_err = below.error_bound + above.error_bound
        return at, shell_value, shell_err

    results = _parallel_map(one_shift, list(s_grid.values), jobs)

    rows = []
    jump_margins = []
    prev = None
    for s, (est, shell, shell_err) in zip(s_grid.values, results):
        jump = float("nan")
        bound = float("nan")
        if prev is not None:
            prev_est, prev_shell, prev_shell_err = prev
            jump = abs(est.value - prev_est.value)
            bound = (min(shell + shell_err, prev_shell + prev_shell_err)
                     + est.error_bound + prev_est.error_bound)
            jump_margins.append(bound - jump)
        rows.append({"s": float(s), "measure": est.value, "error_bound": est.error_bound,
                     "shell": shell, "jump": jump, "jump_bound": bound})
        prev = (est, shell, shell_err)

    margin = min(jump_margins)
    verdicts = [Verdict("continuity_jump_bound", margin >= 0.0, margin)]
    inputs = _common_inputs(F, v, quad, solver, T=T, lam=lam, omega=omega,
                            uniform_constant=big_c,
                            s_grid={"T": s_grid.T, "count": s_grid.count},
                            window=_grid_inputs(window),
                            maximal={"t_max": maximal.t_max, "levels": maximal.levels},
                            seed=seed)
    return ExperimentReport(
        "continuity", inputs,
        ["s", "measure", "error_bound", "shell", "jump", "jump_bound"],
        rows, verdicts,
        provenance=["dyadic_t_grid", "window_mask", "sampled_modulus"],
    )


# --------------------------------------------------------------------------
# decay of the catalog maximal profile H_n and the rate constant C_alpha
# --------------------------------------------------------------------------


def _h_table(
    catalog: Sequence[ScalarField],
    v: UnitVectorField,
    s_values: Sequence[float],
    thresholds: Sequence[float],
    window: GridSpec,
    maximal: MaximalSpec,
    quad: QuadratureSpec,
    solver: SolverSpec,
    jobs: int | None,
):
    """Level-set measures per (shift, scalar, threshold), one maximal pass per (s, F)."""
    if v.lipschitz_k == 0.0:
        shift_indices = [0]  # constant direction: independent of s
    else:
        shift_indices = list(range(len(s_values)))
    tasks = [(si, fi) for si in shift_indices for fi in range(len(catalog))]

    def one(task):
        si, fi = task
        pmap = PerturbationMap(v, float(s_values[si]), solver)
        lattices = maximal_on_lattices(catalog[fi], pmap, window, maximal, quad)
        return threshold_measures(lattices, thresholds)

    results = _parallel_map(one, tasks, jobs)
    table = {}
    for task, estimates in zip(tasks, results):
        table[task] = estimates
    if v.lipschitz_k == 0.0:
        for si in range(1, len(s_values)):
            for fi in range(len(catalog)):
                table[(si, fi)] = table[(0, fi)]
    return table


def run_h_n_decay(
    catalog: Sequence[ScalarField],
    v: UnitVectorField,
    T: float,
    s_values: Sequence[float],
    n_values: Sequence[int],
    window: GridSpec,
    maximal: MaximalSpec,
    quad: QuadratureSpec,
    solver: SolverSpec = SolverSpec(),
    jobs: int | None = None,
    alphas: Sequence[float] = (0.25, 0.45),
) -> ExperimentReport:
    """Decay of H_n(s) = max over the catalog of mu{M_*^s(F) > n}.

    The catalog maximum is a finite surrogate for the supremum over the L1
    unit ball; nesting of level sets makes H_n exactly nonincreasing at fixed
    discretization.  The rate verdicts compare each n^alpha * H_n across the
    top half of the n range (net decrease, ties allowed for exhausted tails).
    """
    for F in catalog:
        if F.l1_norm() > 1.0 + 1e-12:
            raise ValueError(f"catalog member {F.name!r} must have L1 norm at most 1")
    n_values = sorted(int(n) for n in n_values)
    s_values = [float(s) for s in s_values]
    if any(abs(s) > T / 2.0 for s in s_values):
        raise ValueError("shift samples must satisfy |s| <= T/2")

    table = _h_table(catalog, v, s_values, [float(n) for n in n_values],
                     window, maximal, quad, solver, jobs)

    rows = []
    h_by_shift = []
    err_by_shift = []
    for si, s in enumerate(s_values):
        h_vals = []
        h_errs = []
        for nj, n in enumerate(n_values):
            per_scalar = [table[(si, fi)][nj] for fi in range(len(catalog))]
            h = max(est.value for est in per_scalar)
            err = max(est.error_bound for est in per_scalar)
            h_vals.append(h)
            h_errs.append(err)
            row = {"s": s, "n": n, "h_n": h, "error_bound": err}
            for alpha in alphas:
                row[f"n{alpha:g}_h"] = n ** alpha * h
            rows.append(row)
        h_by_shift.append(h_vals)
        err_by_shift.append(h_errs)

    nonincreasing_margin = min(
        min((h[i] - h[i + 1] for i in range(len(h) - 1)), default=0.0) for h in h_by_shift
    )
    verdicts = [Verdict("h_n_nonincreasing", nonincreasing_margin >= 0.0, nonincreasing_margin)]
    half = len(n_values) // 2
    for alpha in alphas:
        margins = []
        for h in h_by_shift:
            start = n_values[half] ** alpha * h[half]
            end = n_values[-1] ** alpha * h[-1]
            margins.append(start - end)
        margin = min(margins)
        verdicts.append(Verdict(f"n_alpha_decay(alpha={alpha:g})", margin >= 0.0, margin))

    columns = ["s", "n", "h_n", "error_bound"] + [f"n{a:g}_h" for a in alphas]
    inputs = _common_inputs(None, v, quad, solver, T=T,
                            catalog=[F.name for F in catalog],
                            s_values=s_values, n_values=n_values, alphas=list(alphas),
                            window=_grid_inputs(window),
                            maximal={"t_max": maximal.t_max, "levels": maximal.levels})
    return ExperimentReport(
        "h-n-decay", inputs, columns, rows, verdicts,
        provenance=["catalog_surrogate", "dyadic_t_grid", "window_mask"],
        summary={"h_by_shift": h_by_shift, "error_by_shift": err_by_shift},
    )


def run_c_alpha(
    catalog: Sequence[ScalarField],
    v: UnitVectorField,
    T: float,
    s_values: Sequence[float],
    alpha: float,
    n_max: int,
    lambdas: Sequence[float],
    window: GridSpec,
    maximal: MaximalSpec,
    quad: QuadratureSpec,
    solver: SolverSpec = SolverSpec(),
    jobs: int | None = None,
) -> ExperimentReport:
    """Empirical rate constant C_alpha(s) = max_n n^alpha H_n(s) and the tail inequality.

    For every catalog F and every tested lambda above its L1 norm the level-set
    measure must stay below 2^alpha * C_alpha(s) * (|F|_1/lambda)^alpha plus
    estimation slack.
    """
    if not 0.0 < alpha < 0.5:
        raise ValueError("alpha must lie strictly between 0 and 1/2")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    lambdas = [float(l) for l in lambdas]
    max_l1 = max(F.l1_norm() for F in catalog)
    if any(l <= max_l1 for l in lambdas):
        raise ValueError("each tested lambda must exceed every catalog L1 norm")
    if any(l > n_max for l in lambdas):
        raise ValueError("tested lambda values must stay within the tabulated range n <= n_max")

    n_values = list(range(1, n_max + 1))
    thresholds = [float(n) for n in n_values] + lambdas
    s_values = [float(s) for s in s_values]
    table = _h_table(catalog, v, s_values, thresholds, window, maximal, quad, solver, jobs)

    rows = []
    verdict_margins = []
    c_alpha_by_shift = []
    finite = True
    for si, s in enumerate(s_values):
        h_vals = []
        h_errs = []
        for nj, n in enumerate(n_values):
            per_scalar = [table[(si, fi)][nj] for fi in range(len(catalog))]
            h_vals.append(max(est.value for est in per_scalar))
            h_errs.append(max(est.error_bound for est in per_scalar))
        c_alpha = max(n ** alpha * h for n, h in zip(n_values, h_vals))
        finite = finite and math.isfinite(c_alpha)
        c_alpha_by_shift.append(c_alpha)
        for fi, F in enumerate(catalog):
            l1 = F.l1_norm()
            for lj, lam in enumerate(lambdas):
                est = table[(si, fi)][len(n_values) + lj]
                rhs = 2.0 ** alpha * c_alpha * (l1 / lam) ** alpha
                slack = est.error_bound + h_errs[int(math.floor(lam)) - 1]
                verdict_margins.append(rhs + slack - est.value)
                rows.append({"s": s, "scalar": F.name, "lambda": lam,
                             "measure": est.value, "error_bound": est.error_bound,
                             "rhs": rhs, "c_alpha": c_alpha})

    margin = min(verdict_margins)
    verdicts = [
        Verdict("c_alpha_finite", finite, 0.0 if finite else float("-inf")),
        Verdict("rate_inequality", margin >= 0.0, margin),
    ]
    inputs = _common_inputs(None, v, quad, solver, T=T, alpha=alpha, n_max=n_max,
                            catalog=[F.name for F in catalog], lambdas=lambdas,
                            s_values=s_values, window=_grid_inputs(window),
                            maximal={"t_max": maximal.t_max, "levels": maximal.levels})
    return ExperimentReport(
        "c-alpha", inputs,
        ["s", "scalar", "lambda", "measure", "error_bound", "rhs", "c_alpha"],
        rows, verdicts,
        provenance=["catalog_surrogate", "dyadic_t_grid", "window_mask"],
        summary={"c_alpha_by_shift": c_alpha_by_shift},
    )
