"""Perturbation maps S_s(X) = X + s*v(X) and their certified inverses.

Inversion iterates R_Z(X) = Z - s*v(X) from X0 = Z and stops on the
a-posteriori contraction bound step * q / (1 - q) <= tolerance, so the
returned tolerance is a certificate rather than a hope.  Since |v| = 1 the
first step always has size |s|, which makes the iteration count uniformly
predictable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import Array, FieldDescriptor, UnitVectorField, as_points

# constructions nearer the singular limit q -> 1 are rejected outright
MAX_CONTRACTION = 0.95


class ContractionError(ValueError):
    """Raised when |s| * K leaves the admissible contraction range."""


class FixedPointError(RuntimeError):
    """Raised when the stopping rule does not fire within max_iterations."""


@dataclass(frozen=True)
class SolverSpec:
    """Fixed-point solver settings; ``tolerance`` bounds |computed - true inverse|."""

    tolerance: float = 1e-10
    max_iterations: int = 1000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class PerturbationMap:
    """The map S_s = I + s*v together with its solver settings.

    Immutable after construction; sharing across workers is safe.
    """

    field: UnitVectorField
    s: float
    solver: SolverSpec = SolverSpec()

    def __post_init__(self):
        q = self.contraction_q
        if q > MAX_CONTRACTION:
            raise ContractionError(
                f"contraction invariant violated: |s|*K = {q:.6g} exceeds {MAX_CONTRACTION}"
            )

    @property
    def contraction_q(self) -> float:
        return abs(self.s) * self.field.lipschitz_k

    @property
    def dimension(self) -> int:
        return self.field.dimension


def apply_batch(pmap: PerturbationMap, points: Array) -> Array:
    return points + pmap.s * pmap.field.eval_fn(points)


def apply(pmap: PerturbationMap, x) -> Array:
    """S_s(X) = X + s*v(X)."""
    pts = as_points(x, pmap.dimension)
    out = apply_batch(pmap, pts)
    return out[0] if np.asarray(x).ndim == 1 else out


def invert_batch(pmap: PerturbationMap, z: Array, with_iterations: bool = False):
    """Solve S_s(X) = Z for every row of ``z`` to the solver's tolerance.

    Returns the solution batch, plus the iteration count when requested.
    For q = 0 the single iteration Z - s*v(Z) is the exact inverse.
    """
    s = pmap.s
    q = pmap.contraction_q
    eval_fn = pmap.field.eval_fn
    if q == 0.0 or s == 0.0:
        out = z - s * eval_fn(z)
        return (out, 1) if with_iterations else out

    tol = pmap.solver.tolerance
    factor = q / (1.0 - q)
    x = z.copy()
    active = np.arange(len(z))
    z_active = z
    iterations = 0
    for _ in range(pmap.solver.max_iterations):
        iterations += 1
        x_active = x[active]
        x_next = z_active - s * eval_fn(x_active)
        step = np.linalg.norm(x_next - x_active, axis=1)
        x[active] = x_next
        undone = step * factor > tol
        if not np.any(undone):
            return (x, iterations) if with_iterations else x
        active = active[undone]
        z_active = z_active[undone]
    raise FixedPointError(
        f"stopping rule did not fire within {pmap.solver.max_iterations} iterations "
        f"(q = {q:.6g}, tolerance = {pmap.solver.tolerance:g}); "
        "the tolerance is too tight for this contraction factor"
    )


def invert(pmap: PerturbationMap, z) -> Array:
    """Certified inverse: |result - S_s^{-1}(Z)| <= solver tolerance."""
    pts = as_points(z, pmap.dimension)
    out = invert_batch(pmap, pts)
    return out[0] if np.asarray(z).ndim == 1 else out


def iteration_bound(pmap: PerturbationMap, first_step: float | None = None) -> int:
    """Geometric-convergence budget: steps shrink by q, so the stopping rule
    fires within ceil(log(tol*(1-q)/d0)/log(q)) + 1 iterations (d0 = |s|)."""
    q = pmap.contraction_q
    if q == 0.0:
        return 1
    d0 = abs(pmap.s) if first_step is None else first_step
    if d0 == 0.0:
        return 1
    budget = math.log(pmap.solver.tolerance * (1.0 - q) / d0) / math.log(q)
    return max(1, math.ceil(budget) + 1)


def pushforward_field(pmap: PerturbationMap) -> UnitVectorField:
    """The field w = v o S_s^{-1}, declared Lipschitz constant K / (1 - |s|K).

    For |s| < T/2 with T < 1/K the declared constant is at most 2K.
    Evaluations run the certified inverse, so solver errors propagate.
    """
    base = pmap.field
    k_push = base.lipschitz_k / (1.0 - pmap.contraction_q)
    desc = FieldDescriptor(
        "pushforward",
        base.dimension,
        (("s", float(pmap.s)),) + (("base_k", float(base.lipschitz_k)),) + base.descriptor.params,
    )

    def eval_fn(pts: Array) -> Array:
        return base.eval_fn(invert_batch(pmap, pts))

    return UnitVectorField(base.dimension, k_push, desc, eval_fn)


def roundtrip_error(pmap: PerturbationMap, points) -> float:
    """max over points of |S_s^{-1}(S_s(X)) - X|; certified <= 2 * tolerance."""
    pts = as_points(points, pmap.dimension)
    back = invert_batch(pmap, apply_batch(pmap, pts))
    return float(np.max(np.linalg.norm(back - pts, axis=1), initial=0.0))
